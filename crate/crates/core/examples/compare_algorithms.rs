//! Spectral and linear algorithms on the same environments, with tuned
//! parameters per algorithm.
//!
//!     cargo run --release --example compare_algorithms [ba|er|lattice]

use spectral_bandits::bandit::{AlgoConfig, Algorithm};
use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::env::{compare, summarize, CompareSpec, EnvSpec};
use spectral_bandits::graph::{generate, GraphModel};

fn main() -> spectral_bandits::Result<()> {
    let family = std::env::args().nth(1).unwrap_or_else(|| "ba".into());
    let (model, params) = match family.as_str() {
        "er" => (
            GraphModel::ErdosRenyi { p: 0.005 },
            [(0.1, 0.1), (1.0, 1.0), (1.0, 0.1), (0.1, 0.1)],
        ),
        "lattice" => (
            GraphModel::Lattice,
            [(0.01, 0.1), (0.1, 1.0), (1.0, 0.1), (0.1, 0.1)],
        ),
        _ => (
            GraphModel::BarabasiAlbert { m: 2, k0: 3 },
            [(0.001, 0.1), (0.001, 0.01), (0.01, 0.01), (0.1, 0.1)],
        ),
    };
    let g = generate(model, 500, 1)?;
    let basis = SpectralBasis::from_graph(&g, 0.01, None)?;
    let algorithms = [
        Algorithm::SpectralTs,
        Algorithm::SpectralUcb,
        Algorithm::LinearTs,
        Algorithm::LinUcb,
    ];
    let spec = CompareSpec {
        env: EnvSpec::default(),
        horizon: 100,
        seeds: (0..5).collect(),
        configs: algorithms
            .iter()
            .zip(params)
            .map(|(&a, (lambda, scale))| AlgoConfig::new(a, lambda, scale))
            .collect(),
        check_invariants: false,
        graph_hash: Some(g.content_hash()),
    };
    let records = compare(&basis, &basis, &spec)?;
    println!("{model}, N=500, T=100, 5 seeds");
    for s in summarize(&records) {
        println!(
            "  {:<14} {:>7.2} ± {:.2}",
            s.algorithm, s.mean_regret, s.stderr
        );
    }

    // regret trajectory of the first seed, every 20 rounds
    for r in records.iter().step_by(spec.seeds.len()) {
        let points: Vec<String> = r
            .rows
            .iter()
            .step_by(20)
            .map(|row| format!("{:.1}", row.cum_regret))
            .collect();
        println!("  {:<14} {}", r.meta.algorithm, points.join(" "));
    }
    Ok(())
}
