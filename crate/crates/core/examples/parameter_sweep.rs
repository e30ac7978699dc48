//! Grid search over λ and the confidence scale for one algorithm.
//!
//!     cargo run --release --example parameter_sweep [algorithm]

use spectral_bandits::bandit::AlgoConfig;
use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::env::{sweep, EnvSpec, SweepSpec};
use spectral_bandits::graph::{generate, GraphModel};

fn main() -> spectral_bandits::Result<()> {
    let algorithm = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "spectral-ucb".into())
        .parse()?;
    let g = generate(GraphModel::BarabasiAlbert { m: 2, k0: 3 }, 300, 1)?;
    let basis = SpectralBasis::from_graph(&g, 0.01, None)?;
    let spec = SweepSpec {
        template: AlgoConfig::new(algorithm, 0.01, 0.1),
        lambdas: vec![0.001, 0.01, 0.1, 1.0],
        scales: vec![0.01, 0.1, 1.0],
        env: EnvSpec::default(),
        horizon: 100,
        seeds: (0..5).collect(),
        check_invariants: false,
    };
    let result = sweep(&basis, &basis, &spec)?;
    print!("{}", result.to_csv());
    let best = result.best_cell();
    println!(
        "best for {algorithm}: λ={} scale={} regret {:.2}",
        best.lambda, best.scale, best.mean_regret
    );
    Ok(())
}
