//! How the support of α drives smoothness and regret.
//!
//!     cargo run --release --example smoothness

use spectral_bandits::bandit::{AlgoConfig, Algorithm};
use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::env::{compare, make_smooth_env, summarize, CompareSpec, EnvSpec};
use spectral_bandits::graph::{generate, GraphModel};

fn main() -> spectral_bandits::Result<()> {
    let g = generate(GraphModel::BarabasiAlbert { m: 2, k0: 3 }, 500, 1)?;
    let basis = SpectralBasis::from_graph(&g, 0.001, None)?;
    let seeds: Vec<u64> = (0..5).collect();
    println!(
        "{:>6} {:>12} {:>10} {:>10}",
        "k", "αᵀΛα", "SpectralUCB", "SpectralTS"
    );
    for k in [5, 25, 100, 500] {
        let env = EnvSpec {
            k_nonzero: k,
            ..EnvSpec::default()
        };
        let mut smooth = 0.0;
        for &s in &seeds {
            smooth += make_smooth_env(&basis, &env, s)?.smoothness() / seeds.len() as f64;
        }
        let spec = CompareSpec {
            env,
            horizon: 100,
            seeds: seeds.clone(),
            configs: vec![
                AlgoConfig::new(Algorithm::SpectralUcb, 0.001, 0.01),
                AlgoConfig::new(Algorithm::SpectralTs, 0.001, 0.1),
            ],
            check_invariants: false,
            graph_hash: None,
        };
        let s = summarize(&compare(&basis, &basis, &spec)?);
        println!(
            "{k:>6} {smooth:>12.2} {:>10.2} {:>10.2}",
            s[0].mean_regret, s[1].mean_regret
        );
    }
    Ok(())
}
