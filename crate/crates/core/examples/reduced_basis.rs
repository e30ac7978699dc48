//! Keeping only the L smoothest eigenvectors: regret and running time.
//!
//!     cargo run --release --example reduced_basis

use std::time::Instant;

use spectral_bandits::bandit::{build_policy, AlgoConfig, Algorithm, ArmFeatures};
use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::env::{make_smooth_env, run, EnvSpec, RunOptions};
use spectral_bandits::graph::{generate, GraphModel};

fn main() -> spectral_bandits::Result<()> {
    let n = 1000;
    let g = generate(GraphModel::BarabasiAlbert { m: 2, k0: 3 }, n, 1)?;
    let t0 = Instant::now();
    let full = SpectralBasis::from_graph(&g, 0.001, None)?;
    println!("eigendecomposition of N={n}: {:.2?}", t0.elapsed());

    let cfg = AlgoConfig::new(Algorithm::SpectralUcb, 0.001, 0.01);
    for l in [20, 100, n] {
        let basis = if l < n {
            full.truncated(l)?
        } else {
            full.clone()
        };
        let arms = ArmFeatures::from_basis(&basis);
        let start = Instant::now();
        let mut regret = 0.0;
        for seed in 0..10 {
            // the environment always lives on the full basis
            let mut env = make_smooth_env(&full, &EnvSpec::default(), seed)?;
            let mut policy = build_policy(&basis, arms.clone(), &cfg)?;
            regret += run(&mut env, policy.as_mut(), 100, RunOptions::default())?.final_regret();
        }
        println!(
            "L={l:>5}: mean regret {:>6.2}, 10 runs in {:.2?}",
            regret / 10.0,
            start.elapsed()
        );
    }
    Ok(())
}
