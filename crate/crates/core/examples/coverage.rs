//! Empirical failure rate of the confidence ellipsoid with the theoretical
//! constant, against the nominal δ.
//!
//!     cargo run --release --example coverage

use spectral_bandits::bandit::{AlgoConfig, Algorithm};
use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::env::{coverage_rate, EnvSpec};
use spectral_bandits::graph::{generate, GraphModel};

fn main() -> spectral_bandits::Result<()> {
    let g = generate(GraphModel::ErdosRenyi { p: 0.02 }, 200, 4)?;
    let basis = SpectralBasis::from_graph(&g, 0.01, None)?;
    let seeds: Vec<u64> = (0..200).collect();
    for delta in [0.05, 0.2] {
        let mut cfg = AlgoConfig::new(Algorithm::SpectralUcb, 0.01, 0.0);
        cfg.use_theoretical_constant = true;
        cfg.delta = delta;
        let rate = coverage_rate(&basis, &EnvSpec::default(), &cfg, &seeds)?;
        println!(
            "δ={delta}: ellipsoid missed α in {:.1}% of {} runs",
            100.0 * rate,
            seeds.len()
        );
    }
    Ok(())
}
