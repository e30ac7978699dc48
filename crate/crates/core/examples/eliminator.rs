//! Phased elimination on a two-arm graph without noise, with the
//! theoretical β, then on a larger graph with a tuned β.
//!
//!     cargo run --release --example eliminator

use std::sync::Arc;

use nalgebra::DVector;
use spectral_bandits::bandit::{
    phase_starts, AlgoConfig, Algorithm, ArmFeatures, Eliminator, Policy,
};
use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::env::{make_smooth_env, run, EnvSpec, RunOptions};
use spectral_bandits::graph::{generate, GraphModel, WeightedGraph};

fn main() -> spectral_bandits::Result<()> {
    println!("phase starts for T=100: {:?}", phase_starts(100));

    let g = WeightedGraph::new(2, [(0, 1, 1.0)])?;
    let basis = SpectralBasis::from_graph(&g, 0.01, None)?;
    let spec = EnvSpec {
        noise_bound: 0.0,
        rewards: Some(Arc::new(DVector::from_vec(vec![0.2, 0.9]))),
        ..EnvSpec::default()
    };
    let mut env = make_smooth_env(&basis, &spec, 0)?;
    let mut cfg = AlgoConfig::new(Algorithm::SpectralEliminator, 0.01, 0.0);
    cfg.noise_bound = 0.0;
    cfg.norm_bound = Some(env.lambda_norm());
    cfg.use_theoretical_constant = true;
    cfg.horizon = 64;
    let mut policy = Eliminator::build(&basis, ArmFeatures::from_basis(&basis), &cfg)?;
    let record = run(&mut env, &mut policy, 64, RunOptions::default())?;
    println!(
        "two arms, β={:.3}: active {:?}, dropped after rounds {:?}, regret {:.2}",
        policy.beta(),
        policy.active_arms(),
        policy.eliminated_at(),
        record.final_regret()
    );

    let g = generate(GraphModel::BarabasiAlbert { m: 2, k0: 3 }, 200, 2)?;
    let basis = SpectralBasis::from_graph(&g, 0.01, None)?;
    let mut env = make_smooth_env(
        &basis,
        &EnvSpec {
            k_nonzero: 5,
            ..EnvSpec::default()
        },
        1,
    )?;
    cfg.noise_bound = 0.05;
    cfg.use_theoretical_constant = false;
    cfg.scale = 0.05;
    cfg.horizon = 2048;
    let mut policy = Eliminator::build(&basis, ArmFeatures::from_basis(&basis), &cfg)?;
    let record = run(&mut env, &mut policy, 2048, RunOptions::default())?;
    println!(
        "BA(200): d={}, β={:.2}, {} of 200 arms left, best arm {} kept: {}, regret {:.1}",
        policy.effective_dimension(),
        policy.beta(),
        policy.active_arms().len(),
        env.best_arm(),
        policy.active_arms().contains(&env.best_arm()),
        record.final_regret()
    );
    Ok(())
}
