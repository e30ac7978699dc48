use std::fmt::Write as _;
use std::time::Instant;

use super::SmoothRewardEnv;
use crate::bandit::Policy;
use crate::error::{Error, Result};

/// How often (in rounds) the inverse is checked against a fresh
/// factorisation when invariant checking is on.
const RESIDUAL_CHECK_EVERY: usize = 64;
/// Bound on `max |V · V_inv − I|`. Scale-free, unlike the raw inverse drift,
/// which grows with `1/λ` on badly conditioned priors.
const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRow {
    /// 1-based round.
    pub t: usize,
    pub arm: usize,
    pub reward: f64,
    pub inst_regret: f64,
    pub cum_regret: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMeta {
    pub algorithm: String,
    pub seed: u64,
    /// Free-form `key=value` snapshot of the configuration.
    pub config: String,
    pub graph_hash: Option<String>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunRecord {
    pub rows: Vec<RoundRow>,
    pub meta: RunMeta,
}

impl RunRecord {
    pub fn final_regret(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.cum_regret)
    }

    pub fn arms(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.arm).collect()
    }

    /// `t,arm,reward,inst_regret,cum_regret` with one line per round.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,arm,reward,inst_regret,cum_regret\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.t, r.arm, r.reward, r.inst_regret, r.cum_regret
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Assert the log-determinant bound every round and `V · V_inv ≈ I`
    /// periodically; a violation aborts the run with an invariant error.
    pub check_invariants: bool,
}

/// Plays `horizon` rounds of `policy` against `env`.
pub fn run(
    env: &mut SmoothRewardEnv,
    policy: &mut dyn Policy,
    horizon: usize,
    options: RunOptions,
) -> Result<RunRecord> {
    run_observed(env, policy, horizon, options, |_, _| Ok(()))
}

/// Like [`run`], calling `observer(t, policy)` after each update.
pub fn run_observed(
    env: &mut SmoothRewardEnv,
    policy: &mut dyn Policy,
    horizon: usize,
    options: RunOptions,
    mut observer: impl FnMut(usize, &dyn Policy) -> Result<()>,
) -> Result<RunRecord> {
    if policy.state().dim() == 0 || env.n_arms() == 0 {
        return Err(Error::param("empty environment or policy"));
    }
    let start = Instant::now();
    let bound = policy.log_det_bound();
    let mut rows = Vec::with_capacity(horizon);
    let mut cum = 0.0;
    for t in 1..=horizon {
        let arm = policy.select()?;
        if arm >= env.n_arms() {
            return Err(Error::State(format!(
                "policy chose arm {arm} of {}",
                env.n_arms()
            )));
        }
        let reward = env.pull(arm);
        policy.observe(arm, reward)?;
        let inst = env.gap(arm);
        cum += inst;
        rows.push(RoundRow {
            t,
            arm,
            reward,
            inst_regret: inst,
            cum_regret: cum,
        });
        if options.check_invariants {
            check_round(policy, bound, t, t == horizon)?;
        }
        observer(t, policy)?;
    }
    Ok(RunRecord {
        rows,
        meta: RunMeta {
            algorithm: policy.algorithm().name().to_string(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            ..RunMeta::default()
        },
    })
}

fn check_round(policy: &dyn Policy, bound: f64, t: usize, last: bool) -> Result<()> {
    let state = policy.state();
    let log_det = state.log_det_ratio();
    if log_det > bound * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::Invariant(format!(
            "round {t}: log det V/det Λ = {log_det} exceeds d log(1 + T/(Kλ)) = {bound}"
        )));
    }
    if last || t.is_multiple_of(RESIDUAL_CHECK_EVERY) {
        let residual = state.identity_residual();
        if residual.is_nan() || residual > RESIDUAL_TOLERANCE {
            return Err(Error::Invariant(format!(
                "round {t}: |V V_inv - I| = {residual:e} above {RESIDUAL_TOLERANCE:e}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::{build_policy, AlgoConfig, Algorithm, ArmFeatures};
    use crate::basis::SpectralBasis;
    use crate::env::{make_smooth_env, EnvSpec};
    use crate::graph::{generate, GraphModel};
    use nalgebra::{DMatrix, DVector};

    fn basis() -> SpectralBasis {
        let g = generate(GraphModel::BarabasiAlbert { m: 2, k0: 3 }, 80, 1).unwrap();
        SpectralBasis::from_graph(&g, 0.01, None).unwrap()
    }

    #[test]
    fn constant_rewards_give_zero_regret() {
        let b = basis();
        let spec = EnvSpec {
            k_nonzero: 1,
            ..EnvSpec::default()
        };
        for alg in Algorithm::ALL {
            let mut env = make_smooth_env(&b, &spec, 2).unwrap();
            let mut p = build_policy(
                &b,
                ArmFeatures::from_basis(&b),
                &AlgoConfig::new(alg, 0.01, 0.1),
            )
            .unwrap();
            let rec = run(&mut env, p.as_mut(), 50, RunOptions::default()).unwrap();
            assert!(
                rec.final_regret().abs() < 1e-9,
                "{alg}: {}",
                rec.final_regret()
            );
        }
    }

    #[test]
    fn greedy_first_round_pays_the_gap() {
        let basis =
            SpectralBasis::from_parts(DVector::zeros(2), DMatrix::identity(2, 2), 1.0, 2).unwrap();
        let mut env = SmoothRewardEnv::from_rewards(vec![0.2, 0.9], 0.0, 0).unwrap();
        let cfg = AlgoConfig::new(Algorithm::SpectralUcb, 1.0, 0.0);
        let mut p = build_policy(&basis, ArmFeatures::from_basis(&basis), &cfg).unwrap();
        let rec = run(&mut env, p.as_mut(), 3, RunOptions::default()).unwrap();
        assert_eq!(rec.rows[0].arm, 0);
        assert!((rec.rows[0].inst_regret - 0.7).abs() < 1e-15);
    }

    #[test]
    fn record_invariants_and_csv() {
        let b = basis();
        let mut env = make_smooth_env(&b, &EnvSpec::default(), 7).unwrap();
        let cfg = AlgoConfig::new(Algorithm::SpectralTs, 0.01, 0.1);
        let mut p = build_policy(&b, ArmFeatures::from_basis(&b), &cfg).unwrap();
        let opts = RunOptions {
            check_invariants: true,
        };
        let rec = run(&mut env, p.as_mut(), 100, opts).unwrap();
        let mut prefix = 0.0;
        for r in &rec.rows {
            assert!(r.inst_regret >= 0.0);
            prefix += r.inst_regret;
            assert!((prefix - r.cum_regret).abs() < 1e-12);
        }
        let csv = rec.to_csv();
        assert!(csv.starts_with("t,arm,reward,inst_regret,cum_regret\n"));
        assert_eq!(csv.lines().count(), 101);
    }

    #[test]
    fn invariant_checks_pass_for_all_algorithms() {
        let b = basis();
        for alg in Algorithm::ALL {
            let mut env = make_smooth_env(&b, &EnvSpec::default(), 3).unwrap();
            let mut cfg = AlgoConfig::new(alg, 0.01, 0.1);
            cfg.horizon = 150;
            cfg.refresh_every = 40;
            let mut p = build_policy(&b, ArmFeatures::from_basis(&b), &cfg).unwrap();
            run(
                &mut env,
                p.as_mut(),
                150,
                RunOptions {
                    check_invariants: true,
                },
            )
            .unwrap();
        }
    }
}
