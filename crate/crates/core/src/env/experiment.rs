//! Batches of runs: algorithm comparisons, parameter sweeps and confidence
//! coverage. Every (configuration, seed) cell owns its environment and
//! policy; cells run in parallel on the current rayon pool and are merged
//! in cell order, so results do not depend on the thread count.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use super::{make_smooth_env, run, run_observed, EnvSpec, RunOptions, RunRecord};
use crate::bandit::{build_policy, AlgoConfig, ArmFeatures};
use crate::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::rng;

/// Seed of the algorithm-side stream for configuration `index` under
/// environment seed `seed`. Environments share `seed` across algorithms
/// (common random numbers); algorithm randomness stays independent.
pub fn algorithm_seed(seed: u64, index: usize) -> u64 {
    rng::stream(seed, 16 + index as u64).random()
}

fn config_snapshot(cfg: &AlgoConfig) -> String {
    format!(
        "algo={} lambda={} scale={} R={} C={} delta={} T={} lazy={} theoretical={}",
        cfg.algorithm,
        cfg.reg_lambda,
        cfg.scale,
        cfg.noise_bound,
        cfg.norm_bound.map_or("none".to_string(), |c| c.to_string()),
        cfg.delta,
        cfg.horizon,
        cfg.lazy_ucb,
        cfg.use_theoretical_constant
    )
}

#[derive(Debug, Clone)]
pub struct CompareSpec {
    pub env: EnvSpec,
    pub horizon: usize,
    pub seeds: Vec<u64>,
    pub configs: Vec<AlgoConfig>,
    pub check_invariants: bool,
    pub graph_hash: Option<String>,
}

fn check_bases(
    env_basis: &SpectralBasis,
    policy_basis: &SpectralBasis,
    env: &EnvSpec,
) -> Result<()> {
    if env_basis.n_nodes() != policy_basis.n_nodes() {
        return Err(Error::param(
            "environment and policy bases cover different graphs",
        ));
    }
    if env.rewards.is_none() && policy_basis.dim() < env.k_nonzero {
        return Err(Error::param(format!(
            "basis truncated to L={} below k_nonzero={}",
            policy_basis.dim(),
            env.k_nonzero
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    env_basis: &SpectralBasis,
    policy_basis: &SpectralBasis,
    arms: &std::sync::Arc<ArmFeatures>,
    env_spec: &EnvSpec,
    cfg: &AlgoConfig,
    seed: u64,
    horizon: usize,
    options: RunOptions,
) -> Result<RunRecord> {
    let mut env = make_smooth_env(env_basis, env_spec, seed)?;
    let mut policy = build_policy(policy_basis, arms.clone(), cfg)?;
    let mut record = run(&mut env, policy.as_mut(), horizon, options)?;
    record.meta.seed = seed;
    record.meta.config = config_snapshot(cfg);
    Ok(record)
}

/// Runs every configuration on every seed. Rewards are drawn on
/// `env_basis`; policies see `policy_basis`, which may be a truncation of
/// it. Records come back configuration-major.
pub fn compare(
    env_basis: &SpectralBasis,
    policy_basis: &SpectralBasis,
    spec: &CompareSpec,
) -> Result<Vec<RunRecord>> {
    check_bases(env_basis, policy_basis, &spec.env)?;
    let arms = ArmFeatures::from_basis(policy_basis);
    let options = RunOptions {
        check_invariants: spec.check_invariants,
    };
    let cells: Vec<(usize, u64)> = (0..spec.configs.len())
        .flat_map(|c| spec.seeds.iter().map(move |&s| (c, s)))
        .collect();
    let mut records = cells
        .par_iter()
        .map(|&(c, seed)| {
            let mut cfg = spec.configs[c].clone();
            cfg.horizon = spec.horizon;
            cfg.seed = algorithm_seed(seed, c);
            run_cell(
                env_basis,
                policy_basis,
                &arms,
                &spec.env,
                &cfg,
                seed,
                spec.horizon,
                options,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    for r in &mut records {
        r.meta.graph_hash = spec.graph_hash.clone();
    }
    Ok(records)
}

/// Mean final regret of one algorithm over its runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub algorithm: String,
    pub mean_regret: f64,
    pub stderr: f64,
    pub n_runs: usize,
    pub mean_wall_ms: f64,
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Groups records by algorithm name, in order of first appearance.
pub fn summarize(records: &[RunRecord]) -> Vec<Summary> {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        if !names.contains(&r.meta.algorithm.as_str()) {
            names.push(&r.meta.algorithm);
        }
    }
    names
        .into_iter()
        .map(|name| {
            let runs: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.meta.algorithm == name)
                .collect();
            let finals: Vec<f64> = runs.iter().map(|r| r.final_regret()).collect();
            let (mean_regret, stderr) = mean_stderr(&finals);
            Summary {
                algorithm: name.to_string(),
                mean_regret,
                stderr,
                n_runs: runs.len(),
                mean_wall_ms: runs.iter().map(|r| r.meta.wall_ms).sum::<f64>() / runs.len() as f64,
            }
        })
        .collect()
}

/// `algorithm,seed,final_regret,wall_ms`, one line per record.
pub fn summary_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("algorithm,seed,final_regret,wall_ms\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{:.3}",
            r.meta.algorithm,
            r.meta.seed,
            r.final_regret(),
            r.meta.wall_ms
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Algorithm and fixed constants; `reg_lambda` and `scale` are
    /// overwritten per cell.
    pub template: AlgoConfig,
    pub lambdas: Vec<f64>,
    pub scales: Vec<f64>,
    pub env: EnvSpec,
    pub horizon: usize,
    pub seeds: Vec<u64>,
    pub check_invariants: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub lambda: f64,
    pub scale: f64,
    pub mean_regret: f64,
    pub stderr: f64,
    pub n_runs: usize,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Row-major over `lambdas × scales`.
    pub cells: Vec<SweepCell>,
    /// Index of the cell with the lowest mean regret (first on ties).
    pub best: usize,
}

impl SweepResult {
    pub fn best_cell(&self) -> &SweepCell {
        &self.cells[self.best]
    }

    /// `lambda,scale,mean_regret,stderr,n_runs`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,scale,mean_regret,stderr,n_runs\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.lambda, c.scale, c.mean_regret, c.stderr, c.n_runs
            );
        }
        out
    }
}

/// Grid search over `(λ, scale)`. Every cell sees the same environment
/// seeds.
pub fn sweep(
    env_basis: &SpectralBasis,
    policy_basis: &SpectralBasis,
    spec: &SweepSpec,
) -> Result<SweepResult> {
    if spec.lambdas.is_empty() || spec.scales.is_empty() || spec.seeds.is_empty() {
        return Err(Error::param("sweep grid and seed list must be non-empty"));
    }
    let configs: Vec<AlgoConfig> = spec
        .lambdas
        .iter()
        .flat_map(|&lambda| {
            spec.scales.iter().map(move |&scale| AlgoConfig {
                reg_lambda: lambda,
                scale,
                ..spec.template.clone()
            })
        })
        .collect();
    let compare_spec = CompareSpec {
        env: spec.env.clone(),
        horizon: spec.horizon,
        seeds: spec.seeds.clone(),
        configs: configs.clone(),
        check_invariants: spec.check_invariants,
        graph_hash: None,
    };
    let records = compare(env_basis, policy_basis, &compare_spec)?;
    let per_cell = spec.seeds.len();
    let cells: Vec<SweepCell> = configs
        .iter()
        .zip(records.chunks(per_cell))
        .map(|(cfg, chunk)| {
            let finals: Vec<f64> = chunk.iter().map(RunRecord::final_regret).collect();
            let (mean_regret, stderr) = mean_stderr(&finals);
            SweepCell {
                lambda: cfg.reg_lambda,
                scale: cfg.scale,
                mean_regret,
                stderr,
                n_runs: chunk.len(),
            }
        })
        .collect();
    let best = cells.iter().enumerate().fold(0, |b, (i, c)| {
        if c.mean_regret < cells[b].mean_regret {
            i
        } else {
            b
        }
    });
    Ok(SweepResult { cells, best })
}

/// Fraction of runs in which `‖α̂_t − α‖_{V_t} > scale` at some round.
///
/// Each run draws a fresh environment from its seed. When
/// `config.norm_bound` is unset, `C` is taken as the run's own `‖α‖_Λ`.
/// The basis must be complete so that `α` lives in the policy's
/// coordinates.
pub fn coverage_rate(
    basis: &SpectralBasis,
    env_spec: &EnvSpec,
    config: &AlgoConfig,
    seeds: &[u64],
) -> Result<f64> {
    if basis.is_truncated() {
        return Err(Error::param("coverage needs the full eigenbasis"));
    }
    if seeds.is_empty() {
        return Err(Error::param("no seeds"));
    }
    let arms = ArmFeatures::from_basis(basis);
    let failures = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| -> Result<bool> {
            let mut env = make_smooth_env(basis, env_spec, seed)?;
            let mut cfg = config.clone();
            cfg.seed = algorithm_seed(seed, i);
            if cfg.norm_bound.is_none() {
                let prior = basis.eigenvalues().add_scalar(cfg.reg_lambda);
                cfg.norm_bound = Some(crate::effdim::lambda_norm(env.alpha(), &prior));
            }
            let alpha = env.alpha().clone();
            let mut policy = build_policy(basis, arms.clone(), &cfg)?;
            let radius = policy.confidence_scale();
            let mut failed = false;
            run_observed(
                &mut env,
                policy.as_mut(),
                cfg.horizon,
                RunOptions::default(),
                |_, p| {
                    if !failed {
                        let err = p.state().alpha_hat() - &alpha;
                        let norm_sq = err.dot(&(p.state().v() * &err));
                        failed = norm_sq.max(0.0).sqrt() > radius;
                    }
                    Ok(())
                },
            )?;
            Ok(failed)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(failures.iter().filter(|f| **f).count() as f64 / seeds.len() as f64)
}
