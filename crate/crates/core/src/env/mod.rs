//! Smooth-reward environments on graphs and the simulation harness.

mod experiment;
mod record;

pub use experiment::{
    algorithm_seed, compare, coverage_rate, summarize, summary_csv, sweep, CompareSpec, Summary,
    SweepCell, SweepResult, SweepSpec,
};
pub use record::{run, run_observed, RoundRow, RunMeta, RunOptions, RunRecord};

use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;

use crate::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::rng::{self, SimRng};

/// How the true coefficient vector is drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvSpec {
    /// Number of leading (smoothest) coefficients that are nonzero.
    pub k_nonzero: usize,
    /// Nonzero coefficients are uniform on `[−magnitude, magnitude]`.
    pub magnitude: f64,
    /// Noise is uniform on `[−R, R]`.
    pub noise_bound: f64,
    /// Rescale `α` so that `max |f| = 1`.
    pub normalize: bool,
    /// Rescale `α` only when needed to keep `f` inside `[−1, 1]`.
    pub clip: bool,
    /// Fixed mean rewards (for example a completed ratings row). When set,
    /// `α = Qᵀf` and the random draw is skipped.
    pub rewards: Option<Arc<DVector<f64>>>,
}

impl Default for EnvSpec {
    fn default() -> Self {
        Self {
            k_nonzero: 20,
            magnitude: 1.0,
            noise_bound: 0.05,
            normalize: false,
            clip: false,
            rewards: None,
        }
    }
}

/// Linear rewards `f = Qα` over the nodes of a graph, observed with bounded
/// noise.
#[derive(Debug, Clone)]
pub struct SmoothRewardEnv {
    alpha: DVector<f64>,
    f: DVector<f64>,
    reg_eigenvalues: DVector<f64>,
    eigenvalues: DVector<f64>,
    noise_bound: f64,
    best_arm: usize,
    best_value: f64,
    rng: SimRng,
}

/// Draws an environment over `basis`. The coefficient draw and the noise
/// sequence come from independent streams of `seed`. All `L` coefficients
/// are drawn before masking, so smaller supports are prefixes of larger ones
/// under the same seed.
pub fn make_smooth_env(
    basis: &SpectralBasis,
    spec: &EnvSpec,
    seed: u64,
) -> Result<SmoothRewardEnv> {
    let l = basis.dim();
    if let Some(f) = &spec.rewards {
        if f.len() != basis.n_nodes() {
            return Err(Error::param(format!(
                "{} rewards for {} nodes",
                f.len(),
                basis.n_nodes()
            )));
        }
        return SmoothRewardEnv::from_parts(
            basis.eigenvectors().tr_mul(f),
            f.as_ref().clone(),
            basis.reg_eigenvalues().clone(),
            basis.eigenvalues().clone(),
            spec.noise_bound,
            rng::stream(seed, 1),
        );
    }
    if spec.k_nonzero == 0 || spec.k_nonzero > l {
        return Err(Error::param(format!(
            "k_nonzero must be in 1..={l}, got {}",
            spec.k_nonzero
        )));
    }
    if !(spec.magnitude.is_finite() && spec.magnitude > 0.0) {
        return Err(Error::param("magnitude must be positive"));
    }
    if !(spec.noise_bound.is_finite() && spec.noise_bound >= 0.0) {
        return Err(Error::param("noise bound R must be non-negative"));
    }
    let mut coef_rng = rng::stream(seed, 0);
    let draws: Vec<f64> = (0..l)
        .map(|_| coef_rng.random_range(-1.0..=1.0) * spec.magnitude)
        .collect();
    let mut alpha = DVector::from_fn(l, |i, _| if i < spec.k_nonzero { draws[i] } else { 0.0 });
    let mut f = basis.eigenvectors() * &alpha;
    let peak = f.amax();
    if (spec.normalize || (spec.clip && peak > 1.0)) && peak > 0.0 {
        alpha /= peak;
        f = basis.eigenvectors() * &alpha;
    }
    SmoothRewardEnv::from_parts(
        alpha,
        f,
        basis.reg_eigenvalues().clone(),
        basis.eigenvalues().clone(),
        spec.noise_bound,
        rng::stream(seed, 1),
    )
}

impl SmoothRewardEnv {
    fn from_parts(
        alpha: DVector<f64>,
        f: DVector<f64>,
        reg_eigenvalues: DVector<f64>,
        eigenvalues: DVector<f64>,
        noise_bound: f64,
        rng: SimRng,
    ) -> Result<Self> {
        let (best_arm, best_value) = f
            .iter()
            .copied()
            .enumerate()
            .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
                Some((_, b)) if v.partial_cmp(&b) != Some(std::cmp::Ordering::Greater) => acc,
                _ => Some((i, v)),
            })
            .ok_or_else(|| Error::param("environment has no arms"))?;
        Ok(Self {
            alpha,
            f,
            reg_eigenvalues,
            eigenvalues,
            noise_bound,
            best_arm,
            best_value,
            rng,
        })
    }

    /// Environment with explicit mean rewards and no spectral structure,
    /// for hand-built instances. `α = f` and `Λ = I`.
    pub fn from_rewards(f: Vec<f64>, noise_bound: f64, seed: u64) -> Result<Self> {
        let f = DVector::from_vec(f);
        let n = f.len();
        Self::from_parts(
            f.clone(),
            f,
            DVector::from_element(n, 1.0),
            DVector::zeros(n),
            noise_bound,
            rng::stream(seed, 1),
        )
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    /// Mean reward of every arm.
    pub fn rewards(&self) -> &DVector<f64> {
        &self.f
    }

    pub fn n_arms(&self) -> usize {
        self.f.len()
    }

    pub fn noise_bound(&self) -> f64 {
        self.noise_bound
    }

    pub fn best_arm(&self) -> usize {
        self.best_arm
    }

    pub fn best_value(&self) -> f64 {
        self.best_value
    }

    pub fn gap(&self, arm: usize) -> f64 {
        (self.best_value - self.f[arm]).max(0.0)
    }

    /// `αᵀ Λ_L α`, which equals the graph smoothness of `f` on a full basis.
    pub fn smoothness(&self) -> f64 {
        self.alpha
            .iter()
            .zip(self.eigenvalues.iter())
            .map(|(a, l)| l * a * a)
            .sum()
    }

    /// `‖α‖_Λ` with the regularised spectrum; the natural choice for `C`.
    pub fn lambda_norm(&self) -> f64 {
        crate::effdim::lambda_norm(&self.alpha, &self.reg_eigenvalues)
    }

    /// Mean reward plus uniform noise on `[−R, R]`.
    pub fn pull(&mut self, arm: usize) -> f64 {
        let noise = if self.noise_bound > 0.0 {
            self.rng.random_range(-self.noise_bound..=self.noise_bound)
        } else {
            0.0
        };
        self.f[arm] + noise
    }
}
