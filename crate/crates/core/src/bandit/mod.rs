//! Spectral bandit algorithms and their linear baselines.
//!
//! All six algorithms share one [`EllipsoidState`]. The spectral variants
//! start from `V = Λ_L + λI`; the linear ones from `V = λI`. Features are
//! the same eigenbasis rows in both cases, so only the penalty differs.

mod eliminator;
mod state;
mod ts;
mod ucb;

pub use eliminator::{phase_starts, Eliminator};
pub use state::{EllipsoidState, RankOneStep, DEFAULT_REFRESH_EVERY};
pub use ts::{sample_coefficients, select_arm_ts, ThompsonSampling};
pub use ucb::{select_arm_ucb, ucb_scores, Ucb};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, DVectorView};

use crate::basis::SpectralBasis;
use crate::effdim::{effective_dimension, EffDimInput};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    SpectralUcb,
    SpectralTs,
    SpectralEliminator,
    LinUcb,
    LinearTs,
    LinearEliminator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ucb,
    Thompson,
    Eliminator,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::SpectralUcb,
        Algorithm::SpectralTs,
        Algorithm::SpectralEliminator,
        Algorithm::LinUcb,
        Algorithm::LinearTs,
        Algorithm::LinearEliminator,
    ];

    pub fn is_linear(self) -> bool {
        matches!(
            self,
            Algorithm::LinUcb | Algorithm::LinearTs | Algorithm::LinearEliminator
        )
    }

    pub fn family(self) -> Family {
        match self {
            Algorithm::SpectralUcb | Algorithm::LinUcb => Family::Ucb,
            Algorithm::SpectralTs | Algorithm::LinearTs => Family::Thompson,
            Algorithm::SpectralEliminator | Algorithm::LinearEliminator => Family::Eliminator,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SpectralUcb => "spectral-ucb",
            Algorithm::SpectralTs => "spectral-ts",
            Algorithm::SpectralEliminator => "spectral-eliminator",
            Algorithm::LinUcb => "linucb",
            Algorithm::LinearTs => "linear-ts",
            Algorithm::LinearEliminator => "linear-eliminator",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .or(match key.as_str() {
                "spectralucb" | "sucb" => Some(Algorithm::SpectralUcb),
                "spectralts" | "sts" => Some(Algorithm::SpectralTs),
                "lin-ucb" => Some(Algorithm::LinUcb),
                "lints" | "lin-ts" | "lts" => Some(Algorithm::LinearTs),
                _ => None,
            })
            .ok_or_else(|| Error::param(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgoConfig {
    pub algorithm: Algorithm,
    /// Regulariser `λ`.
    pub reg_lambda: f64,
    /// Confidence scale: `c` for UCB, `v` for TS, `β` for elimination.
    /// Ignored when `use_theoretical_constant` is set.
    pub scale: f64,
    /// Sub-Gaussian noise constant `R`.
    pub noise_bound: f64,
    /// Bound `C` on `‖α‖_Λ`.
    pub norm_bound: Option<f64>,
    /// Failure probability `δ`.
    pub delta: f64,
    pub horizon: usize,
    pub lazy_ucb: bool,
    pub use_theoretical_constant: bool,
    pub seed: u64,
    pub refresh_every: usize,
}

impl AlgoConfig {
    pub fn new(algorithm: Algorithm, reg_lambda: f64, scale: f64) -> Self {
        Self {
            algorithm,
            reg_lambda,
            scale,
            noise_bound: 0.05,
            norm_bound: None,
            delta: 0.05,
            horizon: 100,
            lazy_ucb: false,
            use_theoretical_constant: false,
            seed: 0,
            refresh_every: DEFAULT_REFRESH_EVERY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.reg_lambda.is_finite() && self.reg_lambda > 0.0) {
            return Err(Error::param(format!(
                "λ must be positive, got {}",
                self.reg_lambda
            )));
        }
        if !(self.noise_bound.is_finite() && self.noise_bound >= 0.0) {
            return Err(Error::param(format!(
                "R must be non-negative, got {}",
                self.noise_bound
            )));
        }
        if let Some(c) = self.norm_bound {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::param(format!("C must be non-negative, got {c}")));
            }
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param(format!(
                "δ must be in (0, 1), got {}",
                self.delta
            )));
        }
        if self.horizon == 0 {
            return Err(Error::param("horizon T must be at least 1"));
        }
        if !self.use_theoretical_constant && !(self.scale.is_finite() && self.scale >= 0.0) {
            return Err(Error::param(format!(
                "confidence scale must be non-negative, got {}",
                self.scale
            )));
        }
        Ok(())
    }
}

/// Inputs to the closed-form confidence constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryInputs {
    pub noise_bound: f64,
    pub norm_bound: f64,
    pub delta: f64,
    pub horizon: f64,
    pub n_components: f64,
    pub reg_lambda: f64,
    pub eff_dim: f64,
    pub n_arms: f64,
}

/// `c = R sqrt(2d log(1 + T/(Kλ)) + 8 log(1/δ)) + C`.
pub fn theoretical_ucb_scale(p: &TheoryInputs) -> f64 {
    let info = (p.horizon / (p.n_components * p.reg_lambda)).ln_1p();
    p.noise_bound * (2.0 * p.eff_dim * info + 8.0 * (1.0 / p.delta).ln()).sqrt() + p.norm_bound
}

/// `v = R sqrt(3d log(1/δ + T/(δλK))) + C`.
pub fn theoretical_ts_scale(p: &TheoryInputs) -> f64 {
    let arg = 1.0 / p.delta + p.horizon / (p.delta * p.reg_lambda * p.n_components);
    p.noise_bound * (3.0 * p.eff_dim * arg.ln()).sqrt() + p.norm_bound
}

/// `β = R sqrt(log(2K(1 + log₂T)/δ)) + C`, with `K` the number of arms.
pub fn theoretical_eliminator_scale(p: &TheoryInputs) -> f64 {
    let arg = 2.0 * p.n_arms * (1.0 + p.horizon.log2()) / p.delta;
    p.noise_bound * arg.ln().sqrt() + p.norm_bound
}

/// Arm feature vectors stored column-wise (`L x N`) for contiguous access.
#[derive(Debug, Clone)]
pub struct ArmFeatures {
    by_column: DMatrix<f64>,
    max_norm: f64,
}

impl ArmFeatures {
    /// Rows of an `N x L` matrix become arms.
    pub fn from_rows(rows: &DMatrix<f64>) -> Self {
        let by_column = rows.transpose();
        let max_norm = by_column
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        Self {
            by_column,
            max_norm,
        }
    }

    pub fn from_basis(basis: &SpectralBasis) -> Arc<Self> {
        Arc::new(Self::from_rows(basis.eigenvectors()))
    }

    pub fn n_arms(&self) -> usize {
        self.by_column.ncols()
    }

    pub fn dim(&self) -> usize {
        self.by_column.nrows()
    }

    pub fn arm(&self, a: usize) -> DVectorView<'_, f64> {
        self.by_column.column(a)
    }

    /// `L x N` matrix, one column per arm.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.by_column
    }

    /// Largest Euclidean arm norm.
    pub fn max_norm(&self) -> f64 {
        self.max_norm
    }

    /// `xᵀθ` for every arm.
    pub fn scores(&self, theta: &DVector<f64>) -> DVector<f64> {
        self.by_column.tr_mul(theta)
    }
}

/// Lowest index among the maximisers.
pub fn argmax_lowest(values: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            Some((_, b)) if v.partial_cmp(&b) != Some(std::cmp::Ordering::Greater) => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// A running bandit algorithm.
pub trait Policy: Send {
    fn algorithm(&self) -> Algorithm;
    /// Arm to play in the current round.
    fn select(&mut self) -> Result<usize>;
    /// Feeds back the reward observed for `arm`.
    fn observe(&mut self, arm: usize, reward: f64) -> Result<()>;
    /// Current least-squares state.
    fn state(&self) -> &EllipsoidState;
    /// Confidence scale in use (`c`, `v` or `β`).
    fn confidence_scale(&self) -> f64;
    /// Effective dimension of the prior used by this instance.
    fn dimension(&self) -> EffectiveDim;

    fn effective_dimension(&self) -> usize {
        self.dimension().d
    }

    /// `d log(1 + T/(Kλ))`, the ceiling on `log(det V / det Λ)`.
    fn log_det_bound(&self) -> f64 {
        let dim = self.dimension();
        dim.d as f64 * dim.unit_information
    }
}

/// Effective dimension together with `log(1 + T/(Kλ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDim {
    pub d: usize,
    pub unit_information: f64,
}

/// Prior precision and component count for `algorithm` on `basis`.
fn prior_for(basis: &SpectralBasis, config: &AlgoConfig) -> (DVector<f64>, usize) {
    if config.algorithm.is_linear() {
        (
            DVector::from_element(basis.dim(), config.reg_lambda),
            basis.dim(),
        )
    } else {
        (
            basis.eigenvalues().add_scalar(config.reg_lambda),
            basis.n_components(),
        )
    }
}

/// Shared setup for every algorithm.
#[derive(Debug, Clone)]
pub(crate) struct Setup {
    pub state: EllipsoidState,
    pub arms: Arc<ArmFeatures>,
    pub scale: f64,
    pub eff_dim: EffectiveDim,
}

pub(crate) fn setup(
    basis: &SpectralBasis,
    arms: Arc<ArmFeatures>,
    config: &AlgoConfig,
) -> Result<Setup> {
    config.validate()?;
    if arms.dim() != basis.dim() || arms.n_arms() != basis.n_nodes() {
        return Err(Error::param("arm features do not match the basis"));
    }
    if basis.is_truncated() && config.norm_bound.is_none() {
        log::warn!(
            "truncated basis (L={} < N={}) without a norm bound C; C is measured against the truncated Λ",
            basis.dim(),
            basis.n_nodes()
        );
    }
    let (prior, n_components) = prior_for(basis, config);
    let input = EffDimInput::new(
        prior.iter().copied().collect(),
        config.horizon as u64,
        n_components,
        config.reg_lambda,
    )?;
    let eff_dim = EffectiveDim {
        d: effective_dimension(&input),
        unit_information: input.unit_information(),
    };
    let scale = if config.use_theoretical_constant {
        let norm_bound = config
            .norm_bound
            .ok_or_else(|| Error::param("theoretical confidence constants need a norm bound C"))?;
        let inputs = TheoryInputs {
            noise_bound: config.noise_bound,
            norm_bound,
            delta: config.delta,
            horizon: config.horizon as f64,
            n_components: n_components as f64,
            reg_lambda: config.reg_lambda,
            eff_dim: eff_dim.d as f64,
            n_arms: arms.n_arms() as f64,
        };
        match config.algorithm.family() {
            Family::Ucb => theoretical_ucb_scale(&inputs),
            Family::Thompson => theoretical_ts_scale(&inputs),
            Family::Eliminator => theoretical_eliminator_scale(&inputs),
        }
    } else {
        config.scale
    };
    let state = EllipsoidState::new(prior, config.refresh_every)?;
    Ok(Setup {
        state,
        arms,
        scale,
        eff_dim,
    })
}

/// Builds the algorithm named in `config` over `basis`.
pub fn build_policy(
    basis: &SpectralBasis,
    arms: Arc<ArmFeatures>,
    config: &AlgoConfig,
) -> Result<Box<dyn Policy>> {
    let algorithm = config.algorithm;
    let setup = setup(basis, arms, config)?;
    Ok(match algorithm.family() {
        Family::Ucb => Box::new(Ucb::new(algorithm, setup, config.lazy_ucb)),
        Family::Thompson => Box::new(ThompsonSampling::new(algorithm, setup, config.seed)?),
        Family::Eliminator => Box::new(Eliminator::new(algorithm, setup, config.horizon)?),
    })
}
