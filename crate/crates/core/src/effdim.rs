//! Smoothness, the spectral Λ-norm, and effective dimension.
//!
//! The effective dimension `d` measures how many directions of the
//! regularised spectrum can be explored within a horizon `T`:
//!
//! ```text
//! d = ceil( max_{t ≥ 0, Σt = T} Σ_i log(1 + t_i/λ_i) / log(1 + T/(Kλ)) )
//! ```
//!
//! The inner maximum has a closed form (water-filling): raise the smallest
//! `λ_i` to a common level until the budget `T` is spent.

use nalgebra::DVector;

use crate::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Slack used when rounding the dimension ratio up.
const CEIL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EffDimInput {
    reg_eigenvalues: Vec<f64>,
    horizon: u64,
    n_components: usize,
    reg_lambda: f64,
}

impl EffDimInput {
    pub fn new(
        reg_eigenvalues: Vec<f64>,
        horizon: u64,
        n_components: usize,
        reg_lambda: f64,
    ) -> Result<Self> {
        if reg_eigenvalues.is_empty() {
            return Err(Error::param("empty spectrum"));
        }
        if !(reg_lambda.is_finite() && reg_lambda > 0.0) {
            return Err(Error::param(format!(
                "λ must be positive, got {reg_lambda}"
            )));
        }
        if horizon == 0 {
            return Err(Error::param("horizon T must be at least 1"));
        }
        if n_components == 0 {
            return Err(Error::param("component count K must be at least 1"));
        }
        if reg_eigenvalues.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::param("regularised eigenvalues must be positive"));
        }
        if reg_eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("regularised eigenvalues must be ascending"));
        }
        if (reg_eigenvalues[0] - reg_lambda).abs() > 1e-9 * reg_lambda.max(1.0) {
            return Err(Error::param(format!(
                "smallest regularised eigenvalue {} differs from λ = {reg_lambda}",
                reg_eigenvalues[0]
            )));
        }
        Ok(Self {
            reg_eigenvalues,
            horizon,
            n_components,
            reg_lambda,
        })
    }

    pub fn from_basis(basis: &SpectralBasis, horizon: u64) -> Result<Self> {
        Self::new(
            basis.reg_eigenvalues().iter().copied().collect(),
            horizon,
            basis.n_components(),
            basis.reg_lambda(),
        )
    }

    pub fn reg_eigenvalues(&self) -> &[f64] {
        &self.reg_eigenvalues
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn reg_lambda(&self) -> f64 {
        self.reg_lambda
    }

    /// `log(1 + T/(Kλ))`, the per-dimension normaliser.
    pub fn unit_information(&self) -> f64 {
        (self.horizon as f64 / (self.n_components as f64 * self.reg_lambda)).ln_1p()
    }
}

/// Optimal allocation of the horizon over spectral directions.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFill {
    /// Allocation `t_i`, non-negative, summing to `T`.
    pub t: Vec<f64>,
    /// Number of directions receiving a positive share.
    pub omega: usize,
    /// Common water level `λ_i + t_i` on the first `omega` directions.
    pub level: f64,
}

/// `Σ log(1 + t_i/λ_i)` for an arbitrary allocation.
pub fn information_gain(reg_eigenvalues: &[f64], t: &[f64]) -> f64 {
    reg_eigenvalues
        .iter()
        .zip(t)
        .map(|(&lam, &ti)| (ti / lam).ln_1p())
        .sum()
}

pub fn waterfill(input: &EffDimInput) -> WaterFill {
    let lam = &input.reg_eigenvalues;
    let budget = input.horizon as f64;
    let mut prefix = 0.0;
    let mut omega = 1;
    let mut level = lam[0] + budget;
    for (i, &li) in lam.iter().enumerate() {
        prefix += li;
        let count = (i + 1) as f64;
        let candidate = (prefix + budget) / count;
        if candidate - li > 0.0 {
            omega = i + 1;
            level = candidate;
        }
    }
    let t = lam
        .iter()
        .enumerate()
        .map(|(i, &li)| {
            if i < omega {
                (level - li).max(0.0)
            } else {
                0.0
            }
        })
        .collect();
    WaterFill { t, omega, level }
}

/// Raw ratio before rounding: maximal information gain over `log(1 + T/(Kλ))`.
pub fn dimension_ratio(input: &EffDimInput, fill: &WaterFill) -> f64 {
    information_gain(&input.reg_eigenvalues, &fill.t) / input.unit_information()
}

/// `ceil` that treats values within a relative `1e-12` above an integer as
/// that integer.
fn ceil_with_slack(x: f64) -> f64 {
    let floor = x.floor();
    if x - floor <= CEIL_SLACK * x.abs().max(1.0) {
        floor
    } else {
        floor + 1.0
    }
}

pub fn effective_dimension(input: &EffDimInput) -> usize {
    let fill = waterfill(input);
    let ratio = dimension_ratio(input, &fill);
    let n = input.reg_eigenvalues.len();
    (ceil_with_slack(ratio) as usize).clamp(1, n)
}

/// Largest `d ∈ [N]` with `(d − 1)·λ_d ≤ T / log(1 + T/λ)`.
pub fn old_effective_dimension(input: &EffDimInput) -> usize {
    let t = input.horizon as f64;
    let bound = t / (t / input.reg_lambda).ln_1p();
    input
        .reg_eigenvalues
        .iter()
        .enumerate()
        .filter(|&(i, &li)| i as f64 * li <= bound)
        .map(|(i, _)| i + 1)
        .max()
        .unwrap_or(1)
}

/// Both dimensions plus the water-filling split, as printed by `effdim`.
#[derive(Debug, Clone)]
pub struct DimensionReport {
    pub d: usize,
    pub d_old: usize,
    pub fill: WaterFill,
    pub ratio: f64,
}

pub fn dimension_report(input: &EffDimInput) -> DimensionReport {
    let fill = waterfill(input);
    let ratio = dimension_ratio(input, &fill);
    DimensionReport {
        d: effective_dimension(input),
        d_old: old_effective_dimension(input),
        fill,
        ratio,
    }
}

/// Graph smoothness `½ Σ_ij w_ij (f_i − f_j)²`, i.e. `fᵀ L f`.
pub fn smoothness(g: &WeightedGraph, f: &[f64]) -> Result<f64> {
    if f.len() != g.n_nodes() {
        return Err(Error::param(format!(
            "reward vector has length {} but graph has {} nodes",
            f.len(),
            g.n_nodes()
        )));
    }
    Ok(g.edges()
        .iter()
        .map(|e| e.w * (f[e.u] - f[e.v]).powi(2))
        .sum())
}

/// `‖α‖_Λ = sqrt(Σ λ_i α_i²)`.
pub fn lambda_norm(alpha: &DVector<f64>, reg_eigenvalues: &DVector<f64>) -> f64 {
    alpha
        .iter()
        .zip(reg_eigenvalues.iter())
        .map(|(a, l)| l * a * a)
        .sum::<f64>()
        .sqrt()
}
