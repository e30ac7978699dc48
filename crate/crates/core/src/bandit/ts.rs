//! Posterior-sampling policies: SpectralTS and LinearTS.

use std::sync::Arc;

use nalgebra::{Cholesky, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{argmax_lowest, Algorithm, ArmFeatures, EffectiveDim, EllipsoidState, Policy, Setup};
use crate::error::{Error, Result};
use crate::rng::{self, SimRng};

/// Draws `α̃ ~ N(α̂, v² V⁻¹)` as `α̂ + v (Lᵀ)⁻¹ z` where `V = L Lᵀ` and
/// `z` is standard normal.
pub fn sample_coefficients<R: Rng + ?Sized>(
    state: &EllipsoidState,
    v: f64,
    rng: &mut R,
) -> Result<DVector<f64>> {
    let z = DVector::from_fn(state.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
    let owned;
    let chol = match state.cholesky() {
        Some(c) => c,
        None => {
            owned = Cholesky::new(state.v().clone())
                .ok_or_else(|| Error::State("design matrix V is not positive definite".into()))?;
            &owned
        }
    };
    let shift = chol
        .l_dirty()
        .tr_solve_lower_triangular(&z)
        .ok_or_else(|| Error::State("singular Cholesky factor".into()))?;
    Ok(state.alpha_hat() + shift * v)
}

/// Lowest-index arm maximising `xᵀα̃` for one posterior draw.
pub fn select_arm_ts<R: Rng + ?Sized>(
    state: &EllipsoidState,
    arms: &ArmFeatures,
    v: f64,
    rng: &mut R,
) -> Result<usize> {
    let sample = sample_coefficients(state, v, rng)?;
    Ok(argmax_lowest(arms.scores(&sample).iter().copied()).unwrap_or(0))
}

#[derive(Debug, Clone)]
pub struct ThompsonSampling {
    algorithm: Algorithm,
    state: EllipsoidState,
    arms: Arc<ArmFeatures>,
    v: f64,
    eff_dim: EffectiveDim,
    rng: SimRng,
}

impl ThompsonSampling {
    pub(crate) fn new(algorithm: Algorithm, setup: Setup, seed: u64) -> Result<Self> {
        Ok(Self {
            algorithm,
            state: setup.state.with_cholesky()?,
            arms: setup.arms,
            v: setup.scale,
            eff_dim: setup.eff_dim,
            rng: rng::seeded(seed),
        })
    }
}

impl Policy for ThompsonSampling {
    fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    fn select(&mut self) -> Result<usize> {
        select_arm_ts(&self.state, &self.arms, self.v, &mut self.rng)
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.arms.n_arms() {
            return Err(Error::param(format!("arm {arm} out of range")));
        }
        self.state.update(&self.arms.arm(arm), reward)?;
        Ok(())
    }

    fn state(&self) -> &EllipsoidState {
        &self.state
    }

    fn confidence_scale(&self) -> f64 {
        self.v
    }

    fn dimension(&self) -> EffectiveDim {
        self.eff_dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn updated_state() -> EllipsoidState {
        let mut s = EllipsoidState::new(DVector::from_vec(vec![0.1, 1.1, 3.1]), 256)
            .unwrap()
            .with_cholesky()
            .unwrap();
        s.update(&DVector::from_vec(vec![0.6, 0.5, -0.2]), 0.8)
            .unwrap();
        s.update(&DVector::from_vec(vec![0.1, -0.7, 0.4]), -0.3)
            .unwrap();
        s
    }

    #[test]
    fn zero_scale_is_greedy() {
        let s = updated_state();
        let arms = ArmFeatures::from_rows(&DMatrix::from_row_slice(
            3,
            3,
            &[0.6, 0.5, -0.2, 0.1, -0.7, 0.4, -0.5, 0.2, 0.8],
        ));
        let mut rng = rng::seeded(1);
        let greedy = argmax_lowest(arms.scores(s.alpha_hat()).iter().copied()).unwrap();
        for _ in 0..5 {
            assert_eq!(select_arm_ts(&s, &arms, 0.0, &mut rng).unwrap(), greedy);
        }
    }

    #[test]
    fn cloned_rng_gives_same_arm() {
        let s = updated_state();
        let arms = ArmFeatures::from_rows(&DMatrix::identity(3, 3));
        let mut a = rng::seeded(77);
        let mut b = a.clone();
        assert_eq!(
            select_arm_ts(&s, &arms, 1.0, &mut a).unwrap(),
            select_arm_ts(&s, &arms, 1.0, &mut b).unwrap()
        );
    }

    #[test]
    fn fallback_without_maintained_factor() {
        let mut s = EllipsoidState::new(DVector::from_element(3, 0.5), 256).unwrap();
        s.update(&DVector::from_vec(vec![1.0, 0.0, 0.0]), 1.0)
            .unwrap();
        let with = s.clone().with_cholesky().unwrap();
        let mut r1 = rng::seeded(3);
        let mut r2 = rng::seeded(3);
        let a = sample_coefficients(&s, 0.4, &mut r1).unwrap();
        let b = sample_coefficients(&with, 0.4, &mut r2).unwrap();
        assert!((a - b).amax() < 1e-12);
    }

    #[test]
    fn sample_covariance_matches_posterior() {
        let s = updated_state();
        let v = 0.7;
        let n = 100_000;
        let mut rng = rng::seeded(2024);
        let samples: Vec<DVector<f64>> = (0..n)
            .map(|_| sample_coefficients(&s, v, &mut rng).unwrap())
            .collect();
        let mean = samples.iter().fold(DVector::zeros(3), |acc, x| acc + x) / n as f64;
        let target = s.v_inv() * (v * v);
        for i in 0..3 {
            for j in 0..3 {
                let prods: Vec<f64> = samples
                    .iter()
                    .map(|x| (x[i] - mean[i]) * (x[j] - mean[j]))
                    .collect();
                let cov = prods.iter().sum::<f64>() / (n - 1) as f64;
                let var = prods.iter().map(|p| (p - cov).powi(2)).sum::<f64>() / (n - 1) as f64;
                let se = (var / n as f64).sqrt();
                assert!(
                    (cov - target[(i, j)]).abs() <= 3.0 * se,
                    "cov[{i},{j}] = {cov}, want {} ± {}",
                    target[(i, j)],
                    3.0 * se
                );
            }
        }
    }
}
