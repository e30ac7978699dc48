use nalgebra::storage::Storage;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn, Vector};

use crate::error::{Error, Result};

/// Default number of rank-one updates between exact refactorisations.
pub const DEFAULT_REFRESH_EVERY: usize = 256;

/// Result of a rank-one update, reused by width caches.
#[derive(Debug, Clone)]
pub struct RankOneStep {
    /// `V_t⁻¹ x` before the update.
    pub v_inv_x: DVector<f64>,
    /// `1 + xᵀ V_t⁻¹ x`.
    pub denom: f64,
    /// True when the inverse was rebuilt from `V` after this update, which
    /// invalidates incrementally maintained widths.
    pub refreshed: bool,
}

/// Regularised least-squares state shared by all algorithms:
/// `V = Λ + Σ x xᵀ`, its inverse, `b = Σ x r` and `α̂ = V⁻¹ b`.
#[derive(Debug, Clone)]
pub struct EllipsoidState {
    prior: DVector<f64>,
    v: DMatrix<f64>,
    v_inv: DMatrix<f64>,
    b: DVector<f64>,
    alpha_hat: DVector<f64>,
    rounds: usize,
    log_det_ratio: f64,
    refresh_every: usize,
    since_refresh: usize,
    chol: Option<Cholesky<f64, Dyn>>,
}

impl EllipsoidState {
    /// State at `V = diag(prior)`. `prior` is the regularised spectrum.
    pub fn new(prior: DVector<f64>, refresh_every: usize) -> Result<Self> {
        if prior.is_empty() || prior.iter().any(|&p| !(p.is_finite() && p > 0.0)) {
            return Err(Error::param(
                "prior precision must be non-empty and positive",
            ));
        }
        let n = prior.len();
        Ok(Self {
            v: DMatrix::from_diagonal(&prior),
            v_inv: DMatrix::from_diagonal(&prior.map(|p| 1.0 / p)),
            b: DVector::zeros(n),
            alpha_hat: DVector::zeros(n),
            prior,
            rounds: 0,
            log_det_ratio: 0.0,
            refresh_every: refresh_every.max(1),
            since_refresh: 0,
            chol: None,
        })
    }

    /// Also maintain the Cholesky factor of `V` (needed for posterior
    /// sampling).
    pub fn with_cholesky(mut self) -> Result<Self> {
        self.chol = Some(self.factor()?);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.prior.len()
    }

    pub fn prior(&self) -> &DVector<f64> {
        &self.prior
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn v_inv(&self) -> &DMatrix<f64> {
        &self.v_inv
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn alpha_hat(&self) -> &DVector<f64> {
        &self.alpha_hat
    }

    /// Number of updates since construction or the last reset.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// `log(det V / det Λ)`, accumulated as `Σ log(1 + ‖x_s‖²_{V_s⁻¹})`.
    pub fn log_det_ratio(&self) -> f64 {
        self.log_det_ratio
    }

    pub fn cholesky(&self) -> Option<&Cholesky<f64, Dyn>> {
        self.chol.as_ref()
    }

    /// `‖x‖²_{V⁻¹}`.
    pub fn width_sq<S: Storage<f64, Dyn>>(&self, x: &Vector<f64, Dyn, S>) -> f64 {
        x.dot(&(&self.v_inv * x)).max(0.0)
    }

    pub fn width<S: Storage<f64, Dyn>>(&self, x: &Vector<f64, Dyn, S>) -> f64 {
        self.width_sq(x).sqrt()
    }

    /// Adds observation `(x, r)`.
    pub fn update<S: Storage<f64, Dyn>>(
        &mut self,
        x: &Vector<f64, Dyn, S>,
        reward: f64,
    ) -> Result<RankOneStep> {
        let v_inv_x = &self.v_inv * x;
        let denom = 1.0 + x.dot(&v_inv_x);
        if !(denom.is_finite() && denom >= 1.0 - 1e-12) {
            return Err(Error::State(format!(
                "rank-one denominator {denom} is not >= 1"
            )));
        }
        self.v.ger(1.0, x, x, 1.0);
        self.v_inv.ger(-1.0 / denom, &v_inv_x, &v_inv_x, 1.0);
        self.b.axpy(reward, x, 1.0);
        self.log_det_ratio += denom.ln();
        self.rounds += 1;
        self.since_refresh += 1;
        if let Some(chol) = self.chol.as_mut() {
            chol.rank_one_update(&x.clone_owned(), 1.0);
        }
        let refreshed = self.since_refresh >= self.refresh_every;
        if refreshed {
            self.refresh()?;
        } else {
            self.alpha_hat = &self.v_inv * &self.b;
        }
        Ok(RankOneStep {
            v_inv_x,
            denom,
            refreshed,
        })
    }

    fn factor(&self) -> Result<Cholesky<f64, Dyn>> {
        Cholesky::new(self.v.clone())
            .ok_or_else(|| Error::State("design matrix V is not positive definite".into()))
    }

    /// Rebuilds `V⁻¹` (and the Cholesky factor) from `V` directly.
    pub fn refresh(&mut self) -> Result<()> {
        let chol = self.factor()?;
        self.v_inv = chol.inverse();
        self.v_inv = (&self.v_inv + self.v_inv.transpose()) * 0.5;
        self.alpha_hat = &self.v_inv * &self.b;
        if self.chol.is_some() {
            self.chol = Some(chol);
        }
        self.since_refresh = 0;
        Ok(())
    }

    /// Back to `V = Λ` with no observations.
    pub fn reset(&mut self) -> Result<()> {
        let keep_chol = self.chol.is_some();
        *self = Self::new(self.prior.clone(), self.refresh_every)?;
        if keep_chol {
            self.chol = Some(self.factor()?);
        }
        Ok(())
    }

    /// `max |V_inv − V⁻¹|` against a fresh factorisation.
    pub fn inverse_drift(&self) -> Result<f64> {
        let exact = self.factor()?.inverse();
        Ok((&self.v_inv - exact).amax())
    }

    /// `max |V · V_inv − I|`.
    pub fn identity_residual(&self) -> f64 {
        let n = self.dim();
        (&self.v * &self.v_inv - DMatrix::identity(n, n)).amax()
    }
}
