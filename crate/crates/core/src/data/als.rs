//! Alternating least squares for `M ≈ U Vᵀ` on observed entries.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use super::RatingsTable;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlsConfig {
    pub rank: usize,
    /// Ridge penalty `μ` on every factor row.
    pub reg: f64,
    pub sweeps: usize,
    pub seed: u64,
}

impl Default for AlsConfig {
    fn default() -> Self {
        Self {
            rank: 10,
            reg: 0.1,
            sweeps: 30,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Factorization {
    /// `u × r`.
    pub user_factors: DMatrix<f64>,
    /// `m × r`.
    pub item_factors: DMatrix<f64>,
    /// Observed-entry RMSE after each half-sweep; the first entry is the
    /// initial fit.
    pub rmse_history: Vec<f64>,
    /// Penalised objective `Σ (r − uᵀv)² + μ(‖U‖² + ‖V‖²)` after each
    /// half-sweep.
    pub objective_history: Vec<f64>,
}

impl Factorization {
    pub fn rank(&self) -> usize {
        self.item_factors.ncols()
    }

    pub fn rmse(&self) -> f64 {
        *self.rmse_history.last().unwrap_or(&f64::NAN)
    }

    pub fn predict(&self, user: usize, item: usize) -> f64 {
        self.user_factors
            .row(user)
            .dot(&self.item_factors.row(item))
    }
}

/// `V u_i`: predicted reward of every item for `user`.
pub fn user_reward_vector(fact: &Factorization, user: usize) -> Result<DVector<f64>> {
    if user >= fact.user_factors.nrows() {
        return Err(Error::param(format!("user {user} out of range")));
    }
    Ok(&fact.item_factors * fact.user_factors.row(user).transpose())
}

/// Per-row observation lists: `(column, value)`.
fn grouped(
    n_rows: usize,
    entries: impl Iterator<Item = (usize, usize, f64)>,
) -> Vec<Vec<(usize, f64)>> {
    let mut rows = vec![Vec::new(); n_rows];
    for (r, c, v) in entries {
        rows[r].push((c, v));
    }
    rows
}

/// Ridge solve for every row of `target` against fixed `other` factors.
fn solve_side(
    target: &mut DMatrix<f64>,
    other: &DMatrix<f64>,
    obs: &[Vec<(usize, f64)>],
    reg: f64,
) -> Result<()> {
    let r = other.ncols();
    let rows: Vec<DVector<f64>> = obs
        .par_iter()
        .map(|list| {
            let mut gram = DMatrix::<f64>::identity(r, r) * reg;
            let mut rhs = DVector::<f64>::zeros(r);
            for &(c, v) in list {
                let x = other.row(c).transpose();
                gram.syger(1.0, &x, &x, 1.0);
                rhs.axpy(v, &x, 1.0);
            }
            if list.is_empty() {
                return Ok(DVector::zeros(r));
            }
            gram.fill_upper_triangle_with_lower_triangle();
            gram.cholesky()
                .map(|c| c.solve(&rhs))
                .ok_or_else(|| Error::State("ALS normal equations not positive definite".into()))
        })
        .collect::<Result<_>>()?;
    for (i, row) in rows.into_iter().enumerate() {
        target.set_row(i, &row.transpose());
    }
    Ok(())
}

fn fit_stats(table: &RatingsTable, u: &DMatrix<f64>, v: &DMatrix<f64>, reg: f64) -> (f64, f64) {
    let sse: f64 = table
        .ratings()
        .iter()
        .map(|r| (r.value - u.row(r.user).dot(&v.row(r.item))).powi(2))
        .sum();
    let rmse = (sse / table.len().max(1) as f64).sqrt();
    (rmse, sse + reg * (u.norm_squared() + v.norm_squared()))
}

pub fn als_factorize(table: &RatingsTable, config: &AlsConfig) -> Result<Factorization> {
    let (n_users, n_items, r) = (table.n_users(), table.n_items(), config.rank);
    if r == 0 || r > n_users.min(n_items) {
        return Err(Error::param(format!(
            "rank {r} must be in 1..={}",
            n_users.min(n_items)
        )));
    }
    if !(config.reg.is_finite() && config.reg > 0.0) {
        return Err(Error::param("ALS penalty μ must be positive"));
    }
    let by_user = grouped(
        n_users,
        table.ratings().iter().map(|x| (x.user, x.item, x.value)),
    );
    let by_item = grouped(
        n_items,
        table.ratings().iter().map(|x| (x.item, x.user, x.value)),
    );
    let mut rng = rng::seeded(config.seed);
    let scale = 1.0 / (r as f64).sqrt();
    let mut v = DMatrix::from_fn(n_items, r, |_, _| rng.random_range(-0.5..=0.5) * scale);
    let mut u = DMatrix::zeros(n_users, r);
    let (rmse0, obj0) = fit_stats(table, &u, &v, config.reg);
    let mut rmse_history = vec![rmse0];
    let mut objective_history = vec![obj0];
    for _ in 0..config.sweeps {
        solve_side(&mut u, &v, &by_user, config.reg)?;
        let (rmse, obj) = fit_stats(table, &u, &v, config.reg);
        rmse_history.push(rmse);
        objective_history.push(obj);
        solve_side(&mut v, &u, &by_item, config.reg)?;
        let (rmse, obj) = fit_stats(table, &u, &v, config.reg);
        rmse_history.push(rmse);
        objective_history.push(obj);
    }
    if u.iter().chain(v.iter()).any(|x| !x.is_finite()) {
        return Err(Error::State("ALS produced non-finite factors".into()));
    }
    Ok(Factorization {
        user_factors: u,
        item_factors: v,
        rmse_history,
        objective_history,
    })
}
