//! Phased elimination: SpectralEliminator and LinearEliminator.

use std::sync::Arc;

use nalgebra::DVector;

use super::{
    setup, AlgoConfig, Algorithm, ArmFeatures, EffectiveDim, EllipsoidState, Family, Policy,
    RankOneStep, Setup,
};
use crate::basis::SpectralBasis;
use crate::error::{Error, Result};

/// First round (1-based) of every phase that starts within `1..=horizon`.
pub fn phase_starts(horizon: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |&t| t.checked_mul(2))
        .take_while(|&t| t <= horizon)
        .collect()
}

/// `‖x‖²_{V⁻¹}` for every arm.
fn all_widths_sq(state: &EllipsoidState, arms: &ArmFeatures) -> DVector<f64> {
    let m = arms.matrix();
    let vm = state.v_inv() * m;
    DVector::from_iterator(
        arms.n_arms(),
        m.column_iter()
            .zip(vm.column_iter())
            .map(|(x, y)| x.dot(&y).max(0.0)),
    )
}

#[derive(Debug, Clone)]
pub struct Eliminator {
    algorithm: Algorithm,
    state: EllipsoidState,
    arms: Arc<ArmFeatures>,
    beta: f64,
    eff_dim: EffectiveDim,
    horizon: usize,
    active: Vec<usize>,
    width_sq: DVector<f64>,
    /// Rounds played so far.
    t: usize,
    eliminated_at: Vec<Option<usize>>,
}

impl Eliminator {
    pub fn build(
        basis: &SpectralBasis,
        arms: Arc<ArmFeatures>,
        config: &AlgoConfig,
    ) -> Result<Self> {
        if config.algorithm.family() != Family::Eliminator {
            return Err(Error::param(format!(
                "{} is not an elimination algorithm",
                config.algorithm
            )));
        }
        Self::new(
            config.algorithm,
            setup(basis, arms, config)?,
            config.horizon,
        )
    }

    pub(crate) fn new(algorithm: Algorithm, setup: Setup, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::param("horizon T must be at least 1"));
        }
        let width_sq = all_widths_sq(&setup.state, &setup.arms);
        let n = setup.arms.n_arms();
        Ok(Self {
            algorithm,
            state: setup.state,
            beta: setup.scale,
            eff_dim: setup.eff_dim,
            horizon,
            active: (0..n).collect(),
            width_sq,
            t: 0,
            eliminated_at: vec![None; n],
            arms: setup.arms,
        })
    }

    /// Arms still in play, ascending.
    pub fn active_arms(&self) -> &[usize] {
        &self.active
    }

    /// Round after which each arm was dropped, if it was.
    pub fn eliminated_at(&self) -> &[Option<usize>] {
        &self.eliminated_at
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn is_phase_end(&self, t: usize) -> bool {
        t == self.horizon || (t + 1).is_power_of_two()
    }

    fn apply_step(&mut self, step: &RankOneStep) {
        if step.refreshed {
            self.width_sq = all_widths_sq(&self.state, &self.arms);
            return;
        }
        let proj = self.arms.matrix().tr_mul(&step.v_inv_x);
        for &a in &self.active {
            self.width_sq[a] = (self.width_sq[a] - proj[a] * proj[a] / step.denom).max(0.0);
        }
    }

    fn eliminate(&mut self) {
        let alpha = self.state.alpha_hat();
        let scores = self.arms.scores(alpha);
        let bound = |a: usize, w: &DVector<f64>| w[a].sqrt() * self.beta;
        let widths = all_widths_sq(&self.state, &self.arms);
        let best_lower = self
            .active
            .iter()
            .map(|&a| scores[a] - bound(a, &widths))
            .fold(f64::NEG_INFINITY, f64::max);
        let t = self.t;
        let mut kept = Vec::with_capacity(self.active.len());
        for &a in &self.active {
            if scores[a] + bound(a, &widths) >= best_lower {
                kept.push(a);
            } else {
                self.eliminated_at[a] = Some(t);
            }
        }
        self.active = kept;
    }

    fn start_phase(&mut self) -> Result<()> {
        self.state.reset()?;
        self.width_sq = all_widths_sq(&self.state, &self.arms);
        Ok(())
    }
}

impl Policy for Eliminator {
    fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    fn select(&mut self) -> Result<usize> {
        let mut best: Option<(usize, f64)> = None;
        for &a in &self.active {
            let w = self.width_sq[a];
            if best.is_none_or(|(_, b)| w > b) {
                best = Some((a, w));
            }
        }
        best.map(|(a, _)| a)
            .ok_or_else(|| Error::State("no active arms".into()))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.arms.n_arms() {
            return Err(Error::param(format!("arm {arm} out of range")));
        }
        let step = self.state.update(&self.arms.arm(arm), reward)?;
        self.apply_step(&step);
        self.t += 1;
        let t = self.t;
        if self.is_phase_end(t) {
            // the first phase holds a single pull and never eliminates
            if t > 1 {
                self.eliminate();
            }
            self.start_phase()?;
        }
        Ok(())
    }

    fn state(&self) -> &EllipsoidState {
        &self.state
    }

    fn confidence_scale(&self) -> f64 {
        self.beta
    }

    fn dimension(&self) -> EffectiveDim {
        self.eff_dim
    }
}
