//! Optimistic index policies: SpectralUCB and LinUCB.
//!
//! Two selection modes produce the same argmax:
//!
//! * exhaustive: every arm's index each round, with `‖x‖²_{V⁻¹}` kept in a
//!   cache that is downdated by each rank-one step in `O(NL)`;
//! * lazy: a max-queue of stale indices. A stale index is lifted by
//!   `max‖x‖₂ · Σ‖α̂_{k+1} − α̂_k‖₂`, which bounds how far `xᵀα̂` can have
//!   moved, while widths only shrink. Arms are re-scored only while their
//!   lifted bound can still beat the best fresh score.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use nalgebra::storage::Storage;
use nalgebra::{DVector, Dyn, Vector};

use super::{
    argmax_lowest, setup, AlgoConfig, Algorithm, ArmFeatures, EffectiveDim, EllipsoidState, Family,
    Policy, Setup,
};
use crate::basis::SpectralBasis;
use crate::error::{Error, Result};

/// Relative slack on lifted bounds; covers rounding between score routes.
const LAZY_SLACK: f64 = 1e-9;

/// `xᵀα̂ + c‖x‖_{V⁻¹}` evaluated directly from the state.
pub fn ucb_score<S: Storage<f64, Dyn>>(
    state: &EllipsoidState,
    x: &Vector<f64, Dyn, S>,
    c: f64,
) -> f64 {
    x.dot(state.alpha_hat()) + c * state.width(x)
}

/// Index of every arm, recomputed from scratch.
pub fn ucb_scores(state: &EllipsoidState, arms: &ArmFeatures, c: f64) -> Vec<f64> {
    (0..arms.n_arms())
        .map(|a| ucb_score(state, &arms.arm(a), c))
        .collect()
}

/// Lowest-index maximiser of the UCB index, recomputed from scratch.
pub fn select_arm_ucb(state: &EllipsoidState, arms: &ArmFeatures, c: f64) -> usize {
    argmax_lowest(ucb_scores(state, arms, c)).unwrap_or(0)
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    key: f64,
    arm: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.arm.cmp(&self.arm))
    }
}

#[derive(Debug, Clone)]
struct LazyQueue {
    heap: BinaryHeap<Entry>,
    /// `Σ ‖α̂_{k+1} − α̂_k‖₂` so far.
    drift: f64,
    last_alpha: DVector<f64>,
    evaluations: u64,
}

#[derive(Debug, Clone)]
enum Mode {
    Exhaustive { width_sq: Vec<f64> },
    Lazy(LazyQueue),
}

#[derive(Debug, Clone)]
pub struct Ucb {
    algorithm: Algorithm,
    state: EllipsoidState,
    arms: Arc<ArmFeatures>,
    c: f64,
    eff_dim: EffectiveDim,
    mode: Mode,
}

impl Ucb {
    /// Typed counterpart of [`super::build_policy`] for the UCB family.
    pub fn build(
        basis: &SpectralBasis,
        arms: Arc<ArmFeatures>,
        config: &AlgoConfig,
    ) -> Result<Self> {
        if config.algorithm.family() != Family::Ucb {
            return Err(Error::param(format!(
                "{} is not a UCB algorithm",
                config.algorithm
            )));
        }
        Ok(Self::new(
            config.algorithm,
            setup(basis, arms, config)?,
            config.lazy_ucb,
        ))
    }

    pub(crate) fn new(algorithm: Algorithm, setup: Setup, lazy: bool) -> Self {
        let Setup {
            state,
            arms,
            scale,
            eff_dim,
        } = setup;
        // V = diag(prior) at start, so widths are Σ x_i² / λ_i
        let inv_prior = state.prior().map(|p| 1.0 / p);
        let initial_width_sq: Vec<f64> = (0..arms.n_arms())
            .map(|a| {
                arms.arm(a)
                    .iter()
                    .zip(inv_prior.iter())
                    .map(|(x, ip)| x * x * ip)
                    .sum()
            })
            .collect();
        let mode = if lazy {
            let heap = initial_width_sq
                .iter()
                .enumerate()
                .map(|(arm, w2)| Entry {
                    key: scale * w2.sqrt(),
                    arm,
                })
                .collect();
            Mode::Lazy(LazyQueue {
                heap,
                drift: 0.0,
                last_alpha: state.alpha_hat().clone(),
                evaluations: 0,
            })
        } else {
            Mode::Exhaustive {
                width_sq: initial_width_sq,
            }
        };
        Self {
            algorithm,
            state,
            arms,
            c: scale,
            eff_dim,
            mode,
        }
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.mode, Mode::Lazy(_))
    }

    /// Number of exact index evaluations made by the lazy queue so far.
    pub fn lazy_evaluations(&self) -> Option<u64> {
        match &self.mode {
            Mode::Lazy(q) => Some(q.evaluations),
            Mode::Exhaustive { .. } => None,
        }
    }

    /// Arm chosen by a full direct recomputation of every index.
    pub fn exhaustive_choice(&self) -> usize {
        select_arm_ucb(&self.state, &self.arms, self.c)
    }

    /// Current index of every arm from the exhaustive cache, or a direct
    /// recomputation in lazy mode.
    pub fn scores(&self) -> Vec<f64> {
        match &self.mode {
            Mode::Exhaustive { width_sq } => {
                let means = self.arms.scores(self.state.alpha_hat());
                means
                    .iter()
                    .zip(width_sq)
                    .map(|(m, w2)| m + self.c * w2.max(0.0).sqrt())
                    .collect()
            }
            Mode::Lazy(_) => ucb_scores(&self.state, &self.arms, self.c),
        }
    }

    fn select_lazy(&mut self) -> usize {
        let Mode::Lazy(queue) = &mut self.mode else {
            unreachable!("select_lazy in exhaustive mode")
        };
        let lift = self.arms.max_norm() * queue.drift;
        let mut best: Option<(f64, usize)> = None;
        let mut fresh: Vec<(usize, f64)> = Vec::new();
        while let Some(top) = queue.heap.peek().copied() {
            let bound = top.key + lift;
            if let Some((best_score, _)) = best {
                if bound + LAZY_SLACK * (1.0 + bound.abs()) < best_score {
                    break;
                }
            }
            queue.heap.pop();
            let score = ucb_score(&self.state, &self.arms.arm(top.arm), self.c);
            queue.evaluations += 1;
            let better = match best {
                None => true,
                Some((s, a)) => score > s || (score == s && top.arm < a),
            };
            if better {
                best = Some((score, top.arm));
            }
            fresh.push((top.arm, score));
        }
        for (arm, score) in fresh {
            queue.heap.push(Entry {
                key: score - lift,
                arm,
            });
        }
        best.map_or(0, |(_, a)| a)
    }
}

impl Policy for Ucb {
    fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    fn select(&mut self) -> Result<usize> {
        Ok(match &self.mode {
            Mode::Exhaustive { .. } => argmax_lowest(self.scores()).unwrap_or(0),
            Mode::Lazy(_) => self.select_lazy(),
        })
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.arms.n_arms() {
            return Err(Error::param(format!("arm {arm} out of range")));
        }
        let step = self.state.update(&self.arms.arm(arm), reward)?;
        match &mut self.mode {
            Mode::Exhaustive { width_sq } => {
                if step.refreshed {
                    let projected = self.state.v_inv() * self.arms.matrix();
                    for (a, w2) in width_sq.iter_mut().enumerate() {
                        *w2 = self.arms.arm(a).dot(&projected.column(a));
                    }
                } else {
                    let dots = self.arms.matrix().tr_mul(&step.v_inv_x);
                    for (w2, d) in width_sq.iter_mut().zip(dots.iter()) {
                        *w2 -= d * d / step.denom;
                    }
                }
            }
            Mode::Lazy(queue) => {
                queue.drift += (self.state.alpha_hat() - &queue.last_alpha).norm();
                queue.last_alpha.copy_from(self.state.alpha_hat());
            }
        }
        Ok(())
    }

    fn state(&self) -> &EllipsoidState {
        &self.state
    }

    fn confidence_scale(&self) -> f64 {
        self.c
    }

    fn dimension(&self) -> EffectiveDim {
        self.eff_dim
    }
}
