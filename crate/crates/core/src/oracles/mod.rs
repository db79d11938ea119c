//! Closed-form predictions and bound checks, computed independently of the
//! optimizer loop so they can be compared against simulated trajectories.

mod curvature;
mod cycle;

pub use curvature::{dominant_curvature, hessian_vector_product};
pub use cycle::{lasso_limit_cycle, LimitCycle};

use crate::error::{Error, Result};
use crate::linalg::{DenseVector, NormKind};
use crate::optim::Trajectory;
use crate::problems::{Objective, ProblemSpec};
use crate::rng::SeededRng;

pub const BOUND_HEADER: &str = "bound,observed,satisfied";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub bound: f64,
    pub observed: f64,
    pub satisfied: bool,
}

impl BoundReport {
    /// `observed ≤ bound`.
    pub fn at_most(bound: f64, observed: f64) -> Self {
        Self { bound, observed, satisfied: observed <= bound }
    }

    /// `observed < bound`.
    pub fn below(bound: f64, observed: f64) -> Self {
        Self { bound, observed, satisfied: observed < bound }
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.bound, self.observed, self.satisfied)
    }
}

/// Limiting optimality-gap bound `αL²` for constant-step subgradient descent
/// on an `L`-Lipschitz convex loss.
pub fn unstable_bound(l: f64, alpha: f64) -> f64 {
    alpha * l * l
}

/// The tighter textbook constant `αL²/2`, reported alongside.
pub fn classical_bound(l: f64, alpha: f64) -> f64 {
    0.5 * alpha * l * l
}

/// Lipschitz constant known in closed form: `λ₁√P` for [`ProblemSpec::L1Toy`]
/// and `(δ/N) Σᵢ ‖zᵢ‖₂` for [`ProblemSpec::Huber`].
pub fn analytic_lipschitz(problem: &ProblemSpec) -> Option<f64> {
    match problem {
        ProblemSpec::L1Toy(p) => Some(p.lambda1() * (p.dim() as f64).sqrt()),
        ProblemSpec::Huber(h) => {
            let z = h.design();
            let total: f64 = (0..z.rows())
                .map(|i| z.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
                .sum();
            Some(h.delta() * total / z.rows() as f64)
        }
        _ => None,
    }
}

/// Largest subgradient norm over `samples` points drawn uniformly from the
/// box `[−radius, radius]^P`. A lower bound on the Lipschitz constant.
pub fn lipschitz_estimate(problem: &dyn Objective, samples: usize, radius: f64, rng: &mut SeededRng) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut best = 0.0f64;
    for _ in 0..samples {
        let x = rng.uniform_vector(problem.dim(), -radius, radius)?;
        best = best.max(problem.subgradient(&x)?.norm(NormKind::L2));
    }
    Ok(best)
}

/// RMSProp accumulator on `λ₁‖β‖₁` away from zero: `(1 − γᵗ) λ₁²`.
pub fn rmsprop_vt_closed_form(t: usize, gamma: f64, lambda1: f64) -> f64 {
    (1.0 - gamma.powf(t as f64)) * lambda1 * lambda1
}

/// Share of coordinates with `|βₖ| < threshold`.
pub fn prunable_fraction(beta: &DenseVector, threshold: f64) -> f64 {
    if beta.dim() == 0 {
        return 0.0;
    }
    beta.iter().filter(|x| x.abs() < threshold).count() as f64 / beta.dim() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaptureOutcome {
    Held,
    Violated { iter: usize },
}

/// First recorded iteration whose `‖β − center‖∞` reaches `radius`.
///
/// Uses stored iterates when present; otherwise falls back to the recorded
/// `‖β‖∞`, which needs `center = 0`.
pub fn capture_check(traj: &Trajectory, center: &DenseVector, radius: f64) -> Result<CaptureOutcome> {
    let full = traj.has_iterates();
    if !full && center.iter().any(|&c| c != 0.0) {
        return Err(Error::InvalidArgument(
            "norms-only trajectory can only be checked about the origin".into(),
        ));
    }
    for r in traj.records() {
        let dist = match &r.iterate {
            Some(b) if full => b.sub(center)?.norm(NormKind::Linf),
            _ => r.norms.linf,
        };
        if !(dist < radius) {
            return Ok(CaptureOutcome::Violated { iter: r.iter });
        }
    }
    Ok(CaptureOutcome::Held)
}
