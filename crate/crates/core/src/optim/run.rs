use super::schedule::StepSchedule;
use super::trajectory::{Norms, Record, RecordMode, Trajectory, FULL_RECORD_MAX_DIM};
use super::variants::OptimizerState;
use crate::error::{check_dim, Error, Result};
use crate::linalg::DenseVector;
use crate::problems::Objective;

/// Iteration driver: a variant, a schedule and an iteration budget.
#[derive(Debug, Clone)]
pub struct Runner {
    variant: OptimizerState,
    schedule: StepSchedule,
    iters: usize,
    record: RecordMode,
}

impl Runner {
    pub fn new(variant: OptimizerState, schedule: StepSchedule, iters: usize) -> Self {
        Self { variant, schedule, iters, record: RecordMode::Full }
    }

    pub fn record(mut self, mode: RecordMode) -> Self {
        self.record = mode;
        self
    }

    pub fn run(self, problem: &dyn Objective, beta0: &DenseVector) -> Result<Trajectory> {
        self.run_observed(problem, beta0, |_, _| {})
    }

    /// Like [`Runner::run`], calling `observer(t, β_t)` on every iterate
    /// including `β_0`.
    pub fn run_observed(
        self,
        problem: &dyn Objective,
        beta0: &DenseVector,
        mut observer: impl FnMut(usize, &DenseVector),
    ) -> Result<Trajectory> {
        check_dim(problem.dim(), beta0.dim())?;
        if self.iters == 0 {
            return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
        }
        let Runner { mut variant, schedule, iters, record } = self;
        let keep = record == RecordMode::Full && beta0.dim() <= FULL_RECORD_MAX_DIM;
        let make = |t: usize, beta: &DenseVector, loss: f64| Record {
            iter: t,
            alpha: schedule.rate(t),
            loss,
            norms: Norms::of(beta),
            iterate: keep.then(|| beta.clone()),
        };

        let mut traj = Trajectory::new();
        let mut beta = beta0.clone();
        observer(0, &beta);
        traj.push(make(0, &beta, problem.value(&beta)?));
        for t in 0..iters {
            let g = problem.subgradient(&beta)?;
            beta = variant.step(&beta, &g, schedule.rate(t))?;
            observer(t + 1, &beta);
            let diverged = beta.has_diverged();
            let loss = if diverged { problem.value(&beta).unwrap_or(f64::INFINITY) } else { problem.value(&beta)? };
            traj.push(make(t + 1, &beta, loss));
            if diverged || !loss.is_finite() {
                traj.mark_diverged();
                break;
            }
        }
        Ok(traj)
    }
}

/// One full run from `beta0`.
pub fn run(
    problem: &dyn Objective,
    variant: OptimizerState,
    schedule: StepSchedule,
    beta0: &DenseVector,
    iters: usize,
    record: RecordMode,
) -> Result<Trajectory> {
    Runner::new(variant, schedule, iters).record(record).run(problem, beta0)
}
