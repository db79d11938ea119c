//! Iteration engines.
//!
//! [`Runner`] applies an [`OptimizerState`] under a [`StepSchedule`],
//! evaluating the loss at every iterate, and stops early with the
//! diverged flag set once any entry exceeds
//! [`DIVERGENCE_THRESHOLD`](crate::linalg::DIVERGENCE_THRESHOLD).
//!
//! Stochastic mini-batching is not modelled: on the toy LASSO the
//! subgradient does not depend on the batch, so SGD there is the vanilla
//! full-batch iteration.

mod run;
mod schedule;
mod trajectory;
mod variants;

pub use run::{run, Runner};
pub use schedule::StepSchedule;
pub use trajectory::{Norms, Record, RecordMode, Trajectory, FULL_RECORD_MAX_DIM, TRAJECTORY_HEADER};
pub use variants::{ndgm_step, Adam, Momentum, OptimizerState, RmsProp};
