//! Gradient methods on non-differentiable losses.
//!
//! - [`problems`]: loss functions with value and subgradient oracles
//! - [`optim`]: the iteration engines, step-size schedules and trajectories
//! - [`oracles`]: closed-form predictions and bounds checked against runs
//! - [`netlab`]: a small fully-connected network with manual backprop

pub mod error;
pub mod linalg;
pub mod netlab;
pub mod optim;
pub mod oracles;
pub mod problems;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, DenseVector, NormKind, DIVERGENCE_THRESHOLD};
pub use problems::{Objective, ProblemSpec};
pub use rng::SeededRng;
