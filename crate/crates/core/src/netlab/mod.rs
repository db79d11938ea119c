//! Small fully-connected regression networks with hand-written backprop,
//! used to compare ReLU and GELU training under plain full-batch descent.
//!
//! Batch normalisation is not modelled: its effect on convergence is a
//! separate question from activation smoothness and would need a much
//! larger setup to say anything.

mod activation;
mod mlp;

pub use activation::{activation_deriv, activation_value, erf, normal_cdf, normal_pdf, Activation};
pub use mlp::{ForwardCache, Gradients, Mlp};

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::optim::{OptimizerState, RecordMode, Runner, StepSchedule, Trajectory};
use crate::problems::Objective;
use crate::rng::SeededRng;

pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_INPUTS: usize = 16;
pub const DEFAULT_WIDTH: usize = 32;
pub const DEFAULT_DEPTHS: [usize; 4] = [2, 4, 6, 8];
pub const TEACHER_WIDTH: usize = 32;
pub const NOISE_SIGMA: f64 = 0.01;

pub const EPOCH_HEADER: &str = "epoch,loss,activation,depth,seed";

/// Regression data from a fixed random tanh teacher plus Gaussian noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub x: DenseMatrix,
    pub y: DenseMatrix,
    pub seed: u64,
}

impl SyntheticDataset {
    pub fn generate(seed: u64, samples: usize, inputs: usize) -> Result<Self> {
        if samples == 0 || inputs == 0 {
            return Err(Error::InvalidArgument("dataset needs samples and inputs".into()));
        }
        let root = SeededRng::new(seed);
        let x = root.fork(1).uniform_matrix(samples, inputs, -1.0, 1.0)?;

        let mut t = root.fork(2);
        let w_scale = 1.0 / (inputs as f64).sqrt();
        let hidden: Vec<f64> = (0..TEACHER_WIDTH * inputs).map(|_| w_scale * t.standard_normal()).collect();
        let shift: Vec<f64> = (0..TEACHER_WIDTH).map(|_| 0.1 * t.standard_normal()).collect();
        let v_scale = 1.0 / (TEACHER_WIDTH as f64).sqrt();
        let head: Vec<f64> = (0..TEACHER_WIDTH).map(|_| v_scale * t.standard_normal()).collect();

        let mut noise = root.fork(3);
        let y = (0..samples)
            .map(|s| {
                let row = x.row(s);
                let out: f64 = (0..TEACHER_WIDTH)
                    .map(|j| {
                        let pre: f64 = shift[j]
                            + row.iter().zip(&hidden[j * inputs..(j + 1) * inputs]).map(|(a, b)| a * b).sum::<f64>();
                        head[j] * pre.tanh()
                    })
                    .sum();
                out + NOISE_SIGMA * noise.standard_normal()
            })
            .collect();
        Ok(Self { x, y: DenseMatrix::new(samples, 1, y)?, seed })
    }

    pub fn default_for_seed(seed: u64) -> Result<Self> {
        Self::generate(seed, DEFAULT_SAMPLES, DEFAULT_INPUTS)
    }

    pub fn samples(&self) -> usize {
        self.x.rows()
    }

    pub fn inputs(&self) -> usize {
        self.x.cols()
    }
}

/// Training loss as a function of the flattened parameters.
pub struct MlpObjective<'a> {
    template: &'a Mlp,
    data: &'a SyntheticDataset,
}

impl<'a> MlpObjective<'a> {
    pub fn new(template: &'a Mlp, data: &'a SyntheticDataset) -> Result<Self> {
        if template.layer_dims()[0] != data.inputs() || *template.layer_dims().last().unwrap() != data.y.cols() {
            return Err(Error::InvalidArgument("network and dataset shapes disagree".into()));
        }
        Ok(Self { template, data })
    }
}

impl Objective for MlpObjective<'_> {
    fn dim(&self) -> usize {
        self.template.num_params()
    }

    fn value(&self, theta: &DenseVector) -> Result<f64> {
        self.template.with_params(theta)?.loss(&self.data.x, &self.data.y)
    }

    fn subgradient(&self, theta: &DenseVector) -> Result<DenseVector> {
        let net = self.template.with_params(theta)?;
        let cache = net.forward(&self.data.x)?;
        Ok(net.backward(&cache, &self.data.y)?.flatten())
    }
}

#[derive(Debug, Clone)]
pub struct Training {
    /// Record `e` holds the loss after `e` epochs.
    pub trajectory: Trajectory,
    pub net: Mlp,
}

/// Full-batch gradient descent for `epochs` epochs, starting from `net`.
pub fn train(net: &Mlp, data: &SyntheticDataset, schedule: StepSchedule, epochs: usize) -> Result<Training> {
    if epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    let objective = MlpObjective::new(net, data)?;
    let mut last = net.params();
    let trajectory = Runner::new(OptimizerState::Vanilla, schedule, epochs)
        .record(RecordMode::NormsOnly)
        .run_observed(&objective, &net.params(), |_, theta| last = theta.clone())?;
    Ok(Training { trajectory, net: net.with_params(&last)? })
}

/// Dataset and He-initialised network for one arm of a paired comparison.
/// The network draws from its own stream so both activations start from
/// identical weights.
pub fn paired_setup(seed: u64, depth: usize, activation: Activation) -> Result<(SyntheticDataset, Mlp)> {
    let data = SyntheticDataset::default_for_seed(seed)?;
    let mut rng = SeededRng::new(seed).fork(10);
    let net = Mlp::with_depth(DEFAULT_INPUTS, DEFAULT_WIDTH, depth, 1, activation, &mut rng)?;
    Ok((data, net))
}

/// First epoch whose loss is at most `(1 − fraction)` times the initial one.
pub fn epochs_to_reduction(traj: &Trajectory, fraction: f64) -> Option<usize> {
    let first = traj.records().first()?.loss;
    traj.records()
        .iter()
        .find(|r| r.loss <= (1.0 - fraction) * first)
        .map(|r| r.iter)
}

/// Rows `epoch,loss,activation,depth,seed` without the header.
pub fn epoch_rows(traj: &Trajectory, activation: Activation, depth: usize, seed: u64) -> String {
    let mut out = String::new();
    for r in traj.records() {
        let _ = writeln!(out, "{},{},{},{},{}", r.iter, r.loss, activation.name(), depth, seed);
    }
    out
}
