//! Update rules.
//!
//! | variant  | update                                                        |
//! |----------|---------------------------------------------------------------|
//! | vanilla  | `β − α g`                                                     |
//! | momentum | `β − α(1−η) g + η(β − β_prev)`                                |
//! | RMSProp  | `v ← γv + (1−γ)g²`, then `β − α g / √(v + ε̄)`                 |
//! | Adam     | bias-corrected moments, `β − α m̂ / (√v̂ + ε̄)`                  |
//!
//! The momentum form scales the gradient by `α(1−η)` rather than using the
//! classical heavy-ball `β − αg + η(β − β_prev)`. RMSProp keeps `ε̄` inside
//! the square root; some frameworks add it after the root instead.

use crate::error::{check_dim, Error, Result};
use crate::linalg::DenseVector;

/// `β − α g`
pub fn ndgm_step(beta: &DenseVector, g: &DenseVector, alpha: f64) -> Result<DenseVector> {
    beta.axpy(-alpha, g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Momentum {
    eta: f64,
    prev: Option<DenseVector>,
}

impl Momentum {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eta) {
            return Err(Error::InvalidArgument(format!("momentum must lie in [0, 1), got {eta}")));
        }
        Ok(Self { eta, prev: None })
    }

    /// State as if the previous iterate were `prev`.
    pub fn with_previous(eta: f64, prev: DenseVector) -> Result<Self> {
        let mut m = Self::new(eta)?;
        m.prev = Some(prev);
        Ok(m)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn previous(&self) -> Option<&DenseVector> {
        self.prev.as_ref()
    }

    /// On the first call the previous iterate defaults to `beta` itself.
    pub fn step(&mut self, beta: &DenseVector, g: &DenseVector, alpha: f64) -> Result<DenseVector> {
        check_dim(beta.dim(), g.dim())?;
        let prev = self.prev.get_or_insert_with(|| beta.clone());
        check_dim(beta.dim(), prev.dim())?;
        let eta = self.eta;
        let scale = alpha * (1.0 - eta);
        let next: Vec<f64> = beta
            .iter()
            .zip(g.iter())
            .zip(prev.iter())
            .map(|((b, g), p)| b - scale * g + eta * (b - p))
            .collect();
        *prev = beta.clone();
        Ok(next.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmsProp {
    gamma: f64,
    eps: f64,
    v: Vec<f64>,
}

impl RmsProp {
    pub const DEFAULT_GAMMA: f64 = 0.99;
    pub const DEFAULT_EPS: f64 = 1e-8;

    pub fn new(gamma: f64, eps: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidArgument(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be > 0, got {eps}")));
        }
        Ok(Self { gamma, eps, v: Vec::new() })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Accumulators; empty before the first step.
    pub fn accumulators(&self) -> &[f64] {
        &self.v
    }

    pub fn step(&mut self, beta: &DenseVector, g: &DenseVector, alpha: f64) -> Result<DenseVector> {
        check_dim(beta.dim(), g.dim())?;
        if self.v.is_empty() {
            self.v = vec![0.0; beta.dim()];
        }
        check_dim(beta.dim(), self.v.len())?;
        let (gamma, eps) = (self.gamma, self.eps);
        let next: Vec<f64> = beta
            .iter()
            .zip(g.iter())
            .zip(self.v.iter_mut())
            .map(|((b, g), v)| {
                *v = gamma * *v + (1.0 - gamma) * g * g;
                b - alpha / (*v + eps).sqrt() * g
            })
            .collect();
        Ok(next.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(beta1: f64, beta2: f64, eps: f64) -> Result<Self> {
        for (name, b) in [("beta1", beta1), ("beta2", beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {b}")));
            }
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be > 0, got {eps}")));
        }
        Ok(Self { beta1, beta2, eps, m: Vec::new(), v: Vec::new(), t: 0 })
    }

    pub fn step_count(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, beta: &DenseVector, g: &DenseVector, alpha: f64) -> Result<DenseVector> {
        check_dim(beta.dim(), g.dim())?;
        if self.m.is_empty() {
            self.m = vec![0.0; beta.dim()];
            self.v = vec![0.0; beta.dim()];
        }
        check_dim(beta.dim(), self.m.len())?;
        self.t += 1;
        let (b1, b2, eps) = (self.beta1, self.beta2, self.eps);
        let c1 = 1.0 - b1.powf(self.t as f64);
        let c2 = 1.0 - b2.powf(self.t as f64);
        let next: Vec<f64> = beta
            .iter()
            .zip(g.iter())
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
            .map(|((b, g), (m, v))| {
                *m = b1 * *m + (1.0 - b1) * g;
                *v = b2 * *v + (1.0 - b2) * g * g;
                let mhat = *m / c1;
                let vhat = *v / c2;
                b - alpha * mhat / (vhat.sqrt() + eps)
            })
            .collect();
        Ok(next.into())
    }
}

impl Default for Adam {
    fn default() -> Self {
        Self::new(0.9, 0.999, 1e-8).expect("default Adam parameters are valid")
    }
}

/// Per-variant optimizer state, owned by a single run.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerState {
    Vanilla,
    Momentum(Momentum),
    RmsProp(RmsProp),
    Adam(Adam),
}

impl OptimizerState {
    pub fn momentum(eta: f64) -> Result<Self> {
        Momentum::new(eta).map(Self::Momentum)
    }

    pub fn rmsprop(gamma: f64, eps: f64) -> Result<Self> {
        RmsProp::new(gamma, eps).map(Self::RmsProp)
    }

    pub fn adam(beta1: f64, beta2: f64, eps: f64) -> Result<Self> {
        Adam::new(beta1, beta2, eps).map(Self::Adam)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Vanilla => "vanilla",
            Self::Momentum(_) => "momentum",
            Self::RmsProp(_) => "rmsprop",
            Self::Adam(_) => "adam",
        }
    }

    pub fn step(&mut self, beta: &DenseVector, g: &DenseVector, alpha: f64) -> Result<DenseVector> {
        match self {
            Self::Vanilla => ndgm_step(beta, g, alpha),
            Self::Momentum(m) => m.step(beta, g, alpha),
            Self::RmsProp(r) => r.step(beta, g, alpha),
            Self::Adam(a) => a.step(beta, g, alpha),
        }
    }
}
