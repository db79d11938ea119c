use crate::error::{Error, Result};

/// Learning-rate policy `α_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    Constant { alpha: f64 },
    /// `α₀ / (1 + t/τ)`: tends to 0 with a divergent sum.
    Diminishing { alpha0: f64, tau: f64 },
    /// `α₀ · decay^⌊t/period⌋`: step decay, the sum converges.
    Reducing { alpha0: f64, decay: f64, period: usize },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite and > 0, got {x}")))
    }
}

impl StepSchedule {
    pub fn constant(alpha: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        Ok(Self::Constant { alpha })
    }

    pub fn diminishing(alpha0: f64, tau: f64) -> Result<Self> {
        positive("alpha0", alpha0)?;
        positive("tau", tau)?;
        Ok(Self::Diminishing { alpha0, tau })
    }

    pub fn reducing(alpha0: f64, decay: f64, period: usize) -> Result<Self> {
        positive("alpha0", alpha0)?;
        if !(decay > 0.0 && decay < 1.0) {
            return Err(Error::InvalidArgument(format!("decay must lie in (0, 1), got {decay}")));
        }
        if period == 0 {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        Ok(Self::Reducing { alpha0, decay, period })
    }

    pub fn rate(&self, t: usize) -> f64 {
        match *self {
            Self::Constant { alpha } => alpha,
            Self::Diminishing { alpha0, tau } => alpha0 / (1.0 + t as f64 / tau),
            Self::Reducing { alpha0, decay, period } => {
                let k = (t / period) as i32;
                alpha0 * decay.powi(k)
            }
        }
    }

    /// `lim α_t`.
    pub fn limit_rate(&self) -> f64 {
        match *self {
            Self::Constant { alpha } => alpha,
            _ => 0.0,
        }
    }

    /// `Σ_t α_t` when it is finite, `None` when the series diverges.
    pub fn total_rate(&self) -> Option<f64> {
        match *self {
            Self::Reducing { alpha0, decay, period } => {
                Some(alpha0 * period as f64 / (1.0 - decay))
            }
            Self::Constant { .. } | Self::Diminishing { .. } => None,
        }
    }
}
