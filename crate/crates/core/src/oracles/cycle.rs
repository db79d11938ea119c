use crate::error::{Error, Result};
use crate::linalg::DenseVector;

/// Terminal two-point oscillation of constant-step subgradient descent on
/// `λ₁‖β‖₁`.
///
/// Per coordinate `high` is the cycle point with the sign of `β₀[k]` and
/// `low` the other one, so `high − low = ±αλ₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCycle {
    pub high: DenseVector,
    pub low: DenseVector,
    /// First iteration at which every coordinate sits on its cycle.
    pub settle_iter: usize,
    /// Per-coordinate iteration at which `high[k]` is first reached.
    pub coord_settle: Vec<usize>,
}

impl LimitCycle {
    /// The iterate at time `t ≥ coord_settle[k]` for every `k`.
    pub fn predict(&self, t: usize) -> Option<DenseVector> {
        if t < self.settle_iter {
            return None;
        }
        Some(
            self.coord_settle
                .iter()
                .enumerate()
                .map(|(k, &n)| if (t - n) % 2 == 0 { self.high[k] } else { self.low[k] })
                .collect::<Vec<_>>()
                .into(),
        )
    }

    pub fn band_width(&self) -> f64 {
        self.high
            .iter()
            .zip(self.low.iter())
            .fold(0.0, |m, (h, l)| m.max((h - l).abs()))
    }
}

/// Runs `x ← x − αλ₁·sign(x)` coordinate by coordinate until the value
/// repeats with period two.
///
/// Fails when a coordinate lands exactly on 0, which happens only when
/// `β₀[k]` is an integer multiple of `αλ₁` (up to rounding).
pub fn lasso_limit_cycle(beta0: &DenseVector, alpha: f64, lambda1: f64) -> Result<LimitCycle> {
    if !(alpha > 0.0 && lambda1 > 0.0 && alpha.is_finite() && lambda1.is_finite()) {
        return Err(Error::InvalidArgument("alpha and lambda1 must be finite and > 0".into()));
    }
    let mut high = Vec::with_capacity(beta0.dim());
    let mut low = Vec::with_capacity(beta0.dim());
    let mut settle = Vec::with_capacity(beta0.dim());
    for (k, &x0) in beta0.iter().enumerate() {
        let (h, l, n) = scalar_cycle(x0, alpha, lambda1).map_err(|e| match e {
            Error::DegenerateInitialization { .. } => Error::DegenerateInitialization { coord: k },
            other => other,
        })?;
        high.push(h);
        low.push(l);
        settle.push(n);
    }
    Ok(LimitCycle {
        high: high.into(),
        low: low.into(),
        settle_iter: settle.iter().copied().max().unwrap_or(0),
        coord_settle: settle,
    })
}

fn scalar_cycle(x0: f64, alpha: f64, lambda1: f64) -> Result<(f64, f64, usize)> {
    if !x0.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite start {x0}")));
    }
    let step = |x: f64| -> f64 {
        if x > 0.0 {
            x - alpha * lambda1
        } else if x < 0.0 {
            x + alpha * lambda1
        } else {
            0.0
        }
    };
    let c = alpha * lambda1;
    let budget = (x0.abs() / c).ceil() + 8.0;
    if budget > 1e9 {
        return Err(Error::InvalidArgument(format!(
            "|beta0| / (alpha * lambda1) = {} is too large to iterate",
            x0.abs() / c
        )));
    }
    let origin = x0.signum();
    let mut x = x0;
    let mut n = 0usize;
    loop {
        if x == 0.0 {
            return Err(Error::DegenerateInitialization { coord: 0 });
        }
        if x * origin > 0.0 && x.abs() < c {
            let y = step(x);
            if y == 0.0 {
                return Err(Error::DegenerateInitialization { coord: 0 });
            }
            if step(y) == x {
                return Ok((x, y, n));
            }
        }
        x = step(x);
        n += 1;
        if n as f64 > budget {
            return Err(Error::NumericalFailure(format!("no period-two cycle from {x0}")));
        }
    }
}
