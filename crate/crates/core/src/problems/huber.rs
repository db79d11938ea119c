use super::Objective;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// Mean Huber loss of the residuals `r = y − Zβ` with transition `δ`:
/// `½r²` inside `|r| < δ`, `δ(|r| − δ/2)` outside.
///
/// Once but not twice differentiable, with gradients bounded by
/// `(δ/N) Σ‖zᵢ‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct HuberRegression {
    z: DenseMatrix,
    y: DenseVector,
    delta: f64,
}

impl HuberRegression {
    pub const DEFAULT_DELTA: f64 = 1.0;

    pub fn new(z: DenseMatrix, y: DenseVector, delta: f64) -> Result<Self> {
        check_dim(z.rows(), y.dim())?;
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be > 0, got {delta}")));
        }
        if z.rows() == 0 {
            return Err(Error::InvalidArgument("need at least one observation".into()));
        }
        Ok(Self { z, y, delta })
    }

    pub fn design(&self) -> &DenseMatrix {
        &self.z
    }

    pub fn response(&self) -> &DenseVector {
        &self.y
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn residual(&self, beta: &DenseVector) -> Result<DenseVector> {
        self.y.sub(&self.z.matvec(beta)?)
    }
}

impl Objective for HuberRegression {
    fn dim(&self) -> usize {
        self.z.cols()
    }

    fn value(&self, beta: &DenseVector) -> Result<f64> {
        let d = self.delta;
        let total: f64 = self
            .residual(beta)?
            .iter()
            .map(|r| {
                if r.abs() < d {
                    0.5 * r * r
                } else {
                    d * (r.abs() - 0.5 * d)
                }
            })
            .sum();
        Ok(total / self.z.rows() as f64)
    }

    fn subgradient(&self, beta: &DenseVector) -> Result<DenseVector> {
        let n = self.z.rows() as f64;
        let d = self.delta;
        let clipped: DenseVector = self
            .residual(beta)?
            .iter()
            .map(|r| -r.clamp(-d, d) / n)
            .collect::<Vec<_>>()
            .into();
        self.z.matvec_t(&clipped)
    }
}
