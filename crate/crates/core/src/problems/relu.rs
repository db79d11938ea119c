use super::{l1, sign0, Objective};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// Penalized single-neuron regression
/// `‖y − max(0, Zβ)‖² + λ₁‖β‖₁ + λ₂‖β‖²`.
///
/// Convex when every response is non-positive, which the constructor
/// enforces. The data-fit term carries no `1/N` factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ReluPenalized {
    z: DenseMatrix,
    y: DenseVector,
    lambda1: f64,
    lambda2: f64,
}

impl ReluPenalized {
    pub fn new(z: DenseMatrix, y: DenseVector, lambda1: f64, lambda2: f64) -> Result<Self> {
        check_dim(z.rows(), y.dim())?;
        if !(lambda1 >= 0.0 && lambda2 >= 0.0 && lambda1.is_finite() && lambda2.is_finite()) {
            return Err(Error::InvalidArgument("penalties must be finite and >= 0".into()));
        }
        if lambda1 + lambda2 <= 0.0 {
            return Err(Error::InvalidArgument("lambda1 + lambda2 must be > 0".into()));
        }
        if y.iter().any(|v| !(*v <= 0.0)) {
            return Err(Error::InvalidArgument(
                "response must be non-positive for the loss to be convex".into(),
            ));
        }
        Ok(Self { z, y, lambda1, lambda2 })
    }

    pub fn design(&self) -> &DenseMatrix {
        &self.z
    }

    pub fn response(&self) -> &DenseVector {
        &self.y
    }

    pub fn penalties(&self) -> (f64, f64) {
        (self.lambda1, self.lambda2)
    }
}

impl Objective for ReluPenalized {
    fn dim(&self) -> usize {
        self.z.cols()
    }

    fn value(&self, beta: &DenseVector) -> Result<f64> {
        let u = self.z.matvec(beta)?;
        let fit: f64 = self
            .y
            .iter()
            .zip(u.iter())
            .map(|(y, u)| (y - u.max(0.0)).powi(2))
            .sum();
        let ridge: f64 = beta.iter().map(|b| b * b).sum();
        Ok(fit + self.lambda1 * l1(beta) + self.lambda2 * ridge)
    }

    fn subgradient(&self, beta: &DenseVector) -> Result<DenseVector> {
        let u = self.z.matvec(beta)?;
        // relu'(0) is taken as 0
        let masked: DenseVector = self
            .y
            .iter()
            .zip(u.iter())
            .map(|(y, u)| if *u > 0.0 { y - u } else { 0.0 })
            .collect::<Vec<_>>()
            .into();
        let fit = self.z.matvec_t(&masked)?;
        Ok(fit
            .iter()
            .zip(beta.iter())
            .map(|(f, b)| -2.0 * f + self.lambda1 * sign0(*b) + 2.0 * self.lambda2 * b)
            .collect::<Vec<_>>()
            .into())
    }
}
