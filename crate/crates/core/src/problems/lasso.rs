use super::{l1, sign0, Objective};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// `(1/N)‖y − Wβ‖² + λ₁‖β‖₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralLasso {
    w: DenseMatrix,
    y: DenseVector,
    lambda1: f64,
}

impl GeneralLasso {
    pub fn new(w: DenseMatrix, y: DenseVector, lambda1: f64) -> Result<Self> {
        check_dim(w.rows(), y.dim())?;
        if !(lambda1 >= 0.0 && lambda1.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda1 must be >= 0, got {lambda1}")));
        }
        if w.rows() == 0 {
            return Err(Error::InvalidArgument("need at least one observation".into()));
        }
        Ok(Self { w, y, lambda1 })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn with_lambda1(&self, lambda1: f64) -> Result<Self> {
        Self::new(self.w.clone(), self.y.clone(), lambda1)
    }

    pub fn design(&self) -> &DenseMatrix {
        &self.w
    }

    pub fn response(&self) -> &DenseVector {
        &self.y
    }

    fn residual(&self, beta: &DenseVector) -> Result<DenseVector> {
        self.y.sub(&self.w.matvec(beta)?)
    }
}

impl Objective for GeneralLasso {
    fn dim(&self) -> usize {
        self.w.cols()
    }

    fn value(&self, beta: &DenseVector) -> Result<f64> {
        let r = self.residual(beta)?;
        let n = self.w.rows() as f64;
        Ok(r.iter().map(|x| x * x).sum::<f64>() / n + self.lambda1 * l1(beta))
    }

    fn subgradient(&self, beta: &DenseVector) -> Result<DenseVector> {
        let r = self.residual(beta)?;
        let n = self.w.rows() as f64;
        let fit = self.w.matvec_t(&r)?;
        Ok(fit
            .iter()
            .zip(beta.iter())
            .map(|(f, b)| -2.0 / n * f + self.lambda1 * sign0(*b))
            .collect::<Vec<_>>()
            .into())
    }
}
