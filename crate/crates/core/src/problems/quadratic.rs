use super::Objective;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// `½βᵀAβ − bᵀβ` with symmetric positive semidefinite `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    a: DenseMatrix,
    b: DenseVector,
}

impl Quadratic {
    pub fn new(a: DenseMatrix, b: DenseVector) -> Result<Self> {
        if !a.is_symmetric(1e-12) {
            return Err(Error::InvalidArgument("A must be square and symmetric".into()));
        }
        check_dim(a.rows(), b.dim())?;
        if !is_psd(&a) {
            return Err(Error::InvalidArgument("A must be positive semidefinite".into()));
        }
        Ok(Self { a, b })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn linear_term(&self) -> &DenseVector {
        &self.b
    }
}

/// Symmetric elimination without pivoting; a negative pivot, or a zero
/// pivot with a non-zero remainder in its row, rules out semidefiniteness.
fn is_psd(a: &DenseMatrix) -> bool {
    let n = a.rows();
    let scale = a.as_slice().iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let tol = 1e-10 * scale;
    let mut m: Vec<f64> = a.as_slice().to_vec();
    for k in 0..n {
        let d = m[k * n + k];
        if d < -tol {
            return false;
        }
        if d <= tol {
            if (k + 1..n).any(|j| m[k * n + j].abs() > tol.sqrt() * scale.sqrt()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            let f = m[i * n + k] / d;
            for j in k..n {
                m[i * n + j] -= f * m[k * n + j];
            }
        }
    }
    true
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.a.rows()
    }

    fn value(&self, beta: &DenseVector) -> Result<f64> {
        let ab = self.a.matvec(beta)?;
        Ok(0.5 * beta.dot(&ab)? - self.b.dot(beta)?)
    }

    fn subgradient(&self, beta: &DenseVector) -> Result<DenseVector> {
        self.a.matvec(beta)?.sub(&self.b)
    }
}
