use super::{l1, sign0, Objective};
use crate::error::{check_dim, Error, Result};
use crate::linalg::DenseVector;

/// `λ₁‖β‖₁` on `R^P`: the smallest LASSO problem.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Toy {
    lambda1: f64,
    dim: usize,
}

impl L1Toy {
    pub fn new(lambda1: f64, dim: usize) -> Result<Self> {
        if !(lambda1 > 0.0 && lambda1.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda1 must be > 0, got {lambda1}")));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        Ok(Self { lambda1, dim })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }
}

impl Objective for L1Toy {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, beta: &DenseVector) -> Result<f64> {
        check_dim(self.dim, beta.dim())?;
        Ok(self.lambda1 * l1(beta))
    }

    fn subgradient(&self, beta: &DenseVector) -> Result<DenseVector> {
        check_dim(self.dim, beta.dim())?;
        Ok(beta
            .iter()
            .map(|&b| self.lambda1 * sign0(b))
            .collect::<Vec<_>>()
            .into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from(x)
    }

    #[test]
    fn value_examples() {
        let p = L1Toy::new(1.0, 2).unwrap();
        assert!((p.value(&v(&[0.5053, 0.5053])).unwrap() - 1.0106).abs() < 1e-15);
        assert_eq!(p.value(&DenseVector::zeros(2)).unwrap(), 0.0);
        let p = L1Toy::new(0.5, 3).unwrap();
        assert_eq!(p.value(&v(&[1.0, -2.0, 3.0])).unwrap(), 3.0);
    }

    #[test]
    fn subgradient_examples() {
        let p = L1Toy::new(1.0, 2).unwrap();
        assert_eq!(p.subgradient(&v(&[0.5, -0.3])).unwrap(), v(&[1.0, -1.0]));
        let p = L1Toy::new(3.0, 2).unwrap();
        assert_eq!(p.subgradient(&v(&[0.0, 2.0])).unwrap(), v(&[0.0, 3.0]));
        let p = L1Toy::new(2.0, 1).unwrap();
        assert_eq!(p.subgradient(&v(&[-1e-12])).unwrap(), v(&[-2.0]));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(L1Toy::new(0.0, 2).is_err());
        assert!(L1Toy::new(-1.0, 2).is_err());
        assert!(L1Toy::new(f64::NAN, 2).is_err());
        assert!(L1Toy::new(1.0, 0).is_err());
        assert!(L1Toy::new(1.0, 2).unwrap().value(&DenseVector::zeros(3)).is_err());
    }
}
