use crate::error::{Error, Result};
use crate::linalg::{DenseVector, NormKind};
use crate::problems::Objective;
use crate::rng::SeededRng;

const START_SEED: u64 = 0x00c0_ffee;
const REL_TOL: f64 = 1e-10;

/// Hessian-vector product by central differences of the gradient oracle,
/// with `h = 1e-5 (1 + ‖β‖∞)`.
pub fn hessian_vector_product(problem: &dyn Objective, beta: &DenseVector, v: &DenseVector) -> Result<DenseVector> {
    let h = 1e-5 * (1.0 + beta.norm(NormKind::Linf));
    let up = problem.subgradient(&beta.axpy(h, v)?)?;
    let down = problem.subgradient(&beta.axpy(-h, v)?)?;
    Ok(up.sub(&down)?.scaled(0.5 / h))
}

/// Largest Hessian eigenvalue at `beta` by power iteration on
/// finite-difference Hessian-vector products.
///
/// Stops after `iters` products or once the Rayleigh quotient moves by
/// less than `1e-10` relative. Meaningful for twice-differentiable losses
/// such as quadratics, and for Huber away from the transition.
pub fn dominant_curvature(problem: &dyn Objective, beta: &DenseVector, iters: usize) -> Result<f64> {
    if iters < 10 {
        return Err(Error::InvalidArgument(format!("need at least 10 iterations, got {iters}")));
    }
    let mut v = SeededRng::new(START_SEED).uniform_vector(beta.dim(), 0.5, 1.5)?;
    v = v.scaled(1.0 / v.norm(NormKind::L2));
    let mut estimate = f64::NAN;
    for _ in 0..iters {
        let w = hessian_vector_product(problem, beta, &v)?;
        if !w.is_finite() {
            return Err(Error::NumericalFailure("non-finite Hessian-vector product".into()));
        }
        let rayleigh = v.dot(&w)?;
        let norm = w.norm(NormKind::L2);
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w.scaled(1.0 / norm);
        let converged = (rayleigh - estimate).abs() <= REL_TOL * rayleigh.abs();
        estimate = rayleigh;
        if converged {
            break;
        }
    }
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::problems::{HuberRegression, Quadratic};

    #[test]
    fn diagonal_spectrum() {
        let q = Quadratic::new(DenseMatrix::diagonal(&[1.0, 5.0]), DenseVector::zeros(2)).unwrap();
        let eta = dominant_curvature(&q, &DenseVector::new(vec![0.3, -2.0]), 100).unwrap();
        assert!((eta - 5.0).abs() < 1e-6, "{eta}");
    }

    #[test]
    fn identity_spectrum() {
        let q = Quadratic::new(DenseMatrix::identity(4), DenseVector::zeros(4)).unwrap();
        let eta = dominant_curvature(&q, &DenseVector::zeros(4), 100).unwrap();
        assert!((eta - 1.0).abs() < 1e-8, "{eta}");
    }

    #[test]
    fn flat_region_has_zero_curvature() {
        // every residual is far outside the quadratic zone
        let z = DenseMatrix::identity(2);
        let h = HuberRegression::new(z, DenseVector::new(vec![50.0, -50.0]), 1.0).unwrap();
        assert_eq!(dominant_curvature(&h, &DenseVector::zeros(2), 20).unwrap(), 0.0);
    }

    #[test]
    fn too_few_iterations_rejected() {
        let q = Quadratic::new(DenseMatrix::identity(1), DenseVector::zeros(1)).unwrap();
        assert!(dominant_curvature(&q, &DenseVector::zeros(1), 9).is_err());
    }
}
