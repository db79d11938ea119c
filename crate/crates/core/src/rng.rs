//! Seeded random streams.
//!
//! The generator is ChaCha8 keyed by the 64-bit seed (expanded with
//! `SeedableRng::seed_from_u64`). Independent sub-streams come from
//! [`SeededRng::fork`], which reuses the key with a different ChaCha
//! stream id. Uniform reals take the top 53 bits of one `u64` and map them
//! to the midpoint grid `(k + 0.5) / 2^53`, so draws never land exactly on
//! either end of the interval. Changing any of this changes every golden
//! file in the repo.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// Deterministic random stream. Not `Sync`; give each run its own.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// An independent stream derived from the same seed.
    pub fn fork(&self, stream: u64) -> SeededRng {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(stream.wrapping_add(1));
        Self { seed: self.seed, inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1).
    pub fn unit_open(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        check_bounds(lo, hi)?;
        Ok(lo + (hi - lo) * self.unit_open())
    }

    /// Standard normal draw (Box–Muller, cosine branch only).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.unit_open();
        let u2 = self.unit_open();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn uniform_vector(&mut self, dim: usize, lo: f64, hi: f64) -> Result<DenseVector> {
        check_bounds(lo, hi)?;
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        Ok((0..dim)
            .map(|_| lo + (hi - lo) * self.unit_open())
            .collect::<Vec<_>>()
            .into())
    }

    /// Row-major fill, one draw per entry.
    pub fn uniform_matrix(&mut self, rows: usize, cols: usize, lo: f64, hi: f64) -> Result<DenseMatrix> {
        check_bounds(lo, hi)?;
        let data = (0..rows * cols)
            .map(|_| lo + (hi - lo) * self.unit_open())
            .collect();
        DenseMatrix::new(rows, cols, data)
    }
}

fn check_bounds(lo: f64, hi: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite bounds [{lo}, {hi}]")));
    }
    if lo >= hi {
        return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = SeededRng::new(42).uniform_vector(3, -1.0, 1.0).unwrap();
        let b = SeededRng::new(42).uniform_vector(3, -1.0, 1.0).unwrap();
        assert_eq!(a, b);
        let c = SeededRng::new(43).uniform_vector(3, -1.0, 1.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn draws_stay_in_range() {
        let v = SeededRng::new(7).uniform_vector(500, -1.0, 0.0).unwrap();
        assert!(v.iter().all(|x| (-1.0..=0.0).contains(x)));
    }

    #[test]
    fn empirical_mean_near_center() {
        let v = SeededRng::new(1).uniform_vector(20, -1.0, 1.0).unwrap();
        let mean = v.iter().sum::<f64>() / 20.0;
        assert!(mean.abs() < 0.25, "mean {mean}");
    }

    #[test]
    fn large_sample_moments() {
        let mut rng = SeededRng::new(11);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| rng.unit_open()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 5e-3);
        assert!((var - 1.0 / 12.0).abs() < 2e-3);
        let zs: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let zm = zs.iter().sum::<f64>() / n as f64;
        let zv = zs.iter().map(|x| (x - zm).powi(2)).sum::<f64>() / n as f64;
        assert!(zm.abs() < 1e-2 && (zv - 1.0).abs() < 2e-2);
    }

    #[test]
    fn forks_are_independent_and_reproducible() {
        let base = SeededRng::new(5);
        let mut a = base.fork(0);
        let mut b = base.fork(1);
        let mut a2 = SeededRng::new(5).fork(0);
        let xa = a.next_u64();
        assert_ne!(xa, b.next_u64());
        assert_eq!(xa, a2.next_u64());
    }

    #[test]
    fn bad_bounds_rejected() {
        let mut rng = SeededRng::new(0);
        assert!(rng.uniform_vector(3, f64::NAN, 1.0).is_err());
        assert!(rng.uniform_vector(3, 0.0, f64::INFINITY).is_err());
        assert!(rng.uniform_vector(3, 1.0, 1.0).is_err());
        assert!(rng.uniform_vector(0, 0.0, 1.0).is_err());
    }
}
