//! Dense row-major vectors and matrices.
//!
//! Everything here is small and dense: the largest matrix any experiment
//! touches is 50×200 or 20×500, so plain loops over `Vec<f64>` are enough.

use std::fmt::Write as _;
use std::ops::Index;

use crate::error::{check_dim, Error, Result};

/// Any entry above this magnitude counts as divergence to infinity.
pub const DIVERGENCE_THRESHOLD: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

/// A real vector of fixed dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(data: Vec<f64>) -> Self {
        Self(data)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn filled(dim: usize, value: f64) -> Self {
        Self(vec![value; dim])
    }

    /// The k-th standard basis vector.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// True when some entry is non-finite or exceeds [`DIVERGENCE_THRESHOLD`].
    pub fn has_diverged(&self) -> bool {
        self.0
            .iter()
            .any(|x| !x.is_finite() || x.abs() > DIVERGENCE_THRESHOLD)
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::L1 => self.0.iter().map(|x| x.abs()).sum(),
            NormKind::L2 => self.0.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Linf => self.0.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    pub fn dot(&self, other: &DenseVector) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn scaled(&self, c: f64) -> DenseVector {
        Self(self.0.iter().map(|x| c * x).collect())
    }

    pub fn add(&self, other: &DenseVector) -> Result<DenseVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &DenseVector) -> Result<DenseVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// `self + c * other`
    pub fn axpy(&self, c: f64, other: &DenseVector) -> Result<DenseVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + c * b)
                .collect(),
        ))
    }

    pub fn max(&self) -> Option<f64> {
        self.0.iter().copied().reduce(f64::max)
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl From<&[f64]> for DenseVector {
    fn from(v: &[f64]) -> Self {
        Self(v.to_vec())
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Row-major `rows × cols` matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::InvalidArgument(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// No finiteness check; used for intermediate buffers that may overflow.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = *d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> DenseVector {
        (0..self.rows).map(|i| self.get(i, j)).collect::<Vec<_>>().into()
    }

    /// `M v`
    pub fn matvec(&self, v: &DenseVector) -> Result<DenseVector> {
        check_dim(self.cols, v.dim())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect::<Vec<f64>>()
            .into())
    }

    /// `Mᵀ u`
    pub fn matvec_t(&self, u: &DenseVector) -> Result<DenseVector> {
        check_dim(self.rows, u.dim())?;
        let mut out = vec![0.0; self.cols];
        for (i, ui) in u.iter().enumerate() {
            if *ui == 0.0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.row(i)) {
                *o += ui * m;
            }
        }
        Ok(out.into())
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn scaled(&self, c: f64) -> DenseMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// `Mᵀ M`
    pub fn gram(&self) -> DenseMatrix {
        let p = self.cols;
        let mut g = Self::zeros(p, p);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..p {
                for b in 0..p {
                    g.data[a * p + b] += r[a] * r[b];
                }
            }
        }
        g
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Serializes as `rows,cols` followed by one comma-separated row per
    /// line, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.rows, self.cols);
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{x:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("bad header {header:?}: {e}")))?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!("header must be rows,cols: {header:?}")));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for (i, line) in lines.enumerate() {
            let before = data.len();
            for tok in line.split(',') {
                let x = tok
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {i}: {tok:?}: {e}")))?;
                data.push(x);
            }
            if data.len() - before != cols {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {cols}",
                    data.len() - before
                )));
            }
        }
        if data.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {rows} rows, got {}",
                data.len() / cols.max(1)
            )));
        }
        Self::new(rows, cols, data)
    }
}
