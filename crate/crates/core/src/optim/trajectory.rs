use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{DenseVector, NormKind};

/// Full iterates are kept only up to this dimension.
pub const FULL_RECORD_MAX_DIM: usize = 1000;

pub const TRAJECTORY_HEADER: &str = "iter,alpha,loss,l1,l2,linf";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordMode {
    Full,
    NormsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl Norms {
    pub fn of(v: &DenseVector) -> Self {
        Self {
            l1: v.norm(NormKind::L1),
            l2: v.norm(NormKind::L2),
            linf: v.norm(NormKind::Linf),
        }
    }

    pub fn get(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::L1 => self.l1,
            NormKind::L2 => self.l2,
            NormKind::Linf => self.linf,
        }
    }
}

/// One row of a trajectory. `alpha` is the step size applied at this
/// iterate to produce the next one.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub iter: usize,
    pub alpha: f64,
    pub loss: f64,
    pub norms: Norms,
    pub iterate: Option<DenseVector>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    records: Vec<Record>,
    diverged: bool,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn push(&mut self, record: Record) {
        debug_assert!(self.records.last().is_none_or(|r| r.iter < record.iter));
        self.records.push(record);
    }

    pub(crate) fn mark_diverged(&mut self) {
        self.diverged = true;
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn diverged(&self) -> bool {
        self.diverged
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    /// The final `n` records (fewer if the run is shorter).
    pub fn tail(&self, n: usize) -> &[Record] {
        &self.records[self.records.len().saturating_sub(n)..]
    }

    pub fn losses(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.loss).collect()
    }

    pub fn norm_series(&self, kind: NormKind) -> Vec<f64> {
        self.records.iter().map(|r| r.norms.get(kind)).collect()
    }

    pub fn has_iterates(&self) -> bool {
        self.records.iter().all(|r| r.iterate.is_some())
    }

    /// Whether `β_t == β_{t+2}` (within `tol`, per coordinate) across the
    /// last `window` records. Needs full iterates.
    pub fn is_period_two(&self, window: usize, tol: f64) -> bool {
        let tail = self.tail(window);
        if tail.len() < 3 || !self.has_iterates() {
            return false;
        }
        tail.windows(3).all(|w| {
            let (a, c) = (w[0].iterate.as_ref().unwrap(), w[2].iterate.as_ref().unwrap());
            a.iter().zip(c.iter()).all(|(x, y)| (x - y).abs() <= tol)
        })
    }

    /// CSV with header `iter,alpha,loss,l1,l2,linf`, followed by
    /// `b0,b1,...` columns when every record carries its iterate.
    pub fn to_csv(&self) -> String {
        let full = !self.records.is_empty() && self.has_iterates();
        let dim = if full {
            self.records[0].iterate.as_ref().map_or(0, DenseVector::dim)
        } else {
            0
        };
        let mut out = String::from(TRAJECTORY_HEADER);
        for k in 0..dim {
            let _ = write!(out, ",b{k}");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(
                out,
                "{},{},{},{},{},{}",
                r.iter, r.alpha, r.loss, r.norms.l1, r.norms.l2, r.norms.linf
            );
            if let (true, Some(it)) = (full, &r.iterate) {
                for x in it.iter() {
                    let _ = write!(out, ",{x}");
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`Trajectory::to_csv`]. The diverged
    /// flag is not part of the file and comes back `false`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty trajectory file".into()))?;
        if !header.starts_with(TRAJECTORY_HEADER) {
            return Err(Error::Parse(format!("unexpected header {header:?}")));
        }
        let ncols = header.split(',').count();
        let mut traj = Trajectory::new();
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != ncols {
                return Err(Error::Parse(format!(
                    "row {lineno}: {} fields, expected {ncols}",
                    fields.len()
                )));
            }
            let num = |i: usize| -> Result<f64> {
                fields[i]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {lineno} col {i}: {e}")))
            };
            let iter = fields[0]
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("row {lineno}: bad iteration: {e}")))?;
            if traj.records.last().is_some_and(|r: &Record| r.iter >= iter) {
                return Err(Error::Parse(format!("row {lineno}: iterations must increase")));
            }
            let iterate = if ncols > 6 {
                Some((6..ncols).map(num).collect::<Result<Vec<_>>>()?.into())
            } else {
                None
            };
            traj.records.push(Record {
                iter,
                alpha: num(1)?,
                loss: num(2)?,
                norms: Norms { l1: num(3)?, l2: num(4)?, linf: num(5)? },
                iterate,
            });
        }
        if traj.records.is_empty() {
            return Err(Error::Parse("trajectory has no rows".into()));
        }
        Ok(traj)
    }
}
