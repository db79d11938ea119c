//! Loss functions with value and subgradient oracles.
//!
//! At kinks every oracle picks one concrete subgradient: `sign(0) = 0` for
//! the absolute value and `relu'(0) = 0` for the rectifier. With that
//! selection a coordinate of the toy LASSO iteration that lands on 0 stays
//! there.

mod huber;
mod l1toy;
mod lasso;
mod quadratic;
mod relu;

pub use huber::HuberRegression;
pub use l1toy::L1Toy;
pub use lasso::GeneralLasso;
pub use quadratic::Quadratic;
pub use relu::ReluPenalized;

use crate::error::Result;
use crate::linalg::DenseVector;

/// A loss over `R^dim` with a subgradient selection.
pub trait Objective {
    fn dim(&self) -> usize;

    fn value(&self, beta: &DenseVector) -> Result<f64>;

    /// The gradient where it exists, otherwise a fixed element of the
    /// subdifferential.
    fn subgradient(&self, beta: &DenseVector) -> Result<DenseVector>;
}

/// The five loss families.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    L1Toy(L1Toy),
    GeneralLasso(GeneralLasso),
    ReluPenalized(ReluPenalized),
    Huber(HuberRegression),
    Quadratic(Quadratic),
}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::L1Toy(_) => "l1-toy",
            ProblemSpec::GeneralLasso(_) => "general-lasso",
            ProblemSpec::ReluPenalized(_) => "relu-penalized",
            ProblemSpec::Huber(_) => "huber",
            ProblemSpec::Quadratic(_) => "quadratic",
        }
    }

    fn inner(&self) -> &dyn Objective {
        match self {
            ProblemSpec::L1Toy(p) => p,
            ProblemSpec::GeneralLasso(p) => p,
            ProblemSpec::ReluPenalized(p) => p,
            ProblemSpec::Huber(p) => p,
            ProblemSpec::Quadratic(p) => p,
        }
    }
}

impl Objective for ProblemSpec {
    fn dim(&self) -> usize {
        self.inner().dim()
    }

    fn value(&self, beta: &DenseVector) -> Result<f64> {
        self.inner().value(beta)
    }

    fn subgradient(&self, beta: &DenseVector) -> Result<DenseVector> {
        self.inner().subgradient(beta)
    }
}

macro_rules! impl_from {
    ($($ty:ident => $arm:ident),*) => {
        $(impl From<$ty> for ProblemSpec {
            fn from(p: $ty) -> Self {
                ProblemSpec::$arm(p)
            }
        })*
    };
}

impl_from!(
    L1Toy => L1Toy,
    GeneralLasso => GeneralLasso,
    ReluPenalized => ReluPenalized,
    HuberRegression => Huber,
    Quadratic => Quadratic
);

/// Sign with `sign(0) = 0` (and `sign(-0.0) = 0`).
pub fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Step used for central differences at coordinate value `x`.
pub fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Gradient by central differences of the value oracle only.
pub fn central_difference_gradient(f: &dyn Objective, beta: &DenseVector) -> Result<DenseVector> {
    let mut out = Vec::with_capacity(beta.dim());
    let mut probe = beta.clone();
    for k in 0..beta.dim() {
        let x = beta[k];
        let h = fd_step(x);
        probe.as_mut_slice()[k] = x + h;
        let up = f.value(&probe)?;
        probe.as_mut_slice()[k] = x - h;
        let down = f.value(&probe)?;
        probe.as_mut_slice()[k] = x;
        out.push((up - down) / (2.0 * h));
    }
    Ok(out.into())
}

fn l1(beta: &DenseVector) -> f64 {
    beta.iter().map(|x| x.abs()).sum()
}
