use std::fmt::Write as _;

use optlab_core::optim::{OptimizerState, RecordMode, Runner, StepSchedule};
use optlab_core::oracles::{lasso_limit_cycle, prunable_fraction};
use optlab_core::problems::{GeneralLasso, L1Toy};
use optlab_core::SeededRng;

use super::{Context, Experiment};
use crate::config::Param;
use crate::error::{CliError, Result};
use crate::svg::AxesSpec;

pub(super) const EXPERIMENT: Experiment = Experiment {
    name: "prune-count",
    summary: "fraction of near-zero weights left by constant-step descent as lambda1 varies",
    params: &[
        Param { key: "lambdas", default: "0.001,0.01,0.1,1,10,100", help: "penalties swept" },
        Param { key: "alpha", default: "0.01", help: "constant step" },
        Param { key: "threshold", default: "1e-5", help: "magnitude counted as prunable" },
        Param { key: "toy_dim", default: "100", help: "dimension of the toy problem" },
        Param { key: "rows", default: "20", help: "samples of the random LASSO" },
        Param { key: "cols", default: "500", help: "parameters of the random LASSO" },
        Param { key: "iters", default: "20000", help: "iterations of the random LASSO runs" },
    ],
    run: body,
};

fn monotone(xs: &[f64]) -> &'static str {
    if xs.windows(2).all(|w| w[1] >= w[0]) {
        "non-decreasing"
    } else if xs.windows(2).all(|w| w[1] <= w[0]) {
        "non-increasing"
    } else {
        "non-monotone"
    }
}

fn body(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let mut lambdas = p.f64_list("lambdas")?;
    lambdas.sort_by(f64::total_cmp);
    let alpha = p.f64("alpha")?;
    let threshold = p.f64("threshold")?;
    let toy_dim = p.usize("toy_dim")?;
    let (rows, cols, iters) = (p.usize("rows")?, p.usize("cols")?, p.usize("iters")?);
    if lambdas.is_empty() || threshold < 0.0 {
        return Err(CliError::Usage("need at least one lambda and a non-negative threshold".into()));
    }

    let rng = SeededRng::new(ctx.seed);
    let toy_start = rng.fork(1).uniform_vector(toy_dim, -1.0, 1.0)?;
    let mut lasso_rng = rng.fork(2);
    let w = lasso_rng.uniform_matrix(rows, cols, -1.0, 1.0)?;
    let y = lasso_rng.uniform_vector(rows, -1.0, 1.0)?;
    let lasso_start = lasso_rng.uniform_vector(cols, -1.0, 1.0)?;
    let base = GeneralLasso::new(w, y, lambdas[0])?;

    let mut csv = String::from("lambda1,toy_iters,toy_fraction,toy_predicted,lasso_fraction\n");
    let (mut toy_fracs, mut lasso_fracs) = (Vec::new(), Vec::new());
    for &lambda1 in &lambdas {
        // run the toy until every coordinate has settled on its cycle
        let cycle = lasso_limit_cycle(&toy_start, alpha, lambda1)?;
        let toy_iters = cycle.settle_iter + 2;
        let predicted = cycle.predict(toy_iters).expect("past the settle point");
        let mut last = toy_start.clone();
        Runner::new(OptimizerState::Vanilla, StepSchedule::constant(alpha)?, toy_iters)
            .record(RecordMode::NormsOnly)
            .run_observed(&L1Toy::new(lambda1, toy_dim)?, &toy_start, |_, b| last = b.clone())?;
        let (tf, pf) = (prunable_fraction(&last, threshold), prunable_fraction(&predicted, threshold));
        ctx.check(&format!("toy-matches-oracle-lambda{lambda1}"), tf == pf && last == predicted, format!("simulated {tf}, oracle {pf}"));

        let mut end = lasso_start.clone();
        let lasso = Runner::new(OptimizerState::Vanilla, StepSchedule::constant(alpha)?, iters)
            .record(RecordMode::NormsOnly)
            .run_observed(&base.with_lambda1(lambda1)?, &lasso_start, |_, b| end = b.clone())?;
        let lf = if lasso.diverged() { f64::NAN } else { prunable_fraction(&end, threshold) };
        ctx.check(&format!("lasso-finite-lambda{lambda1}"), lf.is_finite(), "");
        let _ = writeln!(csv, "{lambda1},{toy_iters},{tf},{pf},{lf}");
        toy_fracs.push(tf);
        lasso_fracs.push(lf);
    }
    ctx.note("toy_fraction_vs_lambda", monotone(&toy_fracs));
    ctx.note("lasso_fraction_vs_lambda", monotone(&lasso_fracs));
    ctx.write("prune-count.csv", &csv)?;
    ctx.plot(
        "prune-count.svg",
        &csv,
        &AxesSpec::new("lambda1", &["toy_fraction", "lasso_fraction"]).title("prunable fraction against lambda1"),
    )
}
