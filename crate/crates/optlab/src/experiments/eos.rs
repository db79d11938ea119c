use std::fmt::Write as _;

use optlab_core::optim::{run, OptimizerState, RecordMode, StepSchedule};
use optlab_core::oracles::{analytic_lipschitz, classical_bound, dominant_curvature, unstable_bound, BoundReport, BOUND_HEADER};
use optlab_core::problems::{HuberRegression, ProblemSpec, Quadratic};
use optlab_core::{DenseVector, SeededRng};

use super::{non_increasing, Context, Experiment};
use crate::config::Param;
use crate::error::{CliError, Result};
use crate::svg::AxesSpec;

pub(super) const HUBER: Experiment = Experiment {
    name: "huber-eos",
    summary: "Huber regression at large constant steps: oscillating but bounded loss, tail minimum below alpha L^2",
    params: &[
        Param { key: "rows", default: "50", help: "samples in Z" },
        Param { key: "cols", default: "200", help: "parameters" },
        Param { key: "delta", default: "1", help: "Huber threshold" },
        Param { key: "alphas", default: "0.1,10", help: "constant steps" },
        Param { key: "iters", default: "10000", help: "iterations per run" },
        Param { key: "tail", default: "1000", help: "final iterations searched for the minimum loss" },
    ],
    run: huber,
};

pub(super) const QUADRATIC: Experiment = Experiment {
    name: "quadratic-divergence",
    summary: "gradient descent on a quadratic just below and just above 2 over the top curvature",
    params: &[
        Param { key: "p", default: "10", help: "dimension; A = G^T G with G p x p uniform" },
        Param { key: "iters", default: "1000", help: "iteration budget for both runs" },
        Param { key: "below", default: "1.99", help: "alpha times curvature for the stable run" },
        Param { key: "above", default: "2.01", help: "alpha times curvature for the unstable run" },
        Param { key: "power_iters", default: "100", help: "power iteration steps for the curvature" },
        Param { key: "diagnostic_iters", default: "100000", help: "budget used to locate divergence after a miss" },
    ],
    run: quadratic,
};

/// `Z` and `y` uniform on `[−1, 1]`, drawn in that order.
pub fn huber_instance(seed: u64, rows: usize, cols: usize, delta: f64) -> optlab_core::Result<HuberRegression> {
    let mut rng = SeededRng::new(seed);
    let z = rng.uniform_matrix(rows, cols, -1.0, 1.0)?;
    let y = rng.uniform_vector(rows, -1.0, 1.0)?;
    HuberRegression::new(z, y, delta)
}

/// `A = GᵀG` with `G` uniform on `[−1, 1]`, `b = 0`, and a uniform start.
pub fn quadratic_instance(seed: u64, p: usize) -> optlab_core::Result<(Quadratic, DenseVector)> {
    let mut rng = SeededRng::new(seed);
    let g = rng.uniform_matrix(p, p, -1.0, 1.0)?;
    let beta0 = rng.uniform_vector(p, -1.0, 1.0)?;
    Ok((Quadratic::new(g.gram(), DenseVector::zeros(p))?, beta0))
}

fn huber(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let (rows, cols) = (p.usize("rows")?, p.usize("cols")?);
    let delta = p.f64("delta")?;
    let alphas = p.f64_list("alphas")?;
    let (iters, tail) = (p.usize("iters")?, p.usize("tail")?);
    if tail == 0 || tail > iters {
        return Err(CliError::Usage("need 0 < tail <= iters".into()));
    }
    let problem = huber_instance(ctx.seed, rows, cols, delta)?;
    let spec = ProblemSpec::Huber(problem.clone());
    let l = analytic_lipschitz(&spec).expect("Huber has a closed-form constant");
    ctx.note("lipschitz", l);

    let mut bounds = format!("alpha,{BOUND_HEADER}\n");
    for alpha in alphas {
        let traj = run(&spec, OptimizerState::Vanilla, StepSchedule::constant(alpha)?, &DenseVector::zeros(cols), iters, RecordMode::NormsOnly)?;
        ctx.trajectory(
            &format!("huber-eos_alpha{alpha}"),
            &traj,
            AxesSpec::new("iter", &["loss"]).log_y().title(&format!("Huber loss, alpha = {alpha}")),
        )?;
        let losses = traj.losses();
        let finite = losses.iter().all(|x| x.is_finite());
        ctx.check(&format!("bounded-alpha{alpha}"), !traj.diverged() && finite && losses.len() == iters + 1, format!("{} records", losses.len()));
        let tail_min = traj.tail(tail).iter().map(|r| r.loss).fold(f64::INFINITY, f64::min);
        let report = BoundReport::at_most(unstable_bound(l, alpha), tail_min);
        let _ = writeln!(bounds, "{alpha},{}", report.csv_row());
        ctx.note(&format!("tail_min_alpha{alpha}"), tail_min);
        ctx.note(&format!("classical_bound_alpha{alpha}"), classical_bound(l, alpha));
        ctx.note(
            &format!("classical_bound_holds_alpha{alpha}"),
            tail_min <= classical_bound(l, alpha),
        );
        ctx.check(&format!("tail-min-below-bound-alpha{alpha}"), report.satisfied, format!("{tail_min} <= {}", report.bound));
    }
    ctx.write("huber-eos_bounds.csv", &bounds)
}

fn quadratic(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let dim = p.usize("p")?;
    let iters = p.usize("iters")?;
    let (below, above) = (p.f64("below")?, p.f64("above")?);
    let power_iters = p.usize("power_iters")?;
    let diagnostic = p.usize("diagnostic_iters")?;
    if !(below < 2.0 && above > 2.0) {
        return Err(CliError::Usage("need below < 2 < above".into()));
    }
    let (problem, beta0) = quadratic_instance(ctx.seed, dim)?;
    let eta = dominant_curvature(&problem, &beta0, power_iters)?;
    ctx.note("curvature", eta);

    let stable = run(&problem, OptimizerState::Vanilla, StepSchedule::constant(below / eta)?, &beta0, iters, RecordMode::NormsOnly)?;
    ctx.trajectory("quadratic-divergence_below", &stable, AxesSpec::new("iter", &["loss"]).log_y().title("alpha just below 2/eta"))?;
    let monotone = !stable.diverged() && non_increasing(&stable.losses(), 0.0);
    ctx.check("below-is-monotone", monotone, format!("alpha = {below}/eta"));

    let unstable = run(&problem, OptimizerState::Vanilla, StepSchedule::constant(above / eta)?, &beta0, iters, RecordMode::NormsOnly)?;
    ctx.trajectory("quadratic-divergence_above", &unstable, AxesSpec::new("iter", &["loss"]).log_y().title("alpha just above 2/eta"))?;
    let flagged = unstable.diverged();
    let mut detail = format!("alpha = {above}/eta, budget {iters}");
    if flagged {
        let at = unstable.last().map_or(0, |r| r.iter);
        ctx.note("divergence_iter", at);
        let _ = write!(detail, ", flagged at {at}");
    } else {
        let growth = unstable.last().map_or(f64::NAN, |r| r.norms.linf / unstable.records()[0].norms.linf);
        ctx.note("linf_growth_within_budget", growth);
        let longer = run(&problem, OptimizerState::Vanilla, StepSchedule::constant(above / eta)?, &beta0, diagnostic, RecordMode::NormsOnly)?;
        match (longer.diverged(), longer.last()) {
            (true, Some(r)) => {
                ctx.note("divergence_iter", r.iter);
                let _ = write!(detail, ", not flagged; Linf grew by {growth:e}, flag set at iteration {}", r.iter);
            }
            _ => {
                let _ = write!(detail, ", not flagged within {diagnostic} either");
            }
        }
    }
    ctx.check("above-diverges", flagged, detail);
    Ok(())
}
