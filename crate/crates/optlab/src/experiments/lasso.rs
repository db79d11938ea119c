use optlab_core::optim::{run, OptimizerState, RecordMode, StepSchedule, Trajectory};
use optlab_core::oracles::lasso_limit_cycle;
use optlab_core::problems::{GeneralLasso, L1Toy};
use optlab_core::{DenseVector, NormKind, SeededRng};

use super::{Context, Experiment};
use crate::config::Param;
use crate::error::{CliError, Result};
use crate::svg::AxesSpec;

pub(super) const TWO_D: Experiment = Experiment {
    name: "lasso-2d",
    summary: "two-coordinate toy LASSO: limit cycles for two penalties, before and after a step reduction",
    params: &[
        Param { key: "b0", default: "0.5053", help: "first start coordinate" },
        Param { key: "b1", default: "0.5053", help: "second start coordinate" },
        Param { key: "lambdas", default: "1,100", help: "penalties" },
        Param { key: "alpha", default: "0.01", help: "initial step" },
        Param { key: "alpha_reduced", default: "0.001", help: "step after the reduction" },
        Param { key: "phase_iters", default: "1000", help: "iterations per step size" },
    ],
    run: two_d,
};

pub(super) const GENERAL: Experiment = Experiment {
    name: "lasso-general",
    summary: "LASSO on a wide random design: the larger penalty ends with the larger L1 norm",
    params: &[
        Param { key: "rows", default: "20", help: "samples in W" },
        Param { key: "cols", default: "500", help: "parameters" },
        Param { key: "alpha", default: "0.01", help: "constant step" },
        Param { key: "iters", default: "20000", help: "iterations per run" },
        Param { key: "lambdas", default: "0.01,10", help: "penalties compared" },
    ],
    run: general,
};

/// Expected tail pairs of the two-coordinate example, `(λ₁, α) → {high, low}`.
const WORKED: [(f64, f64, f64, f64); 4] = [
    (1.0, 0.01, 0.0053, -0.0047),
    (100.0, 0.01, 0.5053, -0.4947),
    (1.0, 0.001, 0.0003, -0.0007),
    (100.0, 0.001, 0.0053, -0.0947),
];

fn pair_matches(a: &DenseVector, b: &DenseVector, tol: f64) -> bool {
    a.sub(b).map(|d| d.norm(NormKind::Linf) <= tol).unwrap_or(false)
}

/// Whether iterates `upto − 1` and `upto` are `{high, low}` in either order.
fn tail_is_pair(traj: &Trajectory, upto: usize, high: &DenseVector, low: &DenseVector, tol: f64) -> bool {
    let recs = traj.records();
    if upto == 0 || upto >= recs.len() {
        return false;
    }
    let (a, b) = (recs[upto - 1].iterate.as_ref(), recs[upto].iterate.as_ref());
    match (a, b) {
        (Some(a), Some(b)) => {
            (pair_matches(a, high, tol) && pair_matches(b, low, tol))
                || (pair_matches(a, low, tol) && pair_matches(b, high, tol))
        }
        _ => false,
    }
}

fn two_d(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let beta0 = DenseVector::new(vec![p.f64("b0")?, p.f64("b1")?]);
    let lambdas = p.f64_list("lambdas")?;
    let (alpha, reduced) = (p.f64("alpha")?, p.f64("alpha_reduced")?);
    let phase = p.usize("phase_iters")?;
    if phase < 2 || reduced >= alpha {
        return Err(CliError::Usage("need phase_iters >= 2 and alpha_reduced < alpha".into()));
    }
    let schedule = StepSchedule::reducing(alpha, reduced / alpha, phase)?;
    let is_worked_example = beta0.iter().all(|&x| x == 0.5053) && alpha == 0.01 && reduced == 0.001;
    for lambda1 in lambdas {
        let traj = run(&L1Toy::new(lambda1, 2)?, OptimizerState::Vanilla, schedule, &beta0, 2 * phase, RecordMode::Full)?;
        let stem = format!("lasso-2d_lambda{lambda1}");
        ctx.trajectory(&stem, &traj, AxesSpec::new("iter", &["b0", "b1"]).title(&format!("toy LASSO, lambda1 = {lambda1}")))?;

        // the second oracle starts from wherever the first phase leaves the iterate
        let first = lasso_limit_cycle(&beta0, alpha, lambda1)?;
        let handoff = traj.records()[phase].iterate.clone().expect("full record");
        let second = lasso_limit_cycle(&handoff, schedule.rate(phase), lambda1)?;
        for (cycle, step, end) in [(&first, alpha, phase), (&second, reduced, 2 * phase)] {
            let ok = cycle.settle_iter + 1 < phase && tail_is_pair(&traj, end, &cycle.high, &cycle.low, 1e-12);
            ctx.check(
                &format!("oracle-cycle-lambda{lambda1}-alpha{step}"),
                ok,
                format!("high {:?} low {:?} settles after {}", cycle.high.as_slice(), cycle.low.as_slice(), cycle.settle_iter),
            );
            ctx.note(&format!("band_width_lambda{lambda1}_alpha{step}"), cycle.band_width());
            let worked = WORKED.iter().find(|w| w.0 == lambda1 && w.1 == step);
            if let (Some(&(_, _, h, l)), true) = (worked, is_worked_example) {
                let ok = pair_matches(&cycle.high, &DenseVector::filled(2, h), 1e-12)
                    && pair_matches(&cycle.low, &DenseVector::filled(2, l), 1e-12);
                ctx.check(&format!("worked-example-lambda{lambda1}-alpha{step}"), ok, format!("expected {{{h}, {l}}}"));
            }
        }
    }
    Ok(())
}

fn general(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let (rows, cols) = (p.usize("rows")?, p.usize("cols")?);
    let alpha = p.f64("alpha")?;
    let iters = p.usize("iters")?;
    let mut lambdas = p.f64_list("lambdas")?;
    lambdas.sort_by(f64::total_cmp);

    let mut rng = SeededRng::new(ctx.seed);
    let w = rng.uniform_matrix(rows, cols, -1.0, 1.0)?;
    let y = rng.uniform_vector(rows, -1.0, 1.0)?;
    let beta0 = rng.uniform_vector(cols, -1.0, 1.0)?;
    let base = GeneralLasso::new(w, y, lambdas[0])?;

    let mut finals = Vec::new();
    for &lambda1 in &lambdas {
        let problem = base.with_lambda1(lambda1)?;
        let traj = run(&problem, OptimizerState::Vanilla, StepSchedule::constant(alpha)?, &beta0, iters, RecordMode::NormsOnly)?;
        ctx.trajectory(
            &format!("lasso-general_lambda{lambda1}"),
            &traj,
            AxesSpec::new("iter", &["l1"]).log_y().title(&format!("L1 norm, lambda1 = {lambda1}")),
        )?;
        let last = traj.last().expect("non-empty");
        ctx.note(&format!("final_l1_lambda{lambda1}"), last.norms.l1);
        ctx.check(&format!("finite-lambda{lambda1}"), !traj.diverged() && last.loss.is_finite(), "");
        finals.push((lambda1, last.norms.l1));
    }
    for w in finals.windows(2) {
        let ((la, na), (lb, nb)) = (w[0], w[1]);
        ctx.check(&format!("l1-grows-lambda{la}-to-{lb}"), nb > na, format!("{na} vs {nb}"));
    }
    if let (Some(first), Some(last)) = (finals.first(), finals.last()) {
        ctx.note("l1_ratio_largest_to_smallest_lambda", last.1 / first.1);
    }
    ctx.note("lambda_alternative", "rerun with --set lambdas=0.1,10 for the other penalty pair");
    Ok(())
}
