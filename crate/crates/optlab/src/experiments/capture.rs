use optlab_core::optim::{run, OptimizerState, RecordMode, StepSchedule, Trajectory};
use optlab_core::oracles::{capture_check, CaptureOutcome};
use optlab_core::problems::ReluPenalized;
use optlab_core::{DenseVector, NormKind, SeededRng};

use super::{non_increasing, Context, Experiment};
use crate::config::Param;
use crate::error::{CliError, Result};
use crate::svg::AxesSpec;

pub(super) const EXPERIMENT: Experiment = Experiment {
    name: "capture-violation",
    summary: "ReLU regression whose loss decreases monotonically while the Linf norm rises past 1 and falls again",
    params: &[
        Param { key: "rows", default: "20", help: "samples in Z" },
        Param { key: "cols", default: "500", help: "parameters" },
        Param { key: "lambda1", default: "0", help: "L1 penalty" },
        Param { key: "lambda2", default: "0.01", help: "ridge penalty" },
        Param { key: "alphas", default: "0.001,0.0005,0.0002,0.0001", help: "step sizes tried per seed" },
        Param { key: "max_seeds", default: "256", help: "seeds tried, starting at --seed" },
        Param { key: "iters", default: "1000", help: "iterations per run" },
        Param { key: "radius", default: "1", help: "capture radius around the minimiser 0 (Linf)" },
        Param { key: "slack", default: "1e-12", help: "allowed loss increase per step" },
    ],
    run: body,
};

/// `Z` uniform on `[−1, 1]`, `q` uniform on `(−1, 0)` and `β₀` uniform on
/// `[−1, 1]`, drawn in that order from `seed`.
pub fn capture_instance(
    seed: u64,
    rows: usize,
    cols: usize,
    lambda1: f64,
    lambda2: f64,
) -> optlab_core::Result<(ReluPenalized, DenseVector)> {
    let mut rng = SeededRng::new(seed);
    let z = rng.uniform_matrix(rows, cols, -1.0, 1.0)?;
    let q = rng.uniform_vector(rows, -1.0, 0.0)?;
    let beta0 = rng.uniform_vector(cols, -1.0, 1.0)?;
    Ok((ReluPenalized::new(z, q, lambda1, lambda2)?, beta0))
}

#[derive(Debug, Clone)]
pub struct CaptureWitness {
    pub seed: u64,
    pub alpha: f64,
    pub escape_iter: usize,
    pub trajectory: Trajectory,
}

fn body(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let (rows, cols) = (p.usize("rows")?, p.usize("cols")?);
    let (l1, l2) = (p.f64("lambda1")?, p.f64("lambda2")?);
    let alphas = p.f64_list("alphas")?;
    let (max_seeds, iters) = (p.usize("max_seeds")?, p.usize("iters")?);
    let (radius, slack) = (p.f64("radius")?, p.f64("slack")?);
    if max_seeds == 0 || iters == 0 {
        return Err(CliError::Usage("max_seeds and iters must be positive".into()));
    }

    let mut witness = None;
    let mut tried = 0usize;
    let mut monotone_runs = 0usize;
    let mut best_linf = 0.0f64;
    'search: for seed in ctx.seed..ctx.seed.saturating_add(max_seeds as u64) {
        let (problem, beta0) = capture_instance(seed, rows, cols, l1, l2)?;
        for &alpha in &alphas {
            tried += 1;
            let traj = run_once(&problem, &beta0, alpha, iters)?;
            if traj.diverged() || !non_increasing(&traj.losses(), slack) {
                continue;
            }
            monotone_runs += 1;
            let norms = traj.norm_series(NormKind::Linf);
            let peak = norms.iter().copied().fold(0.0, f64::max);
            best_linf = best_linf.max(peak);
            if !rises_then_falls(&norms) {
                continue;
            }
            if let CaptureOutcome::Violated { iter } = capture_check(&traj, &DenseVector::zeros(cols), radius)? {
                witness = Some(CaptureWitness { seed, alpha, escape_iter: iter, trajectory: traj });
                break 'search;
            }
        }
    }

    ctx.note("runs_tried", tried);
    match witness {
        Some(w) => {
            ctx.note("witness_seed", w.seed);
            ctx.note("witness_alpha", w.alpha);
            ctx.note("escape_iter", w.escape_iter);
            let initial = w.trajectory.records()[0].norms.linf;
            let peak = w.trajectory.norm_series(NormKind::Linf).into_iter().fold(0.0, f64::max);
            ctx.note("initial_linf", initial);
            ctx.note("peak_linf", peak);
            ctx.note("final_linf", w.trajectory.last().map_or(f64::NAN, |r| r.norms.linf));
            ctx.trajectory(
                "capture-violation_witness",
                &w.trajectory,
                AxesSpec::new("iter", &["linf"]).title("Linf norm of the witness run"),
            )?;
            ctx.plot(
                "capture-violation_loss.svg",
                &w.trajectory.to_csv(),
                &AxesSpec::new("iter", &["loss"]).log_y().title("loss of the witness run"),
            )?;
            ctx.check(
                "witness-found",
                true,
                format!("seed {} alpha {} leaves radius {radius} at iter {}", w.seed, w.alpha, w.escape_iter),
            );
            let upto = &w.trajectory.losses()[..=w.escape_iter];
            ctx.check("loss-non-increasing", non_increasing(upto, slack) && non_increasing(&w.trajectory.losses(), slack), "");
        }
        None => {
            ctx.check(
                "witness-found",
                false,
                format!(
                    "no witness in {tried} runs; {monotone_runs} had monotone loss, largest Linf among them {best_linf}"
                ),
            );
        }
    }
    Ok(())
}

/// The series peaks strictly above both of its endpoints.
pub fn rises_then_falls(xs: &[f64]) -> bool {
    match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) => xs.iter().any(|&x| x > a && x > b),
        _ => false,
    }
}

pub fn run_once(problem: &ReluPenalized, beta0: &DenseVector, alpha: f64, iters: usize) -> Result<Trajectory> {
    Ok(run(problem, OptimizerState::Vanilla, StepSchedule::constant(alpha)?, beta0, iters, RecordMode::NormsOnly)?)
}
