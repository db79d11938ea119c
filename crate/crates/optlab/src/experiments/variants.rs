use std::fmt::Write as _;

use optlab_core::optim::{run, Adam, Momentum, OptimizerState, RecordMode, RmsProp, Runner, StepSchedule};
use optlab_core::oracles::rmsprop_vt_closed_form;
use optlab_core::problems::{L1Toy, Objective};
use optlab_core::{DenseVector, SeededRng};

use super::{Context, Experiment};
use crate::config::Param;
use crate::error::{CliError, Result};
use crate::svg::AxesSpec;

pub(super) const PHASE: Experiment = Experiment {
    name: "variants-phase",
    summary: "toy LASSO tail losses of vanilla descent and RMSProp: the ordering flips across lambda1 = 1",
    params: &[
        Param { key: "p", default: "10", help: "dimension" },
        Param { key: "alpha", default: "0.1", help: "constant step" },
        Param { key: "lambdas", default: "0.001,100", help: "penalties" },
        Param { key: "iters", default: "20000", help: "iterations per run" },
        Param { key: "tail", default: "100", help: "final iterations compared" },
        Param { key: "gamma", default: "0.99", help: "RMSProp decay" },
        Param { key: "eps", default: "1e-8", help: "RMSProp jitter inside the square root" },
    ],
    run: phase,
};

pub(super) const TABLE: Experiment = Experiment {
    name: "variants-table",
    summary: "characteristic behaviour of each variant at and around zero on the toy LASSO",
    params: &[
        Param { key: "p", default: "8", help: "dimension of the penalty-agnosticism runs" },
        Param { key: "alpha", default: "0.05", help: "step of the penalty-agnosticism runs" },
        Param { key: "iters", default: "2000", help: "iterations of the penalty-agnosticism runs" },
        Param { key: "eta", default: "0.9", help: "momentum factor" },
        Param { key: "gamma", default: "0.99", help: "RMSProp decay" },
        Param { key: "eps", default: "1e-8", help: "RMSProp jitter at lambda1 = 1, scaled by lambda1^2" },
    ],
    run: table,
};

fn phase(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let dim = p.usize("p")?;
    let alpha = p.f64("alpha")?;
    let lambdas = p.f64_list("lambdas")?;
    let (iters, tail) = (p.usize("iters")?, p.usize("tail")?);
    let (gamma, eps) = (p.f64("gamma")?, p.f64("eps")?);
    if tail == 0 || tail > iters {
        return Err(CliError::Usage("need 0 < tail <= iters".into()));
    }
    let beta0 = SeededRng::new(ctx.seed).uniform_vector(dim, -1.0, 1.0)?;
    let schedule = StepSchedule::constant(alpha)?;

    let mut csv = String::from("iter,lambda1,vanilla_loss,rmsprop_loss\n");
    for lambda1 in lambdas {
        let problem = L1Toy::new(lambda1, dim)?;
        let van = run(&problem, OptimizerState::Vanilla, schedule, &beta0, iters, RecordMode::NormsOnly)?;
        let mut rms_end = beta0.clone();
        let rms = Runner::new(OptimizerState::rmsprop(gamma, eps)?, schedule, iters)
            .record(RecordMode::NormsOnly)
            .run_observed(&problem, &beta0, |_, b| rms_end = b.clone())?;
        // coordinates that collapsed onto exactly 0 in floating point
        ctx.note(&format!("rmsprop_zero_coords_lambda{lambda1}"), rms_end.iter().filter(|x| **x == 0.0).count());
        let (vl, rl) = (van.losses(), rms.losses());
        let n = vl.len().min(rl.len());
        for t in n.saturating_sub(tail)..n {
            let _ = writeln!(csv, "{t},{lambda1},{},{}", vl[t], rl[t]);
        }
        let pairs: Vec<(f64, f64)> = (n.saturating_sub(tail)..n).map(|t| (vl[t], rl[t])).collect();
        let above = pairs.iter().filter(|(v, r)| r > v).count();
        let below = pairs.iter().filter(|(v, r)| r < v).count();
        ctx.note(&format!("rmsprop_above_vanilla_lambda{lambda1}"), format!("{above}/{}", pairs.len()));
        let finished = n == iters + 1;
        if lambda1 < 1.0 {
            ctx.check(&format!("rmsprop-above-lambda{lambda1}"), finished && above == pairs.len(), format!("{above} of {} tail losses", pairs.len()));
        } else if lambda1 > 1.0 {
            ctx.check(&format!("rmsprop-below-lambda{lambda1}"), finished && below == pairs.len(), format!("{below} of {} tail losses", pairs.len()));
        }
    }
    ctx.write("variants-phase_tail.csv", &csv)?;
    // the SVG shows each penalty's rows in sequence; iter is the x axis
    ctx.plot(
        "variants-phase_tail.svg",
        &csv,
        &AxesSpec::new("iter", &["vanilla_loss", "rmsprop_loss"]).log_y().title("tail losses, vanilla vs RMSProp"),
    )?;
    Ok(())
}

fn table(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let dim = p.usize("p")?;
    let alpha = p.f64("alpha")?;
    let iters = p.usize("iters")?;
    let eta = p.f64("eta")?;
    let (gamma, eps) = (p.f64("gamma")?, p.f64("eps")?);
    let mut rows = String::from("variant,property,passed\n");

    // vanilla: a coordinate that reaches 0 stays there
    let toy = L1Toy::new(1.0, 2)?;
    let mut b = DenseVector::new(vec![0.5, 0.3]);
    let mut state = OptimizerState::Vanilla;
    let mut reached = None;
    for t in 1..=200 {
        b = state.step(&b, &toy.subgradient(&b)?, 0.25)?;
        if reached.is_none() && b[0] == 0.0 {
            reached = Some(t);
        }
        if reached.is_some() && b[0] != 0.0 {
            reached = None;
            break;
        }
    }
    let absorbs = reached.is_some();
    ctx.check("vanilla-zero-absorption", absorbs, format!("0.5 with step 0.25 reaches 0 at {reached:?} and stays"));
    let _ = writeln!(rows, "vanilla,zero-absorption,{absorbs}");

    // momentum: previous 0.5, current 0, zero subgradient
    let start = DenseVector::new(vec![0.0]);
    let mut m = Momentum::with_previous(eta, DenseVector::new(vec![0.5]))?;
    let next = m.step(&start, &L1Toy::new(1.0, 1)?.subgradient(&start)?, 0.01)?;
    let expected = -eta * 0.5;
    let escapes = next[0] == expected && next[0] != 0.0;
    ctx.check("momentum-zero-escape", escapes, format!("next {} expected {expected}", next[0]));
    let _ = writeln!(rows, "momentum,zero-escape,{escapes}");

    // RMSProp: accumulator closed form and penalty-agnostic iterates
    let mut acc_ok = true;
    for lambda1 in [0.001, 1.0, 100.0] {
        let mut r = RmsProp::new(gamma, eps)?;
        let mut x = DenseVector::new(vec![0.7]);
        let g = DenseVector::new(vec![lambda1]);
        for t in 1..=1000 {
            x = r.step(&x, &g, 1e-6)?;
            let want = rmsprop_vt_closed_form(t, gamma, lambda1);
            acc_ok &= ((r.accumulators()[0] - want) / want).abs() <= 1e-12;
        }
    }
    ctx.check("rmsprop-accumulator-closed-form", acc_ok, "constant subgradient, 1000 steps, 1e-12 relative");
    let _ = writeln!(rows, "rmsprop,accumulator-closed-form,{acc_ok}");

    let beta0 = SeededRng::new(ctx.seed).uniform_vector(dim, -1.0, 1.0)?;
    let path = |lambda1: f64| -> Result<Vec<DenseVector>> {
        let mut out = Vec::new();
        Runner::new(OptimizerState::rmsprop(gamma, eps * lambda1 * lambda1)?, StepSchedule::constant(alpha)?, iters)
            .record(RecordMode::NormsOnly)
            .run_observed(&L1Toy::new(lambda1, dim)?, &beta0, |_, b| out.push(b.clone()))?;
        Ok(out)
    };
    let (small, large) = (path(0.001)?, path(100.0)?);
    let mut alive = vec![true; dim];
    let mut worst = 0.0f64;
    for (t, (a, b)) in small.iter().zip(&large).enumerate() {
        for k in 0..dim {
            // once both sit within 1e-9 of 0 the sign is decided by rounding
            alive[k] &= a[k].abs() > 1e-9 && b[k].abs() > 1e-9;
            if t >= 10 && alive[k] {
                worst = worst.max((a[k] - b[k]).abs());
            }
        }
    }
    let agnostic = small.len() == large.len() && worst < 1e-6;
    ctx.note("rmsprop_max_deviation", worst);
    ctx.check("rmsprop-penalty-agnostic", agnostic, format!("lambda1 0.001 vs 100, max deviation {worst:e}"));
    let _ = writeln!(rows, "rmsprop,penalty-agnostic,{agnostic}");

    // Adam: the first update moves each coordinate by about alpha
    let mut adam = Adam::default();
    let b0 = DenseVector::new(vec![0.4, -0.9, 0.2]);
    let g = L1Toy::new(3.0, 3)?.subgradient(&b0)?;
    let b1 = adam.step(&b0, &g, 0.01)?;
    let adam_ok = b0.iter().zip(b1.iter()).all(|(x, y)| ((x - y).abs() - 0.01).abs() < 1e-9);
    ctx.check("adam-first-step-is-alpha", adam_ok, format!("{:?} -> {:?}", b0.as_slice(), b1.as_slice()));
    let _ = writeln!(rows, "adam,first-step-is-alpha,{adam_ok}");

    ctx.write("variants-table.csv", &rows)
}
