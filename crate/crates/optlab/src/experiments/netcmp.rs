use std::fmt::Write as _;
use std::thread;

use optlab_core::netlab::{epoch_rows, epochs_to_reduction, paired_setup, train, Activation, Training, EPOCH_HEADER};
use optlab_core::optim::StepSchedule;

use super::{Context, Experiment};
use crate::config::Param;
use crate::error::{CliError, Result};
use crate::svg::AxesSpec;

pub(super) const EXPERIMENT: Experiment = Experiment {
    name: "relu-vs-gelu",
    summary: "paired ReLU and GELU networks on a synthetic regression task across depths",
    params: &[
        Param { key: "depths", default: "2,4,6,8", help: "hidden layer counts" },
        Param { key: "alpha", default: "0.05", help: "constant step" },
        Param { key: "epochs", default: "500", help: "full-batch epochs per run" },
    ],
    run: body,
};

const ARMS: [Activation; 2] = [Activation::Relu, Activation::Gelu];

/// Trains both arms of one depth concurrently.
pub fn paired_runs(seed: u64, depth: usize, alpha: f64, epochs: usize) -> optlab_core::Result<[Training; 2]> {
    let schedule = StepSchedule::constant(alpha)?;
    let [relu, gelu] = thread::scope(|s| {
        ARMS.map(|act| {
            s.spawn(move || {
                let (data, net) = paired_setup(seed, depth, act)?;
                train(&net, &data, schedule, epochs)
            })
        })
        .map(|h| h.join().expect("training thread panicked"))
    });
    Ok([relu?, gelu?])
}

fn body(ctx: &mut Context) -> Result<()> {
    let p = &ctx.params;
    let depths = p.usize_list("depths")?;
    let alpha = p.f64("alpha")?;
    let epochs = p.usize("epochs")?;
    if depths.is_empty() || depths.contains(&0) {
        return Err(CliError::Usage("depths must be a non-empty list of positive integers".into()));
    }
    let seed = ctx.seed;

    let mut epochs_csv = format!("{EPOCH_HEADER}\n");
    let mut summary = String::from("depth,activation,initial_loss,final_loss,epochs_to_half,diverged\n");
    let mut plot = String::from("epoch");
    for &d in &depths {
        for act in ARMS {
            let _ = write!(plot, ",{}_d{d}", act.name());
        }
    }
    plot.push('\n');
    let mut curves = Vec::new();

    for &depth in &depths {
        let runs = paired_runs(seed, depth, alpha, epochs)?;
        for (act, run) in ARMS.iter().zip(&runs) {
            let traj = &run.trajectory;
            epochs_csv.push_str(&epoch_rows(traj, *act, depth, seed));
            let half = epochs_to_reduction(traj, 0.5);
            let first = traj.records()[0].loss;
            let last = traj.last().map_or(f64::NAN, |r| r.loss);
            let _ = writeln!(
                summary,
                "{depth},{},{first},{last},{},{}",
                act.name(),
                half.map_or_else(|| "none".to_string(), |e| e.to_string()),
                traj.diverged()
            );
            if depth == 2 {
                ctx.check(
                    &format!("depth2-halves-{}", act.name()),
                    half.is_some() && !traj.diverged(),
                    format!("epochs to 50% reduction: {half:?}"),
                );
            }
            curves.push(traj.losses());
        }
        if depth == depths[0] {
            let again = paired_runs(seed, depth, alpha, epochs)?;
            let same = runs.iter().zip(&again).all(|(a, b)| {
                let (x, y) = (a.trajectory.losses(), b.trajectory.losses());
                x.len() == y.len() && x.iter().zip(&y).all(|(u, v)| u.to_bits() == v.to_bits())
            });
            ctx.check(&format!("deterministic-depth{depth}"), same, "repeated paired runs agree bit for bit");
        }
    }
    if !depths.contains(&2) {
        ctx.note("depth2_check", "skipped, depth 2 not in the sweep");
    }

    let longest = curves.iter().map(Vec::len).max().unwrap_or(0);
    for e in 0..longest {
        let _ = write!(plot, "{e}");
        for c in &curves {
            match c.get(e) {
                Some(v) => {
                    let _ = write!(plot, ",{v}");
                }
                None => plot.push_str(",nan"),
            }
        }
        plot.push('\n');
    }
    ctx.write("relu-vs-gelu_epochs.csv", &epochs_csv)?;
    ctx.write("relu-vs-gelu_summary.csv", &summary)?;
    let names: Vec<String> = depths.iter().flat_map(|d| ARMS.map(|a| format!("{}_d{d}", a.name()))).collect();
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    ctx.plot("relu-vs-gelu_losses.svg", &plot, &AxesSpec::new("epoch", &cols).log_y().title("training loss by depth and activation"))
}
