//! Named, reproducible experiments. Each writes CSV files (and SVG plots on
//! request) into its output directory together with `manifest.txt`.

mod capture;
mod eos;
mod lasso;
mod netcmp;
mod prune;
mod variants;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use optlab_core::optim::Trajectory;

use crate::config::{ExperimentConfig, Param, Params};
use crate::error::{CliError, Result};
use crate::manifest::{Check, Manifest};
use crate::svg::{emit_svg, AxesSpec};

pub use capture::{capture_instance, rises_then_falls, run_once as capture_run, CaptureWitness};
pub use eos::{huber_instance, quadratic_instance};
pub use netcmp::paired_runs;

pub const MANIFEST_FILE: &str = "manifest.txt";

pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [Param],
    run: fn(&mut Context) -> Result<()>,
}

static REGISTRY: [Experiment; 9] = [
    capture::EXPERIMENT,
    lasso::TWO_D,
    lasso::GENERAL,
    variants::PHASE,
    variants::TABLE,
    eos::HUBER,
    eos::QUADRATIC,
    netcmp::EXPERIMENT,
    prune::EXPERIMENT,
];

pub fn registry() -> &'static [Experiment] {
    &REGISTRY
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Handle passed to an experiment body.
pub struct Context {
    pub params: Params,
    pub seed: u64,
    out_dir: PathBuf,
    svg: bool,
    manifest: Manifest,
}

impl Context {
    pub fn write(&mut self, file: &str, contents: &str) -> Result<()> {
        let path = self.out_dir.join(file);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.manifest.outputs.push(file.to_string());
        Ok(())
    }

    /// Writes an SVG rendering of `csv` when plots were requested.
    pub fn plot(&mut self, file: &str, csv: &str, axes: &AxesSpec) -> Result<()> {
        if self.svg {
            let svg = emit_svg(csv, axes)?;
            self.write(file, &svg)?;
        }
        Ok(())
    }

    /// Trajectory CSV plus an optional plot of `ys` against `iter`.
    pub fn trajectory(&mut self, stem: &str, traj: &Trajectory, axes: AxesSpec) -> Result<()> {
        let csv = traj.to_csv();
        self.write(&format!("{stem}.csv"), &csv)?;
        self.plot(&format!("{stem}.svg"), &csv, &axes)
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.manifest.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn note(&mut self, key: &str, value: impl Display) {
        self.manifest.notes.push((key.to_string(), value.to_string()));
    }
}

/// Runs `cfg.name`, writes its outputs and manifest, and returns the
/// manifest. Assertion failures are reported in the manifest, not as
/// errors.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Manifest> {
    let exp = find(&cfg.name).ok_or_else(|| {
        let names: Vec<&str> = REGISTRY.iter().map(|e| e.name).collect();
        CliError::Usage(format!("unknown experiment {:?}; available: {}", cfg.name, names.join(", ")))
    })?;
    let params = Params::resolve(exp.params, &cfg.overrides)?;
    prepare_dir(&cfg.output_dir)?;
    let mut manifest = Manifest::new(exp.name);
    manifest.config.push(("seed".into(), cfg.seed.to_string()));
    for (k, v) in params.iter() {
        manifest.config.push((k.into(), v.into()));
    }
    let mut ctx = Context { params, seed: cfg.seed, out_dir: cfg.output_dir.clone(), svg: cfg.svg, manifest };
    (exp.run)(&mut ctx)?;
    let manifest = ctx.manifest;
    let path = cfg.output_dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_text()).map_err(|e| CliError::io(&path, e))?;
    Ok(manifest)
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// `true` when every step changes the value by at most `slack` upwards.
pub fn non_increasing(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + slack)
}
