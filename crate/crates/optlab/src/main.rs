use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use optlab::config::{parse_assignment, parse_config, DEFAULT_SEED};
use optlab::experiments::{registry, run_experiment, MANIFEST_FILE};
use optlab::{CliError, ExperimentConfig, Manifest, Result};

#[derive(Parser)]
#[command(name = "optlab", version, about = "Run the optlab experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List experiments with their parameters and defaults.
    List,
    /// Run one experiment.
    Run {
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Override a parameter, `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        /// Output directory (default `results/<name>`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write SVG plots.
        #[arg(long)]
        svg: bool,
        /// Flat `key = value` file applied before the command-line flags.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run every experiment with its defaults, each into `<out>/<name>`.
    VerifyAll {
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        svg: bool,
    },
}

fn report(m: &Manifest, dir: &std::path::Path) {
    for c in &m.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        if c.detail.is_empty() {
            println!("  {status} {}", c.name);
        } else {
            println!("  {status} {} ({})", c.name, c.detail);
        }
    }
    println!(
        "{}: {} -> {}",
        m.experiment,
        if m.passed() { "pass" } else { "FAIL" },
        dir.join(MANIFEST_FILE).display()
    );
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List => {
            for e in registry() {
                println!("{}  {}", e.name, e.summary);
                for p in e.params {
                    println!("    {} = {}  ({})", p.key, p.default, p.help);
                }
            }
            Ok(true)
        }
        Command::Run { name, seed, sets, out, svg, config } => {
            let mut cfg = ExperimentConfig::new(name.clone(), PathBuf::from("results").join(&name));
            if let Some(path) = config {
                let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                cfg.merge_file(parse_config(&text)?)?;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            cfg.svg |= svg;
            for s in &sets {
                let (k, v) = parse_assignment(s)?;
                cfg.overrides.insert(k, v);
            }
            let m = run_experiment(&cfg)?;
            report(&m, &cfg.output_dir);
            Ok(m.passed())
        }
        Command::VerifyAll { out, seed, svg } => {
            let mut all = true;
            for e in registry() {
                let mut cfg = ExperimentConfig::new(e.name, out.join(e.name)).with_seed(seed);
                cfg.svg = svg;
                let m = run_experiment(&cfg)?;
                report(&m, &cfg.output_dir);
                all &= m.passed();
            }
            println!("verify-all: {}", if all { "pass" } else { "FAIL" });
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("optlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
