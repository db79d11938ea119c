//! Flat `key = value` configuration files and per-experiment parameters.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;

/// Keys understood by every experiment in addition to its own parameters.
pub const GLOBAL_KEYS: [&str; 3] = ["seed", "out", "svg"];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub overrides: BTreeMap<String, String>,
    pub output_dir: PathBuf,
    pub svg: bool,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            name: name.into(),
            seed: DEFAULT_SEED,
            overrides: BTreeMap::new(),
            output_dir: output_dir.into(),
            svg: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn set(mut self, key: &str, value: &str) -> Self {
        self.overrides.insert(key.to_string(), value.to_string());
        self
    }

    /// Folds the global keys of a parsed file into the config and keeps the
    /// rest as overrides. Values already present in `self.overrides` win.
    pub fn merge_file(&mut self, pairs: BTreeMap<String, String>) -> Result<()> {
        for (k, v) in pairs {
            match k.as_str() {
                "seed" => self.seed = parse_seed(&v)?,
                "out" => self.output_dir = PathBuf::from(v),
                "svg" => self.svg = parse_bool(&v)?,
                _ => {
                    self.overrides.entry(k).or_insert(v);
                }
            }
        }
        Ok(())
    }
}

pub fn parse_seed(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("seed must be a non-negative integer, got {s:?}")))
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::Usage(format!("expected a boolean, got {other:?}"))),
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// a repeated key is an error.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::Usage(format!("config line {}: duplicate key {k}", i + 1)));
        }
    }
    Ok(out)
}

/// Parses a `--set key=value` argument.
pub fn parse_assignment(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected key=value, got {s:?}")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// An experiment parameter with its documented default.
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

/// Resolved parameter values for one run.
#[derive(Debug, Clone)]
pub struct Params {
    values: BTreeMap<&'static str, String>,
}

impl Params {
    /// Defaults overlaid with `overrides`; keys outside `spec` are rejected.
    pub fn resolve(spec: &[Param], overrides: &BTreeMap<String, String>) -> Result<Self> {
        let mut values: BTreeMap<&'static str, String> =
            spec.iter().map(|p| (p.key, p.default.to_string())).collect();
        for (k, v) in overrides {
            match spec.iter().find(|p| p.key == k) {
                Some(p) => {
                    values.insert(p.key, v.clone());
                }
                None => {
                    let known: Vec<&str> = spec.iter().map(|p| p.key).collect();
                    return Err(CliError::Usage(format!("unknown key {k:?}; known keys: {}", known.join(", "))));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &str)> {
        self.values.iter().map(|(k, v)| (*k, v.as_str()))
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("parameter {key} is not declared"))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let raw = self.raw(key);
        raw.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CliError::Usage(format!("{key} must be a finite number, got {raw:?}")))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let raw = self.raw(key);
        raw.parse()
            .map_err(|_| CliError::Usage(format!("{key} must be a non-negative integer, got {raw:?}")))
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.raw(key);
        let items: Option<Vec<f64>> = raw
            .split(',')
            .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect();
        match items {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(CliError::Usage(format!("{key} must be a comma-separated list of numbers, got {raw:?}"))),
        }
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        let raw = self.raw(key);
        let items: Option<Vec<usize>> = raw.split(',').map(|s| s.trim().parse().ok()).collect();
        match items {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(CliError::Usage(format!("{key} must be a comma-separated list of integers, got {raw:?}"))),
        }
    }
}
