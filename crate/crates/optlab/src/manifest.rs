use std::fmt::Write as _;

/// Outcome of one built-in assertion.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Plain-text `key=value` record of a run: config echo, outputs, notes and
/// check results, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub experiment: String,
    pub config: Vec<(String, String)>,
    pub outputs: Vec<String>,
    pub notes: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Manifest {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.to_string(), ..Self::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment={}", self.experiment);
        for (k, v) in &self.config {
            let _ = writeln!(out, "config.{k}={v}");
        }
        for f in &self.outputs {
            let _ = writeln!(out, "output={f}");
        }
        for (k, v) in &self.notes {
            let _ = writeln!(out, "note.{k}={v}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "check.{}={}", c.name, if c.passed { "pass" } else { "fail" });
            if !c.detail.is_empty() {
                let _ = writeln!(out, "detail.{}={}", c.name, c.detail);
            }
        }
        let _ = writeln!(out, "result={}", if self.passed() { "pass" } else { "fail" });
        out
    }
}
