//! Collects the outputs of one run and writes them with a manifest.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::{Format, Mode, RunConfig};
use crate::table::{Cell, Table};
use crate::CliError;

/// Aggregate outcome, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    GateFailed,
    SolverFailed,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::GateFailed => "gate_failed",
            Status::SolverFailed => "solver_failed",
        }
    }
}

/// One acceptance check: `value` must lie in `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Gate {
    pub fn within(name: impl Into<String>, value: f64, lower: f64, upper: f64) -> Self {
        Gate {
            name: name.into(),
            value,
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, upper: f64) -> Self {
        Gate {
            name: name.into(),
            value,
            lower: None,
            upper: Some(upper),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, lower: f64) -> Self {
        Gate {
            name: name.into(),
            value,
            lower: Some(lower),
            upper: None,
        }
    }

    /// NaN never passes.
    pub fn pass(&self) -> bool {
        !self.value.is_nan() && self.lower.is_none_or(|l| self.value >= l) && self.upper.is_none_or(|u| self.value <= u)
    }
}

pub struct Bundle {
    out: PathBuf,
    formats: Vec<Format>,
    mode: Mode,
    config: serde_json::Value,
    enforce_gates: bool,
    files: Vec<(String, Vec<u8>)>,
    gates: Vec<Gate>,
    failures: Vec<String>,
    fatal: Option<String>,
}

impl Bundle {
    pub fn new(cfg: &RunConfig) -> Self {
        Bundle {
            out: cfg.out.clone(),
            formats: cfg.formats.clone(),
            mode: cfg.mode,
            config: cfg.echo(),
            enforce_gates: cfg.gate || cfg.mode == Mode::Check,
            files: Vec::new(),
            gates: Vec::new(),
            failures: Vec::new(),
            fatal: None,
        }
    }

    pub fn add_table(&mut self, table: &Table) {
        if self.formats.contains(&Format::Csv) {
            self.files.push((format!("{}.csv", table.name), table.to_csv()));
        }
        if self.formats.contains(&Format::Json) {
            self.files.push((format!("{}.json", table.name), table.to_json()));
        }
    }

    pub fn add_chart(&mut self, name: &str, svg: String) {
        if self.formats.contains(&Format::Svg) {
            self.files.push((format!("{name}.svg"), svg.into_bytes()));
        }
    }

    pub fn gate(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// A non-fatal solver failure (e.g. one ladder point).
    pub fn record_failure(&mut self, message: String) {
        self.failures.push(message);
    }

    /// The mode aborted; the error itself is reported by the caller.
    pub fn fail(&mut self, message: String) {
        self.fatal = Some(message);
    }

    pub fn status(&self) -> Status {
        if self.fatal.is_some() || !self.failures.is_empty() {
            Status::SolverFailed
        } else if self.enforce_gates && self.gates.iter().any(|g| !g.pass()) {
            Status::GateFailed
        } else {
            Status::Ok
        }
    }

    fn gate_table(&self) -> Table {
        let mut t = Table::new("gates", &["check", "value", "lower", "upper", "pass"]);
        for g in &self.gates {
            t.push(vec![
                Cell::from(g.name.as_str()),
                Cell::from(g.value),
                Cell::from(g.lower),
                Cell::from(g.upper),
                Cell::from(g.pass()),
            ]);
        }
        t
    }

    /// Writes every file and `manifest.json` into the output directory.
    pub fn write(mut self) -> Result<Status, CliError> {
        if !self.gates.is_empty() {
            let t = self.gate_table();
            self.add_table(&t);
        }
        let status = self.status();
        let io = |e: std::io::Error, what: &str| CliError::Io(format!("{what}: {e}"));
        std::fs::create_dir_all(&self.out).map_err(|e| io(e, &self.out.display().to_string()))?;
        let mut listed = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let path = self.out.join(name);
            std::fs::write(&path, bytes).map_err(|e| io(e, &path.display().to_string()))?;
            listed.push(json!({
                "name": name,
                "bytes": bytes.len(),
                "sha256": hex::encode(Sha256::digest(bytes)),
            }));
        }
        let manifest = json!({
            "tool": "starlab",
            "version": env!("CARGO_PKG_VERSION"),
            "core_version": starlab::VERSION,
            "mode": self.mode.to_string(),
            "created_unix": timestamp(),
            "status": status.name(),
            "gates_enforced": self.enforce_gates,
            "failures": self.failures.iter().chain(self.fatal.iter()).collect::<Vec<_>>(),
            "config": self.config,
            "files": listed,
        });
        let path = self.out.join("manifest.json");
        let mut text = serde_json::to_vec_pretty(&manifest).expect("json");
        text.push(b'\n');
        std::fs::write(&path, text).map_err(|e| io(e, &path.display().to_string()))?;
        for f in &self.failures {
            eprintln!("starlab: solver failure: {f}");
        }
        if self.enforce_gates {
            for g in self.gates.iter().filter(|g| !g.pass()) {
                eprintln!(
                    "starlab: gate failed: {} = {:e} outside [{}, {}]",
                    g.name,
                    g.value,
                    g.lower.map_or("-inf".into(), |v| format!("{v:e}")),
                    g.upper.map_or("inf".into(), |v| format!("{v:e}"))
                );
            }
        }
        Ok(status)
    }
}

/// `SOURCE_DATE_EPOCH` if set, otherwise the current time.
fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}
