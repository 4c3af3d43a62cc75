//! Run configuration: a JSON file, overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use starlab::model::LightSpeed;
use starlab::solver::{Backend, SolverConfig};
use starlab::study::{validate_ladder, LambdaSpan};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    SweepC,
    SweepN,
    Corner,
    Critical,
    Check,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Solve => "solve",
            Mode::SweepC => "sweep-c",
            Mode::SweepN => "sweep-n",
            Mode::Corner => "corner",
            Mode::Critical => "critical",
            Mode::Check => "check",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format '{other}' (expected csv, json or svg)")),
        }
    }
}

/// Speed of light as it appears in configs: a number or the literal `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CSpec(pub LightSpeed<f64>);

impl FromStr for CSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" => Ok(CSpec(LightSpeed::Infinite)),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|c| c.is_finite())
                .map(|c| CSpec(LightSpeed::Finite(c)))
                .ok_or_else(|| format!("invalid speed of light '{t}' (a number or inf)")),
        }
    }
}

impl Serialize for CSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            LightSpeed::Finite(c) => s.serialize_f64(c),
            LightSpeed::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for CSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(c) => Ok(CSpec(LightSpeed::Finite(c))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanSpec {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl From<SpanSpec> for LambdaSpan {
    fn from(s: SpanSpec) -> Self {
        LambdaSpan {
            min: s.min,
            max: s.max,
            samples: s.samples,
        }
    }
}

impl FromStr for SpanSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || format!("invalid lambda span '{s}' (expected min,max,samples)");
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(SpanSpec {
            min: parts[0].parse().map_err(|_| bad())?,
            max: parts[1].parse().map_err(|_| bad())?,
            samples: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

/// Solver settings; every field is optional in a config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode_rtol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode_atol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard_damping: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard_max_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ode_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend_tol: Option<f64>,
}

impl SolverOverrides {
    fn merge(&mut self, top: &SolverOverrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if top.$f.is_some() { self.$f = top.$f.clone(); } )* };
        }
        take!(
            backend,
            ode_rtol,
            ode_atol,
            event_tol,
            mass_tol,
            picard_damping,
            picard_max_iterations,
            picard_tol,
            output_nodes,
            max_ode_steps,
            backend_tol
        );
    }

    /// Fills every field from the defaults, so the echo is self-contained.
    fn resolved(&self) -> Result<SolverOverrides, String> {
        let cfg = self.build()?;
        Ok(SolverOverrides {
            backend: Some(cfg.backend.to_string()),
            ode_rtol: Some(cfg.ode_rtol),
            ode_atol: Some(cfg.ode_atol),
            event_tol: Some(cfg.event_tol),
            mass_tol: Some(cfg.mass_tol),
            picard_damping: Some(cfg.picard_damping),
            picard_max_iterations: Some(cfg.picard_max_iterations),
            picard_tol: Some(cfg.picard_tol),
            output_nodes: Some(cfg.output_nodes),
            max_ode_steps: Some(cfg.max_ode_steps),
            backend_tol: Some(cfg.backend_tol),
        })
    }

    pub fn build(&self) -> Result<SolverConfig<f64>, String> {
        let mut cfg = SolverConfig::<f64>::default();
        if let Some(b) = &self.backend {
            cfg.backend = b.parse::<Backend>().map_err(|e| e.to_string())?;
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        set!(
            ode_rtol,
            ode_atol,
            event_tol,
            mass_tol,
            picard_damping,
            picard_max_iterations,
            picard_tol,
            output_nodes,
            max_ode_steps,
            backend_tol
        );
        Ok(cfg)
    }
}

/// Contents of a config file. Keys match [`RunConfig`]; all are optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub mode: Option<Mode>,
    pub m: Option<f64>,
    pub q: Option<f64>,
    pub kappa: Option<f64>,
    pub c: Option<CSpec>,
    pub n: Option<f64>,
    pub ladder: Option<Vec<f64>>,
    pub lambda_span: Option<SpanSpec>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub gate: Option<bool>,
    #[serde(default)]
    pub solver: SolverOverrides,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }
}

/// `starlab <mode> [flags]`. Flags override values from `--config`.
#[derive(Debug, Parser)]
#[command(name = "starlab", version, about = "Relativistic and Newtonian star ground states")]
pub struct Args {
    pub mode: Mode,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Speed of light, or `inf` for the nonrelativistic limit.
    #[arg(long)]
    pub c: Option<CSpec>,
    /// Total mass.
    #[arg(long)]
    pub n: Option<f64>,
    /// Comma-separated c values (sweep-c, corner, check) or masses (sweep-n, critical).
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<f64>>,
    /// `min,max,samples` for the dilation probe.
    #[arg(long)]
    pub lambda_span: Option<SpanSpec>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random samples for the inequality suite in `check`.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub backend: Option<Backend>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub formats: Option<Vec<Format>>,
    /// Exit 4 when a study result falls outside its acceptance window.
    #[arg(long)]
    pub gate: bool,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// A fully resolved run. Its JSON form is a valid config file that
/// reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub m: f64,
    pub q: f64,
    pub kappa: f64,
    pub c: CSpec,
    pub n: f64,
    pub ladder: Vec<f64>,
    pub lambda_span: SpanSpec,
    pub seed: u64,
    pub samples: usize,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub gate: bool,
    pub solver: SolverOverrides,
}

pub const DEFAULT_C_LADDER: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];
pub const DEFAULT_N_LADDER: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

impl RunConfig {
    /// Merges the config file (if any) under the flags and validates.
    pub fn resolve(args: Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mode = args.mode;
        if let Some(m) = file.mode {
            if m != mode {
                return Err(CliError::Config(format!("config file is for mode {m}, not {mode}")));
            }
        }
        let mut solver = file.solver.clone();
        solver.merge(&SolverOverrides {
            backend: args.backend.map(|b| b.to_string()),
            ..Default::default()
        });
        let default_ladder = match mode {
            Mode::SweepN => DEFAULT_N_LADDER.to_vec(),
            Mode::Critical => vec![args.n.or(file.n).unwrap_or(1.0)],
            _ => DEFAULT_C_LADDER.to_vec(),
        };
        let span = LambdaSpan::default();
        let cfg = RunConfig {
            mode,
            m: args.m.or(file.m).unwrap_or(1.0),
            q: args.q.or(file.q).unwrap_or(1.0),
            kappa: args.kappa.or(file.kappa).unwrap_or(1.0),
            c: args.c.or(file.c).unwrap_or(CSpec(LightSpeed::Infinite)),
            n: args.n.or(file.n).unwrap_or(1.0),
            ladder: args.ladder.or(file.ladder).unwrap_or(default_ladder),
            lambda_span: args.lambda_span.or(file.lambda_span).unwrap_or(SpanSpec {
                min: span.min,
                max: span.max,
                samples: span.samples,
            }),
            seed: args.seed.or(file.seed).unwrap_or(42),
            samples: args.samples.or(file.samples).unwrap_or(100_000),
            out: args.out.or(file.out).unwrap_or_else(|| PathBuf::from("starlab-out")),
            formats: {
                let mut f = args
                    .formats
                    .or(file.formats)
                    .unwrap_or(vec![Format::Csv, Format::Json, Format::Svg]);
                f.sort();
                f.dedup();
                f
            },
            gate: args.gate || file.gate.unwrap_or(false),
            solver: solver.resolved().map_err(CliError::Config)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<starlab::Params, CliError> {
        starlab::Params::new(self.m, self.q, self.kappa, self.c.0).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn solver_config(&self) -> SolverConfig<f64> {
        self.solver.build().expect("validated")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |e: starlab::StarError| CliError::Config(e.to_string());
        self.params()?;
        if !(self.n.is_finite() && self.n > 0.0) {
            return Err(CliError::Config(format!(
                "mass must be finite and positive, got {}",
                self.n
            )));
        }
        let ladder_name = match self.mode {
            Mode::SweepN | Mode::Critical => "N",
            _ => "c",
        };
        if self.mode != Mode::Solve {
            validate_ladder(ladder_name, &self.ladder).map_err(bad)?;
        }
        LambdaSpan::from(self.lambda_span).validate().map_err(bad)?;
        if self.formats.is_empty() {
            return Err(CliError::Config("no output formats selected".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be positive".into()));
        }
        let solver = self.solver.build().map_err(CliError::Config)?;
        solver.validate().map_err(bad)?;
        if matches!(self.mode, Mode::SweepC | Mode::Corner | Mode::Check) {
            solver.validate_for_ladder(*self.ladder.last().unwrap()).map_err(bad)?;
        }
        Ok(())
    }

    /// The config echo as a JSON value.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
