use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use super::params::Parameters;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Rabi,
    Ramsey,
    Echo,
    Transfer,
    Transport,
    Fluorescence,
    G2,
    HomSweep,
    Herald,
    Rate,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Rabi,
        Experiment::Ramsey,
        Experiment::Echo,
        Experiment::Transfer,
        Experiment::Transport,
        Experiment::Fluorescence,
        Experiment::G2,
        Experiment::HomSweep,
        Experiment::Herald,
        Experiment::Rate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Rabi => "rabi",
            Experiment::Ramsey => "ramsey",
            Experiment::Echo => "echo",
            Experiment::Transfer => "transfer",
            Experiment::Transport => "transport",
            Experiment::Fluorescence => "fluorescence",
            Experiment::G2 => "g2",
            Experiment::HomSweep => "hom_sweep",
            Experiment::Herald => "herald",
            Experiment::Rate => "rate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }

    /// Trials used when the config does not set any; `None` for purely
    /// deterministic experiments.
    pub fn default_trials(self) -> Option<u64> {
        match self {
            Experiment::Rabi => Some(100),
            Experiment::Ramsey => Some(10_000),
            Experiment::G2 => Some(20_000),
            _ => None,
        }
    }
}

/// One experiment run: what to simulate, with which seed, and where to
/// write the results. Overrides are kept as given (dotted key → value) so
/// the config echoes back exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub trials: Option<u64>,
    pub overrides: BTreeMap<String, Value>,
    pub output_path: PathBuf,
}

const RESERVED: [&str; 4] = ["experiment", "seed", "trials", "output"];

fn flatten(prefix: &str, table: &Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

fn key_segment(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        s.to_string()
    } else {
        Value::String(s.to_string()).to_string()
    }
}

fn parse_seed(v: &Value) -> Result<u64> {
    match v {
        Value::Integer(n) if *n >= 0 => Ok(*n as u64),
        Value::String(s) => s.parse().map_err(|_| Error::Config(format!("seed {s:?} is not a 64-bit integer"))),
        _ => Err(Error::Config("seed must be a non-negative integer".into())),
    }
}

/// Splits a command-line `key=value`. The value is read as a TOML scalar
/// (`4`, `0.5`, `true`, `"x"`); anything else is taken as a bare string.
pub fn parse_assignment(text: &str) -> Result<(String, Value)> {
    let (key, raw) =
        text.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got {text:?}")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(Error::Config(format!("empty key in {text:?}")));
    }
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .filter(|v| !matches!(v, Value::Table(_) | Value::Array(_)))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            seed: 0,
            trials: None,
            overrides: BTreeMap::new(),
            output_path: PathBuf::from("out").join(experiment.name()),
        }
    }

    /// Parses the TOML config format. Nested tables and dotted keys are
    /// equivalent (`[emitter] pulse_duration_ns = 4` is
    /// `emitter.pulse_duration_ns = 4`). `fallback` is used when the text
    /// names no experiment.
    pub fn from_toml_str(text: &str, fallback: Option<Experiment>) -> Result<Self> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        let named = match table.get("experiment") {
            None => None,
            Some(Value::String(s)) => {
                Some(Experiment::parse(s).ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))?)
            }
            Some(_) => return Err(Error::Config("experiment must be a string".into())),
        };
        let experiment = named.or(fallback).ok_or_else(|| Error::Config("no experiment given".into()))?;
        let mut cfg = ExperimentConfig::new(experiment);
        if let Some(v) = table.get("seed") {
            cfg.seed = parse_seed(v)?;
        }
        if let Some(v) = table.get("trials") {
            cfg.trials = match v {
                Value::Integer(n) if *n >= 1 => Some(*n as u64),
                _ => return Err(Error::Config("trials must be a positive integer".into())),
            };
        }
        if let Some(v) = table.get("output") {
            cfg.output_path = PathBuf::from(
                v.as_str().ok_or_else(|| Error::Config("output must be a path string".into()))?,
            );
        }
        let mut rest = table.clone();
        for r in RESERVED {
            rest.remove(r);
        }
        flatten("", &rest, &mut cfg.overrides);
        Ok(cfg)
    }

    pub fn load(path: &Path, fallback: Option<Experiment>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text, fallback)
    }

    /// The config in its own format; re-parses to an equal config.
    pub fn to_toml_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment = {}", Value::String(self.experiment.name().into()));
        if self.seed <= i64::MAX as u64 {
            let _ = writeln!(s, "seed = {}", self.seed);
        } else {
            let _ = writeln!(s, "seed = \"{}\"", self.seed);
        }
        if let Some(t) = self.trials {
            let _ = writeln!(s, "trials = {t}");
        }
        let _ = writeln!(s, "output = {}", Value::String(self.output_path.display().to_string()));
        for (k, v) in &self.overrides {
            let key = k.split('.').map(key_segment).collect::<Vec<_>>().join(".");
            let _ = writeln!(s, "{key} = {v}");
        }
        s
    }

    /// Resolved parameters: defaults with every override applied.
    pub fn parameters(&self) -> Result<Parameters> {
        let mut p = Parameters::default();
        for (k, v) in &self.overrides {
            p.set(k, v).map_err(Error::Config)?;
        }
        Ok(p)
    }

    pub fn trials(&self) -> Option<u64> {
        self.trials.or(self.experiment.default_trials())
    }

    /// Every problem with the config: unknown or ill-typed overrides and
    /// violated parameter invariants. Empty means the config can run.
    pub fn validate(&self) -> Vec<String> {
        let mut p = Parameters::default();
        let mut v: Vec<String> = self.overrides.iter().filter_map(|(k, val)| p.set(k, val).err()).collect();
        v.extend(p.validate());
        v
    }
}
