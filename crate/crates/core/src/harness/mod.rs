//! Configuration, dispatch and output of the named experiments.
//!
//! A run is described by an [`ExperimentConfig`]: the experiment, a seed,
//! an optional trial count, dotted parameter overrides (units in the key
//! name, see [`PARAMETER_KEYS`]) and an output directory. [`run`] writes one
//! or more CSV files, the echoed `config.toml` and a `summary.json`.

mod config;
mod fit;
mod output;
mod params;
mod run;
mod selftest;

pub use config::{parse_assignment, Experiment, ExperimentConfig};
pub use fit::{fit_cosine, CosineFit};
pub use output::{fmt_float, Summary, Table};
pub use params::{G2Settings, HeraldSettings, HomSettings, Parameters, QubitSettings, TrapSettings, PARAMETER_KEYS};
pub use run::{run, simulate, Outputs, RunReport};
pub use selftest::{selftest, Check};
