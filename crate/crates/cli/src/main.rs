//! `tweezer`: runs the simulated experiments from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use tweezer_sim::harness::{
    parse_assignment, run, selftest, Experiment, ExperimentConfig, PARAMETER_KEYS,
};
use tweezer_sim::Error;

#[derive(Parser)]
#[command(name = "tweezer", version, about = "Seeded simulations of single-atom tweezer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trial count (overrides the config).
    #[arg(long)]
    trials: Option<u64>,
    /// Parameter override `key=value`, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Rabi flopping with optical pumping and push-out readout.
    Rabi(RunArgs),
    /// Ramsey contrast versus delay.
    Ramsey(RunArgs),
    /// Spin-echo amplitude versus total time.
    Echo(RunArgs),
    /// Ramsey sequence with a hand-off to a second tweezer.
    Transfer(RunArgs),
    /// Spin echo of a transported qubit versus displacement.
    Transport(RunArgs),
    /// Loading telegraph signal, fluorescence histogram and thresholding.
    Fluorescence(RunArgs),
    /// Hanbury Brown–Twiss coincidence histogram of the pulsed emitter.
    G2(RunArgs),
    /// Two-photon interference versus mode overlap and displacement.
    #[command(name = "hom_sweep", alias = "hom-sweep")]
    HomSweep(RunArgs),
    /// Heralded two-atom state at one mode overlap.
    Herald(RunArgs),
    /// Entangled-pair efficiency and rate.
    Rate(RunArgs),
    /// Runs the experiment named in the config file.
    Run(RunArgs),
    /// Checks a config without running it.
    Validate(RunArgs),
    /// Runs the built-in invariant checks.
    Selftest,
    /// Lists the parameter override keys.
    Keys,
}

/// Prints a line to stdout; a closed pipe is not an error.
fn emit(line: impl std::fmt::Display) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn error_line(e: &Error) -> String {
    let mut v = json!({ "status": "error", "kind": e.kind(), "message": e.to_string() });
    if let Error::InvalidParameters(list) = e {
        v["violations"] = json!(list);
    }
    v.to_string()
}

/// `experiment` fills in a config that names none; with `strict` a config
/// naming a different experiment is an error.
fn build_config(args: &RunArgs, experiment: Option<Experiment>, strict: bool) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path, experiment)?;
            if let (Some(e), true) = (experiment, strict) {
                if cfg.experiment != e {
                    return Err(Error::Config(format!(
                        "config is for experiment {:?}, not {:?}",
                        cfg.experiment.name(),
                        e.name()
                    )));
                }
            }
            cfg
        }
        None => ExperimentConfig::new(
            experiment.ok_or_else(|| Error::Config("no experiment given (use --config)".into()))?,
        ),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_path = out.clone();
    }
    if let Some(t) = args.trials {
        cfg.trials = Some(t);
    }
    for a in &args.set {
        let (k, v) = parse_assignment(a)?;
        cfg.overrides.insert(k, v);
    }
    Ok(cfg)
}

fn run_experiment(args: &RunArgs, experiment: Option<Experiment>) -> Result<(), Error> {
    let cfg = build_config(args, experiment, true)?;
    let report = run(&cfg)?;
    let line = json!({
        "status": "ok",
        "experiment": report.experiment,
        "output": cfg.output_path,
        "summary": report.summary,
        "files": report.files,
    });
    emit(line);
    Ok(())
}

fn validate(args: &RunArgs) -> Result<bool, Error> {
    // Parameter checks do not depend on the experiment.
    let cfg = build_config(args, Some(Experiment::Rate), false)?;
    let violations = cfg.validate();
    emit(json!({ "status": if violations.is_empty() { "ok" } else { "invalid" }, "violations": violations }));
    Ok(violations.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rabi(a) => run_experiment(a, Some(Experiment::Rabi)),
        Command::Ramsey(a) => run_experiment(a, Some(Experiment::Ramsey)),
        Command::Echo(a) => run_experiment(a, Some(Experiment::Echo)),
        Command::Transfer(a) => run_experiment(a, Some(Experiment::Transfer)),
        Command::Transport(a) => run_experiment(a, Some(Experiment::Transport)),
        Command::Fluorescence(a) => run_experiment(a, Some(Experiment::Fluorescence)),
        Command::G2(a) => run_experiment(a, Some(Experiment::G2)),
        Command::HomSweep(a) => run_experiment(a, Some(Experiment::HomSweep)),
        Command::Herald(a) => run_experiment(a, Some(Experiment::Herald)),
        Command::Rate(a) => run_experiment(a, Some(Experiment::Rate)),
        Command::Run(a) => run_experiment(a, None),
        Command::Validate(a) => match validate(a) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(1),
            Err(e) => Err(e),
        },
        Command::Selftest => {
            let checks = selftest();
            for c in &checks {
                emit(json!({ "check": c.name, "passed": c.passed, "detail": c.detail }));
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                return ExitCode::from(1);
            }
        }
        Command::Keys => {
            for (k, d) in PARAMETER_KEYS {
                emit(format_args!("{k:<36} {d}"));
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(2)
        }
    }
}
