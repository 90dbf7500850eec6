use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Experiment, ExperimentConfig};
use super::fit::fit_cosine;
use super::output::{create_dir, write_file, Summary, Table};
use super::params::Parameters;
use crate::emission::{counting, expected_ratio, g2_histogram, quantum_jump_trials, G2Binning};
use crate::error::{Error, Result};
use crate::herald::{
    coincidence_vs_displacement, entanglement_rate, herald_filter, hom_coincidence_probability,
    sector_coincidence_probability, HeraldConfig, PhotonModePair, PhotonSector,
};
use crate::qubit::{
    rabi_rotation_density, ramsey_contrast, ramsey_signal, spin_echo_signal, stationary_echo, transfer_sequence,
    transport_echo, PulseSpec,
};
use crate::rng::{derive_seed, substream};
use crate::trap::{
    absent_probability, classify_occupancy, count_histogram, fluorescence_trace, optical_pump, pushout_shot,
    simulate_occupancy, QubitPopulation,
};

/// Record of one run: the echoed config, summary statistics and every file
/// written.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RunReport {
    pub experiment: &'static str,
    pub seed: u64,
    pub trials: Option<u64>,
    /// The config in its own TOML format.
    pub config: String,
    pub summary: Summary,
    pub files: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
}

/// Tables and summary produced by one experiment, before anything is written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outputs {
    pub tables: Vec<Table>,
    pub summary: Summary,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn required_trials(cfg: &ExperimentConfig) -> Result<u64> {
    match cfg.trials() {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(Error::InsufficientTrials { required: 1, requested: 0 }),
    }
}

/// Runs the experiment without touching the file system.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Outputs> {
    let violations = cfg.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidParameters(violations));
    }
    let p = cfg.parameters()?;
    match cfg.experiment {
        Experiment::Rabi => rabi(&p, required_trials(cfg)?, cfg.seed),
        Experiment::Ramsey => ramsey(&p, cfg.trials().unwrap_or(0), cfg.seed),
        Experiment::Echo => echo(&p),
        Experiment::Transfer => transfer(&p),
        Experiment::Transport => transport(&p),
        Experiment::Fluorescence => fluorescence(&p, cfg.seed),
        Experiment::G2 => g2(&p, required_trials(cfg)?, cfg.seed),
        Experiment::HomSweep => hom_sweep(&p),
        Experiment::Herald => herald(&p),
        Experiment::Rate => rate(&p),
    }
}

/// Runs the experiment and writes its CSV files, `config.toml` and
/// `summary.json` into `cfg.output_path`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    let start = Instant::now();
    let outputs = simulate(cfg)?;
    let dir = &cfg.output_path;
    create_dir(dir)?;
    let mut files = Vec::new();
    for t in &outputs.tables {
        files.push(write_file(&dir.join(&t.file_name), &t.to_csv())?);
    }
    let config = cfg.to_toml_string();
    files.push(write_file(&dir.join("config.toml"), &config)?);
    let summary_path = dir.join("summary.json");
    files.push(summary_path.clone());
    let report = RunReport {
        experiment: cfg.experiment.name(),
        seed: cfg.seed,
        trials: cfg.trials(),
        config,
        summary: outputs.summary,
        files,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Config(e.to_string()))?;
    write_file(&summary_path, &(json + "\n"))?;
    Ok(report)
}

fn rabi(p: &Parameters, shots: u64, seed: u64) -> Result<Outputs> {
    let q = &p.qubit;
    let times = linspace(0.0, q.rabi_max_time, q.rabi_points);
    let pumped = optical_pump(&p.readout)?;
    let stage = derive_seed(seed, "rabi");
    let rows = times
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let rho = rabi_rotation_density(&pumped, &PulseSpec::with_duration(t, 0.0, q.rabi_frequency, 0.0)?)?;
            let mut rng = substream(stage, k as u64);
            let mut absent = 0u64;
            for _ in 0..shots {
                if !pushout_shot(&rho, &p.readout, &mut rng)?.present {
                    absent += 1;
                }
            }
            let measured = absent as f64 / shots as f64;
            let expected = absent_probability(rho.population_one()?, &p.readout);
            let stderr = (measured * (1.0 - measured) / shots as f64).sqrt();
            Ok([t, measured, expected, stderr])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new("rabi.csv", &["duration_ns", "p_one_measured", "p_one_expected", "stderr"]);
    for r in &rows {
        table.push_floats(&[r[0] * 1e9, r[1], r[2], r[3]]);
    }
    let y: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let dt = times[1] - times[0];
    let fit = fit_cosine(&times, &y, (PI / q.rabi_max_time, PI / dt))?;

    let eta = p.readout.pumping_efficiency;
    let mut s = Summary::default();
    s.insert("configured_rabi_mhz", q.rabi_frequency / (2.0 * PI * 1e6));
    s.insert("fitted_rabi_mhz", fit.omega / (2.0 * PI * 1e6));
    s.insert("fitted_rabi_error_mhz", fit.omega_error / (2.0 * PI * 1e6));
    s.insert("fit_offset", fit.offset);
    s.insert("fit_amplitude", fit.amplitude);
    let amp_err = fit.offset_error.hypot(fit.amplitude_error);
    s.insert("fringe_floor", fit.offset - fit.amplitude.abs());
    s.insert("fringe_ceiling", fit.offset + fit.amplitude.abs());
    s.insert("fringe_extreme_error", amp_err);
    s.insert("expected_floor", absent_probability(eta.min(1.0 - eta), &p.readout));
    s.insert("expected_ceiling", absent_probability(eta.max(1.0 - eta), &p.readout));
    s.insert("residual_rms", fit.residual_rms);
    Ok(Outputs { tables: vec![table], summary: s })
}

fn ramsey(p: &Parameters, samples: u64, seed: u64) -> Result<Outputs> {
    let model = &p.dephasing;
    let delays = linspace(0.0, p.qubit.ramsey_max_delay, p.qubit.sweep_points);
    // One set of sampled detunings reused at every delay.
    let mut rng = substream(derive_seed(seed, "ramsey"), 0);
    let detunings: Vec<f64> = (0..samples).map(|_| model.sample_detuning(&mut rng)).collect();
    let mut header = vec!["delay_us", "contrast", "p_zero"];
    if samples > 0 {
        header.extend(["sampled_contrast", "sampled_contrast_stderr"]);
    }
    let mut table = Table::new("ramsey.csv", &header);
    for &t in &delays {
        let mut row = vec![t * 1e6, ramsey_contrast(t, model)?, ramsey_signal(t, model, 0.0)?];
        if samples > 0 {
            let decay = model.irreversible_decay(t);
            let xs: Vec<f64> = detunings.iter().map(|d| decay * (d * t).cos()).collect();
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
            row.extend([m, (var / xs.len() as f64).sqrt()]);
        }
        table.push_floats(&row);
    }
    let mut s = Summary::default();
    s.insert("inhomogeneous_tau_us", model.inhomogeneous_tau * 1e6);
    s.insert("contrast_at_inhomogeneous_tau", ramsey_contrast(model.inhomogeneous_tau, model)?);
    Ok(Outputs { tables: vec![table], summary: s })
}

fn echo(p: &Parameters) -> Result<Outputs> {
    let model = &p.dephasing;
    let mut table = Table::new("echo.csv", &["total_time_ms", "echo_amplitude", "ramsey_contrast"]);
    for t in linspace(0.0, p.qubit.echo_max_time, p.qubit.sweep_points) {
        table.push_floats(&[t * 1e3, spin_echo_signal(t, t / 2.0, model)?, ramsey_contrast(t, model)?]);
    }
    let mut s = Summary::default();
    s.insert("echo_at_40ms", spin_echo_signal(40e-3, 20e-3, model)?);
    s.insert("ramsey_contrast_at_inhomogeneous_tau", ramsey_contrast(model.inhomogeneous_tau, model)?);
    Ok(Outputs { tables: vec![table], summary: s })
}

fn transfer(p: &Parameters) -> Result<Outputs> {
    let mut ratios = vec![0.25, 0.5, 1.0, 2.0, 4.0, p.transport.depth_ratio];
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();
    let mut table = Table::new(
        "transfer.csv",
        &["depth_ratio", "contrast", "no_transfer_contrast", "phase_shift_rad", "fringe_phase_shift_rad"],
    );
    let mut worst: f64 = 0.0;
    for r in ratios {
        let plan = crate::qubit::TransportPlan { depth_ratio: r, ..p.transport };
        let res = transfer_sequence(&p.dephasing, &plan)?;
        worst = worst.max((res.contrast - res.no_transfer_contrast).abs());
        table.push_floats(&[r, res.contrast, res.no_transfer_contrast, res.phase_shift, res.fringe_phase_shift]);
    }
    let res = transfer_sequence(&p.dephasing, &p.transport)?;
    let mut s = Summary::default();
    s.insert("contrast", res.contrast);
    s.insert("no_transfer_contrast", res.no_transfer_contrast);
    s.insert("phase_shift_rad", res.phase_shift);
    s.insert("max_contrast_deviation", worst);
    Ok(Outputs { tables: vec![table], summary: s })
}

fn transport(p: &Parameters) -> Result<Outputs> {
    let plan = &p.transport;
    let reference = stationary_echo(plan, &p.dephasing)?;
    let mut table = Table::new("transport.csv", &["displacement_um", "echo_amplitude", "stationary_echo"]);
    let mut worst: f64 = 0.0;
    for d in linspace(0.0, plan.max_displacement, p.qubit.sweep_points) {
        let e = transport_echo(plan, &p.dephasing, d)?;
        worst = worst.max((e - reference).abs());
        table.push_floats(&[d * 1e6, e, reference]);
    }
    let mut s = Summary::default();
    s.insert("stationary_echo", reference);
    s.insert("max_deviation_from_stationary", worst);
    Ok(Outputs { tables: vec![table], summary: s })
}

fn fluorescence(p: &Parameters, seed: u64) -> Result<Outputs> {
    let t = &p.trap;
    let occ = simulate_occupancy(&t.process, t.duration, derive_seed(seed, "occupancy"))?;
    let trace =
        fluorescence_trace(&occ, t.background_rate, t.atom_rate, t.process.bin_width, derive_seed(seed, "fluorescence"))?;
    let stationary = t.process.stationary_occupancy();
    let threshold = trace.mixture(stationary).optimal_threshold();
    let class = classify_occupancy(&trace, threshold);

    let w = t.process.bin_width;
    let mut series = Table::new("fluorescence_trace.csv", &["time_s", "counts", "occupancy", "classified"]);
    for (i, (&c, &label)) in trace.counts.iter().zip(&class.labels).enumerate() {
        let a = i as f64 * w;
        series.rows.push(vec![
            super::output::fmt_float(a),
            c.to_string(),
            super::output::fmt_float(occ.integrated_level(a, a + w) / w),
            label.to_string(),
        ]);
    }
    let hist = count_histogram(&trace.counts);
    let fitted = trace.mixture(class.occupied_fraction());
    let mut histogram = Table::new("fluorescence_histogram.csv", &["counts", "bins", "mixture_expected"]);
    for (k, &n) in hist.iter().enumerate() {
        histogram.rows.push(vec![
            k.to_string(),
            n.to_string(),
            super::output::fmt_float(fitted.pmf(k as u64) * trace.counts.len() as f64),
        ]);
    }
    let mut s = Summary::default();
    s.insert("threshold", threshold as f64);
    s.insert("misclassification", class.misclassification);
    s.insert("occupied_fraction", class.occupied_fraction());
    s.insert("true_mean_occupancy", occ.mean_level());
    s.insert("stationary_occupancy", stationary);
    s.insert("max_occupancy", occ.max_level() as f64);
    s.insert("events", occ.event_count() as f64);
    Ok(Outputs { tables: vec![series, histogram], summary: s })
}

fn g2(p: &Parameters, trials: u64, seed: u64) -> Result<Outputs> {
    let e = &p.emitter;
    let records = quantum_jump_trials(e, trials as usize, derive_seed(seed, "emission"))?;
    let binning = G2Binning {
        pulse_period: e.pulse_period,
        window: p.g2.window,
        bins_per_period: p.g2.bins_per_period,
        pulses_per_train: e.pulses_per_train,
    };
    let hist = g2_histogram(&records, &p.detection, &binning, derive_seed(seed, "g2"))?;
    let mut table = Table::new("g2.csv", &["delay_bin_start_ns", "counts"]);
    for (center, c) in hist.rows() {
        table.rows.push(vec![super::output::fmt_float((center - 0.5 * binning.bin_width()) * 1e9), c.to_string()]);
    }

    let (mut pulses, mut multi, mut emitted) = (0u64, 0u64, 0u64);
    for r in &records {
        for n in r.counts_per_pulse(e.pulse_period, e.pulses_per_train) {
            pulses += 1;
            emitted += n as u64;
            multi += u64::from(n >= 2);
        }
    }
    let dist = counting::photon_number_distribution(e)?;
    let lags = hist.side_lags();
    let mut s = Summary::default();
    s.insert("records", records.len() as f64);
    s.insert("emitted_photons", emitted as f64);
    s.insert("detected_photons", hist.detected_photons as f64);
    s.insert("zero_delay_coincidences", hist.peak(0) as f64);
    if !lags.is_empty() {
        let side = lags.iter().map(|&m| hist.peak(m) as f64).sum::<f64>() / lags.len() as f64;
        s.insert("mean_side_peak_coincidences", side);
    }
    if let Some(r) = hist.ratio() {
        s.insert("zero_to_side_ratio", r);
    }
    s.insert("multi_photon_fraction", multi as f64 / pulses as f64);
    s.insert("oracle_two_photon_probability", dist[2]);
    // With at most two photons per pulse, g²(0) = 2 P(2) / ⟨n⟩².
    let mean_n = dist[1] + 2.0 * dist[2];
    s.insert("oracle_g2_zero", 2.0 * dist[2] / (mean_n * mean_n));
    if let Some(r) = expected_ratio(&dist, &binning, e.excited_lifetime) {
        s.insert("oracle_ratio", r);
    }
    Ok(Outputs { tables: vec![table], summary: s })
}

fn hom_sweep(p: &Parameters) -> Result<Outputs> {
    let h = &p.hom;
    let cfg = p.herald.config;
    let mut sweep = Table::new("hom_sweep.csv", &["overlap_sq", "coincidence_prob", "herald_prob", "fidelity"]);
    for m in linspace(0.0, 1.0, h.points) {
        let pair = PhotonModePair::with_overlap_sq(m)?;
        let out = herald_filter(&pair, &cfg)?;
        sweep.push_floats(&[m, hom_coincidence_probability(&pair)?, out.herald_probability, out.fidelity_to_singlet]);
    }
    let displacements = linspace(-h.max_displacement, h.max_displacement, 2 * h.points - 1);
    let curve = coincidence_vs_displacement(h.mode_waist, &displacements, h.max_visibility)?;
    let mut disp = Table::new("hom_displacement.csv", &["displacement_um", "normalized_coincidence"]);
    for &(d, c) in &curve {
        disp.push_floats(&[d * 1e6, c]);
    }
    let at_zero = coincidence_vs_displacement(h.mode_waist, &[0.0], h.max_visibility)?[0].1;
    let mut s = Summary::default();
    s.insert("normalized_coincidence_at_zero", at_zero);
    s.insert("visibility", 1.0 - at_zero);
    s.insert("mode_waist_um", h.mode_waist * 1e6);
    Ok(Outputs { tables: vec![sweep, disp], summary: s })
}

fn herald(p: &Parameters) -> Result<Outputs> {
    let pair = PhotonModePair::with_overlap_sq(p.herald.overlap_sq)?;
    let out = herald_filter(&pair, &p.herald.config)?;
    let mut state = Table::new("herald_state.csv", &["row", "col", "re", "im"]);
    if let Some(rho) = &out.conditioned_state {
        for r in 0..rho.dim() {
            for c in 0..rho.dim() {
                let z = rho.entry(r, c);
                state.rows.push(vec![
                    r.to_string(),
                    c.to_string(),
                    super::output::fmt_float(z.re),
                    super::output::fmt_float(z.im),
                ]);
            }
        }
    }
    let mut sectors = Table::new("herald_sectors.csv", &["sector", "coincidence_prob"]);
    for sector in PhotonSector::ALL {
        sectors.rows.push(vec![
            sector.name().to_string(),
            super::output::fmt_float(sector_coincidence_probability(&pair, sector)?),
        ]);
    }
    let mut s = Summary::default();
    s.insert("heralded", f64::from(u8::from(out.heralded)));
    s.insert("herald_probability", out.herald_probability);
    s.insert("fidelity_to_singlet", out.fidelity_to_singlet);
    s.insert("overlap_sq", p.herald.overlap_sq);
    Ok(Outputs { tables: vec![state, sectors], summary: s })
}

fn rate(p: &Parameters) -> Result<Outputs> {
    let cfg = &p.herald.config;
    let mut etas: Vec<f64> = (0..=12).map(|k| 10f64.powf(-3.0 + 0.25 * k as f64)).collect();
    etas.push(cfg.per_photon_detection);
    etas.sort_by(f64::total_cmp);
    etas.dedup();
    let mut table = Table::new(
        "rate.csv",
        &["per_photon_detection", "efficiency_per_attempt", "pairs_per_second", "mean_pair_interval_s"],
    );
    for eta in etas {
        let r = entanglement_rate(&HeraldConfig { per_photon_detection: eta, ..*cfg }, p.herald.attempt_rate)?;
        table.push_floats(&[eta, r.efficiency_per_attempt, r.pairs_per_second, r.mean_pair_interval]);
    }
    let r = entanglement_rate(cfg, p.herald.attempt_rate)?;
    let mut s = Summary::default();
    s.insert("efficiency_per_attempt", r.efficiency_per_attempt);
    s.insert("pairs_per_second", r.pairs_per_second);
    s.insert("mean_pair_interval_s", r.mean_pair_interval);
    s.insert("attempt_rate_hz", p.herald.attempt_rate);
    Ok(Outputs { tables: vec![table], summary: s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_experiment_runs_in_memory() {
        for e in Experiment::ALL {
            let mut cfg = ExperimentConfig::new(e);
            match e {
                Experiment::G2 => cfg.trials = Some(200),
                Experiment::Ramsey => cfg.trials = Some(100),
                Experiment::Rabi => cfg.trials = Some(20),
                Experiment::Fluorescence => {
                    cfg.overrides.insert("trap.duration_s".into(), toml::Value::Integer(5));
                }
                _ => {}
            }
            let out = simulate(&cfg).unwrap_or_else(|err| panic!("{}: {err}", e.name()));
            assert!(!out.tables.is_empty());
            assert!(out.summary.0.values().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn invalid_config_is_refused() {
        let mut cfg = ExperimentConfig::new(Experiment::Transfer);
        cfg.overrides.insert("transport.depth_ratio".into(), toml::Value::Integer(0));
        assert!(matches!(simulate(&cfg), Err(Error::InvalidParameters(v)) if v.contains(&"depth_ratio > 0".to_string())));
    }
}
