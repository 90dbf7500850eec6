use std::f64::consts::PI;

use toml::Value;

use crate::emission::{DetectionParams, EmitterParams, PulseShape};
use crate::herald::{HeraldConfig, DEFAULT_MODE_WAIST};
use crate::qubit::{DephasingKind, DephasingModel, TransportPlan};
use crate::trap::{OccupancyProcess, ReadoutParams};

/// Qubit-sequence sweep settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSettings {
    /// Resonant Rabi frequency Ω (rad/s).
    pub rabi_frequency: f64,
    pub rabi_max_time: f64,
    pub rabi_points: usize,
    pub ramsey_max_delay: f64,
    pub echo_max_time: f64,
    pub sweep_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapSettings {
    pub process: OccupancyProcess,
    /// Simulated time (s).
    pub duration: f64,
    pub background_rate: f64,
    pub atom_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G2Settings {
    pub window: f64,
    pub bins_per_period: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomSettings {
    pub mode_waist: f64,
    /// `|⟨f_A|f_B⟩|²` at zero displacement.
    pub max_visibility: f64,
    pub max_displacement: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldSettings {
    pub config: HeraldConfig,
    pub overlap_sq: f64,
    pub attempt_rate: f64,
}

/// Every tunable of every experiment, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub qubit: QubitSettings,
    pub dephasing: DephasingModel,
    pub transport: TransportPlan,
    pub trap: TrapSettings,
    pub readout: ReadoutParams,
    pub emitter: EmitterParams,
    pub detection: DetectionParams,
    pub g2: G2Settings,
    pub hom: HomSettings,
    pub herald: HeraldSettings,
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters {
            qubit: QubitSettings {
                rabi_frequency: 2.0 * PI * 6.7e6,
                rabi_max_time: 750e-9,
                rabi_points: 61,
                ramsey_max_delay: 2e-3,
                echo_max_time: 60e-3,
                sweep_points: 41,
            },
            dephasing: DephasingModel::default(),
            transport: TransportPlan::default(),
            trap: TrapSettings {
                process: OccupancyProcess::default(),
                duration: 200.0,
                background_rate: 1000.0,
                atom_rate: 10000.0,
            },
            readout: ReadoutParams::default(),
            emitter: EmitterParams::default(),
            detection: DetectionParams::default(),
            g2: G2Settings { window: 1.1e-6, bins_per_period: 20 },
            hom: HomSettings { mode_waist: DEFAULT_MODE_WAIST, max_visibility: 0.6, max_displacement: 3e-6, points: 21 },
            herald: HeraldSettings { config: HeraldConfig::default(), overlap_sq: 1.0, attempt_rate: 1000.0 },
        }
    }
}

/// Override keys and what they set. Units are part of the key.
pub const PARAMETER_KEYS: &[(&str, &str)] = &[
    ("qubit.rabi_frequency_mhz", "Rabi frequency Ω/2π (MHz)"),
    ("qubit.rabi_max_time_ns", "longest pulse of the Rabi sweep (ns)"),
    ("qubit.rabi_points", "pulse lengths in the Rabi sweep"),
    ("qubit.ramsey_max_delay_us", "longest Ramsey delay (µs)"),
    ("qubit.echo_max_time_ms", "longest spin-echo sequence (ms)"),
    ("qubit.sweep_points", "points in Ramsey, echo, transfer and transport sweeps"),
    ("dephasing.kind", "gaussian_static or thermal_3d"),
    ("dephasing.inhomogeneous_tau_us", "1/e time of the Ramsey contrast (µs)"),
    ("dephasing.irreversible_tau_ms", "irreversible decay time (ms); inf disables"),
    ("dephasing.irreversible_exponent", "exponent p of exp(-(t/τ)^p)"),
    ("dephasing.mean_detuning_khz", "mean static detuning /2π (kHz)"),
    ("transport.max_displacement_um", "largest displacement (µm)"),
    ("transport.round_trip_time_ms", "out-and-back transport time (ms)"),
    ("transport.dwell_time_us", "time held in the second tweezer (µs)"),
    ("transport.depth_ratio", "second tweezer depth over the first"),
    ("transport.ramp_time_us", "hand-off depth ramp (µs)"),
    ("transport.differential_shift_khz", "differential light shift /2π at unit depth (kHz)"),
    ("transport.falloff_length_um", "displacement where the shift profile vanishes (µm)"),
    ("transport.heating_khz_per_um", "turning-point detuning kick /2π per displacement (kHz/µm)"),
    ("trap.loading_rate_hz", "single-atom loading rate (1/s)"),
    ("trap.loss_rate_hz", "single-atom loss rate (1/s)"),
    ("trap.blockade", "pair ejection on a second arrival (bool)"),
    ("trap.bin_width_ms", "fluorescence bin (ms)"),
    ("trap.duration_s", "simulated trap time (s)"),
    ("trap.background_rate_hz", "background counts/s"),
    ("trap.atom_rate_hz", "extra counts/s from one atom"),
    ("readout.pumping_efficiency", "optical pumping into |0⟩"),
    ("readout.pushout_efficiency", "push-out probability of |1⟩"),
    ("readout.background_loss", "loss probability of |0⟩"),
    ("emitter.excited_lifetime_ns", "upper-state lifetime (ns)"),
    ("emitter.pulse_duration_ns", "excitation pulse length (ns)"),
    ("emitter.pulse_area_pi", "pulse area in units of π"),
    ("emitter.pulse_shape", "square or gaussian"),
    ("emitter.pulse_period_ns", "pulse separation (ns)"),
    ("emitter.pulses_per_train", "pulses per trial"),
    ("detection.collection_efficiency", "collected fraction of emitted photons"),
    ("detection.detector_efficiency", "detector quantum efficiency"),
    ("detection.dark_rate_hz", "dark counts/s"),
    ("g2.window_ns", "largest |delay| histogrammed (ns)"),
    ("g2.bins_per_period", "histogram bins per pulse period"),
    ("hom.mode_waist_um", "Gaussian mode waist (µm)"),
    ("hom.max_visibility", "mode overlap |⟨f_A|f_B⟩|² at zero displacement"),
    ("hom.max_displacement_um", "displacement sweep half-range (µm)"),
    ("hom.points", "points in the overlap and displacement sweeps"),
    ("herald.overlap_sq", "mode overlap |⟨f_A|f_B⟩|² for the herald run"),
    ("herald.coincidence_window_ns", "coincidence gate (ns)"),
    ("herald.two_photon_contamination", "false-herald probability"),
    ("herald.per_photon_detection", "collection × detector efficiency"),
    ("herald.frequency_resolved", "herald only on one ν₁ and one ν₂ photon (bool)"),
    ("herald.emission_probability", "photon emission probability per attempt"),
    ("herald.attempt_rate_hz", "excitation attempts per second"),
];

fn float(key: &str, v: &Value) -> Result<f64, String> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(n) => Ok(*n as f64),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        _ => Err(format!("{key}: expected a number")),
    }
}

fn count(key: &str, v: &Value) -> Result<u64, String> {
    match v {
        Value::Integer(n) if *n >= 0 => Ok(*n as u64),
        _ => Err(format!("{key}: expected a non-negative integer")),
    }
}

fn flag(key: &str, v: &Value) -> Result<bool, String> {
    v.as_bool().ok_or_else(|| format!("{key}: expected true or false"))
}

fn text<'v>(key: &str, v: &'v Value) -> Result<&'v str, String> {
    v.as_str().ok_or_else(|| format!("{key}: expected a string"))
}

impl Parameters {
    /// Applies one override. Unknown keys and ill-typed values are errors.
    pub fn set(&mut self, key: &str, v: &Value) -> Result<(), String> {
        const MHZ: f64 = 2.0 * PI * 1e6;
        const KHZ: f64 = 2.0 * PI * 1e3;
        let f = |v: &Value| float(key, v);
        match key {
            "qubit.rabi_frequency_mhz" => self.qubit.rabi_frequency = f(v)? * MHZ,
            "qubit.rabi_max_time_ns" => self.qubit.rabi_max_time = f(v)? * 1e-9,
            "qubit.rabi_points" => self.qubit.rabi_points = count(key, v)? as usize,
            "qubit.ramsey_max_delay_us" => self.qubit.ramsey_max_delay = f(v)? * 1e-6,
            "qubit.echo_max_time_ms" => self.qubit.echo_max_time = f(v)? * 1e-3,
            "qubit.sweep_points" => self.qubit.sweep_points = count(key, v)? as usize,
            "dephasing.kind" => {
                let name = text(key, v)?;
                self.dephasing.kind =
                    DephasingKind::parse(name).ok_or_else(|| format!("{key}: unknown model {name:?}"))?;
            }
            "dephasing.inhomogeneous_tau_us" => self.dephasing.inhomogeneous_tau = f(v)? * 1e-6,
            "dephasing.irreversible_tau_ms" => self.dephasing.irreversible_tau = f(v)? * 1e-3,
            "dephasing.irreversible_exponent" => self.dephasing.irreversible_exponent = f(v)?,
            "dephasing.mean_detuning_khz" => self.dephasing.mean_detuning = f(v)? * KHZ,
            "transport.max_displacement_um" => self.transport.max_displacement = f(v)? * 1e-6,
            "transport.round_trip_time_ms" => self.transport.round_trip_time = f(v)? * 1e-3,
            "transport.dwell_time_us" => self.transport.dwell_time = f(v)? * 1e-6,
            "transport.depth_ratio" => self.transport.depth_ratio = f(v)?,
            "transport.ramp_time_us" => self.transport.ramp_time = f(v)? * 1e-6,
            "transport.differential_shift_khz" => self.transport.differential_shift = f(v)? * KHZ,
            "transport.falloff_length_um" => self.transport.falloff_length = f(v)? * 1e-6,
            "transport.heating_khz_per_um" => self.transport.heating = f(v)? * KHZ / 1e-6,
            "trap.loading_rate_hz" => self.trap.process.loading_rate = f(v)?,
            "trap.loss_rate_hz" => self.trap.process.loss_rate = f(v)?,
            "trap.blockade" => self.trap.process.blockade = flag(key, v)?,
            "trap.bin_width_ms" => self.trap.process.bin_width = f(v)? * 1e-3,
            "trap.duration_s" => self.trap.duration = f(v)?,
            "trap.background_rate_hz" => self.trap.background_rate = f(v)?,
            "trap.atom_rate_hz" => self.trap.atom_rate = f(v)?,
            "readout.pumping_efficiency" => self.readout.pumping_efficiency = f(v)?,
            "readout.pushout_efficiency" => self.readout.pushout_efficiency = f(v)?,
            "readout.background_loss" => self.readout.background_loss = f(v)?,
            "emitter.excited_lifetime_ns" => self.emitter.excited_lifetime = f(v)? * 1e-9,
            "emitter.pulse_duration_ns" => self.emitter.pulse_duration = f(v)? * 1e-9,
            "emitter.pulse_area_pi" => self.emitter.pulse_area = f(v)? * PI,
            "emitter.pulse_shape" => {
                let name = text(key, v)?;
                self.emitter.pulse_shape =
                    PulseShape::parse(name).ok_or_else(|| format!("{key}: unknown shape {name:?}"))?;
            }
            "emitter.pulse_period_ns" => self.emitter.pulse_period = f(v)? * 1e-9,
            "emitter.pulses_per_train" => {
                self.emitter.pulses_per_train =
                    u32::try_from(count(key, v)?).map_err(|_| format!("{key}: too large"))?
            }
            "detection.collection_efficiency" => self.detection.collection_efficiency = f(v)?,
            "detection.detector_efficiency" => self.detection.detector_efficiency = f(v)?,
            "detection.dark_rate_hz" => self.detection.dark_rate = f(v)?,
            "g2.window_ns" => self.g2.window = f(v)? * 1e-9,
            "g2.bins_per_period" => {
                self.g2.bins_per_period = u32::try_from(count(key, v)?).map_err(|_| format!("{key}: too large"))?
            }
            "hom.mode_waist_um" => self.hom.mode_waist = f(v)? * 1e-6,
            "hom.max_visibility" => self.hom.max_visibility = f(v)?,
            "hom.max_displacement_um" => self.hom.max_displacement = f(v)? * 1e-6,
            "hom.points" => self.hom.points = count(key, v)? as usize,
            "herald.overlap_sq" => self.herald.overlap_sq = f(v)?,
            "herald.coincidence_window_ns" => self.herald.config.coincidence_window = f(v)? * 1e-9,
            "herald.two_photon_contamination" => self.herald.config.two_photon_contamination = f(v)?,
            "herald.per_photon_detection" => self.herald.config.per_photon_detection = f(v)?,
            "herald.frequency_resolved" => self.herald.config.frequency_resolved = flag(key, v)?,
            "herald.emission_probability" => self.herald.config.emission_probability = f(v)?,
            "herald.attempt_rate_hz" => self.herald.attempt_rate = f(v)?,
            _ => return Err(format!("unknown parameter: {key}")),
        }
        Ok(())
    }

    /// Invariant violations across all modules, named after the violated
    /// condition.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let q = &self.qubit;
        if !(q.rabi_frequency > 0.0 && q.rabi_frequency.is_finite()) {
            v.push("rabi_frequency > 0".into());
        }
        if !(q.rabi_max_time > 0.0 && q.rabi_max_time.is_finite()) {
            v.push("rabi_max_time > 0".into());
        }
        if q.rabi_points < 8 {
            v.push("rabi_points >= 8".into());
        }
        if !(q.ramsey_max_delay >= 0.0 && q.ramsey_max_delay.is_finite()) {
            v.push("ramsey_max_delay >= 0".into());
        }
        if !(q.echo_max_time >= 0.0 && q.echo_max_time.is_finite()) {
            v.push("echo_max_time >= 0".into());
        }
        if q.sweep_points < 2 {
            v.push("sweep_points >= 2".into());
        }
        v.extend(self.dephasing.validate());
        v.extend(self.transport.validate());
        v.extend(self.trap.process.validate());
        if !(self.trap.duration > 0.0 && self.trap.duration.is_finite()) {
            v.push("trap duration > 0".into());
        }
        if !(self.trap.background_rate >= 0.0 && self.trap.background_rate.is_finite()) {
            v.push("background_rate >= 0".into());
        }
        if !(self.trap.atom_rate > self.trap.background_rate && self.trap.atom_rate.is_finite()) {
            v.push("atom_rate > background_rate".into());
        }
        v.extend(self.readout.validate());
        v.extend(self.emitter.validate());
        v.extend(self.detection.validate());
        if !(self.g2.window > 0.0 && self.g2.window.is_finite()) {
            v.push("g2 window > 0".into());
        }
        if self.g2.bins_per_period == 0 {
            v.push("bins_per_period >= 1".into());
        }
        let h = &self.hom;
        if !(h.mode_waist > 0.0 && h.mode_waist.is_finite()) {
            v.push("mode_waist > 0".into());
        }
        if !(0.0..=1.0).contains(&h.max_visibility) {
            v.push("max_visibility in [0, 1]".into());
        }
        if !(h.max_displacement >= 0.0 && h.max_displacement.is_finite()) {
            v.push("max_displacement >= 0".into());
        }
        if h.points < 2 {
            v.push("hom points >= 2".into());
        }
        v.extend(self.herald.config.validate());
        if !(0.0..=1.0).contains(&self.herald.overlap_sq) {
            v.push("overlap_sq in [0, 1]".into());
        }
        if !(self.herald.attempt_rate > 0.0 && self.herald.attempt_rate.is_finite()) {
            v.push("attempt_rate > 0".into());
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(key: &str) -> Value {
        match key {
            "dephasing.kind" => Value::String("thermal_3d".into()),
            "emitter.pulse_shape" => Value::String("gaussian".into()),
            "trap.blockade" | "herald.frequency_resolved" => Value::Boolean(false),
            _ => Value::Integer(7),
        }
    }

    #[test]
    fn every_listed_key_is_settable() {
        for (key, _) in PARAMETER_KEYS {
            let mut p = Parameters::default();
            p.set(key, &sample(key)).unwrap_or_else(|e| panic!("{e}"));
            assert_ne!(p, Parameters::default(), "{key} had no effect");
        }
    }

    #[test]
    fn unknown_and_mistyped_keys_fail() {
        let mut p = Parameters::default();
        assert!(p.set("emitter.colour", &Value::Integer(1)).unwrap_err().contains("unknown parameter"));
        assert!(p.set("trap.blockade", &Value::Integer(1)).is_err());
        assert!(p.set("qubit.rabi_points", &Value::Float(1.5)).is_err());
    }

    #[test]
    fn defaults_validate() {
        assert!(Parameters::default().validate().is_empty());
    }

    #[test]
    fn units_are_applied() {
        let mut p = Parameters::default();
        p.set("emitter.pulse_duration_ns", &Value::Integer(4)).unwrap();
        assert!((p.emitter.pulse_duration - 4e-9).abs() < 1e-24);
        p.set("dephasing.irreversible_tau_ms", &Value::String("inf".into())).unwrap();
        assert!(p.dephasing.irreversible_tau.is_infinite());
    }
}
