use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    /// Constant Rabi frequency for `pulse_duration`.
    Square,
    /// Gaussian envelope with FWHM `pulse_duration`, truncated to a window of
    /// four FWHM centred on the peak.
    Gaussian,
}

impl PulseShape {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "square" => Some(Self::Square),
            "gaussian" => Some(Self::Gaussian),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Square => "square",
            Self::Gaussian => "gaussian",
        }
    }
}

/// Two-level emitter driven by a train of resonant pulses.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EmitterParams {
    /// Upper-state lifetime 1/Γ (s).
    pub excited_lifetime: f64,
    /// Square length or Gaussian FWHM (s).
    pub pulse_duration: f64,
    /// Pulse area (rad).
    pub pulse_area: f64,
    pub pulse_shape: PulseShape,
    /// Spacing between pulse starts (s).
    pub pulse_period: f64,
    pub pulses_per_train: u32,
}

impl Default for EmitterParams {
    fn default() -> Self {
        EmitterParams {
            excited_lifetime: 26e-9,
            pulse_duration: 4e-9,
            pulse_area: PI,
            pulse_shape: PulseShape::Square,
            pulse_period: 200e-9,
            pulses_per_train: 10,
        }
    }
}

impl EmitterParams {
    pub fn decay_rate(&self) -> f64 {
        1.0 / self.excited_lifetime
    }

    /// Time during which the drive is on, measured from the pulse start.
    pub fn pulse_window(&self) -> f64 {
        match self.pulse_shape {
            PulseShape::Square => self.pulse_duration,
            PulseShape::Gaussian => 4.0 * self.pulse_duration,
        }
    }

    /// End of the observation window of a train.
    pub fn train_length(&self) -> f64 {
        self.pulses_per_train as f64 * self.pulse_period
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.excited_lifetime > 0.0 && self.excited_lifetime.is_finite()) {
            v.push("excited_lifetime > 0".to_string());
        }
        if !(self.pulse_duration >= 0.0 && self.pulse_duration.is_finite()) {
            v.push("pulse_duration >= 0".to_string());
        }
        if !(self.pulse_area >= 0.0 && self.pulse_area.is_finite()) {
            v.push("pulse_area >= 0".to_string());
        }
        if !(self.pulse_period > self.pulse_window()) {
            v.push("pulse_period > pulse_duration".to_string());
        }
        if self.pulses_per_train == 0 {
            v.push("pulses_per_train >= 1".to_string());
        }
        v
    }

    pub fn checked(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(EmitterParams::default().validate().is_empty());
        assert!((EmitterParams::default().decay_rate() - 1.0 / 26e-9).abs() < 1.0);
    }

    #[test]
    fn violations_are_named() {
        let p = EmitterParams { excited_lifetime: -1.0, ..EmitterParams::default() };
        assert_eq!(p.validate(), vec!["excited_lifetime > 0"]);
        let p = EmitterParams { pulse_period: 3e-9, ..EmitterParams::default() };
        assert_eq!(p.validate(), vec!["pulse_period > pulse_duration"]);
        let p = EmitterParams { pulse_shape: PulseShape::Gaussian, pulse_period: 10e-9, ..EmitterParams::default() };
        assert!(!p.validate().is_empty());
    }
}
