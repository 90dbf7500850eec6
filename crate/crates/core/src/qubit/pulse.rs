use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{DensityOperator, StateVector};

/// Raman pulse. `area` and `duration` are tied by `area = rabi_frequency · duration`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PulseSpec {
    /// Pulse area (rad).
    pub area: f64,
    /// Drive phase (rad).
    pub phase: f64,
    /// Resonant two-photon Rabi frequency Ω (rad/s).
    pub rabi_frequency: f64,
    /// Raman detuning from the qubit transition (rad/s).
    pub detuning: f64,
    /// Pulse length (s).
    pub duration: f64,
}

impl PulseSpec {
    /// Resonant pulse of the given area; the duration follows from Ω.
    pub fn resonant(area: f64, phase: f64, rabi_frequency: f64) -> Result<Self> {
        Self::new(area, phase, rabi_frequency, 0.0, area / rabi_frequency)
    }

    /// Pulse of fixed length; the area follows from Ω.
    pub fn with_duration(duration: f64, phase: f64, rabi_frequency: f64, detuning: f64) -> Result<Self> {
        Self::new(rabi_frequency * duration, phase, rabi_frequency, detuning, duration)
    }

    pub fn new(area: f64, phase: f64, rabi_frequency: f64, detuning: f64, duration: f64) -> Result<Self> {
        let p = PulseSpec { area, phase, rabi_frequency, detuning, duration };
        let violations = p.validate();
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidParameters(violations))
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.area >= 0.0) {
            v.push("area >= 0".to_string());
        }
        if !(self.rabi_frequency > 0.0) {
            v.push("rabi_frequency > 0".to_string());
        }
        if !(self.duration >= 0.0) {
            v.push("duration >= 0".to_string());
        }
        if !self.phase.is_finite() || !self.detuning.is_finite() {
            v.push("phase and detuning finite".to_string());
        }
        if v.is_empty() {
            let mismatch =
                (self.area - self.rabi_frequency * self.duration).abs() / self.area.max(1e-9);
            if mismatch >= 1e-9 {
                v.push("area = rabi_frequency * duration".to_string());
            }
        }
        v
    }

    /// Propagator `exp(-i H t)` with
    /// `H = (Ω/2)(cos φ σx + sin φ σy) + (Δ/2) σz`.
    pub fn unitary(&self) -> DMatrix<Complex64> {
        let omega_eff = self.rabi_frequency.hypot(self.detuning);
        let theta = omega_eff * self.duration;
        let (nx, ny, nz) = if omega_eff > 0.0 {
            (
                self.rabi_frequency * self.phase.cos() / omega_eff,
                self.rabi_frequency * self.phase.sin() / omega_eff,
                self.detuning / omega_eff,
            )
        } else {
            (0.0, 0.0, 0.0)
        };
        rotation(theta, nx, ny, nz)
    }
}

/// `cos(θ/2) I − i sin(θ/2) n·σ` for a unit axis `n`.
pub(crate) fn rotation(theta: f64, nx: f64, ny: f64, nz: f64) -> DMatrix<Complex64> {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = (theta / 2.0).sin();
    let mi = Complex64::new(0.0, -s);
    DMatrix::from_row_slice(
        2,
        2,
        &[
            c + mi * nz,
            mi * Complex64::new(nx, -ny),
            mi * Complex64::new(nx, ny),
            c - mi * nz,
        ],
    )
}

/// Applies the pulse to a qubit state vector.
pub fn rabi_rotation(state: &StateVector, pulse: &PulseSpec) -> Result<StateVector> {
    if state.dim() != 2 {
        return Err(Error::NotQubit(state.dim()));
    }
    state.apply_unitary(&pulse.unitary())
}

/// Applies the pulse to a qubit density operator.
pub fn rabi_rotation_density(rho: &DensityOperator, pulse: &PulseSpec) -> Result<DensityOperator> {
    if rho.dim() != 2 {
        return Err(Error::NotQubit(rho.dim()));
    }
    rho.evolve(&pulse.unitary())
}
