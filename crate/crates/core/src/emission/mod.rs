//! Pulsed single-photon emission from a driven two-level atom.
//!
//! Trajectories use the waiting-time Monte Carlo wavefunction method with
//! the non-Hermitian Hamiltonian `H = (Ω(t)/2) σx − (iΓ/2)|e⟩⟨e|`, resonant
//! drive in the rotating frame. The drive is piecewise constant, so each
//! segment is propagated with an exact 2×2 exponential. The deterministic
//! counterpart in [`counting`] integrates the photon-number-resolved master
//! equation for the same drive.

pub mod counting;
mod detection;
mod drive;
mod g2;
mod params;
mod trajectory;

pub use detection::{thin_detection, DetectionParams};
pub use drive::{Drive, DriveSegment};
pub use g2::{expected_ratio, g2_histogram, G2Binning, G2Histogram};
pub use params::{EmitterParams, PulseShape};
pub use trajectory::{
    coherent_trial, excited_population_ensemble, quantum_jump_trial, quantum_jump_trials,
    two_photon_probability, EmissionRecord, TwoPhotonEstimate, MIN_TWO_PHOTON_TRIALS,
};
