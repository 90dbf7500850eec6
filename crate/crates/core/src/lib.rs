//! Seeded simulation of single-atom optical-tweezer experiments.
//!
//! The crate is split along the experimental pipeline:
//!
//! * [`state`] and [`fock`]: exact linear algebra on small composite
//!   Hilbert spaces (atoms and photonic modes).
//! * [`qubit`]: Raman rotations, Ramsey and spin-echo sequences, trap
//!   hand-off and transport of a hyperfine qubit.
//! * [`trap`]: single-atom loading with collisional blockade, fluorescence
//!   traces, threshold discrimination, optical pumping and push-out readout.
//! * [`emission`]: quantum-jump trajectories of a pulsed two-level emitter,
//!   photon-counting master equation, detection thinning and g² histograms.
//! * [`herald`]: two-photon interference with partial mode overlap, the
//!   atom-photon Bell decomposition, coincidence heralding and pair rates.
//! * [`harness`]: configuration, experiment dispatch and CSV/JSON output.
//!
//! Every stochastic routine takes an explicit seed; trials draw from
//! independent counter-based substreams (see [`rng`]).

pub mod emission;
pub mod error;
pub mod fock;
pub mod harness;
pub mod herald;
pub mod qubit;
pub mod rng;
pub mod state;
pub mod stats;
pub mod trap;

pub use error::{Error, Result};
pub use num_complex::Complex64;
