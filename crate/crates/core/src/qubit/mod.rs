//! Hyperfine qubit driven by Raman pulses: rotations, Ramsey and spin-echo
//! sequences, trap hand-off and transport.
//!
//! Phase convention: a pulse of area θ and phase φ is
//! `exp(-i θ/2 (cos φ σx + sin φ σy))` with `σz |0⟩ = |0⟩`, so a π/2 pulse at
//! phase 0 maps `|0⟩ → (|0⟩ − i|1⟩)/√2`. A detuning δ during free evolution
//! multiplies `|0⟩` by `e^{-iδt/2}` and `|1⟩` by `e^{+iδt/2}`.

mod dephasing;
mod pulse;
mod sequence;
mod transport;

pub use dephasing::{DephasingKind, DephasingModel};
pub use pulse::{rabi_rotation, rabi_rotation_density, PulseSpec};
pub use sequence::{
    echo_signal, fringe, ramsey_contrast, ramsey_probability_for_detuning, ramsey_signal,
    spin_echo_signal, Fringe, Step,
};
pub use transport::{
    integrate, sinusoidal_position, stationary_echo, transfer_sequence, transport_echo, transport_phases,
    QuadraticFalloff, ShiftProfile, TransferResult, TransportPlan,
};
