//! Trap hand-off and transport of a qubit held in superposition.
//!
//! The differential light shift between the qubit states scales with trap
//! depth. During a hand-off the atom sees the summed depth of both tweezers;
//! during transport the shift follows a configurable position profile along
//! a sinusoidal-velocity trajectory. Only the resulting phases enter the
//! Ramsey/echo signals.

use std::f64::consts::{FRAC_PI_2, PI};

use super::dephasing::DephasingModel;
use super::sequence::{fringe, spin_echo_signal, Step};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TransportPlan {
    /// Largest transport excursion from the lens axis (m).
    pub max_displacement: f64,
    /// Duration of the out-and-back transport (s).
    pub round_trip_time: f64,
    /// Time spent in the second tweezer during a hand-off (s).
    pub dwell_time: f64,
    /// Depth of the second tweezer relative to the first.
    pub depth_ratio: f64,
    /// Duration of each linear depth ramp of the hand-off (s).
    pub ramp_time: f64,
    /// Differential light shift at unit relative depth (rad/s).
    pub differential_shift: f64,
    /// Displacement at which the on-axis shift profile falls to zero (m).
    pub falloff_length: f64,
    /// Detuning kick per unit displacement acquired at the turning point
    /// (rad/s per m). Zero for ideal, heating-free transport.
    pub heating: f64,
}

impl Default for TransportPlan {
    fn default() -> Self {
        TransportPlan {
            max_displacement: 9e-6,
            round_trip_time: 6e-3,
            dwell_time: 200e-6,
            depth_ratio: 1.0,
            ramp_time: 0.0,
            differential_shift: 2.0 * PI * 2.0e3,
            falloff_length: 50e-6,
            heating: 0.0,
        }
    }
}

impl TransportPlan {
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.max_displacement >= 0.0) {
            v.push("max_displacement >= 0".to_string());
        }
        for (name, x) in [
            ("round_trip_time", self.round_trip_time),
            ("dwell_time", self.dwell_time),
            ("ramp_time", self.ramp_time),
        ] {
            if !(x >= 0.0 && x.is_finite()) {
                v.push(format!("{name} >= 0"));
            }
        }
        if !(self.depth_ratio > 0.0 && self.depth_ratio.is_finite()) {
            v.push("depth_ratio > 0".to_string());
        }
        if !(self.falloff_length > 0.0) {
            v.push("falloff_length > 0".to_string());
        }
        if !(self.heating >= 0.0) {
            v.push("heating >= 0".to_string());
        }
        if !self.differential_shift.is_finite() {
            v.push("differential_shift finite".to_string());
        }
        v
    }

    fn checked(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(v))
        }
    }

    /// Ramsey delay of the hand-off sequence: ramp, dwell, ramp back.
    pub fn transfer_delay(&self) -> f64 {
        self.dwell_time + 2.0 * self.ramp_time
    }

    /// Summed relative depth seen by the atom at time `t` of the hand-off.
    pub fn transfer_depth_at(&self, t: f64) -> f64 {
        let r = self.depth_ratio;
        let ramp = self.ramp_time;
        let end = self.transfer_delay();
        if t <= 0.0 || t >= end {
            1.0
        } else if t < ramp {
            1.0 + (r - 1.0) * t / ramp
        } else if t <= ramp + self.dwell_time {
            r
        } else {
            1.0 + (r - 1.0) * (end - t) / ramp
        }
    }

    /// Extra differential phase accumulated during the hand-off relative to
    /// staying in the first tweezer. Exact for linear ramps.
    pub fn transfer_phase(&self) -> f64 {
        self.differential_shift * (self.depth_ratio - 1.0) * (self.dwell_time + self.ramp_time)
    }
}

/// Result of a hand-off Ramsey experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferResult {
    /// Ramsey contrast with the hand-off inserted.
    pub contrast: f64,
    /// Ramsey contrast at the same delay without a hand-off.
    pub no_transfer_contrast: f64,
    /// Integrated differential light-shift difference (rad).
    pub phase_shift: f64,
    /// Shift of the fringe phase relative to the no-transfer fringe (rad),
    /// read off the simulated signal.
    pub fringe_phase_shift: f64,
}

/// Ramsey sequence with the atom handed to a second tweezer and back between
/// the two π/2 pulses.
pub fn transfer_sequence(model: &DephasingModel, plan: &TransportPlan) -> Result<TransferResult> {
    plan.checked()?;
    model.checked()?;
    let delay = plan.transfer_delay();
    let phase_shift = plan.transfer_phase();
    let open = Step::Pulse { area: FRAC_PI_2, phase: 0.0 };
    let with = fringe(
        &[open, Step::Free { duration: delay }, Step::Phase { radians: phase_shift }],
        FRAC_PI_2,
        model,
        0.0,
    );
    let without = fringe(&[open, Step::Free { duration: delay }], FRAC_PI_2, model, 0.0);
    let mut dphi = with.phase - without.phase;
    dphi = (dphi + PI).rem_euclid(2.0 * PI) - PI;
    Ok(TransferResult {
        contrast: with.contrast,
        no_transfer_contrast: without.contrast,
        phase_shift,
        fringe_phase_shift: dphi,
    })
}

/// Differential light shift as a function of displacement and relative depth.
pub trait ShiftProfile {
    fn shift(&self, displacement: f64, relative_depth: f64) -> f64;
}

/// `δ(x, U) = δ₀ · U · (1 − (x/L)²)`: depth loss away from the lens axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFalloff {
    pub on_axis_shift: f64,
    pub falloff_length: f64,
}

impl ShiftProfile for QuadraticFalloff {
    fn shift(&self, displacement: f64, relative_depth: f64) -> f64 {
        self.on_axis_shift * relative_depth * (1.0 - (displacement / self.falloff_length).powi(2))
    }
}

impl<F: Fn(f64, f64) -> f64> ShiftProfile for F {
    fn shift(&self, displacement: f64, relative_depth: f64) -> f64 {
        self(displacement, relative_depth)
    }
}

/// Position along an out-and-back move of amplitude `amplitude` lasting
/// `period`: `x(t) = A (1 − cos(2πt/T))/2`, whose velocity is sinusoidal and
/// whose turning point is at `T/2`.
pub fn sinusoidal_position(t: f64, amplitude: f64, period: f64) -> f64 {
    0.5 * amplitude * (1.0 - (2.0 * PI * t / period).cos())
}

/// Composite Simpson quadrature of `f` on `[a, b]` with `intervals` (rounded
/// up to even) sub-intervals.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

const PHASE_INTERVALS: usize = 2000;

/// Extra phases (first half, second half) accumulated while transported to
/// `displacement` and back, relative to a stationary atom on axis.
pub fn transport_phases(profile: &dyn ShiftProfile, plan: &TransportPlan, displacement: f64) -> (f64, f64) {
    let period = plan.round_trip_time;
    let rel = |t: f64| {
        profile.shift(sinusoidal_position(t, displacement, period), 1.0) - profile.shift(0.0, 1.0)
    };
    let half = period / 2.0;
    (
        integrate(rel, 0.0, half, PHASE_INTERVALS),
        integrate(rel, half, period, PHASE_INTERVALS),
    )
}

/// Echo amplitude of the moving-qubit experiment: π/2 at the start, π at the
/// turning point, π/2 on return.
pub fn transport_echo(plan: &TransportPlan, model: &DephasingModel, displacement: f64) -> Result<f64> {
    plan.checked()?;
    model.checked()?;
    if !(displacement.abs() <= plan.max_displacement) {
        return Err(Error::OutOfRange(format!(
            "displacement {displacement} exceeds max_displacement {}",
            plan.max_displacement
        )));
    }
    let profile = QuadraticFalloff {
        on_axis_shift: plan.differential_shift,
        falloff_length: plan.falloff_length,
    };
    let (out_phase, back_phase) = transport_phases(&profile, plan, displacement);
    let half = plan.round_trip_time / 2.0;
    let steps = [
        Step::Pulse { area: FRAC_PI_2, phase: 0.0 },
        Step::Free { duration: half },
        Step::Phase { radians: out_phase },
        Step::Pulse { area: PI, phase: 0.0 },
        Step::Free { duration: half },
        Step::Phase { radians: back_phase },
    ];
    let echo = fringe(&steps, FRAC_PI_2, model, 0.0).contrast.min(1.0);
    // A Gaussian detuning kick of width heating·|d| at the turning point is
    // not refocused during the return half.
    let kick = plan.heating * displacement.abs() * half;
    Ok(echo * (-0.5 * kick * kick).exp())
}

/// Stationary reference for [`transport_echo`].
pub fn stationary_echo(plan: &TransportPlan, model: &DephasingModel) -> Result<f64> {
    spin_echo_signal(plan.round_trip_time, plan.round_trip_time / 2.0, model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_traps_leave_phase_untouched() {
        let m = DephasingModel::default();
        let plan = TransportPlan { depth_ratio: 1.0, ..TransportPlan::default() };
        let r = transfer_sequence(&m, &plan).unwrap();
        assert_eq!(r.phase_shift, 0.0);
        assert!((r.contrast - r.no_transfer_contrast).abs() < 1e-12);
    }

    #[test]
    fn deeper_second_trap_shifts_phase_only() {
        let m = DephasingModel::default();
        let plan = TransportPlan { depth_ratio: 2.0, ..TransportPlan::default() };
        let r = transfer_sequence(&m, &plan).unwrap();
        let expected = plan.differential_shift * 200e-6;
        assert!((r.phase_shift - expected).abs() < 1e-12);
        assert!((r.contrast - r.no_transfer_contrast).abs() < 1e-12);
        let wrapped = (expected + PI).rem_euclid(2.0 * PI) - PI;
        assert!((r.fringe_phase_shift.abs() - wrapped.abs()).abs() < 1e-9);
    }

    #[test]
    fn depth_profile_is_continuous() {
        let plan = TransportPlan { depth_ratio: 3.0, ramp_time: 20e-6, ..TransportPlan::default() };
        assert_eq!(plan.transfer_depth_at(0.0), 1.0);
        assert!((plan.transfer_depth_at(10e-6) - 2.0).abs() < 1e-12);
        assert_eq!(plan.transfer_depth_at(100e-6), 3.0);
        assert!((plan.transfer_depth_at(plan.transfer_delay() - 10e-6) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn transport_echo_rejects_large_displacement() {
        let plan = TransportPlan::default();
        assert!(transport_echo(&plan, &DephasingModel::default(), 10e-6).is_err());
    }

    #[test]
    fn transport_phases_cancel_about_turning_point() {
        let plan = TransportPlan::default();
        let p = QuadraticFalloff { on_axis_shift: plan.differential_shift, falloff_length: 20e-6 };
        let (a, b) = transport_phases(&p, &plan, 9e-6);
        assert!(a < 0.0);
        assert!((a - b).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 10);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn closures_are_shift_profiles() {
        let f = |x: f64, u: f64| x + u;
        assert_eq!(ShiftProfile::shift(&f, 1.0, 2.0), 3.0);
    }
}
