//! Exact ensemble averages of instantaneous-pulse sequences.
//!
//! For a fixed static detuning δ, every amplitude after a sequence of
//! instantaneous pulses and free evolutions is a finite sum
//! `Σ_j c_j e^{iδ w_j}`. Populations are then quadratic in these sums, and
//! the average over the detuning distribution replaces each `e^{iδ(w_j−w_k)}`
//! by the model's characteristic function. No sampling is involved.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use super::dephasing::DephasingModel;
use super::pulse::rotation;
use crate::error::{Error, Result};

/// One element of a pulse sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    /// Instantaneous rotation of the given area and phase.
    Pulse { area: f64, phase: f64 },
    /// Free evolution under the laser and static detunings.
    Free { duration: f64 },
    /// Deterministic differential phase, applied like `duration · δ`.
    Phase { radians: f64 },
}

/// Final-pulse population of `|0⟩` as a function of the analysis phase φ:
/// `P(φ) = mean − (contrast/2)·cos(φ − phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fringe {
    pub mean: f64,
    pub contrast: f64,
    pub phase: f64,
}

impl Fringe {
    pub fn probability(&self, analysis_phase: f64) -> f64 {
        (self.mean - 0.5 * self.contrast * (analysis_phase - self.phase).cos()).clamp(0.0, 1.0)
    }
}

/// Amplitude as a list of `(w, c)` terms meaning `Σ c e^{iδ w}`.
type Terms = Vec<(f64, Complex64)>;

fn evolve(steps: &[Step]) -> [Terms; 2] {
    let mut amp: [Terms; 2] = [vec![(0.0, Complex64::new(1.0, 0.0))], Vec::new()];
    for step in steps {
        match *step {
            Step::Pulse { area, phase } => {
                let u = rotation(area, phase.cos(), phase.sin(), 0.0);
                let mut next: [Terms; 2] = [Vec::new(), Vec::new()];
                for (row, out) in next.iter_mut().enumerate() {
                    for (col, terms) in amp.iter().enumerate() {
                        let k = u[(row, col)];
                        if k != Complex64::new(0.0, 0.0) {
                            out.extend(terms.iter().map(|&(w, c)| (w, c * k)));
                        }
                    }
                }
                amp = next;
            }
            Step::Free { duration } => {
                amp[0].iter_mut().for_each(|t| t.0 -= duration / 2.0);
                amp[1].iter_mut().for_each(|t| t.0 += duration / 2.0);
            }
            Step::Phase { radians } => {
                let half = Complex64::from_polar(1.0, radians / 2.0);
                amp[0].iter_mut().for_each(|t| t.1 *= half.conj());
                amp[1].iter_mut().for_each(|t| t.1 *= half);
            }
        }
    }
    amp
}

fn averaged_population(terms: &Terms, model: &DephasingModel, laser_detuning: f64) -> f64 {
    let mut p = 0.0;
    for &(wj, cj) in terms {
        for &(wk, ck) in terms {
            let w = wj - wk;
            let avg = Complex64::from_polar(1.0, laser_detuning * w) * model.characteristic(w);
            p += (cj * ck.conj() * avg).re;
        }
    }
    p
}

fn total_free_time(steps: &[Step]) -> f64 {
    steps
        .iter()
        .map(|s| if let Step::Free { duration } = s { *duration } else { 0.0 })
        .sum()
}

/// Fringe obtained by scanning the phase of a final pulse of area
/// `final_area` applied after `prefix`. The static spread is averaged
/// exactly; the irreversible decay over the total free time scales the
/// fringe contrast.
pub fn fringe(prefix: &[Step], final_area: f64, model: &DephasingModel, laser_detuning: f64) -> Fringe {
    let p = |phi: f64| {
        let mut steps = prefix.to_vec();
        steps.push(Step::Pulse { area: final_area, phase: phi });
        averaged_population(&evolve(&steps)[0], model, laser_detuning)
    };
    let (p0, p1, p2, p3) = (p(0.0), p(FRAC_PI_2), p(PI), p(3.0 * FRAC_PI_2));
    let cos_part = p2 - p0;
    let sin_part = p3 - p1;
    let decay = model.irreversible_decay(total_free_time(prefix));
    Fringe {
        mean: 0.5 * (p0 + p2),
        contrast: cos_part.hypot(sin_part) * decay,
        phase: sin_part.atan2(cos_part),
    }
}

fn check_model(model: &DephasingModel) -> Result<()> {
    let v = model.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(v))
    }
}

fn non_negative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {x} must be >= 0")))
    }
}

fn ramsey_steps(delay: f64) -> [Step; 2] {
    [Step::Pulse { area: FRAC_PI_2, phase: 0.0 }, Step::Free { duration: delay }]
}

/// `P(|0⟩)` after π/2 – `delay` – π/2, averaged over the static detuning.
pub fn ramsey_signal(delay: f64, model: &DephasingModel, laser_detuning: f64) -> Result<f64> {
    non_negative("delay", delay)?;
    check_model(model)?;
    Ok(fringe(&ramsey_steps(delay), FRAC_PI_2, model, laser_detuning).probability(0.0))
}

/// Ramsey fringe contrast `C(delay)`, including irreversible decay.
pub fn ramsey_contrast(delay: f64, model: &DephasingModel) -> Result<f64> {
    non_negative("delay", delay)?;
    check_model(model)?;
    Ok(fringe(&ramsey_steps(delay), FRAC_PI_2, model, 0.0).contrast)
}

/// Single-shot `P(|0⟩)` for a known total detuning δ (laser plus static),
/// with the irreversible decay applied to the fringe.
pub fn ramsey_probability_for_detuning(delay: f64, detuning: f64, model: &DephasingModel) -> f64 {
    0.5 - 0.5 * model.irreversible_decay(delay) * (detuning * delay).cos()
}

/// `P(|0⟩)` after π/2 – t₁ – θ – (T − t₁) – π/2, where θ is the refocusing
/// area. θ = 0 degenerates to a Ramsey sequence of length T.
pub fn echo_signal(
    total_time: f64,
    pi_pulse_offset: f64,
    refocus_area: f64,
    model: &DephasingModel,
    laser_detuning: f64,
) -> Result<f64> {
    let steps = echo_steps(total_time, pi_pulse_offset, refocus_area)?;
    check_model(model)?;
    Ok(fringe(&steps, FRAC_PI_2, model, laser_detuning).probability(0.0))
}

fn echo_steps(total_time: f64, pi_pulse_offset: f64, refocus_area: f64) -> Result<[Step; 4]> {
    non_negative("total_time", total_time)?;
    if !(0.0..=total_time).contains(&pi_pulse_offset) {
        return Err(Error::OutOfRange(format!(
            "pi_pulse_offset {pi_pulse_offset} outside [0, {total_time}]"
        )));
    }
    Ok([
        Step::Pulse { area: FRAC_PI_2, phase: 0.0 },
        Step::Free { duration: pi_pulse_offset },
        Step::Pulse { area: refocus_area, phase: 0.0 },
        Step::Free { duration: total_time - pi_pulse_offset },
    ])
}

/// Echo amplitude: contrast of the final-phase fringe of the spin-echo
/// sequence with a π pulse at `pi_pulse_offset`.
pub fn spin_echo_signal(total_time: f64, pi_pulse_offset: f64, model: &DephasingModel) -> Result<f64> {
    let steps = echo_steps(total_time, pi_pulse_offset, PI)?;
    check_model(model)?;
    Ok(fringe(&steps, FRAC_PI_2, model, 0.0).contrast.min(1.0))
}
