use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};
use rayon::prelude::*;

use super::drive::Drive;
use super::params::EmitterParams;
use crate::error::{Error, Result};
use crate::rng::{substream, TrialRng};
use crate::stats::{wilson, Proportion, Z_95};

/// Fewest pulses accepted by [`two_photon_probability`].
pub const MIN_TWO_PHOTON_TRIALS: usize = 10_000;

/// Emission times of one trial (one pulse train).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EmissionRecord {
    pub trial_id: u64,
    /// Strictly increasing emission times from the train start (s).
    pub emission_times: Vec<f64>,
    /// End of the observation window (s); dark counts are drawn on `[0, window_end]`.
    pub window_end: f64,
}

impl EmissionRecord {
    /// Emissions attributed to each pulse: pulse `k` owns `[kT, (k+1)T)`, and
    /// the last pulse also owns everything after the train.
    pub fn counts_per_pulse(&self, period: f64, pulses: u32) -> Vec<u32> {
        let mut counts = vec![0u32; pulses as usize];
        for &t in &self.emission_times {
            let k = ((t / period).floor() as usize).min(pulses as usize - 1);
            counts[k] += 1;
        }
        counts
    }
}

type Amp = [Complex64; 2];

fn norm2(psi: &Amp) -> f64 {
    psi[0].norm_sqr() + psi[1].norm_sqr()
}

/// `exp(-i H dt) ψ` for `H = (Ω/2)σx − (iΓ/2)|e⟩⟨e|`, basis `(g, e)`.
fn propagate(psi: &Amp, rabi: f64, gamma: f64, dt: f64) -> Amp {
    let a = 0.5 * rabi * dt;
    let b = 0.25 * gamma * dt;
    let d = b * b - a * a;
    let (c, s) = if d >= 0.0 {
        let q = d.sqrt();
        (q.cosh(), if q < 1e-4 { 1.0 + q * q / 6.0 } else { q.sinh() / q })
    } else {
        let y = (-d).sqrt();
        (y.cos(), if y < 1e-4 { 1.0 - y * y / 6.0 } else { y.sin() / y })
    };
    let pre = (-b).exp();
    let diag0 = Complex64::new(pre * (c + s * b), 0.0);
    let diag1 = Complex64::new(pre * (c - s * b), 0.0);
    let off = Complex64::new(0.0, -pre * s * a);
    [diag0 * psi[0] + off * psi[1], off * psi[0] + diag1 * psi[1]]
}

fn kick(psi: &Amp, area: f64) -> Amp {
    let c = Complex64::new((area / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(area / 2.0).sin());
    [c * psi[0] + s * psi[1], s * psi[0] + c * psi[1]]
}

/// Waiting-time Monte Carlo wavefunction walker: the unnormalized state
/// decays under the effective Hamiltonian and a jump fires when its squared
/// norm crosses a uniform threshold.
struct Walker<'r> {
    psi: Amp,
    threshold: f64,
    time: f64,
    gamma: f64,
    rng: &'r mut TrialRng,
    emissions: Vec<f64>,
}

impl<'r> Walker<'r> {
    fn new(gamma: f64, rng: &'r mut TrialRng) -> Self {
        let threshold = rng.random::<f64>();
        Walker {
            psi: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            threshold,
            time: 0.0,
            gamma,
            rng,
            emissions: Vec::new(),
        }
    }

    fn jump(&mut self, at: f64) {
        self.emissions.push(at);
        self.psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        self.time = at;
        self.threshold = self.rng.random::<f64>();
    }

    /// Evolves at constant Rabi frequency up to `t_end`, emitting as needed.
    fn advance(&mut self, t_end: f64, rabi: f64) {
        while t_end > self.time {
            let dt = t_end - self.time;
            let next = propagate(&self.psi, rabi, self.gamma, dt);
            if norm2(&next) > self.threshold {
                self.psi = next;
                self.time = t_end;
                return;
            }
            // The norm is monotone in time: bisect for the crossing.
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if norm2(&propagate(&self.psi, rabi, self.gamma, mid)) > self.threshold {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let at = self.time + hi;
            self.jump(at);
        }
    }

    /// Undriven decay to t = ∞ (closed form).
    fn finish(&mut self) {
        let g = self.psi[0].norm_sqr();
        let e = self.psi[1].norm_sqr();
        if e > 0.0 && self.threshold > g {
            let dt = (e / (self.threshold - g)).ln() / self.gamma;
            let at = self.time + dt.max(0.0);
            self.jump(at);
        }
        self.psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    }

    fn excited_population(&self) -> f64 {
        self.psi[1].norm_sqr() / norm2(&self.psi)
    }
}

/// Runs one train; records the normalized excited population at each
/// (sorted) checkpoint.
fn run_train(p: &EmitterParams, drive: &Drive, rng: &mut TrialRng, checkpoints: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut walker = Walker::new(p.decay_rate(), rng);
    let mut pops = Vec::with_capacity(checkpoints.len());
    let mut next_cp = 0;
    let mut advance = |w: &mut Walker, t_end: f64, rabi: f64, pops: &mut Vec<f64>| {
        while next_cp < checkpoints.len() && checkpoints[next_cp] <= t_end {
            w.advance(checkpoints[next_cp], rabi);
            pops.push(w.excited_population());
            next_cp += 1;
        }
        w.advance(t_end, rabi);
    };
    for k in 0..p.pulses_per_train {
        let t0 = k as f64 * p.pulse_period;
        advance(&mut walker, t0, 0.0, &mut pops);
        match drive {
            Drive::Kick { area } => walker.psi = kick(&walker.psi, *area),
            Drive::Segments(segments) => {
                for s in segments {
                    advance(&mut walker, t0 + s.start + s.duration, s.rabi, &mut pops);
                }
            }
        }
    }
    if let Some(&last) = checkpoints.last() {
        advance(&mut walker, last, 0.0, &mut pops);
    }
    walker.finish();
    (walker.emissions, pops)
}

fn trial(p: &EmitterParams, drive: &Drive, seed: u64, trial_id: u64) -> EmissionRecord {
    let mut rng = substream(seed, trial_id);
    let (emission_times, _) = run_train(p, drive, &mut rng, &[]);
    EmissionRecord { trial_id, emission_times, window_end: p.train_length() }
}

/// One quantum-jump realization of a pulse train (trial id 0 of `seed`).
pub fn quantum_jump_trial(p: &EmitterParams, seed: u64) -> Result<EmissionRecord> {
    p.checked()?;
    Ok(trial(p, &Drive::for_pulse(p), seed, 0))
}

/// `n` independent trains; trial `i` uses substream `i` of `seed`.
pub fn quantum_jump_trials(p: &EmitterParams, n: usize, seed: u64) -> Result<Vec<EmissionRecord>> {
    p.checked()?;
    let drive = Drive::for_pulse(p);
    Ok((0..n as u64).into_par_iter().map(|i| trial(p, &drive, seed, i)).collect())
}

/// Mean and standard error of the trajectory-averaged excited population
/// at each checkpoint.
pub fn excited_population_ensemble(
    p: &EmitterParams,
    checkpoints: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    p.checked()?;
    if checkpoints.windows(2).any(|w| w[1] < w[0]) || checkpoints.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::OutOfRange("checkpoints must be sorted and non-negative".into()));
    }
    let drive = Drive::for_pulse(p);
    let sums = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            run_train(p, &drive, &mut rng, checkpoints).1
        })
        .collect::<Vec<_>>();
    let mut out = Vec::with_capacity(checkpoints.len());
    for c in 0..checkpoints.len() {
        let (s, s2) = sums.iter().fold((0.0, 0.0), |(s, s2), v| (s + v[c], s2 + v[c] * v[c]));
        let mean = s / n as f64;
        let var = (s2 / n as f64 - mean * mean).max(0.0);
        out.push((mean, (var / n as f64).sqrt()));
    }
    Ok(out)
}

/// Monte Carlo estimate of the probability that one excitation pulse
/// yields two or more photons.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TwoPhotonEstimate {
    /// `P(n ≥ 2)` with a 95% Wilson interval.
    pub proportion: Proportion,
    /// `distribution[k]` = pulses with exactly `k` emissions (last bin: `≥`).
    pub distribution: Vec<u64>,
    pub mean_emissions: f64,
}

/// Fraction of isolated pulses (atom starting in the ground state, decay
/// followed to completion) that emit at least two photons.
pub fn two_photon_probability(p: &EmitterParams, n_trials: usize, seed: u64) -> Result<TwoPhotonEstimate> {
    if n_trials < MIN_TWO_PHOTON_TRIALS {
        return Err(Error::InsufficientTrials { required: MIN_TWO_PHOTON_TRIALS, requested: n_trials });
    }
    let single = EmitterParams { pulses_per_train: 1, ..*p };
    let records = quantum_jump_trials(&single, n_trials, seed)?;
    let mut distribution = vec![0u64; 4];
    let mut total = 0u64;
    for r in &records {
        let n = r.emission_times.len();
        total += n as u64;
        distribution[n.min(3)] += 1;
    }
    let multi = distribution[2] + distribution[3];
    Ok(TwoPhotonEstimate {
        proportion: wilson(multi, n_trials as u64, Z_95),
        distribution,
        mean_emissions: total as f64 / n_trials as f64,
    })
}

/// Control source: Poisson photon number with mean `mean_photons` per pulse,
/// each photon delayed by an exponential with the emitter lifetime.
pub fn coherent_trial(mean_photons: f64, p: &EmitterParams, trial_id: u64, seed: u64) -> Result<EmissionRecord> {
    p.checked()?;
    if !(mean_photons >= 0.0 && mean_photons.is_finite()) {
        return Err(Error::OutOfRange(format!("mean_photons {mean_photons} must be >= 0")));
    }
    let mut rng = substream(seed, trial_id);
    let delay = Exp::new(p.decay_rate()).expect("positive rate");
    let mut times = Vec::new();
    for k in 0..p.pulses_per_train {
        let n = if mean_photons > 0.0 {
            Poisson::new(mean_photons).expect("finite mean").sample(&mut rng) as u64
        } else {
            0
        };
        for _ in 0..n {
            times.push(k as f64 * p.pulse_period + delay.sample(&mut rng));
        }
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    Ok(EmissionRecord { trial_id, emission_times: times, window_end: p.train_length() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn propagator_matches_closed_forms() {
        let psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        // No decay: Rabi rotation.
        let out = propagate(&psi, 2.0, 0.0, PI / 2.0);
        assert!((out[1].norm_sqr() - 1.0).abs() < 1e-14);
        // No drive: excited amplitude decays as e^{-Γt/2}.
        let e = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let out = propagate(&e, 0.0, 2.0, 0.5);
        assert!((out[1].re - (-0.5f64).exp()).abs() < 1e-15);
        // Composition property.
        let a = propagate(&propagate(&psi, 3.0, 1.0, 0.4), 3.0, 1.0, 0.6);
        let b = propagate(&psi, 3.0, 1.0, 1.0);
        assert!((a[0] - b[0]).norm() < 1e-14 && (a[1] - b[1]).norm() < 1e-14);
        // Critical damping branch (Ω = Γ/2) stays continuous.
        let near = propagate(&psi, 1.0 + 1e-9, 2.0, 0.3);
        let at = propagate(&psi, 1.0, 2.0, 0.3);
        assert!((near[1] - at[1]).norm() < 1e-8);
    }

    #[test]
    fn zero_area_never_emits() {
        let p = EmitterParams { pulse_area: 0.0, ..EmitterParams::default() };
        for seed in 0..50 {
            assert!(quantum_jump_trial(&p, seed).unwrap().emission_times.is_empty());
        }
    }

    #[test]
    fn instantaneous_pi_pulse_emits_once_per_pulse() {
        // Long period so no excitation survives into the next pulse.
        let p = EmitterParams { pulse_duration: 0.0, pulse_period: 3e-6, ..EmitterParams::default() };
        for r in quantum_jump_trials(&p, 200, 4).unwrap() {
            assert_eq!(r.counts_per_pulse(p.pulse_period, p.pulses_per_train), vec![1; 10]);
        }
    }

    #[test]
    fn records_are_strictly_increasing() {
        let p = EmitterParams { pulse_area: 5.0 * PI, pulse_duration: 20e-9, ..EmitterParams::default() };
        for r in quantum_jump_trials(&p, 200, 8).unwrap() {
            assert!(r.emission_times.windows(2).all(|w| w[1] > w[0]));
            assert!(r.emission_times.iter().all(|&t| t >= 0.0));
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let p = EmitterParams::default();
        assert_eq!(quantum_jump_trials(&p, 50, 3).unwrap(), quantum_jump_trials(&p, 50, 3).unwrap());
        assert_eq!(quantum_jump_trial(&p, 3).unwrap(), quantum_jump_trials(&p, 1, 3).unwrap()[0]);
    }

    #[test]
    fn too_few_trials_is_an_error() {
        assert!(matches!(
            two_photon_probability(&EmitterParams::default(), 100, 0),
            Err(Error::InsufficientTrials { .. })
        ));
    }

    #[test]
    fn coherent_source_mean() {
        let p = EmitterParams { pulses_per_train: 1000, ..EmitterParams::default() };
        let r = coherent_trial(0.5, &p, 0, 1).unwrap();
        let n = r.emission_times.len() as f64;
        assert!((n - 500.0).abs() < 3.0 * 500f64.sqrt());
    }
}
