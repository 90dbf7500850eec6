//! Deterministic photon counting for the driven two-level emitter.
//!
//! The density matrix is split by the number of photons already emitted:
//! `ρ₀`, `ρ₁` and `ρ≥2`. Each block evolves under the non-Hermitian
//! Hamiltonian and a jump moves population `Γρ_ee` into the next block.

use num_complex::Complex64;

use super::drive::Drive;
use super::params::EmitterParams;
use crate::error::Result;

type M2 = [[Complex64; 2]; 2];

const ZERO: M2 = [[Complex64::new(0.0, 0.0); 2]; 2];
/// Largest phase advanced per RK4 step, in units of Γ·dt or Ω·dt.
const STEP: f64 = 0.005;

fn h_eff(rabi: f64, gamma: f64) -> M2 {
    let half = Complex64::new(0.5 * rabi, 0.0);
    [[Complex64::new(0.0, 0.0), half], [half, Complex64::new(0.0, -0.5 * gamma)]]
}

/// `−i(Hρ − ρH†)`
fn coherent(h: &M2, rho: &M2) -> M2 {
    let mut out = ZERO;
    let i = Complex64::new(0.0, 1.0);
    for r in 0..2 {
        for c in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                acc += h[r][k] * rho[k][c] - rho[r][k] * h[c][k].conj();
            }
            out[r][c] = -i * acc;
        }
    }
    out
}

fn axpy(a: &[M2], b: &[M2], s: f64) -> Vec<M2> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut o = *x;
            for r in 0..2 {
                for c in 0..2 {
                    o[r][c] += y[r][c] * s;
                }
            }
            o
        })
        .collect()
}

/// Derivative of the block chain. The last block absorbs its own jumps.
fn rhs(blocks: &[M2], h: &M2, gamma: f64) -> Vec<M2> {
    let n = blocks.len();
    let mut out: Vec<M2> = blocks.iter().map(|b| coherent(h, b)).collect();
    for k in 0..n {
        let feed = gamma * blocks[k][1][1].re;
        let target = (k + 1).min(n - 1);
        out[target][0][0] += feed;
    }
    out
}

fn rk4(blocks: &mut Vec<M2>, rabi: f64, gamma: f64, duration: f64) {
    if duration <= 0.0 {
        return;
    }
    let rate = rabi.abs().max(gamma);
    let steps = ((duration * rate / STEP).ceil() as usize).max(1);
    let dt = duration / steps as f64;
    let h = h_eff(rabi, gamma);
    for _ in 0..steps {
        let k1 = rhs(blocks, &h, gamma);
        let k2 = rhs(&axpy(blocks, &k1, dt / 2.0), &h, gamma);
        let k3 = rhs(&axpy(blocks, &k2, dt / 2.0), &h, gamma);
        let k4 = rhs(&axpy(blocks, &k3, dt), &h, gamma);
        for (i, b) in blocks.iter_mut().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    b[r][c] += (k1[i][r][c] + 2.0 * k2[i][r][c] + 2.0 * k3[i][r][c] + k4[i][r][c]) * (dt / 6.0);
                }
            }
        }
    }
}

fn kick(rho: &M2, area: f64) -> M2 {
    let c = Complex64::new((area / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(area / 2.0).sin());
    let u = [[c, s], [s, c]];
    let mut out = ZERO;
    for r in 0..2 {
        for col in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    out[r][col] += u[r][a] * rho[a][b] * u[col][b].conj();
                }
            }
        }
    }
    out
}

fn ground() -> M2 {
    let mut g = ZERO;
    g[0][0] = Complex64::new(1.0, 0.0);
    g
}

fn apply_pulse(blocks: &mut Vec<M2>, drive: &Drive, gamma: f64) {
    match drive {
        Drive::Kick { area } => {
            for b in blocks.iter_mut() {
                *b = kick(b, *area);
            }
        }
        Drive::Segments(segments) => {
            for s in segments {
                rk4(blocks, s.rabi, gamma, s.duration);
            }
        }
    }
}

/// Photon-number distribution `[P(0), P(1), P(≥2)]` for one isolated pulse
/// on a ground-state atom, with the decay followed to completion.
pub fn photon_number_distribution(p: &EmitterParams) -> Result<[f64; 3]> {
    p.checked()?;
    let gamma = p.decay_rate();
    let mut blocks = vec![ground(), ZERO, ZERO];
    apply_pulse(&mut blocks, &Drive::for_pulse(p), gamma);
    // With the drive off every excitation left emits exactly once.
    let p0 = blocks[0][0][0].re;
    let p1 = blocks[0][1][1].re + blocks[1][0][0].re;
    let p2 = blocks[1][1][1].re + blocks[2][0][0].re + blocks[2][1][1].re;
    Ok([p0, p1, p2])
}

/// Excited-state population of the full master equation across the pulse
/// train, sampled at sorted `times` (s, from the train start).
pub fn excited_population_curve(p: &EmitterParams, times: &[f64]) -> Result<Vec<f64>> {
    p.checked()?;
    let gamma = p.decay_rate();
    let drive = Drive::for_pulse(p);
    let mut rho = vec![ground()];
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    let mut next = 0;

    // Advances at fixed Rabi frequency, sampling any checkpoint on the way.
    let mut advance = |rho: &mut Vec<M2>, now: &mut f64, until: f64, rabi: f64, out: &mut Vec<f64>| {
        while next < times.len() && times[next] <= until {
            rk4(rho, rabi, gamma, times[next] - *now);
            *now = (*now).max(times[next]);
            out.push(rho[0][1][1].re);
            next += 1;
        }
        rk4(rho, rabi, gamma, until - *now);
        *now = (*now).max(until);
    };
    for k in 0..p.pulses_per_train {
        let t0 = k as f64 * p.pulse_period;
        advance(&mut rho, &mut now, t0, 0.0, &mut out);
        match &drive {
            Drive::Kick { area } => rho[0] = kick(&rho[0], *area),
            Drive::Segments(segments) => {
                for s in segments {
                    advance(&mut rho, &mut now, t0 + s.start + s.duration, s.rabi, &mut out);
                }
            }
        }
    }
    if let Some(&last) = times.last() {
        advance(&mut rho, &mut now, last, 0.0, &mut out);
    }
    Ok(out)
}
