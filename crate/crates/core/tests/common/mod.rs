//! Reference calculations used by the integration tests. They take the
//! long way round (Fock-space enumeration, ODE integration, direct
//! sampling) so they share as little as possible with the library paths
//! they check.
#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use tweezer_sim::fock::{beam_splitter_unitary, ModeOccupationBasis};
use tweezer_sim::state::StateVector;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Mode index in the 8-mode layout: label `2·transverse + freq`, then
/// port (`0` = a/c, `1` = b/d), matching the beam-splitter pairing.
fn mode(transverse: usize, freq: usize, port: usize) -> usize {
    2 * (2 * transverse + freq) + port
}

fn occupation(modes: &[usize]) -> Vec<u8> {
    let mut occ = vec![0u8; 8];
    for &m in modes {
        occ[m] += 1;
    }
    occ
}

/// Unnormalized two-atom density matrix after a coincidence, by brute
/// force: every atom configuration carries its own photonic Fock vector,
/// the beam splitter acts on each, and the herald keeps the allowed
/// two-photon occupations. Returns row-major 4×4 entries.
pub fn herald_oracle(overlap: Complex64, frequency_resolved: bool) -> [[Complex64; 4]; 4] {
    let basis = ModeOccupationBasis::new(8, 2, 2).unwrap();
    assert_eq!(basis.dim(), 45);
    let u = beam_splitter_unitary(&basis).unwrap();
    let rest = (1.0 - overlap.norm_sqr()).max(0.0).sqrt();

    let mut photonic: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let mut v = vec![ZERO; basis.dim()];
            let a = mode(0, i, 0);
            v[basis.index_of(&occupation(&[a, mode(0, j, 1)])).unwrap()] += overlap * 0.5;
            v[basis.index_of(&occupation(&[a, mode(1, j, 1)])).unwrap()] += Complex64::new(0.5 * rest, 0.0);
            let out: Vec<Complex64> = (0..basis.dim())
                .map(|r| (0..basis.dim()).map(|c| u[(r, c)] * v[c]).sum())
                .collect();
            photonic.push(out);
        }
    }

    let heralds = |occ: &[u8]| {
        let mut c = Vec::new();
        let mut d = Vec::new();
        for (m, &n) in occ.iter().enumerate() {
            for _ in 0..n {
                let freq = (m / 2) % 2;
                if m % 2 == 0 {
                    c.push(freq);
                } else {
                    d.push(freq);
                }
            }
        }
        c.len() == 1 && d.len() == 1 && (!frequency_resolved || c[0] != d[0])
    };
    let mut rho = [[ZERO; 4]; 4];
    for (s, occ) in basis.states().iter().enumerate() {
        if !heralds(occ) {
            continue;
        }
        for r in 0..4 {
            for c in 0..4 {
                rho[r][c] += photonic[r][s] * photonic[c][s].conj();
            }
        }
    }
    rho
}

/// Probability of one photon in each output port, by enumeration on four
/// modes (two transverse modes per port).
pub fn hom_oracle(overlap_sq: f64) -> f64 {
    let basis = ModeOccupationBasis::new(4, 2, 2).unwrap();
    let u = beam_splitter_unitary(&basis).unwrap();
    // Modes: 0 = a_f, 1 = b_f, 2 = a_g, 3 = b_g.
    let mut amps = vec![ZERO; basis.dim()];
    amps[basis.index_of(&[1, 1, 0, 0]).unwrap()] = Complex64::new(overlap_sq.sqrt(), 0.0);
    amps[basis.index_of(&[1, 0, 0, 1]).unwrap()] = Complex64::new((1.0 - overlap_sq).sqrt(), 0.0);
    let input = StateVector::new(amps, basis.space()).unwrap();
    let out = input.apply_unitary(&u).unwrap();
    basis
        .states()
        .iter()
        .enumerate()
        .filter(|(_, occ)| occ[0] + occ[2] == 1 && occ[1] + occ[3] == 1)
        .map(|(i, _)| out.probability(i))
        .sum()
}

/// `⟨singlet|ρ|singlet⟩ / Tr ρ`.
pub fn singlet_fidelity(rho: &[[Complex64; 4]; 4]) -> f64 {
    let s = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
    let tr: f64 = (0..4).map(|i| rho[i][i].re).sum();
    let mut f = ZERO;
    for r in 0..4 {
        for c in 0..4 {
            f += s[r] * rho[r][c] * s[c];
        }
    }
    f.re / tr
}

/// RK4 integration of `i dψ/dt = H ψ` for
/// `H = (Ω/2)(cos φ σx + sin φ σy) + (Δ/2) σz`.
pub fn integrate_qubit(psi: [Complex64; 2], omega: f64, phase: f64, detuning: f64, t: f64, steps: usize) -> [Complex64; 2] {
    let i = Complex64::new(0.0, 1.0);
    let off = Complex64::from_polar(omega / 2.0, -phase);
    let h = [[Complex64::new(detuning / 2.0, 0.0), off], [off.conj(), Complex64::new(-detuning / 2.0, 0.0)]];
    let f = |p: [Complex64; 2]| -> [Complex64; 2] {
        [-i * (h[0][0] * p[0] + h[0][1] * p[1]), -i * (h[1][0] * p[0] + h[1][1] * p[1])]
    };
    let dt = t / steps as f64;
    let mut p = psi;
    for _ in 0..steps {
        let k1 = f(p);
        let k2 = f([p[0] + k1[0] * (dt / 2.0), p[1] + k1[1] * (dt / 2.0)]);
        let k3 = f([p[0] + k2[0] * (dt / 2.0), p[1] + k2[1] * (dt / 2.0)]);
        let k4 = f([p[0] + k3[0] * dt, p[1] + k3[1] * dt]);
        for n in 0..2 {
            p[n] += (k1[n] + k2[n] * 2.0 + k3[n] * 2.0 + k4[n]) * (dt / 6.0);
        }
    }
    p
}
