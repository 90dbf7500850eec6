//! Photon-number (Fock) bases over a few optical modes and linear-optics
//! transformations lifted onto them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::state::{Space, MAX_DIM};

/// Hard per-mode photon cap; no protocol here involves more than two photons.
pub const MAX_PHOTONS_PER_MODE: u8 = 2;

/// All occupation tuples of `mode_count` modes with at most
/// `max_photons_per_mode` photons per mode and `max_total_photons` overall.
///
/// Tuples are enumerated in lexicographic order, mode 0 most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeOccupationBasis {
    mode_count: usize,
    max_photons_per_mode: u8,
    max_total_photons: u8,
    states: Vec<Vec<u8>>,
}

impl ModeOccupationBasis {
    pub fn new(mode_count: usize, max_photons_per_mode: u8, max_total_photons: u8) -> Result<Self> {
        if max_photons_per_mode > MAX_PHOTONS_PER_MODE {
            return Err(Error::OccupationCap(format!(
                "{max_photons_per_mode} photons per mode requested, cap is {MAX_PHOTONS_PER_MODE}"
            )));
        }
        if mode_count == 0 {
            return Err(Error::Subsystems("a Fock basis needs at least one mode".into()));
        }
        let mut states = Vec::new();
        let mut current = vec![0u8; mode_count];
        enumerate(&mut current, 0, max_photons_per_mode, max_total_photons, &mut states);
        if states.len() > MAX_DIM {
            return Err(Error::DimensionOverflow { dim: states.len(), cap: MAX_DIM });
        }
        Ok(ModeOccupationBasis { mode_count, max_photons_per_mode, max_total_photons, states })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn max_photons_per_mode(&self) -> u8 {
        self.max_photons_per_mode
    }

    pub fn max_total_photons(&self) -> u8 {
        self.max_total_photons
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn index_of(&self, occupation: &[u8]) -> Option<usize> {
        self.states.binary_search_by(|s| s.as_slice().cmp(occupation)).ok()
    }

    /// Single-factor [`Space`] tagged with the occupation tuples, e.g. `|1,0⟩`.
    pub fn space(&self) -> Space {
        let labels = self.states.iter().map(|s| {
            let body: Vec<String> = s.iter().map(u8::to_string).collect();
            format!("|{}⟩", body.join(","))
        });
        Space::single(labels).expect("basis is never empty")
    }
}

fn enumerate(current: &mut Vec<u8>, mode: usize, per_mode: u8, budget: u8, out: &mut Vec<Vec<u8>>) {
    if mode == current.len() {
        out.push(current.clone());
        return;
    }
    for n in 0..=per_mode.min(budget) {
        current[mode] = n;
        enumerate(current, mode + 1, per_mode, budget - n, out);
    }
    current[mode] = 0;
}

fn factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

/// Lifts a single-photon mode transformation `t` (output mode `j` receives
/// `t[(j, m)]` of input mode `m`, i.e. `a_m† → Σ_j t[j,m] a_j†`) onto the
/// occupation basis. The result is unitary when `t` is and the basis holds
/// every photon-number sector it touches.
pub fn fock_transform(basis: &ModeOccupationBasis, t: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let m = basis.mode_count;
    if t.nrows() != m || t.ncols() != m {
        return Err(Error::DimensionMismatch { expected: m, actual: t.nrows() });
    }
    let dim = basis.dim();
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (col, occ) in basis.states.iter().enumerate() {
        // Creation operators of the input state, one entry per photon.
        let creators: Vec<usize> = occ
            .iter()
            .enumerate()
            .flat_map(|(mode, &n)| std::iter::repeat(mode).take(n as usize))
            .collect();
        let norm_in: f64 = occ.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
        let mut out_occ = vec![0u8; m];
        expand(&creators, 0, Complex64::new(1.0 / norm_in, 0.0), t, &mut out_occ, &mut |occ_out, amp| {
            if occ_out.iter().any(|&n| n > basis.max_photons_per_mode) {
                return Err(Error::OccupationCap(format!("output occupation {occ_out:?} exceeds the per-mode cap")));
            }
            let row = basis.index_of(occ_out).ok_or_else(|| {
                Error::OccupationCap(format!("output occupation {occ_out:?} outside the basis"))
            })?;
            let norm_out: f64 = occ_out.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
            out[(row, col)] += amp * norm_out;
            Ok(())
        })?;
    }
    Ok(out)
}

fn expand(
    creators: &[usize],
    k: usize,
    amp: Complex64,
    t: &DMatrix<Complex64>,
    occ: &mut Vec<u8>,
    emit: &mut dyn FnMut(&[u8], Complex64) -> Result<()>,
) -> Result<()> {
    if k == creators.len() {
        return emit(occ, amp);
    }
    let input = creators[k];
    for j in 0..t.nrows() {
        let coeff = t[(j, input)];
        if coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        occ[j] += 1;
        expand(creators, k + 1, amp * coeff, t, occ, emit)?;
        occ[j] -= 1;
    }
    Ok(())
}

/// Single-photon 50/50 beam-splitter matrix for a basis whose modes come in
/// `(port a, port b)` pairs, one pair per distinguishable photon label:
/// mode `2k` is port a of label `k`, mode `2k + 1` is port b.
///
/// Outputs reuse the layout with `(c, d)` in place of `(a, b)`:
/// `a → (c + d)/√2`, `b → (c − d)/√2`.
pub fn beam_splitter_modes(mode_count: usize) -> Result<DMatrix<Complex64>> {
    if mode_count % 2 != 0 {
        return Err(Error::Subsystems(format!(
            "beam splitter needs port pairs, got {mode_count} modes"
        )));
    }
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut t = DMatrix::from_element(mode_count, mode_count, Complex64::new(0.0, 0.0));
    for pair in 0..mode_count / 2 {
        let (a, b) = (2 * pair, 2 * pair + 1);
        t[(a, a)] = h;
        t[(b, a)] = h;
        t[(a, b)] = h;
        t[(b, b)] = -h;
    }
    Ok(t)
}

/// The 50/50 beam splitter lifted onto `basis` (see [`beam_splitter_modes`]
/// for the mode layout).
pub fn beam_splitter_unitary(basis: &ModeOccupationBasis) -> Result<DMatrix<Complex64>> {
    fock_transform(basis, &beam_splitter_modes(basis.mode_count)?)
}
