use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{Factor, Space, StateVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum AtomLabel {
    A,
    B,
}

impl AtomLabel {
    pub fn tag(self) -> &'static str {
        match self {
            AtomLabel::A => "A",
            AtomLabel::B => "B",
        }
    }
}

fn photon_factor(label: AtomLabel) -> Factor {
    Factor::new([format!("nu1_{}", label.tag()), format!("nu2_{}", label.tag())]).expect("two labels")
}

/// `(|0, ν₁⟩ + |1, ν₂⟩)/√2` in the basis `{0ν₁, 0ν₂, 1ν₁, 1ν₂}`.
pub fn atom_photon_state(label: AtomLabel) -> StateVector {
    let space = Space::qubit(label.tag()).product(&Space::new(vec![photon_factor(label)]));
    StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2], space).expect("normalized")
}

/// Two-atom qubit space, atom A first.
pub fn atom_pair_space() -> Space {
    Space::qubit("A").product(&Space::qubit("B"))
}

/// `(|0_A 1_B⟩ − |1_A 0_B⟩)/√2`.
pub fn singlet() -> StateVector {
    StateVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0], atom_pair_space()).expect("normalized")
}

fn photon_pair_space() -> Space {
    Space::new(vec![photon_factor(AtomLabel::A), photon_factor(AtomLabel::B)])
}

/// Photonic two-frequency sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum PhotonSector {
    Nu1Nu1,
    Nu2Nu2,
    Symmetric,
    Antisymmetric,
}

impl PhotonSector {
    pub const ALL: [PhotonSector; 4] =
        [PhotonSector::Nu1Nu1, PhotonSector::Nu2Nu2, PhotonSector::Symmetric, PhotonSector::Antisymmetric];

    /// Amplitudes over `{ν₁ν₁, ν₁ν₂, ν₂ν₁, ν₂ν₂}` (photon A first).
    pub fn amplitudes(self) -> [f64; 4] {
        let h = FRAC_1_SQRT_2;
        match self {
            PhotonSector::Nu1Nu1 => [1.0, 0.0, 0.0, 0.0],
            PhotonSector::Nu2Nu2 => [0.0, 0.0, 0.0, 1.0],
            PhotonSector::Symmetric => [0.0, h, h, 0.0],
            PhotonSector::Antisymmetric => [0.0, h, -h, 0.0],
        }
    }

    pub fn photonic_state(self) -> StateVector {
        StateVector::from_real(&self.amplitudes(), photon_pair_space()).expect("normalized")
    }

    /// Atomic partner of the sector in the canonical product input.
    pub fn atomic_partner(self) -> StateVector {
        let h = FRAC_1_SQRT_2;
        let amps = match self {
            PhotonSector::Nu1Nu1 => [1.0, 0.0, 0.0, 0.0],
            PhotonSector::Nu2Nu2 => [0.0, 0.0, 0.0, 1.0],
            PhotonSector::Symmetric => [0.0, h, h, 0.0],
            PhotonSector::Antisymmetric => [0.0, h, -h, 0.0],
        };
        StateVector::from_real(&amps, atom_pair_space()).expect("normalized")
    }

    pub fn name(self) -> &'static str {
        match self {
            PhotonSector::Nu1Nu1 => "nu1nu1",
            PhotonSector::Nu2Nu2 => "nu2nu2",
            PhotonSector::Symmetric => "symmetric",
            PhotonSector::Antisymmetric => "antisymmetric",
        }
    }
}

/// `amplitude · |atomic⟩ ⊗ |photonic⟩`, with `atomic` normalized and
/// `amplitude ≥ 0`. A term with zero weight carries the sector's
/// canonical atomic partner.
#[derive(Debug, Clone, PartialEq)]
pub struct BellTerm {
    pub sector: PhotonSector,
    pub atomic: StateVector,
    pub photonic: StateVector,
    pub amplitude: f64,
}

/// Joint index for the `(atom A, photon A, atom B, photon B)` ordering.
fn joint_index(atom_a: usize, atom_b: usize, photon_a: usize, photon_b: usize) -> usize {
    atom_a * 8 + photon_a * 4 + atom_b * 2 + photon_b
}

/// Expands a state of `atom_photon_state(A) ⊗ atom_photon_state(B)` onto
/// the four photonic sectors.
pub fn bell_decomposition(joint: &StateVector) -> Result<[BellTerm; 4]> {
    if joint.dim() != 16 {
        return Err(Error::DimensionMismatch { expected: 16, actual: joint.dim() });
    }
    let terms = PhotonSector::ALL.map(|sector| {
        let photon = sector.amplitudes();
        let mut atomic = [ZERO; 4];
        for (ab, slot) in atomic.iter_mut().enumerate() {
            for (p, &w) in photon.iter().enumerate() {
                *slot += w * joint.amplitude(joint_index(ab / 2, ab % 2, p / 2, p % 2));
            }
        }
        let norm = atomic.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let atomic = if norm > 1e-14 {
            StateVector::normalized(atomic.to_vec(), atom_pair_space()).expect("non-zero")
        } else {
            sector.atomic_partner()
        };
        BellTerm { sector, atomic, photonic: sector.photonic_state(), amplitude: if norm > 1e-14 { norm } else { 0.0 } }
    });
    Ok(terms)
}

/// Sums the terms back into the 16-dimensional joint vector.
pub fn reconstruct(terms: &[BellTerm]) -> DVector<Complex64> {
    let mut out = DVector::from_element(16, ZERO);
    for t in terms {
        for ab in 0..4 {
            for p in 0..4 {
                out[joint_index(ab / 2, ab % 2, p / 2, p % 2)] +=
                    t.atomic.amplitude(ab) * t.photonic.amplitude(p) * t.amplitude;
            }
        }
    }
    out
}
