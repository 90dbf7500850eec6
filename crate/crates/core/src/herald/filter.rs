use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bell::{atom_pair_space, singlet, PhotonSector};
use super::modes::PhotonModePair;
use crate::error::{Error, Result};
use crate::state::DensityOperator;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum OutputPort {
    C,
    D,
}

/// Ports watched by the two detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DetectorPair {
    pub first: OutputPort,
    pub second: OutputPort,
}

impl Default for DetectorPair {
    fn default() -> Self {
        DetectorPair { first: OutputPort::C, second: OutputPort::D }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HeraldConfig {
    pub detector_pair: DetectorPair,
    /// Coincidence gate after each excitation (s).
    pub coincidence_window: f64,
    /// Probability of a false herald caused by a multi-photon emission.
    pub two_photon_contamination: f64,
    /// Collection × detector efficiency per photon.
    pub per_photon_detection: f64,
    /// Detectors tell `ν₁` from `ν₂`; a herald needs one photon of each.
    pub frequency_resolved: bool,
    /// Probability that an excitation attempt yields a photon.
    pub emission_probability: f64,
    /// Emitter lifetime setting the photon arrival-time spread (s).
    pub photon_lifetime: f64,
}

impl Default for HeraldConfig {
    fn default() -> Self {
        HeraldConfig {
            detector_pair: DetectorPair::default(),
            coincidence_window: 200e-9,
            two_photon_contamination: 0.0,
            per_photon_detection: 0.006,
            frequency_resolved: true,
            emission_probability: 1.0,
            photon_lifetime: 26e-9,
        }
    }
}

impl HeraldConfig {
    /// Lossless detection, no contamination.
    pub fn ideal() -> Self {
        HeraldConfig { per_photon_detection: 1.0, ..HeraldConfig::default() }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let prob = |x: f64| (0.0..=1.0).contains(&x);
        if !(self.coincidence_window > 0.0 && self.coincidence_window.is_finite()) {
            v.push("coincidence_window > 0".to_string());
        }
        if !prob(self.two_photon_contamination) {
            v.push("two_photon_contamination in [0, 1]".to_string());
        }
        if !prob(self.per_photon_detection) {
            v.push("per_photon_detection in [0, 1]".to_string());
        }
        if !prob(self.emission_probability) {
            v.push("emission_probability in [0, 1]".to_string());
        }
        if !(self.photon_lifetime > 0.0 && self.photon_lifetime.is_finite()) {
            v.push("photon_lifetime > 0".to_string());
        }
        v
    }

    pub fn checked(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(v))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub heralded: bool,
    /// Two-atom state given a herald; `None` when heralding is impossible.
    pub conditioned_state: Option<DensityOperator>,
    /// Herald probability per attempt, detection losses included.
    pub herald_probability: f64,
    pub fidelity_to_singlet: f64,
}

// Single-photon space: port (a/c, b/d) × transverse (f, g) × frequency (ν₁, ν₂).
type Photon = [Complex64; 8];

fn slot(port: usize, transverse: usize, freq: usize) -> usize {
    port * 4 + transverse * 2 + freq
}

/// Output-side states of the photon from A (port a, mode f) and from B
/// (port b, mode `M f + √(1−|M|²) g`) at each frequency.
fn output_photons(pair: &PhotonModePair) -> ([Photon; 2], [Photon; 2]) {
    let m = pair.overlap;
    let rest = Complex64::new((1.0 - pair.overlap_sq()).max(0.0).sqrt(), 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut from_a = [[ZERO; 8]; 2];
    let mut from_b = [[ZERO; 8]; 2];
    for freq in 0..2 {
        // a → (c + d)/√2, b → (c − d)/√2.
        from_a[freq][slot(0, 0, freq)] = h;
        from_a[freq][slot(1, 0, freq)] = h;
        from_b[freq][slot(0, 0, freq)] = h * m;
        from_b[freq][slot(0, 1, freq)] = h * rest;
        from_b[freq][slot(1, 0, freq)] = -h * m;
        from_b[freq][slot(1, 1, freq)] = -h * rest;
    }
    (from_a, from_b)
}

/// Diagonal projector on the single-photon space, as a slot mask.
type Projector = [bool; 8];

fn projector(port: OutputPort, freq: Option<usize>) -> Projector {
    let p = match port {
        OutputPort::C => 0,
        OutputPort::D => 1,
    };
    let mut mask = [false; 8];
    for t in 0..2 {
        for f in 0..2 {
            if freq.is_none_or(|want| want == f) {
                mask[slot(p, t, f)] = true;
            }
        }
    }
    mask
}

fn bracket(x: &Photon, p: &Projector, y: &Photon) -> Complex64 {
    (0..8).filter(|&n| p[n]).map(|n| x[n].conj() * y[n]).sum()
}

/// Click events that count as a herald, each a pair of single-photon
/// projectors.
fn herald_events(cfg: &HeraldConfig) -> Vec<(Projector, Projector)> {
    let (p, q) = (cfg.detector_pair.first, cfg.detector_pair.second);
    if cfg.frequency_resolved {
        vec![(projector(p, Some(0)), projector(q, Some(1))), (projector(p, Some(1)), projector(q, Some(0)))]
    } else {
        vec![(projector(p, None), projector(q, None))]
    }
}

/// `K[(ij),(kl)] = ⟨S_kl|Π|S_ij⟩`, where `S_ij` is the symmetrized state of
/// the A photon at `ν_i` and the B photon at `ν_j`, and `Π` the herald
/// projector on the two-photon space.
fn coincidence_kernel(pair: &PhotonModePair, events: &[(Projector, Projector)]) -> DMatrix<Complex64> {
    let (u, v) = output_photons(pair);
    // ⟨u_k|P|u_i⟩⟨v_l|Q|v_j⟩ + ⟨u_k|P|v_j⟩⟨v_l|Q|u_i⟩
    let term = |p: &Projector, q: &Projector, i: usize, j: usize, k: usize, l: usize| {
        bracket(&u[k], p, &u[i]) * bracket(&v[l], q, &v[j]) + bracket(&u[k], p, &v[j]) * bracket(&v[l], q, &u[i])
    };
    DMatrix::from_fn(4, 4, |row, col| {
        let (i, j, k, l) = (row / 2, row % 2, col / 2, col % 2);
        events
            .iter()
            .map(|(p, q)| {
                if p == q {
                    term(p, p, i, j, k, l)
                } else {
                    term(p, q, i, j, k, l) + term(q, p, i, j, k, l)
                }
            })
            .sum()
    })
}

/// Coincidence probability (no frequency resolution) for a photon pair in
/// the given frequency sector, photon A entering port a and B port b.
pub fn sector_coincidence_probability(pair: &PhotonModePair, sector: PhotonSector) -> Result<f64> {
    pair.checked()?;
    let events = [(projector(OutputPort::C, None), projector(OutputPort::D, None))];
    let k = coincidence_kernel(pair, &events);
    let phi = sector.amplitudes();
    let mut p = ZERO;
    for r in 0..4 {
        for c in 0..4 {
            p += phi[r] * phi[c] * k[(r, c)];
        }
    }
    Ok(p.re)
}

/// Conditions the two atoms on a detector coincidence after both emit
/// into the beam splitter.
pub fn herald_filter(pair: &PhotonModePair, cfg: &HeraldConfig) -> Result<HeraldOutcome> {
    pair.checked()?;
    cfg.checked()?;
    // Atom state |ij⟩ goes with photon frequencies (ν_i, ν_j), amplitude ½ each.
    let rho = coincidence_kernel(pair, &herald_events(cfg)).scale(0.25);
    let p_herald_ideal = rho.trace().re;
    let eta = cfg.emission_probability * cfg.per_photon_detection;
    let herald_probability = (eta * eta * p_herald_ideal).clamp(0.0, 1.0);
    if p_herald_ideal <= 1e-15 || herald_probability == 0.0 {
        return Ok(HeraldOutcome { heralded: false, conditioned_state: None, herald_probability, fidelity_to_singlet: 0.0 });
    }
    let space = atom_pair_space();
    let mut state = DensityOperator::from_unnormalized(rho, space.clone())?;
    if cfg.two_photon_contamination > 0.0 {
        state = state.mix(&DensityOperator::maximally_mixed(space)?, cfg.two_photon_contamination)?;
    }
    let fidelity_to_singlet = state.fidelity(&singlet())?;
    Ok(HeraldOutcome { heralded: true, conditioned_state: Some(state), herald_probability, fidelity_to_singlet })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_overlap_heralds_the_singlet() {
        let out = herald_filter(&PhotonModePair::perfect(), &HeraldConfig::ideal()).unwrap();
        assert!(out.heralded);
        assert!((out.fidelity_to_singlet - 1.0).abs() < 1e-12);
        assert!((out.herald_probability - 0.25).abs() < 1e-12);
    }

    #[test]
    fn fidelity_is_affine_in_overlap() {
        for m in [0.0, 0.3, 0.6, 1.0] {
            let pair = PhotonModePair::with_overlap_sq(m).unwrap();
            let out = herald_filter(&pair, &HeraldConfig::ideal()).unwrap();
            assert!((out.fidelity_to_singlet - 0.5 * (1.0 + m)).abs() < 1e-12);
            assert!((out.herald_probability - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn unresolved_frequencies_admit_same_frequency_pairs() {
        let cfg = HeraldConfig { frequency_resolved: false, ..HeraldConfig::ideal() };
        for m in [0.0, 0.5, 1.0] {
            let pair = PhotonModePair::with_overlap_sq(m).unwrap();
            let out = herald_filter(&pair, &cfg).unwrap();
            assert!((out.herald_probability - (2.0 - m) / 4.0).abs() < 1e-12);
            assert!((out.fidelity_to_singlet - (1.0 + m) / (2.0 * (2.0 - m))).abs() < 1e-12);
        }
    }

    #[test]
    fn only_the_antisymmetric_sector_survives_perfect_overlap() {
        let pair = PhotonModePair::perfect();
        for s in PhotonSector::ALL {
            let p = sector_coincidence_probability(&pair, s).unwrap();
            let want = if s == PhotonSector::Antisymmetric { 1.0 } else { 0.0 };
            assert!((p - want).abs() < 1e-15, "{s:?} {p}");
        }
    }

    #[test]
    fn contamination_lowers_fidelity() {
        let cfg = HeraldConfig { two_photon_contamination: 0.1, ..HeraldConfig::ideal() };
        let out = herald_filter(&PhotonModePair::perfect(), &cfg).unwrap();
        assert!((out.fidelity_to_singlet - (0.9 + 0.1 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn losses_scale_herald_probability() {
        let cfg = HeraldConfig { per_photon_detection: 0.1, ..HeraldConfig::ideal() };
        let out = herald_filter(&PhotonModePair::perfect(), &cfg).unwrap();
        assert!((out.herald_probability - 0.0025).abs() < 1e-15);
        let cfg = HeraldConfig { per_photon_detection: 0.0, ..HeraldConfig::ideal() };
        assert!(!herald_filter(&PhotonModePair::perfect(), &cfg).unwrap().heralded);
    }

    #[test]
    fn invalid_config_names_violations() {
        let cfg = HeraldConfig { coincidence_window: 0.0, per_photon_detection: 2.0, ..HeraldConfig::default() };
        match herald_filter(&PhotonModePair::perfect(), &cfg) {
            Err(Error::InvalidParameters(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }
}
