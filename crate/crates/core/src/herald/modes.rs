use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_MODE_WAIST: f64 = 1e-6;

/// Spatial modes of the two photons reaching the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonModePair {
    /// `⟨f_A|f_B⟩`.
    pub overlap: Complex64,
    pub transverse_displacement: f64,
    pub mode_waist: f64,
}

impl PhotonModePair {
    pub fn new(overlap: Complex64) -> Result<Self> {
        let pair = PhotonModePair { overlap, transverse_displacement: 0.0, mode_waist: DEFAULT_MODE_WAIST };
        pair.checked()?;
        Ok(pair)
    }

    /// Real overlap with `|⟨f_A|f_B⟩|² = overlap_sq`.
    pub fn with_overlap_sq(overlap_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&overlap_sq) {
            return Err(Error::OutOfRange(format!("overlap_sq {overlap_sq} not in [0, 1]")));
        }
        Self::new(Complex64::new(overlap_sq.sqrt(), 0.0))
    }

    pub fn perfect() -> Self {
        PhotonModePair { overlap: Complex64::new(1.0, 0.0), transverse_displacement: 0.0, mode_waist: DEFAULT_MODE_WAIST }
    }

    /// Gaussian modes translated by `d`: `|⟨f_A|f_B⟩| = exp(−d²/2w²)`.
    pub fn from_displacement(displacement: f64, waist: f64) -> Result<Self> {
        Self::from_displacement_with_visibility(displacement, waist, 1.0)
    }

    /// As [`from_displacement`](Self::from_displacement) with the overlap at
    /// `d = 0` reduced so that `|⟨f_A|f_B⟩|² = max_visibility`.
    pub fn from_displacement_with_visibility(displacement: f64, waist: f64, max_visibility: f64) -> Result<Self> {
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::InvalidParameters(vec!["mode_waist > 0".into()]));
        }
        if !(0.0..=1.0).contains(&max_visibility) {
            return Err(Error::InvalidParameters(vec!["max_visibility in [0, 1]".into()]));
        }
        if !displacement.is_finite() {
            return Err(Error::OutOfRange(format!("displacement {displacement}")));
        }
        let amp = max_visibility.sqrt() * (-displacement * displacement / (2.0 * waist * waist)).exp();
        Ok(PhotonModePair {
            overlap: Complex64::new(amp, 0.0),
            transverse_displacement: displacement,
            mode_waist: waist,
        })
    }

    pub fn overlap_sq(&self) -> f64 {
        self.overlap.norm_sqr().min(1.0)
    }

    pub fn checked(&self) -> Result<()> {
        let mut v = Vec::new();
        if !(self.overlap.norm() <= 1.0 + 1e-12) {
            v.push("|overlap| <= 1".to_string());
        }
        if !(self.mode_waist > 0.0 && self.mode_waist.is_finite()) {
            v.push("mode_waist > 0".to_string());
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(v))
        }
    }
}

/// Probability of one click in each output port for one photon per input:
/// `(1 − |⟨f_A|f_B⟩|²)/2`.
pub fn hom_coincidence_probability(pair: &PhotonModePair) -> Result<f64> {
    pair.checked()?;
    Ok(0.5 * (1.0 - pair.overlap_sq()))
}

/// Coincidence probability relative to distinguishable photons, as a
/// function of the transverse displacement between the two modes.
pub fn coincidence_vs_displacement(waist: f64, displacements: &[f64], max_visibility: f64) -> Result<Vec<(f64, f64)>> {
    displacements
        .iter()
        .map(|&d| {
            let pair = PhotonModePair::from_displacement_with_visibility(d, waist, max_visibility)?;
            Ok((d, hom_coincidence_probability(&pair)? / 0.5))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(hom_coincidence_probability(&PhotonModePair::perfect()).unwrap(), 0.0);
        let dist = PhotonModePair::with_overlap_sq(0.0).unwrap();
        assert_eq!(hom_coincidence_probability(&dist).unwrap(), 0.5);
        let partial = PhotonModePair::with_overlap_sq(0.6).unwrap();
        assert!((hom_coincidence_probability(&partial).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn displacement_law() {
        let p = PhotonModePair::from_displacement(1e-6, 1e-6).unwrap();
        assert!((p.overlap.re - (-0.5f64).exp()).abs() < 1e-15);
        let far = coincidence_vs_displacement(1e-6, &[20e-6], 0.6).unwrap();
        assert!((far[0].1 - 1.0).abs() < 1e-12);
        let near = coincidence_vs_displacement(1e-6, &[0.0], 0.6).unwrap();
        assert!((near[0].1 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(PhotonModePair::new(Complex64::new(0.9, 0.9)).is_err());
        assert!(PhotonModePair::from_displacement(0.0, 0.0).is_err());
        assert!(coincidence_vs_displacement(-1.0, &[0.0], 1.0).is_err());
    }
}
