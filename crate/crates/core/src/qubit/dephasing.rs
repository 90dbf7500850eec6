use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::error::{Error, Result};

/// Distribution of the per-shot static detuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DephasingKind {
    /// Gaussian detuning spread; contrast `exp(-(t/τ)²)`.
    GaussianStatic,
    /// Energy-dependent light shift of a thermal atom in a 3D harmonic trap;
    /// contrast `(1 + (t/τ')²)^{-3/2}`.
    Thermal3d,
}

impl DephasingKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian_static" => Some(Self::GaussianStatic),
            "thermal_3d" => Some(Self::Thermal3d),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::GaussianStatic => "gaussian_static",
            Self::Thermal3d => "thermal_3d",
        }
    }
}

/// Inhomogeneous (static, echo-refocusable) plus irreversible decoherence.
///
/// Both kinds are calibrated so that the Ramsey contrast from the static
/// spread alone equals `1/e` at `inhomogeneous_tau`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DephasingModel {
    /// 1/e time of the static-spread Ramsey contrast (s).
    pub inhomogeneous_tau: f64,
    /// Scale of the irreversible decay `exp(-(t/τ)^p)` (s); may be infinite.
    pub irreversible_tau: f64,
    /// Exponent `p` of the irreversible decay.
    pub irreversible_exponent: f64,
    pub kind: DephasingKind,
    /// Mean static detuning (rad/s).
    pub mean_detuning: f64,
}

impl Default for DephasingModel {
    /// 630 µs free dephasing with a 50 ms echo decay scale.
    fn default() -> Self {
        DephasingModel {
            inhomogeneous_tau: 630e-6,
            irreversible_tau: 50e-3,
            irreversible_exponent: 2.0,
            kind: DephasingKind::GaussianStatic,
            mean_detuning: 0.0,
        }
    }
}

impl DephasingModel {
    /// Purely static Gaussian spread with no irreversible decay.
    pub fn static_gaussian(inhomogeneous_tau: f64) -> Self {
        DephasingModel {
            inhomogeneous_tau,
            irreversible_tau: f64::INFINITY,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.inhomogeneous_tau > 0.0 && self.inhomogeneous_tau.is_finite()) {
            v.push("inhomogeneous_tau > 0".to_string());
        }
        if !(self.irreversible_tau > 0.0) {
            v.push("irreversible_tau > 0".to_string());
        }
        if !(self.irreversible_tau >= self.inhomogeneous_tau) {
            v.push("irreversible_tau >= inhomogeneous_tau".to_string());
        }
        if !(self.irreversible_exponent > 0.0) {
            v.push("irreversible_exponent > 0".to_string());
        }
        if !self.mean_detuning.is_finite() {
            v.push("mean_detuning finite".to_string());
        }
        v
    }

    pub fn checked(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidParameters(v))
        }
    }

    /// Standard deviation of the Gaussian detuning spread, `√2/τ`.
    pub fn gaussian_sigma(&self) -> f64 {
        std::f64::consts::SQRT_2 / self.inhomogeneous_tau
    }

    /// Thermal time scale τ' placing the 1/e point of
    /// `(1 + (t/τ')²)^{-3/2}` at `inhomogeneous_tau`.
    pub fn thermal_scale(&self) -> f64 {
        self.inhomogeneous_tau / ((2.0f64 / 3.0).exp() - 1.0).sqrt()
    }

    /// `E[exp(i δ w)]` over the static detuning distribution (mean included).
    pub fn characteristic(&self, w: f64) -> Complex64 {
        let mean = Complex64::from_polar(1.0, self.mean_detuning * w);
        let spread = match self.kind {
            DephasingKind::GaussianStatic => {
                let s = self.gaussian_sigma() * w;
                Complex64::new((-0.5 * s * s).exp(), 0.0)
            }
            DephasingKind::Thermal3d => {
                // δ − mean = ε / τ' with ε ~ Gamma(3, 1).
                let x = w / self.thermal_scale();
                Complex64::new(1.0, -x).powi(-3)
            }
        };
        mean * spread
    }

    /// Ramsey contrast from the static spread alone.
    pub fn static_contrast(&self, t: f64) -> f64 {
        match self.kind {
            DephasingKind::GaussianStatic => (-(t / self.inhomogeneous_tau).powi(2)).exp(),
            DephasingKind::Thermal3d => (1.0 + (t / self.thermal_scale()).powi(2)).powf(-1.5),
        }
    }

    /// Irreversible coherence decay `exp(-(t/τ)^p)`.
    pub fn irreversible_decay(&self, t: f64) -> f64 {
        if self.irreversible_tau.is_infinite() {
            return 1.0;
        }
        (-(t.abs() / self.irreversible_tau).powf(self.irreversible_exponent)).exp()
    }

    /// Draws one static detuning (rad/s).
    pub fn sample_detuning<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            DephasingKind::GaussianStatic => {
                let n = Normal::new(self.mean_detuning, self.gaussian_sigma()).expect("sigma > 0");
                n.sample(rng)
            }
            DephasingKind::Thermal3d => {
                let g = Gamma::new(3.0, 1.0).expect("valid gamma");
                self.mean_detuning + g.sample(rng) / self.thermal_scale()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn both_kinds_hit_one_over_e() {
        for kind in [DephasingKind::GaussianStatic, DephasingKind::Thermal3d] {
            let m = DephasingModel { kind, ..DephasingModel::default() };
            let c = m.static_contrast(630e-6);
            assert!((c - (-1.0f64).exp()).abs() < 1e-12, "{kind:?}: {c}");
            assert!((m.characteristic(630e-6).norm() - c).abs() < 1e-12);
            assert_eq!(m.static_contrast(0.0), 1.0);
        }
    }

    #[test]
    fn validation_rules() {
        assert!(DephasingModel::default().validate().is_empty());
        let bad = DephasingModel { irreversible_tau: 1e-4, ..DephasingModel::default() };
        assert_eq!(bad.validate(), vec!["irreversible_tau >= inhomogeneous_tau"]);
        let bad = DephasingModel { inhomogeneous_tau: 0.0, ..DephasingModel::default() };
        assert!(bad.validate().contains(&"inhomogeneous_tau > 0".to_string()));
    }

    #[test]
    fn thermal_samples_match_characteristic() {
        let m = DephasingModel { kind: DephasingKind::Thermal3d, mean_detuning: 300.0, ..DephasingModel::default() };
        let mut rng = substream(11, 0);
        let t = 400e-6;
        let n = 200_000;
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            acc += Complex64::from_polar(1.0, m.sample_detuning(&mut rng) * t);
        }
        acc /= n as f64;
        // 3σ of a mean of unit phasors.
        assert!((acc - m.characteristic(t)).norm() < 3.0 * (1.0 / n as f64).sqrt());
    }

    #[test]
    fn irreversible_decay_defaults() {
        let m = DephasingModel::default();
        assert!(m.irreversible_decay(40e-3) >= 0.5);
        assert_eq!(DephasingModel::static_gaussian(630e-6).irreversible_decay(1.0), 1.0);
    }
}
