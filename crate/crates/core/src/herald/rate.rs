use super::filter::HeraldConfig;
use crate::error::{Error, Result};

/// Herald probability for perfect overlap and lossless detection.
pub const IDEAL_HERALD_PROBABILITY: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EntanglementRate {
    pub efficiency_per_attempt: f64,
    pub pairs_per_second: f64,
    /// Mean time between heralded pairs (s).
    pub mean_pair_interval: f64,
}

/// Heralded pairs per attempt and per second. Each photon must be emitted,
/// detected and arrive inside the coincidence window.
pub fn entanglement_rate(cfg: &HeraldConfig, attempt_rate: f64) -> Result<EntanglementRate> {
    cfg.checked()?;
    if !(attempt_rate > 0.0 && attempt_rate.is_finite()) {
        return Err(Error::InvalidParameters(vec!["attempt_rate > 0".into()]));
    }
    let in_window = -(-cfg.coincidence_window / cfg.photon_lifetime).exp_m1();
    let per_photon = cfg.emission_probability * cfg.per_photon_detection * in_window;
    let efficiency = per_photon * per_photon * IDEAL_HERALD_PROBABILITY;
    let pairs_per_second = efficiency * attempt_rate;
    Ok(EntanglementRate {
        efficiency_per_attempt: efficiency,
        pairs_per_second,
        mean_pair_interval: if pairs_per_second > 0.0 { 1.0 / pairs_per_second } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_limit() {
        let cfg = HeraldConfig { coincidence_window: 1e-6, ..HeraldConfig::ideal() };
        let r = entanglement_rate(&cfg, 1.0).unwrap();
        assert!((r.efficiency_per_attempt - 0.25).abs() < 1e-12);
    }

    #[test]
    fn default_interval_is_about_a_hundred_seconds() {
        let r = entanglement_rate(&HeraldConfig::default(), 1000.0).unwrap();
        assert!((1e-6..=1e-5).contains(&r.efficiency_per_attempt));
        assert!((r.mean_pair_interval - 100.0).abs() < 50.0);
    }

    #[test]
    fn rejects_non_positive_attempt_rate() {
        assert!(entanglement_rate(&HeraldConfig::default(), 0.0).is_err());
    }
}
