use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::trajectory::EmissionRecord;
use crate::error::{Error, Result};
use crate::rng::substream;

/// Photon collection and detection chain.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DetectionParams {
    pub collection_efficiency: f64,
    pub detector_efficiency: f64,
    /// Dark count rate (counts/s).
    pub dark_rate: f64,
}

impl Default for DetectionParams {
    fn default() -> Self {
        DetectionParams { collection_efficiency: 0.006, detector_efficiency: 1.0, dark_rate: 0.0 }
    }
}

impl DetectionParams {
    pub fn ideal() -> Self {
        DetectionParams { collection_efficiency: 1.0, detector_efficiency: 1.0, dark_rate: 0.0 }
    }

    pub fn efficiency(&self) -> f64 {
        self.collection_efficiency * self.detector_efficiency
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(0.0..=1.0).contains(&self.collection_efficiency) {
            v.push("collection_efficiency in [0, 1]".to_string());
        }
        if !(0.0..=1.0).contains(&self.detector_efficiency) {
            v.push("detector_efficiency in [0, 1]".to_string());
        }
        if !(self.dark_rate >= 0.0 && self.dark_rate.is_finite()) {
            v.push("dark_rate >= 0".to_string());
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

/// Keeps each emission with probability `efficiency()` and merges in dark
/// counts uniform on `[0, window_end]`. Uses substream `trial_id` of `seed`.
pub fn thin_detection(rec: &EmissionRecord, det: &DetectionParams, seed: u64) -> Result<EmissionRecord> {
    det.checked()?;
    let eta = det.efficiency();
    let mut rng = substream(seed, rec.trial_id);
    let mut times: Vec<f64> = if eta >= 1.0 {
        rec.emission_times.clone()
    } else {
        rec.emission_times.iter().copied().filter(|_| rng.random::<f64>() < eta).collect()
    };
    let mean_dark = det.dark_rate * rec.window_end;
    if mean_dark > 0.0 {
        let n = Poisson::new(mean_dark).expect("finite mean").sample(&mut rng) as u64;
        for _ in 0..n {
            times.push(rng.random::<f64>() * rec.window_end);
        }
        times.sort_by(f64::total_cmp);
        times.dedup();
    }
    Ok(EmissionRecord { trial_id: rec.trial_id, emission_times: times, window_end: rec.window_end })
}
