use rand::Rng;

use super::detection::{thin_detection, DetectionParams};
use super::trajectory::EmissionRecord;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};

/// Delay binning for the coincidence histogram.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct G2Binning {
    pub pulse_period: f64,
    /// Largest |delay| histogrammed (s).
    pub window: f64,
    pub bins_per_period: u32,
    /// Pulses in each record; sets the expected weight of each side peak.
    pub pulses_per_train: u32,
}

impl Default for G2Binning {
    fn default() -> Self {
        G2Binning { pulse_period: 200e-9, window: 1.1e-6, bins_per_period: 20, pulses_per_train: 10 }
    }
}

impl G2Binning {
    pub fn bin_width(&self) -> f64 {
        self.pulse_period / self.bins_per_period as f64
    }

    /// Bins on each side of zero.
    fn half_bins(&self) -> i64 {
        (self.window / self.bin_width()).round() as i64
    }

    pub fn bin_count(&self) -> usize {
        (2 * self.half_bins() + 1) as usize
    }

    /// Bin index of a delay, or `None` outside the window. Bin `k` is
    /// centred on `k · bin_width`.
    pub fn bin_of(&self, delay: f64) -> Option<usize> {
        let k = (delay / self.bin_width()).round() as i64;
        let h = self.half_bins();
        (-h..=h).contains(&k).then(|| (k + h) as usize)
    }

    pub fn bin_center(&self, index: usize) -> f64 {
        (index as i64 - self.half_bins()) as f64 * self.bin_width()
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.pulse_period > 0.0 && self.pulse_period.is_finite()) {
            v.push("pulse_period > 0".to_string());
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            v.push("window > 0".to_string());
        }
        if self.bins_per_period == 0 {
            v.push("bins_per_period >= 1".to_string());
        }
        if self.pulses_per_train == 0 {
            v.push("pulses_per_train >= 1".to_string());
        }
        v
    }
}

/// Start-stop histogram of delays `t_B − t_A` over all click pairs.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct G2Histogram {
    pub binning: G2Binning,
    pub counts: Vec<u64>,
    pub records: usize,
    /// Clicks on both counters together.
    pub detected_photons: u64,
}

impl G2Histogram {
    /// Coincidences in the peak at lag `m` pulses: bins whose centres lie in
    /// `[(m − ½)T, (m + ½)T)`.
    pub fn peak(&self, m: i64) -> u64 {
        let p = self.binning.pulse_period;
        let lo = (m as f64 - 0.5) * p;
        let hi = (m as f64 + 0.5) * p;
        self.counts
            .iter()
            .enumerate()
            .filter(|&(i, _)| {
                let c = self.binning.bin_center(i);
                c >= lo - 1e-6 * self.binning.bin_width() && c < hi - 1e-6 * self.binning.bin_width()
            })
            .map(|(_, &n)| n)
            .sum()
    }

    /// Side-peak lags fully inside the window and present in the train.
    pub fn side_lags(&self) -> Vec<i64> {
        let b = &self.binning;
        let reach = ((b.window / b.pulse_period) - 0.5 + 1e-9).floor() as i64;
        let max = reach.min(b.pulses_per_train as i64 - 1);
        (-max..=max).filter(|&m| m != 0).collect()
    }

    /// Zero-delay peak over the mean side peak, each divided by the number
    /// of pulse pairs at that lag. `None` if there are no side coincidences.
    pub fn ratio(&self) -> Option<f64> {
        let n = self.binning.pulses_per_train as f64;
        let lags = self.side_lags();
        if lags.is_empty() {
            return None;
        }
        let side: f64 =
            lags.iter().map(|&m| self.peak(m) as f64 / (n - m.abs() as f64)).sum::<f64>() / lags.len() as f64;
        (side > 0.0).then(|| (self.peak(0) as f64 / n) / side)
    }

    /// `(delay_s, coincidences)` per bin.
    pub fn rows(&self) -> Vec<(f64, u64)> {
        self.counts.iter().enumerate().map(|(i, &c)| (self.binning.bin_center(i), c)).collect()
    }
}

/// Zero-to-side ratio [`G2Histogram::ratio`] should approach for a source
/// with photon-number distribution `[P(0), P(1), P(≥2)]` and exponential
/// emission delays of `lifetime`. Photons from different pulses are taken
/// as independent, so their delay is Laplace-distributed around the pulse
/// lag and its tails spill into the neighbouring peaks; pairs from the same
/// pulse land at zero delay.
pub fn expected_ratio(distribution: &[f64; 3], binning: &G2Binning, lifetime: f64) -> Option<f64> {
    let [_, p1, p2] = *distribution;
    let mean = p1 + 2.0 * p2;
    let (same, cross) = (2.0 * p2, mean * mean);
    let n = binning.pulses_per_train as i64;
    let w = binning.bin_width();
    // Laplace(centre, lifetime) CDF.
    let cdf = |x: f64, centre: f64| {
        let z = (x - centre) / lifetime;
        if z < 0.0 {
            0.5 * z.exp()
        } else {
            1.0 - 0.5 * (-z).exp()
        }
    };
    let empty = G2Histogram { binning: *binning, counts: vec![0; binning.bin_count()], records: 0, detected_photons: 0 };
    let peak_mass = |m: i64| -> f64 {
        let p = binning.pulse_period;
        (0..binning.bin_count())
            .map(|i| binning.bin_center(i))
            .filter(|&c| c >= (m as f64 - 0.5) * p - 1e-6 * w && c < (m as f64 + 0.5) * p - 1e-6 * w)
            .map(|c| {
                (1..n)
                    .flat_map(|lag| [lag, -lag])
                    .map(|lag| {
                        let centre = lag as f64 * p;
                        (n - lag.abs()) as f64 * (cdf(c + 0.5 * w, centre) - cdf(c - 0.5 * w, centre))
                    })
                    .sum::<f64>()
            })
            .sum::<f64>()
            * cross
    };
    let lags = empty.side_lags();
    if lags.is_empty() {
        return None;
    }
    let zero = (same * n as f64 + peak_mass(0)) / n as f64;
    let side = lags.iter().map(|&m| peak_mass(m) / (n - m.abs()) as f64).sum::<f64>() / lags.len() as f64;
    (side > 0.0).then(|| zero / side)
}

fn record_histogram(
    rec: &EmissionRecord,
    det: &DetectionParams,
    binning: &G2Binning,
    seed: u64,
) -> Result<(Vec<u64>, u64)> {
    let detected = thin_detection(rec, det, derive_seed(seed, "detection"))?;
    let mut rng = substream(derive_seed(seed, "beamsplitter"), rec.trial_id);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for &t in &detected.emission_times {
        if rng.random::<bool>() {
            a.push(t);
        } else {
            b.push(t);
        }
    }
    let mut counts = vec![0u64; binning.bin_count()];
    for &ta in &a {
        for &tb in &b {
            if let Some(i) = binning.bin_of(tb - ta) {
                counts[i] += 1;
            }
        }
    }
    Ok((counts, detected.emission_times.len() as u64))
}

/// Hanbury Brown–Twiss histogram: each detected photon goes to counter A or
/// B with probability ½ and every (A, B) click pair adds its delay.
pub fn g2_histogram(
    records: &[EmissionRecord],
    det: &DetectionParams,
    binning: &G2Binning,
    seed: u64,
) -> Result<G2Histogram> {
    use rayon::prelude::*;
    if records.is_empty() {
        return Err(Error::OutOfRange("g2_histogram needs at least one record".into()));
    }
    let v = binning.validate();
    if !v.is_empty() {
        return Err(Error::InvalidParameters(v));
    }
    det.checked()?;
    let per_record = records
        .par_iter()
        .map(|r| record_histogram(r, det, binning, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0u64; binning.bin_count()];
    let mut detected_photons = 0;
    for (h, n) in per_record {
        detected_photons += n;
        for (c, x) in counts.iter_mut().zip(h) {
            *c += x;
        }
    }
    Ok(G2Histogram { binning: *binning, counts, records: records.len(), detected_photons })
}
