use rand_distr::{Distribution, Poisson};

use super::occupancy::OccupancyTrace;
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::stats::{poisson_cdf_below, poisson_pmf, poisson_sf};

/// Photon counts per time bin from the avalanche photodiode.
#[derive(Debug, Clone, PartialEq)]
pub struct FluorescenceTrace {
    pub counts: Vec<u64>,
    /// Bin length (s).
    pub bin_width: f64,
    /// Counts/s with an empty trap.
    pub background_rate: f64,
    /// Additional counts/s per trapped atom.
    pub atom_rate: f64,
}

impl FluorescenceTrace {
    pub fn mixture(&self, weight_one: f64) -> PoissonMixture {
        PoissonMixture {
            weight_one,
            mean_zero: self.background_rate * self.bin_width,
            mean_one: (self.background_rate + self.atom_rate) * self.bin_width,
        }
    }
}

/// Samples per-bin Poisson counts with mean
/// `(background + level·atom_rate)·bin_width`, using the exact time the
/// atom spent in each bin.
pub fn fluorescence_trace(
    occupancy: &OccupancyTrace,
    background_rate: f64,
    atom_rate: f64,
    bin_width: f64,
    seed: u64,
) -> Result<FluorescenceTrace> {
    if !(background_rate >= 0.0 && atom_rate >= 0.0) {
        return Err(Error::OutOfRange("count rates must be >= 0".into()));
    }
    if !(atom_rate > background_rate) {
        return Err(Error::InvalidParameters(vec!["atom_rate > background_rate".into()]));
    }
    if !(bin_width > 0.0) {
        return Err(Error::InvalidParameters(vec!["bin_width > 0".into()]));
    }
    let bins = (occupancy.duration() / bin_width).floor() as usize;
    let mut rng = substream(seed, 0);
    let counts = (0..bins)
        .map(|i| {
            let a = i as f64 * bin_width;
            let mean = background_rate * bin_width + atom_rate * occupancy.integrated_level(a, a + bin_width);
            if mean > 0.0 {
                Poisson::new(mean).expect("finite mean").sample(&mut rng) as u64
            } else {
                0
            }
        })
        .collect();
    Ok(FluorescenceTrace { counts, bin_width, background_rate, atom_rate })
}

/// `hist[k]` = number of bins with exactly `k` counts.
pub fn count_histogram(counts: &[u64]) -> Vec<u64> {
    let max = counts.iter().copied().max().unwrap_or(0) as usize;
    let mut hist = vec![0u64; max + 1];
    for &c in counts {
        hist[c as usize] += 1;
    }
    hist
}

/// Two-component Poisson model of the count histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonMixture {
    pub weight_one: f64,
    pub mean_zero: f64,
    pub mean_one: f64,
}

impl PoissonMixture {
    pub fn pmf(&self, k: u64) -> f64 {
        (1.0 - self.weight_one) * poisson_pmf(k, self.mean_zero) + self.weight_one * poisson_pmf(k, self.mean_one)
    }

    /// Probability of labelling a bin wrongly with the rule `count >= threshold`.
    pub fn misclassification(&self, threshold: u64) -> f64 {
        (1.0 - self.weight_one) * poisson_sf(threshold, self.mean_zero)
            + self.weight_one * poisson_cdf_below(threshold, self.mean_one)
    }

    /// Threshold between the two means that minimizes misclassification.
    pub fn optimal_threshold(&self) -> u64 {
        let lo = self.mean_zero.floor() as u64 + 1;
        let hi = self.mean_one.ceil() as u64;
        (lo..=hi.max(lo))
            .min_by(|&a, &b| self.misclassification(a).total_cmp(&self.misclassification(b)))
            .unwrap_or(lo)
    }

    /// Lowest point of the mixture density between the two means.
    pub fn valley(&self) -> u64 {
        let lo = self.mean_zero.ceil() as u64;
        let hi = self.mean_one.floor() as u64;
        (lo..=hi.max(lo)).min_by(|&a, &b| self.pmf(a).total_cmp(&self.pmf(b))).unwrap_or(lo)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// 1 when the bin count reaches the threshold.
    pub labels: Vec<u8>,
    /// Model misclassification probability per bin.
    pub misclassification: f64,
}

impl Classification {
    pub fn occupied_fraction(&self) -> f64 {
        if self.labels.is_empty() {
            return 0.0;
        }
        self.labels.iter().map(|&l| l as f64).sum::<f64>() / self.labels.len() as f64
    }
}

/// Thresholds each bin; the misclassification estimate uses the two-Poisson
/// model with the occupied weight taken from the labels themselves.
pub fn classify_occupancy(trace: &FluorescenceTrace, threshold: u64) -> Classification {
    let labels: Vec<u8> = trace.counts.iter().map(|&c| u8::from(c >= threshold)).collect();
    let mut out = Classification { labels, misclassification: 0.0 };
    out.misclassification = trace.mixture(out.occupied_fraction()).misclassification(threshold);
    out
}
