//! Small statistics helpers shared by the Monte Carlo routines.

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Binomial proportion with a Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Proportion {
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> Proportion {
    assert!(trials > 0, "wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Proportion {
        successes,
        trials,
        estimate: p,
        lower: if successes == 0 { 0.0 } else { (center - half).max(0.0) },
        upper: if successes == trials { 1.0 } else { (center + half).min(1.0) },
    }
}

/// Poisson probability mass `P(N = k)` for mean `mu`, evaluated in log space.
pub fn poisson_pmf(k: u64, mu: f64) -> f64 {
    if mu == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let kf = k as f64;
    (kf * mu.ln() - mu - ln_factorial(k)).exp()
}

/// `P(N < k)` for `N ~ Poisson(mu)`.
pub fn poisson_cdf_below(k: u64, mu: f64) -> f64 {
    (0..k).map(|j| poisson_pmf(j, mu)).sum::<f64>().min(1.0)
}

/// `P(N >= k)` for `N ~ Poisson(mu)`, summed directly over the upper tail so
/// that tiny tails are not lost to cancellation.
pub fn poisson_sf(k: u64, mu: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    // Sum until terms are negligible; the tail past mu + 40 sqrt(mu) + 50
    // is far below double precision.
    let stop = (mu + 40.0 * mu.sqrt() + 50.0).ceil() as u64;
    if k > stop {
        return 0.0;
    }
    let mut total = 0.0;
    for j in k..=stop.max(k) {
        let term = poisson_pmf(j, mu);
        total += term;
        if j as f64 > mu && term < total * 1e-18 {
            break;
        }
    }
    total.min(1.0)
}

fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    if k < 256 {
        return (2..=k).map(|j| (j as f64).ln()).sum();
    }
    // Stirling series, accurate to ~1e-12 relative for k >= 256.
    let x = k as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `samples` and the exponential distribution with the given mean.
pub fn ks_exponential(samples: &[f64], mean: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-x / mean).exp();
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            (cdf - lo).abs().max((hi - cdf).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at the 1% significance level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.627_6 / (n as f64).sqrt()
}
