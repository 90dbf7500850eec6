use crate::error::{Error, Result};

/// Least-squares fit of `y = offset + amplitude · cos(ω t)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CosineFit {
    pub omega: f64,
    pub omega_error: f64,
    pub offset: f64,
    pub offset_error: f64,
    pub amplitude: f64,
    pub amplitude_error: f64,
    pub residual_rms: f64,
}

struct Linear {
    offset: f64,
    amplitude: f64,
    sse: f64,
    /// Inverse of the normal matrix, `[[a, b], [b, c]]`.
    inverse: [f64; 3],
}

fn linear_fit(t: &[f64], y: &[f64], omega: f64) -> Option<Linear> {
    let n = t.len() as f64;
    let (mut sc, mut scc, mut sy, mut scy) = (0.0, 0.0, 0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(y) {
        let c = (omega * ti).cos();
        sc += c;
        scc += c * c;
        sy += yi;
        scy += c * yi;
    }
    let det = n * scc - sc * sc;
    if det.abs() < 1e-12 * n * n {
        return None;
    }
    let offset = (scc * sy - sc * scy) / det;
    let amplitude = (n * scy - sc * sy) / det;
    let sse = t
        .iter()
        .zip(y)
        .map(|(&ti, &yi)| (yi - offset - amplitude * (omega * ti).cos()).powi(2))
        .sum();
    Some(Linear { offset, amplitude, sse, inverse: [scc / det, -sc / det, n / det] })
}

fn sse(t: &[f64], y: &[f64], omega: f64) -> f64 {
    linear_fit(t, y, omega).map_or(f64::INFINITY, |l| l.sse)
}

/// Searches `omega_range` on a dense grid, then refines the best cell by
/// golden-section search. Errors come from the curvature of the residual
/// sum of squares.
pub fn fit_cosine(t: &[f64], y: &[f64], omega_range: (f64, f64)) -> Result<CosineFit> {
    if t.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: t.len(), actual: y.len() });
    }
    if t.len() < 4 {
        return Err(Error::OutOfRange("a cosine fit needs at least 4 points".into()));
    }
    let (lo, hi) = omega_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::OutOfRange(format!("bad frequency range ({lo}, {hi})")));
    }
    const GRID: usize = 4000;
    let step = (hi - lo) / GRID as f64;
    let best = (0..=GRID)
        .map(|i| lo + i as f64 * step)
        .min_by(|&a, &b| sse(t, y, a).total_cmp(&sse(t, y, b)))
        .expect("non-empty grid");

    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    for _ in 0..200 {
        if sse(t, y, c) < sse(t, y, d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
        if (b - a) < 1e-13 * best {
            break;
        }
    }
    let omega = 0.5 * (a + b);
    let fit = linear_fit(t, y, omega).ok_or_else(|| Error::OutOfRange("degenerate fit".into()))?;

    let dof = (t.len() - 3) as f64;
    let s2 = fit.sse / dof;
    let h = 1e-4 * omega;
    let curvature = (sse(t, y, omega + h) - 2.0 * fit.sse + sse(t, y, omega - h)) / (h * h);
    let omega_error = if curvature > 0.0 { (2.0 * s2 / curvature).sqrt() } else { f64::INFINITY };
    Ok(CosineFit {
        omega,
        omega_error,
        offset: fit.offset,
        offset_error: (s2 * fit.inverse[0]).sqrt(),
        amplitude: fit.amplitude,
        amplitude_error: (s2 * fit.inverse[2]).sqrt(),
        residual_rms: (fit.sse / t.len() as f64).sqrt(),
    })
}
