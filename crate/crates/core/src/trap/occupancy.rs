use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::rng::{substream, TrialRng};

/// Loading/loss dynamics of the tweezer.
///
/// Atoms arrive at `loading_rate` and each trapped atom is lost at
/// `loss_rate`. With `blockade`, an arrival while an atom is held ejects
/// both (light-assisted pair loss), so the occupancy stays in {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OccupancyProcess {
    pub loading_rate: f64,
    pub loss_rate: f64,
    pub blockade: bool,
    /// Fluorescence integration bin (s).
    pub bin_width: f64,
}

impl Default for OccupancyProcess {
    fn default() -> Self {
        OccupancyProcess { loading_rate: 0.5, loss_rate: 0.1, blockade: true, bin_width: 10e-3 }
    }
}

impl OccupancyProcess {
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.loading_rate >= 0.0 && self.loading_rate.is_finite()) {
            v.push("loading_rate >= 0".to_string());
        }
        if !(self.loss_rate >= 0.0 && self.loss_rate.is_finite()) {
            v.push("loss_rate >= 0".to_string());
        }
        if !(self.bin_width > 0.0) {
            v.push("bin_width > 0".to_string());
        }
        v
    }

    /// Long-run probability of holding one atom under blockade:
    /// `R / (2R + γ)`.
    pub fn stationary_occupancy(&self) -> f64 {
        let total = 2.0 * self.loading_rate + self.loss_rate;
        if total == 0.0 {
            0.0
        } else {
            self.loading_rate / total
        }
    }

    /// Relaxation rate of the blockaded two-state chain, `2R + γ`.
    pub fn relaxation_rate(&self) -> f64 {
        2.0 * self.loading_rate + self.loss_rate
    }

    /// Lazy event stream starting from an empty trap.
    pub fn events(&self, seed: u64) -> OccupancyEvents {
        OccupancyEvents { process: *self, rng: substream(seed, 0), time: 0.0, level: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Load,
    Loss,
    /// Arrival into an occupied trap under blockade; both atoms leave.
    PairEjection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyEvent {
    pub time: f64,
    pub kind: EventKind,
    /// Occupancy right after the event.
    pub level: u32,
}

/// Gillespie sampler of the occupancy jump chain.
pub struct OccupancyEvents {
    process: OccupancyProcess,
    rng: TrialRng,
    time: f64,
    level: u32,
}

impl Iterator for OccupancyEvents {
    type Item = OccupancyEvent;

    fn next(&mut self) -> Option<OccupancyEvent> {
        let load = self.process.loading_rate;
        let loss = self.process.loss_rate * self.level as f64;
        let total = load + loss;
        if total <= 0.0 {
            return None;
        }
        let wait = Exp::new(total).expect("positive rate").sample(&mut self.rng);
        self.time += wait;
        let kind = if self.rng.random::<f64>() * total < load {
            if self.process.blockade && self.level >= 1 {
                EventKind::PairEjection
            } else {
                EventKind::Load
            }
        } else {
            EventKind::Loss
        };
        self.level = match kind {
            EventKind::Load => self.level + 1,
            EventKind::Loss => self.level - 1,
            EventKind::PairEjection => self.level - 1,
        };
        Some(OccupancyEvent { time: self.time, kind, level: self.level })
    }
}

/// Piecewise-constant occupancy on `[0, duration]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyTrace {
    duration: f64,
    /// `(time, level)` change points, starting with `(0, initial level)`.
    steps: Vec<(f64, u32)>,
}

impl OccupancyTrace {
    /// Constant occupancy, handy for controls.
    pub fn constant(level: u32, duration: f64) -> Self {
        OccupancyTrace { duration, steps: vec![(0.0, level)] }
    }

    pub fn from_steps(steps: Vec<(f64, u32)>, duration: f64) -> Result<Self> {
        if steps.first().map(|s| s.0) != Some(0.0) {
            return Err(Error::OutOfRange("occupancy steps must start at t = 0".into()));
        }
        if steps.windows(2).any(|w| w[1].0 < w[0].0) || steps.last().unwrap().0 > duration {
            return Err(Error::OutOfRange("occupancy steps must be sorted within the duration".into()));
        }
        Ok(OccupancyTrace { duration, steps })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn steps(&self) -> &[(f64, u32)] {
        &self.steps
    }

    /// Number of level changes.
    pub fn event_count(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn max_level(&self) -> u32 {
        self.steps.iter().map(|s| s.1).max().unwrap_or(0)
    }

    pub fn level_at(&self, t: f64) -> u32 {
        let idx = self.steps.partition_point(|s| s.0 <= t);
        self.steps[idx.saturating_sub(1)].1
    }

    /// `∫_a^b n(t) dt`.
    pub fn integrated_level(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        let start = self.steps.partition_point(|s| s.0 <= a).saturating_sub(1);
        for (i, &(t0, level)) in self.steps.iter().enumerate().skip(start) {
            if t0 >= b {
                break;
            }
            let t1 = self.steps.get(i + 1).map_or(self.duration, |s| s.0);
            let lo = t0.max(a);
            let hi = t1.min(b);
            if hi > lo {
                total += level as f64 * (hi - lo);
            }
        }
        total
    }

    /// Time-averaged occupancy.
    pub fn mean_level(&self) -> f64 {
        self.integrated_level(0.0, self.duration) / self.duration
    }
}

/// Samples the occupancy step function on `[0, duration]`.
pub fn simulate_occupancy(proc: &OccupancyProcess, duration: f64, seed: u64) -> Result<OccupancyTrace> {
    let v = proc.validate();
    if !v.is_empty() {
        return Err(Error::InvalidParameters(v));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::OutOfRange(format!("duration {duration} must be > 0")));
    }
    let mut steps = vec![(0.0, 0)];
    for ev in proc.events(seed) {
        if ev.time > duration {
            break;
        }
        steps.push((ev.time, ev.level));
    }
    Ok(OccupancyTrace { duration, steps })
}
