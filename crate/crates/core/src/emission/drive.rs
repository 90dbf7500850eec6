use super::params::{EmitterParams, PulseShape};

/// Largest Γ·dt used to discretize a smooth pulse envelope.
pub const MAX_GAMMA_STEP: f64 = 0.01;

/// Constant-Rabi-frequency piece of a single pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSegment {
    /// Offset from the pulse start (s).
    pub start: f64,
    pub duration: f64,
    /// Rabi frequency Ω (rad/s).
    pub rabi: f64,
}

/// Drive of one pulse, either as piecewise-constant segments or as an
/// instantaneous rotation when the pulse has zero length.
#[derive(Debug, Clone, PartialEq)]
pub enum Drive {
    Segments(Vec<DriveSegment>),
    Kick { area: f64 },
}

impl Drive {
    pub fn for_pulse(p: &EmitterParams) -> Drive {
        if p.pulse_duration == 0.0 {
            return Drive::Kick { area: p.pulse_area };
        }
        match p.pulse_shape {
            PulseShape::Square => Drive::Segments(vec![DriveSegment {
                start: 0.0,
                duration: p.pulse_duration,
                rabi: p.pulse_area / p.pulse_duration,
            }]),
            PulseShape::Gaussian => {
                let window = p.pulse_window();
                let max_dt = (MAX_GAMMA_STEP * p.excited_lifetime).min(p.pulse_duration / 50.0);
                let n = (window / max_dt).ceil() as usize;
                let dt = window / n as f64;
                let sigma = p.pulse_duration / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
                let center = window / 2.0;
                let envelope: Vec<f64> = (0..n)
                    .map(|i| {
                        let t = (i as f64 + 0.5) * dt - center;
                        (-0.5 * (t / sigma).powi(2)).exp()
                    })
                    .collect();
                // Scale so the discretized area is exact.
                let scale = p.pulse_area / (envelope.iter().sum::<f64>() * dt);
                Drive::Segments(
                    envelope
                        .iter()
                        .enumerate()
                        .map(|(i, e)| DriveSegment { start: i as f64 * dt, duration: dt, rabi: e * scale })
                        .collect(),
                )
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Drive::Kick { area } => *area,
            Drive::Segments(s) => s.iter().map(|s| s.rabi * s.duration).sum(),
        }
    }

    /// Time at which the drive is off again, relative to the pulse start.
    pub fn end(&self) -> f64 {
        match self {
            Drive::Kick { .. } => 0.0,
            Drive::Segments(s) => s.last().map_or(0.0, |s| s.start + s.duration),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn areas_are_exact() {
        let sq = Drive::for_pulse(&EmitterParams::default());
        assert!((sq.area() - PI).abs() < 1e-15);
        let g = Drive::for_pulse(&EmitterParams { pulse_shape: PulseShape::Gaussian, ..EmitterParams::default() });
        assert!((g.area() - PI).abs() < 1e-12);
        assert!((g.end() - 16e-9).abs() < 1e-20);
        if let Drive::Segments(s) = g {
            assert!(s.iter().all(|s| s.duration / 26e-9 <= MAX_GAMMA_STEP + 1e-12));
        }
    }

    #[test]
    fn zero_length_pulse_is_a_kick() {
        let d = Drive::for_pulse(&EmitterParams { pulse_duration: 0.0, ..EmitterParams::default() });
        assert_eq!(d, Drive::Kick { area: PI });
    }
}
