use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{substream, TrialRng};
use crate::state::{DensityOperator, Space, StateVector};

/// Qubit preparation and push-out readout imperfections.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReadoutParams {
    /// Probability that optical pumping leaves the atom in `|0⟩`.
    pub pumping_efficiency: f64,
    /// Probability that an atom in `|1⟩` is pushed out.
    pub pushout_efficiency: f64,
    /// Probability that an atom in `|0⟩` is lost anyway.
    pub background_loss: f64,
}

impl Default for ReadoutParams {
    fn default() -> Self {
        ReadoutParams { pumping_efficiency: 0.85, pushout_efficiency: 1.0, background_loss: 0.0 }
    }
}

impl ReadoutParams {
    /// Perfect pumping and readout.
    pub fn ideal() -> Self {
        ReadoutParams { pumping_efficiency: 1.0, pushout_efficiency: 1.0, background_loss: 0.0 }
    }

    pub fn validate(&self) -> Vec<String> {
        [
            ("pumping_efficiency", self.pumping_efficiency),
            ("pushout_efficiency", self.pushout_efficiency),
            ("background_loss", self.background_loss),
        ]
        .into_iter()
        .filter(|(_, x)| !(0.0..=1.0).contains(x))
        .map(|(n, _)| format!("{n} in [0, 1]"))
        .collect()
    }

    fn checked(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(v))
        }
    }
}

/// Anything that carries a qubit population `P(|1⟩)`.
pub trait QubitPopulation {
    fn population_one(&self) -> Result<f64>;
}

impl QubitPopulation for StateVector {
    fn population_one(&self) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::NotQubit(self.dim()));
        }
        Ok(self.probability(1) / (self.probability(0) + self.probability(1)))
    }
}

impl QubitPopulation for DensityOperator {
    fn population_one(&self) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::NotQubit(self.dim()));
        }
        Ok(self.population(1).clamp(0.0, 1.0))
    }
}

impl QubitPopulation for f64 {
    fn population_one(&self) -> Result<f64> {
        if (0.0..=1.0).contains(self) {
            Ok(*self)
        } else {
            Err(Error::OutOfRange(format!("population {self} not in [0, 1]")))
        }
    }
}

/// `P(absent) = pushout·P(|1⟩) + background_loss·P(|0⟩)`.
pub fn absent_probability(population_one: f64, params: &ReadoutParams) -> f64 {
    params.pushout_efficiency * population_one + params.background_loss * (1.0 - population_one)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutOutcome {
    pub present: bool,
    pub probability_absent: f64,
}

/// One push-out measurement drawn from `rng`.
pub fn pushout_shot<S: QubitPopulation + ?Sized>(
    state: &S,
    params: &ReadoutParams,
    rng: &mut TrialRng,
) -> Result<ReadoutOutcome> {
    params.checked()?;
    let p_absent = absent_probability(state.population_one()?, params);
    let absent = rng.random::<f64>() < p_absent;
    Ok(ReadoutOutcome { present: !absent, probability_absent: p_absent })
}

/// Push-out readout: the state is mapped onto presence (|0⟩) or absence
/// (|1⟩) of the atom.
pub fn pushout_readout<S: QubitPopulation + ?Sized>(
    state: &S,
    params: &ReadoutParams,
    seed: u64,
) -> Result<ReadoutOutcome> {
    pushout_shot(state, params, &mut substream(seed, 0))
}

/// Qubit state after optical pumping: `diag(η, 1 − η)`.
pub fn optical_pump(params: &ReadoutParams) -> Result<DensityOperator> {
    params.checked()?;
    let eta = params.pumping_efficiency;
    DensityOperator::diagonal(&[eta, 1.0 - eta], Space::qubit(""))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(i: usize) -> StateVector {
        StateVector::basis_state(Space::qubit(""), i).unwrap()
    }

    #[test]
    fn pure_states_read_out_deterministically() {
        let ideal = ReadoutParams::ideal();
        for seed in 0..20 {
            let one = pushout_readout(&basis(1), &ideal, seed).unwrap();
            assert!(!one.present);
            assert_eq!(one.probability_absent, 1.0);
            let zero = pushout_readout(&basis(0), &ideal, seed).unwrap();
            assert!(zero.present);
            assert_eq!(zero.probability_absent, 0.0);
        }
    }

    #[test]
    fn superposition_is_half() {
        let plus = StateVector::from_real(&[1.0, 1.0], Space::qubit("")).unwrap();
        let r = pushout_readout(&plus, &ReadoutParams::ideal(), 0).unwrap();
        assert!((r.probability_absent - 0.5).abs() < 1e-15);
    }

    #[test]
    fn readout_is_affine_in_population() {
        let p = ReadoutParams { pumping_efficiency: 0.85, pushout_efficiency: 0.97, background_loss: 0.02 };
        let pts: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|&x| absent_probability(x, &p)).collect();
        let slope = pts[4] - pts[0];
        for (i, y) in pts.iter().enumerate() {
            assert!((y - (pts[0] + slope * i as f64 / 4.0)).abs() < 1e-15);
        }
        assert!((slope - 0.95).abs() < 1e-15);
    }

    #[test]
    fn pumping_examples() {
        let full = optical_pump(&ReadoutParams::ideal()).unwrap();
        assert_eq!(full.population(0), 1.0);
        let pumped = optical_pump(&ReadoutParams::default()).unwrap();
        assert_eq!((pumped.population(0), pumped.population(1)), (0.85, 1.0 - 0.85));
        let half = optical_pump(&ReadoutParams { pumping_efficiency: 0.5, ..ReadoutParams::ideal() }).unwrap();
        assert!((half.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = ReadoutParams { pushout_efficiency: 1.5, ..ReadoutParams::default() };
        assert_eq!(bad.validate(), vec!["pushout_efficiency in [0, 1]"]);
        assert!(optical_pump(&bad).is_err());
    }

    #[test]
    fn sampling_follows_probability() {
        let p = ReadoutParams::ideal();
        let mut rng = substream(42, 0);
        let n = 100_000;
        let absent = (0..n).filter(|_| !pushout_shot(&0.3, &p, &mut rng).unwrap().present).count();
        let frac = absent as f64 / n as f64;
        assert!((frac - 0.3).abs() < 3.0 * (0.21f64 / n as f64).sqrt());
    }
}
