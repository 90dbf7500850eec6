use std::f64::consts::PI;

use super::config::{Experiment, ExperimentConfig};
use crate::emission::{counting, EmitterParams};
use crate::error::Result;
use crate::fock::{beam_splitter_unitary, ModeOccupationBasis};
use crate::herald::{
    atom_photon_state, bell_decomposition, entanglement_rate, herald_filter, hom_coincidence_probability,
    reconstruct, AtomLabel, HeraldConfig, PhotonModePair,
};
use crate::qubit::{
    ramsey_contrast, spin_echo_signal, stationary_echo, transfer_sequence, transport_echo, DephasingModel,
    TransportPlan,
};
use crate::state::StateVector;
use crate::trap::OccupancyProcess;

/// Outcome of one built-in invariant check.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Fast invariant checks across all modules (a few seconds in release).
pub fn selftest() -> Vec<Check> {
    vec![
        check("hom_two_photon_cancellation", || {
            let basis = ModeOccupationBasis::new(2, 2, 2)?;
            let input = StateVector::basis_state(basis.space(), basis.index_of(&[1, 1]).expect("in basis"))?;
            let out = input.apply_unitary(&beam_splitter_unitary(&basis)?)?;
            let p = out.probability(basis.index_of(&[1, 1]).expect("in basis"));
            Ok((p < 1e-24 && (out.norm() - 1.0).abs() < 1e-12, format!("P(1,1) = {p:e}")))
        }),
        check("bell_reconstruction", || {
            let joint = atom_photon_state(AtomLabel::A).tensor(&atom_photon_state(AtomLabel::B))?;
            let terms = bell_decomposition(&joint)?;
            let err = (reconstruct(&terms) - joint.as_vector()).norm();
            let equal = terms.iter().all(|t| (t.amplitude - 0.5).abs() < 1e-12);
            Ok((err < 1e-12 && equal, format!("reconstruction error {err:e}")))
        }),
        check("ramsey_calibration", || {
            let c = ramsey_contrast(630e-6, &DephasingModel::static_gaussian(630e-6))?;
            Ok(((c - (-1f64).exp()).abs() < 1e-3, format!("C(630 µs) = {c}")))
        }),
        check("static_echo_refocuses", || {
            let m = DephasingModel::static_gaussian(630e-6);
            let e = spin_echo_signal(20e-3, 10e-3, &m)?;
            Ok(((e - 1.0).abs() < 1e-6, format!("echo = {e}")))
        }),
        check("echo_at_40ms", || {
            let e = spin_echo_signal(40e-3, 20e-3, &DephasingModel::default())?;
            Ok((e >= 0.2, format!("echo = {e}")))
        }),
        check("transfer_invariance", || {
            let m = DephasingModel::default();
            let mut worst: f64 = 0.0;
            for r in [0.5, 1.0, 2.0] {
                let res = transfer_sequence(&m, &TransportPlan { depth_ratio: r, ..TransportPlan::default() })?;
                worst = worst.max((res.contrast - res.no_transfer_contrast).abs());
            }
            Ok((worst < 1e-6, format!("max deviation {worst:e}")))
        }),
        check("transport_invariance", || {
            let plan = TransportPlan::default();
            let m = DephasingModel::default();
            let reference = stationary_echo(&plan, &m)?;
            let far = transport_echo(&plan, &m, plan.max_displacement)?;
            Ok(((far - reference).abs() < 1e-9, format!("{far} vs {reference}")))
        }),
        check("blockade_caps_occupancy", || {
            let max = OccupancyProcess::default().events(1).take(100_000).map(|e| e.level).max().unwrap_or(0);
            Ok((max <= 1, format!("max occupancy {max}")))
        }),
        check("two_photon_oracle", || {
            let d = counting::photon_number_distribution(&EmitterParams::default())?;
            Ok(((0.014..=0.022).contains(&d[2]), format!("P(n>=2) = {}", d[2])))
        }),
        check("hom_endpoints", || {
            let zero = hom_coincidence_probability(&PhotonModePair::perfect())?;
            let half = hom_coincidence_probability(&PhotonModePair::with_overlap_sq(0.0)?)?;
            Ok((zero == 0.0 && half == 0.5, format!("{zero}, {half}")))
        }),
        check("ideal_herald", || {
            let out = herald_filter(&PhotonModePair::perfect(), &HeraldConfig::ideal())?;
            let ok = (out.fidelity_to_singlet - 1.0).abs() < 1e-12 && (out.herald_probability - 0.25).abs() < 1e-12;
            Ok((ok, format!("F = {}, p = {}", out.fidelity_to_singlet, out.herald_probability)))
        }),
        check("pair_rate_window", || {
            let r = entanglement_rate(&HeraldConfig::default(), 1000.0)?;
            let ok = (1e-6..=1e-5).contains(&r.efficiency_per_attempt) && (50.0..=150.0).contains(&r.mean_pair_interval);
            Ok((ok, format!("efficiency {:e}, interval {} s", r.efficiency_per_attempt, r.mean_pair_interval)))
        }),
        check("config_round_trip", || {
            let mut cfg = ExperimentConfig::new(Experiment::G2);
            cfg.seed = 42;
            cfg.overrides.insert("emitter.pulse_area_pi".into(), toml::Value::Float(PI / 3.0));
            let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string(), None)?;
            Ok((back == cfg, String::new()))
        }),
    ]
}
