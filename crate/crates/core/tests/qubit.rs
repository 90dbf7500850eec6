mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Normal};
use tweezer_sim::qubit::{
    echo_signal, rabi_rotation, ramsey_contrast, ramsey_signal, spin_echo_signal, stationary_echo,
    transfer_sequence, transport_echo, DephasingKind, DephasingModel, PulseSpec, TransportPlan,
};
use tweezer_sim::state::{Space, StateVector};

fn ground() -> StateVector {
    StateVector::basis_state(Space::qubit(""), 0).unwrap()
}

#[test]
fn rabi_rotation_agrees_with_ode_integration() {
    let cases = [
        (2.0 * PI * 6.7e6, 0.0, 0.0, 40e-9),
        (2.0 * PI * 6.7e6, 0.7, 2.0 * PI * 1.5e6, 113e-9),
        (1.0, -2.1, 0.4, 3.3),
        (5.0, PI, -7.0, 0.9),
    ];
    for (omega, phase, detuning, t) in cases {
        let pulse = PulseSpec::with_duration(t, phase, omega, detuning).unwrap();
        let got = rabi_rotation(&ground(), &pulse).unwrap();
        let start = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let want = common::integrate_qubit(start, omega, phase, detuning, t, 20_000);
        for k in 0..2 {
            assert!((got.amplitude(k) - want[k]).norm() < 1e-9, "{:?} vs {:?}", got.amplitude(k), want[k]);
        }
    }
}

#[test]
fn pi_pulse_flips_the_qubit() {
    let omega = 2.0 * PI * 6.7e6;
    let pulse = PulseSpec::resonant(PI, 0.0, omega).unwrap();
    assert!((pulse.duration - PI / omega).abs() < 1e-18);
    let out = rabi_rotation(&ground(), &pulse).unwrap();
    assert!((out.probability(1) - 1.0).abs() < 1e-12);
}

/// `P(|0⟩)` after π/2 – t – π/2 for one detuning, from explicit matrices.
fn ramsey_shot(delay: f64, detuning: f64) -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mi = Complex64::new(0.0, -h);
    let r = [[Complex64::new(h, 0.0), mi], [mi, Complex64::new(h, 0.0)]];
    let f = [Complex64::from_polar(1.0, -detuning * delay / 2.0), Complex64::from_polar(1.0, detuning * delay / 2.0)];
    let after_first = [r[0][0], r[1][0]];
    let free = [f[0] * after_first[0], f[1] * after_first[1]];
    (r[0][0] * free[0] + r[0][1] * free[1]).norm_sqr()
}

fn sampled_signal(delay: f64, laser: f64, mut draw: impl FnMut(&mut ChaCha8Rng) -> f64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 200_000;
    let xs: Vec<f64> = (0..n).map(|_| ramsey_shot(delay, laser + draw(&mut rng))).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[test]
fn gaussian_ramsey_agrees_with_direct_sampling() {
    let tau = 630e-6;
    let model = DephasingModel::static_gaussian(tau);
    // Contrast exp(−σ²t²/2) reaches 1/e at τ when σ = √2/τ.
    let spread = Normal::new(0.0, 2f64.sqrt() / tau).unwrap();
    for (delay, laser) in [(100e-6, 0.0), (630e-6, 2.0 * PI * 700.0), (1.2e-3, 2.0 * PI * 300.0)] {
        let (mc, se) = sampled_signal(delay, laser, |r| spread.sample(r));
        let exact = ramsey_signal(delay, &model, laser).unwrap();
        assert!((exact - mc).abs() < 4.0 * se + 1e-12, "{exact} vs {mc} ± {se}");
    }
}

#[test]
fn thermal_ramsey_agrees_with_direct_sampling() {
    let tau = 630e-6;
    let model = DephasingModel { kind: DephasingKind::Thermal3d, ..DephasingModel::static_gaussian(tau) };
    // Sum of three exponentials over τ'; (1 + (τ/τ')²)^{-3/2} = 1/e.
    let scale = tau / ((2.0f64 / 3.0).exp() - 1.0).sqrt();
    for (delay, laser) in [(200e-6, 0.0), (630e-6, -2.0 * PI * 400.0), (1.5e-3, 0.0)] {
        let (mc, se) = sampled_signal(delay, laser, |r| {
            let e: f64 = (0..3).map(|_| -> f64 { Exp1.sample(r) }).sum();
            e / scale
        });
        let exact = ramsey_signal(delay, &model, laser).unwrap();
        assert!((exact - mc).abs() < 4.0 * se + 1e-12, "{exact} vs {mc} ± {se}");
    }
}

#[test]
fn contrast_hits_one_over_e_at_calibration_time() {
    for kind in [DephasingKind::GaussianStatic, DephasingKind::Thermal3d] {
        let model = DephasingModel { kind, ..DephasingModel::static_gaussian(630e-6) };
        let c = ramsey_contrast(630e-6, &model).unwrap();
        assert!((c - (-1.0f64).exp()).abs() < 1e-9, "{kind:?}: {c}");
    }
}

#[test]
fn zero_area_echo_is_a_ramsey_sequence() {
    let model = DephasingModel { mean_detuning: 2.0 * PI * 250.0, ..DephasingModel::default() };
    for total in [0.0, 300e-6, 1e-3, 4e-3] {
        for frac in [0.0, 0.3, 0.5, 1.0] {
            let e = echo_signal(total, frac * total, 0.0, &model, 2.0 * PI * 100.0).unwrap();
            let r = ramsey_signal(total, &model, 2.0 * PI * 100.0).unwrap();
            assert!((e - r).abs() < 1e-9);
        }
    }
}

#[test]
fn centered_echo_refocuses_any_static_spread() {
    for kind in [DephasingKind::GaussianStatic, DephasingKind::Thermal3d] {
        let model = DephasingModel { kind, mean_detuning: 2.0 * PI * 1e3, ..DephasingModel::static_gaussian(630e-6) };
        for total in [1e-3, 10e-3, 40e-3, 200e-3] {
            let e = spin_echo_signal(total, total / 2.0, &model).unwrap();
            assert!((e - 1.0).abs() < 1e-6, "{kind:?} at {total}: {e}");
        }
    }
}

#[test]
fn off_center_echo_loses_contrast() {
    let model = DephasingModel::static_gaussian(630e-6);
    let centered = spin_echo_signal(10e-3, 5e-3, &model).unwrap();
    let shifted = spin_echo_signal(10e-3, 5.5e-3, &model).unwrap();
    assert!(shifted < centered - 0.1);
    assert!(ramsey_contrast(0.0, &model).unwrap() > 1.0 - 1e-12);
}

#[test]
fn hand_off_keeps_contrast_for_any_depth_ratio() {
    let model = DephasingModel::default();
    for depth_ratio in [0.5, 1.0, 2.0] {
        let plan = TransportPlan { depth_ratio, ..TransportPlan::default() };
        let res = transfer_sequence(&model, &plan).unwrap();
        assert!((res.contrast - res.no_transfer_contrast).abs() < 1e-6, "{depth_ratio}: {res:?}");
    }
}

#[test]
fn transport_echo_does_not_depend_on_displacement() {
    let plan = TransportPlan::default();
    let model = DephasingModel::default();
    let reference = stationary_echo(&plan, &model).unwrap();
    for k in 0..=9 {
        let e = transport_echo(&plan, &model, k as f64 * 1e-6).unwrap();
        assert!((e - reference).abs() < 1e-9, "{k} um: {e} vs {reference}");
    }
}

#[test]
fn heating_breaks_transport_invariance() {
    let plan = TransportPlan { heating: 2.0 * PI * 20.0 / 1e-6, ..TransportPlan::default() };
    let model = DephasingModel::default();
    let near = transport_echo(&plan, &model, 1e-6).unwrap();
    let far = transport_echo(&plan, &model, 9e-6).unwrap();
    assert!(far < near);
}
