use num_complex::Complex64;
use proptest::prelude::*;
use tweezer_sim::fock::{beam_splitter_unitary, ModeOccupationBasis};
use tweezer_sim::herald::{bell_decomposition, reconstruct};
use tweezer_sim::qubit::{rabi_rotation, PulseSpec};
use tweezer_sim::state::{partial_trace, tensor, DensityOperator, Space, StateVector};

fn amplitudes(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    amplitudes(dim).prop_map(move |a| StateVector::normalized(a, Space::single((0..dim).map(|i| format!("s{i}"))).unwrap()).unwrap())
}

fn qubit() -> impl Strategy<Value = StateVector> {
    amplitudes(2).prop_map(|a| StateVector::normalized(a, Space::qubit("q")).unwrap())
}

proptest! {
    #[test]
    fn pulses_preserve_norm(psi in qubit(), area in 0.0f64..20.0, phase in -4.0f64..4.0, det in -5.0f64..5.0) {
        let pulse = PulseSpec::with_duration(area, phase, 1.0, det).unwrap();
        let out = rabi_rotation(&psi, &pulse).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beam_splitter_preserves_norm(a in amplitudes(6)) {
        let basis = ModeOccupationBasis::new(2, 2, 2).unwrap();
        let psi = StateVector::normalized(a, basis.space()).unwrap();
        let out = psi.apply_unitary(&beam_splitter_unitary(&basis).unwrap()).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_product_is_associative(a in state(2), b in state(3), c in state(2)) {
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.dim(), 12);
        for i in 0..12 {
            prop_assert!((left.amplitude(i) - right.amplitude(i)).norm() < 1e-12);
        }
        prop_assert_eq!(left.space().dims(), right.space().dims());
    }

    #[test]
    fn partial_trace_of_product_returns_factor(a in state(2), b in state(3)) {
        let rho = tensor(&a, &b).unwrap().to_density();
        let ra = partial_trace(&rho, &[0]).unwrap();
        let rb = partial_trace(&rho, &[1]).unwrap();
        let pa = a.to_density();
        let pb = b.to_density();
        for r in 0..2 {
            for c in 0..2 {
                prop_assert!((ra.entry(r, c) - pa.entry(r, c)).norm() < 1e-12);
            }
        }
        for r in 0..3 {
            for c in 0..3 {
                prop_assert!((rb.entry(r, c) - pb.entry(r, c)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_keeps_unit_trace(psi in state(12)) {
        let space = Space::qubit("a").product(&Space::single(["x", "y", "z"]).unwrap()).product(&Space::qubit("b"));
        let rho = StateVector::new(psi.amplitudes().to_vec(), space).unwrap().to_density();
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let r = partial_trace(&rho, &keep).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.eigenvalues().iter().all(|&e| e > -1e-10));
        }
    }

    #[test]
    fn fidelity_lies_in_unit_interval(psi in state(4), phi in state(4), w in 0.0f64..1.0) {
        let mixed = DensityOperator::maximally_mixed(psi.space().clone()).unwrap();
        let rho = psi.to_density().mix(&mixed, w).unwrap();
        let f = rho.fidelity(&phi).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((psi.to_density().fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_sectors_are_complete(a in amplitudes(16)) {
        let space = Space::qubit("A").product(&Space::single(["nu1_A", "nu2_A"]).unwrap())
            .product(&Space::qubit("B")).product(&Space::single(["nu1_B", "nu2_B"]).unwrap());
        let joint = StateVector::normalized(a, space).unwrap();
        let terms = bell_decomposition(&joint).unwrap();
        let weight: f64 = terms.iter().map(|t| t.amplitude * t.amplitude).sum();
        prop_assert!((weight - 1.0).abs() < 1e-12);
        prop_assert!((reconstruct(&terms) - joint.as_vector()).norm() < 1e-12);
    }
}
