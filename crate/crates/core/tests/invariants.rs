use bangbang_core::bath::Mode;
use bangbang_core::control::{gamma_p_discrete, PulseTrainSpec};
use bangbang_core::exact::{apply_pulse, Coupling, ExactEngine, ExactModel, QubitMatrix};
use bangbang_core::pauli::{cumulative_frames, is_cyclic, zeroth_average, Axis, GateSequence, Step};
use bangbang_core::Complex64;
use proptest::prelude::*;

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

fn coupling() -> impl Strategy<Value = Complex64> {
    (-0.3f64..0.3, -0.3f64..0.3).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn evolution_keeps_a_valid_state(
        gx in coupling(), gy in coupling(), gz in coupling(),
        temperature in 0.0f64..0.5,
        steps in proptest::collection::vec((axis(), 0.0f64..2.0, any::<bool>()), 1..8),
    ) {
        let model = ExactModel::new(
            1.1,
            vec![Mode::real(1.0, 0.0).unwrap()],
            10,
            temperature,
            Coupling::General { x: Some(vec![gx]), y: Some(vec![gy]), z: Some(vec![gz]) },
        ).unwrap();
        let engine = ExactEngine::new(model).unwrap();
        let mut rho = engine.initial_state(&QubitMatrix::from_bloch([0.5, 0.5, 0.5]).unwrap());
        for (a, x, pulse) in steps {
            rho = if pulse { apply_pulse(&rho, a, 3.0 * x).unwrap() } else { engine.propagate(&rho, x).unwrap() };
            prop_assert!((rho.trace() - 1.0).norm() < 1e-10);
            prop_assert!(rho.hermiticity_defect() < 1e-10);
            prop_assert!(rho.min_eigenvalue().unwrap() > -1e-10);
        }
    }

    #[test]
    fn palindromes_are_cyclic_and_repeat(pulses in proptest::collection::vec(axis(), 1..6)) {
        let mut steps = Vec::new();
        for a in pulses.iter().chain(pulses.iter().rev()) {
            steps.push(Step::delay(1, 1));
            steps.push(Step::Pulse(*a));
        }
        let seq = GateSequence::new(steps, 1.0).unwrap();
        prop_assert!(is_cyclic(&seq).cyclic);
        prop_assert_eq!(cumulative_frames(&seq).len(), seq.n_pulses() + 1);
        // the average is linear in the interval lengths, so doubling the base changes nothing
        let half = zeroth_average(&seq, &Axis::ALL).unwrap();
        let twice = zeroth_average(&seq.clone().with_base(2.0).unwrap(), &Axis::ALL).unwrap();
        prop_assert_eq!(half, twice);
    }

    #[test]
    fn train_decay_is_nonnegative(omega in 0.1f64..5.0, g in 0.01f64..1.0, t in 0.0f64..3.0, dt in 0.01f64..2.0, n in 1u32..30) {
        let mode = [Mode::real(omega, g).unwrap()];
        let gp = gamma_p_discrete(&mode, t, &PulseTrainSpec::new(dt, n).unwrap()).unwrap();
        prop_assert!(gp >= 0.0 && gp.is_finite());
    }
}
