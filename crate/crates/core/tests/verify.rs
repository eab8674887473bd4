mod common;

use blindlab_core::mbqc::{build_brickwork, compile_circuit, Circuit, MeasurementPattern, Role};
use blindlab_core::qcore::{all_branches, ForcedOutcomes, Gate, Outcome, Pauli, StateVector};
use blindlab_core::ubqc::{
    blindness_audit, run_ubqc_with, stabilizer_round, Adversary, AuditMode, ClientKeys, FlipReports, PauliAt,
    RandomPauli, ResourceServer,
};
use blindlab_core::verify::{
    check_traps, detection_rate, epsilon_correctness, input_battery, insert_traps, ChildsChannel, IdealResource,
    ResourceMode, TrappedPattern,
};
use blindlab_core::{Angle8, Error};
use common::{chain, random_pauli_detection_oracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_by_two(r: u8, theta: Angle8, d: u8) -> TrappedPattern {
    let base = chain(&[1]);
    let g = build_brickwork(2, 2).unwrap();
    let roles = vec![Role::Compute, Role::Output, Role::Trap, Role::Dummy(d)];
    let pattern =
        MeasurementPattern::new(g, 1, vec![Angle8::PI_4, Angle8::ZERO, Angle8::ZERO, Angle8::ZERO], roles).unwrap();
    let mut keys = ClientKeys::sample(&pattern, &mut ChaCha8Rng::seed_from_u64(0));
    keys.r[2] = r;
    keys.theta[2] = theta;
    let predictions = [(2, r ^ pattern.static_z(2))].into();
    TrappedPattern { base, pattern, traps: vec![2], dummies: vec![3], predictions, keys }
}

/// Exact rejection probability, summed over every measurement branch.
fn rejection_probability<A: Adversary>(tp: &TrappedPattern, mut adversary: impl FnMut() -> A) -> f64 {
    let mut p = 0.0;
    for bits in all_branches(tp.pattern.order().len()) {
        let mut forced = ForcedOutcomes::new(bits);
        let mut adv = adversary();
        let rng = &mut ChaCha8Rng::seed_from_u64(1);
        match run_ubqc_with(&tp.pattern, &tp.options(), Some(&mut adv), rng, &mut forced) {
            Err(Error::ZeroProbabilityBranch) => continue,
            Err(e) => panic!("{e}"),
            Ok(run) => {
                if !check_traps(tp, &run.client).unwrap().accepted {
                    p += forced.weight();
                }
            }
        }
    }
    p
}

#[test]
fn honest_runs_always_pass_their_traps() {
    let cnot = compile_circuit(&Circuit::new(2, vec![Gate::Cnot { control: 0, target: 1 }]).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (base, n_traps) in [(chain(&[1, 2, 3, 4]), 1), (chain(&[1, 2, 3, 4]), 2), (cnot.clone(), 1), (cnot, 3)] {
        for _ in 0..50 {
            let tp = insert_traps(&base, n_traps, &mut rng).unwrap();
            let run = run_ubqc_with(&tp.pattern, &tp.options(), None::<&mut FlipReports>, &mut rng.clone(), &mut rng)
                .unwrap();
            let v = check_traps(&tp, &run.client).unwrap();
            assert!(v.accepted && v.traps_checked == n_traps, "{v:?}");
        }
    }
}

#[test]
fn trapped_runs_still_compute() {
    let c = Circuit::new(1, vec![Gate::T(0), Gate::H(0)]).unwrap();
    let base = compile_circuit(&c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let input = common::random_state(1, &mut rng);
        let want = c.simulate(&input).unwrap();
        let tp = insert_traps(&base, 2, &mut rng).unwrap();
        let opts = blindlab_core::ubqc::UbqcOptions { input: Some(input), ..tp.options() };
        let run = run_ubqc_with(&tp.pattern, &opts, None::<&mut FlipReports>, &mut rng.clone(), &mut rng).unwrap();
        assert!(run.output.fidelity(&want).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn trap_soundness_by_exhaustive_pauli_enumeration() {
    for r in 0..2 {
        for theta in Angle8::all() {
            for d in 0..2 {
                let tp = two_by_two(r, theta, d);
                // The trap is measured in the XY plane at delta = -theta.
                let delta = -theta;
                let (c, s) = (delta.radians().cos(), delta.radians().sin());
                for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let reject = rejection_probability(&tp, || PauliAt { vertex: 2, pauli: p });
                    let (anti, commute) = match p {
                        Pauli::Z => (true, false),
                        Pauli::X => (c.abs() < 1e-12, s.abs() < 1e-12),
                        Pauli::Y => (s.abs() < 1e-12, c.abs() < 1e-12),
                        Pauli::I => unreachable!(),
                    };
                    if anti {
                        assert!((reject - 1.0).abs() < 1e-12, "{p:?} theta {theta:?}: {reject}");
                    }
                    if commute {
                        assert!(reject < 1e-12, "{p:?} theta {theta:?}: {reject}");
                    }
                }
                // Errors away from the trap go unnoticed.
                for v in [0, 1, 3] {
                    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                        assert!(rejection_probability(&tp, || PauliAt { vertex: v, pauli: p }) < 1e-12);
                    }
                }
                assert!((rejection_probability(&tp, || FlipReports) - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn random_pauli_rate_matches_enumeration() {
    let oracle = random_pauli_detection_oracle(4);
    assert!((oracle - 1.0 / 6.0).abs() < 1e-12);
    let base = chain(&[1]);
    let generate = move |rng: &mut ChaCha8Rng| insert_traps(&base, 1, rng);
    let adversary =
        |rng: &mut ChaCha8Rng| -> Box<dyn Adversary> { Box::new(RandomPauli::new(ChaCha8Rng::from_rng(rng).unwrap())) };
    let report = detection_rate(&generate, &adversary, 4000, 7).unwrap();
    let est = report.estimate.unwrap();
    assert!(est.contains(oracle), "{est:?} vs {oracle}");
    assert!(!report.accepted);
}

#[test]
fn trapped_view_matches_untrapped_view() {
    let tp = insert_traps(&chain(&[3]), 1, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let g = build_brickwork(2, 2).unwrap();
    let plain = MeasurementPattern::new(
        g,
        2,
        vec![Angle8::new(5), Angle8::ZERO, Angle8::new(2), Angle8::ZERO],
        vec![Role::Compute, Role::Output, Role::Compute, Role::Output],
    )
    .unwrap();
    let r = blindness_audit(&tp.pattern, &plain, AuditMode::Exact).unwrap();
    assert!(r.distance < 1e-10, "{r:?}");
}

#[test]
fn sampled_view_of_a_trapped_brickwork() {
    let base = compile_circuit(&Circuit::new(2, vec![Gate::Cnot { control: 0, target: 1 }]).unwrap()).unwrap();
    let tp = insert_traps(&base, 2, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let other = compile_circuit(&Circuit::new(3, vec![Gate::T(2)]).unwrap()).unwrap();
    let r = blindness_audit(&tp.pattern, &other, AuditMode::Sampled { trials: 20_000, seed: 5 }).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn stabilizer_tests_against_both_servers() {
    let g = build_brickwork(2, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for v in 0..g.n_vertices() {
        for _ in 0..20 {
            assert_eq!(stabilizer_round(&g, ResourceServer::Honest, v, &mut rng).unwrap(), Outcome::Zero);
        }
        // Born rule on |+>^n: X_v Z_N(v) has expectation 0.
        let mut p_fail = 0.0;
        for bits in all_branches(g.n_vertices()) {
            let mut forced = ForcedOutcomes::new(bits);
            match stabilizer_round(&g, ResourceServer::ProductCheater, v, &mut forced) {
                Err(Error::ZeroProbabilityBranch) => {}
                r => {
                    if r.unwrap() == Outcome::One {
                        p_fail += forced.weight();
                    }
                }
            }
        }
        assert!((p_fail - 0.5).abs() < 1e-12);
    }
}

#[test]
fn childs_modes_are_epsilon_correct() {
    let c = Circuit::new(2, vec![Gate::H(0), Gate::T(0), Gate::Cnot { control: 0, target: 1 }, Gate::S(1)]).unwrap();
    let ideal = IdealResource::new(ResourceMode::Blind, c.clone());
    let inputs = input_battery(2, 4, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    for hidden in [None, Some(2)] {
        let ch = ChildsChannel { circuit: c.clone(), hidden_cycles: hidden, draws: 16, seed: 9 };
        assert!(epsilon_correctness(&ch, &ideal, &inputs).unwrap() < 1e-9);
    }
    assert!(epsilon_correctness(
        &ChildsChannel { circuit: c, hidden_cycles: None, draws: 1, seed: 0 },
        &ideal,
        &[StateVector::zero(1).unwrap()]
    )
    .is_err());
}
