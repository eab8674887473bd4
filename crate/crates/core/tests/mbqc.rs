use blindlab_core::mbqc::{
    build_brickwork, compile_circuit, run_pattern, run_pattern_streamed, Circuit, MeasurementPattern, Role, Vertex,
};
use blindlab_core::qcore::{all_branches, ForcedOutcomes, Gate, StateVector, C64};
use blindlab_core::{Angle8, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amp = (0..1 << n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::normalized(amp).unwrap()
}

fn assert_same(a: &StateVector, b: &StateVector) {
    let f = a.fidelity(b).unwrap();
    assert!((f - 1.0).abs() < 1e-9, "fidelity {f}");
}

fn gate_strategy(width: usize) -> impl Strategy<Value = Gate> {
    let kinds = if width > 1 { 9 } else { 6 };
    (0..kinds, 0..width, 0i64..8).prop_map(move |(kind, q, k)| {
        let p = q.min(width.saturating_sub(2));
        match kind {
            0 => Gate::H(q),
            1 => Gate::T(q),
            2 => Gate::S(q),
            3 => Gate::X(q),
            4 => Gate::Y(q),
            5 => Gate::Rz(q, Angle8::new(k)),
            6 => Gate::Cnot { control: p, target: p + 1 },
            7 => Gate::Cnot { control: p + 1, target: p },
            _ => Gate::Cz(p, p + 1),
        }
    })
}

#[test]
fn every_branch_gives_the_same_output() {
    let c = Circuit::new(2, vec![Gate::Cnot { control: 0, target: 1 }]).unwrap();
    let p = compile_circuit(&c).unwrap();
    assert_eq!(p.n_vertices(), 10);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let input = random_state(2, &mut rng);
    let want = c.simulate(&input).unwrap();
    let mut total = 0.0;
    for bits in all_branches(p.order().len()) {
        let mut forced = ForcedOutcomes::new(bits);
        let run = run_pattern(&p, Some(&input), &mut forced).unwrap();
        assert_same(&run.output, &want);
        total += forced.weight();
    }
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn each_single_qubit_gate_compiles_correctly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let gates = [Gate::H(0), Gate::X(0), Gate::Y(0), Gate::Z(0), Gate::S(0), Gate::T(0), Gate::Rz(0, Angle8::new(3))];
    for g in gates {
        let c = Circuit::new(1, vec![g]).unwrap();
        let p = compile_circuit(&c).unwrap();
        let input = random_state(1, &mut rng);
        let run = run_pattern(&p, Some(&input), &mut rng).unwrap();
        assert_same(&run.output, &c.simulate(&input).unwrap());
    }
}

#[test]
fn gates_on_either_row_of_a_brick() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in [Gate::H(0), Gate::H(1), Gate::T(1), Gate::Y(0), Gate::Cz(0, 1), Gate::Cnot { control: 1, target: 0 }] {
        let c = Circuit::new(2, vec![g]).unwrap();
        let p = compile_circuit(&c).unwrap();
        let input = random_state(2, &mut rng);
        let run = run_pattern_streamed(&p, Some(&input), &mut rng).unwrap();
        assert_same(&run.output, &c.simulate(&input).unwrap());
    }
}

#[test]
fn streaming_matches_full_graph() {
    let c = Circuit::new(2, vec![Gate::Cnot { control: 0, target: 1 }, Gate::H(1), Gate::S(0)]).unwrap();
    let p = compile_circuit(&c).unwrap();
    assert_eq!((p.graph().rows(), p.graph().cols()), (2, 9));
    let input = random_state(2, &mut ChaCha8Rng::seed_from_u64(4));
    for bits in all_branches(p.order().len()).step_by(257) {
        let a = run_pattern(&p, Some(&input), &mut ForcedOutcomes::new(bits.clone())).unwrap();
        let b = run_pattern_streamed(&p, Some(&input), &mut ForcedOutcomes::new(bits)).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_same(&a.output, &b.output);
    }
}

#[test]
fn wide_circuit_runs_streamed() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gates = vec![
        Gate::H(0),
        Gate::Cnot { control: 0, target: 1 },
        Gate::Cnot { control: 1, target: 2 },
        Gate::Cz(2, 3),
        Gate::T(3),
        Gate::Cnot { control: 3, target: 2 },
        Gate::H(1),
    ];
    let c = Circuit::new(4, gates).unwrap();
    let p = compile_circuit(&c).unwrap();
    assert!(p.n_vertices() > 20);
    let input = random_state(4, &mut rng);
    let run = run_pattern_streamed(&p, Some(&input), &mut rng).unwrap();
    assert_same(&run.output, &c.simulate(&input).unwrap());
    assert!(matches!(run_pattern(&p, Some(&input), &mut rng), Err(Error::TooManyQubits { .. })));
}

/// A 1-row computation with a padding row underneath whose vertices next to
/// the logical row are dummies and the rest are arbitrary fillers.
fn padded(base: &MeasurementPattern, bits: &[u8], filler: &[Angle8]) -> MeasurementPattern {
    let cols = base.graph().cols();
    let g = build_brickwork(2, cols).unwrap();
    let mut angles = base.angles().to_vec();
    let mut roles = base.roles().to_vec();
    for c in 0..cols {
        let v = g.index(Vertex::new(1, c));
        let touches_logical = g.neighbors(v).iter().any(|&u| g.vertex(u).row == 0);
        roles.push(if touches_logical {
            Role::Dummy(bits[c])
        } else if c == cols - 1 {
            Role::Output
        } else {
            Role::Compute
        });
        angles.push(filler[c]);
    }
    MeasurementPattern::new(g, 1, angles, roles).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compiled_circuits_match_direct_simulation(
        gates in prop::collection::vec(gate_strategy(2), 0..6),
        seed in any::<u64>(),
    ) {
        let c = Circuit::new(2, gates).unwrap();
        let p = compile_circuit(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = random_state(2, &mut rng);
        let run = run_pattern_streamed(&p, Some(&input), &mut rng).unwrap();
        let f = run.output.fidelity(&c.simulate(&input).unwrap()).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn three_wire_circuits_match(gates in prop::collection::vec(gate_strategy(3), 0..8), seed in any::<u64>()) {
        let c = Circuit::new(3, gates).unwrap();
        let p = compile_circuit(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = random_state(3, &mut rng);
        let run = run_pattern_streamed(&p, Some(&input), &mut rng).unwrap();
        let f = run.output.fidelity(&c.simulate(&input).unwrap()).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dummies_decouple_padding(
        gate in gate_strategy(1),
        bits in prop::collection::vec(0u8..2, 5),
        filler in prop::collection::vec(0i64..8, 5),
        seed in any::<u64>(),
    ) {
        let c = Circuit::new(1, vec![gate]).unwrap();
        let base = compile_circuit(&c).unwrap();
        let filler: Vec<Angle8> = filler.into_iter().map(Angle8::new).collect();
        let p = padded(&base, &bits, &filler);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = random_state(1, &mut rng);
        let run = run_pattern(&p, Some(&input), &mut rng).unwrap();
        let f = run.output.fidelity(&c.simulate(&input).unwrap()).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn any_valid_order_gives_the_same_output(seed in any::<u64>()) {
        let c = Circuit::new(2, vec![Gate::Cnot { control: 1, target: 0 }, Gate::T(0)]).unwrap();
        let p = compile_circuit(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Random linear extension of the dependency order.
        let mut left: Vec<usize> = p.order().to_vec();
        let mut order = Vec::new();
        while !left.is_empty() {
            let ready: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&v| p.flow().xdep[v].iter().chain(&p.flow().zdep[v]).all(|u| order.contains(u)))
                .collect();
            let pick = ready[rng.gen_range(0..ready.len())];
            order.push(pick);
            left.retain(|&v| v != pick);
        }
        let q = p.clone().with_order(order).unwrap();
        let input = random_state(2, &mut rng);
        let run = run_pattern(&q, Some(&input), &mut rng).unwrap();
        let f = run.output.fidelity(&c.simulate(&input).unwrap()).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-9);
    }
}
