#![allow(dead_code)]

use blindlab_core::mbqc::{build_brickwork, MeasurementPattern, Role};
use blindlab_core::qcore::{prepare_plus_theta, Gate, Pauli, StateVector, C64};
use blindlab_core::Angle8;
use rand::Rng;

pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amp = (0..1 << n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::normalized(amp).unwrap()
}

/// One row of `angles.len() + 1` vertices, the last one an output.
pub fn chain(angles: &[i64]) -> MeasurementPattern {
    let n = angles.len() + 1;
    let g = build_brickwork(1, n).unwrap();
    let mut a: Vec<Angle8> = angles.iter().map(|&k| Angle8::new(k)).collect();
    a.push(Angle8::ZERO);
    let mut roles = vec![Role::Compute; n - 1];
    roles.push(Role::Output);
    MeasurementPattern::new(g, 1, a, roles).unwrap()
}

/// Probability that a uniformly random X, Y or Z on a uniformly random one of
/// `n_vertices` qubits, applied after entangling, flips the outcome of a
/// single trap whose only neighbour is a dummy.
///
/// Brute force over qubit, Pauli, `r`, `theta` and the dummy bit on the
/// two-qubit trap/dummy subsystem; every other vertex is decoupled from it.
pub fn random_pauli_detection_oracle(n_vertices: usize) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for v in 0..n_vertices {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            for r in 0..2u8 {
                for theta in Angle8::all() {
                    for d in 0..2u8 {
                        let mut s =
                            prepare_plus_theta(r, -theta).tensor(&StateVector::basis(1, d as usize).unwrap()).unwrap();
                        s.apply(&Gate::Cz(0, 1)).unwrap();
                        // Vertex 0 stands for the trap, vertex 1 for its dummy.
                        if v < 2 {
                            s.apply_pauli(v, p).unwrap();
                        }
                        let p0 = s.prob_xy(0, -theta).unwrap();
                        total += if r ^ d == 0 { 1.0 - p0 } else { p0 };
                        count += 1;
                    }
                }
            }
        }
    }
    total / count as f64
}
