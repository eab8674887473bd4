use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::gate::Mat2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `(x, z)` bits with `Y ~ XZ` (phase dropped).
    pub fn bits(self) -> (u8, u8) {
        match self {
            Pauli::I => (0, 0),
            Pauli::X => (1, 0),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        }
    }

    pub fn from_bits(x: u8, z: u8) -> Pauli {
        match (x & 1, z & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn matrix(self) -> Mat2 {
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => [[one, o], [o, one]],
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }
}

/// A tensor product of single-qubit Paulis on listed qubits (identity elsewhere).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PauliString {
    pub terms: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn new(terms: Vec<(usize, Pauli)>) -> Self {
        PauliString { terms }
    }

    pub fn single(q: usize, p: Pauli) -> Self {
        PauliString { terms: vec![(q, p)] }
    }
}
