use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::angle::Angle8;

/// A gate from the laboratory's gate set together with its target qubits.
///
/// `Rz(q, a)` is `diag(1, e^{i a})`; `T = Rz(pi/4)` and `S = Rz(pi/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    T(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Rz(usize, Angle8),
    Cz(usize, usize),
    Cnot { control: usize, target: usize },
}

pub type Mat2 = [[C64; 2]; 2];

const O: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::T(_) => "T",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Rz(..) => "RZ",
            Gate::Cz(..) => "CZ",
            Gate::Cnot { .. } => "CNOT",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::T(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::Rz(q, _) => {
                vec![q]
            }
            Gate::Cz(a, b) => vec![a, b],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Cz(..) | Gate::Cnot { .. } => 2,
            _ => 1,
        }
    }

    /// The same gate kind acting on different qubits.
    pub fn retarget(&self, targets: &[usize]) -> Gate {
        match *self {
            Gate::H(_) => Gate::H(targets[0]),
            Gate::S(_) => Gate::S(targets[0]),
            Gate::T(_) => Gate::T(targets[0]),
            Gate::X(_) => Gate::X(targets[0]),
            Gate::Y(_) => Gate::Y(targets[0]),
            Gate::Z(_) => Gate::Z(targets[0]),
            Gate::Rz(_, a) => Gate::Rz(targets[0], a),
            Gate::Cz(..) => Gate::Cz(targets[0], targets[1]),
            Gate::Cnot { .. } => Gate::Cnot { control: targets[0], target: targets[1] },
        }
    }

    pub fn is_clifford(&self) -> bool {
        match self {
            Gate::T(_) => false,
            Gate::Rz(_, a) => a.k() % 2 == 0,
            _ => true,
        }
    }

    /// 2x2 matrix of a single-qubit gate, `None` for two-qubit gates.
    pub fn matrix_1q(&self) -> Option<Mat2> {
        let m = match *self {
            Gate::H(_) => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::S(_) => rz(Angle8::PI_2),
            Gate::T(_) => rz(Angle8::PI_4),
            Gate::Rz(_, a) => rz(a),
            Gate::X(_) => [[O, ONE], [ONE, O]],
            Gate::Y(_) => [[O, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), O]],
            Gate::Z(_) => [[ONE, O], [O, -ONE]],
            Gate::Cz(..) | Gate::Cnot { .. } => return None,
        };
        Some(m)
    }
}

pub(crate) fn rz(a: Angle8) -> Mat2 {
    [[ONE, O], [O, C64::from_polar(1.0, a.radians())]]
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rz(q, a) => write!(f, "RZ({a}) q{q}"),
            g => {
                let t: Vec<String> = g.targets().iter().map(|q| format!("q{q}")).collect();
                write!(f, "{} {}", g.name(), t.join(","))
            }
        }
    }
}
