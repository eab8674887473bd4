//! Dense simulation engine shared by every protocol module.
//!
//! Qubit `q` of an `n`-qubit register is bit `q` of the basis index, so the
//! amplitude of `|b_0 b_1 ... b_{n-1}>` lives at `sum_q b_q 2^q`. Tensor
//! products place the left operand on the low qubits.

mod density;
mod gate;
mod outcome;
mod pauli;
mod state;

pub(crate) use density::trace_norm;
pub use density::{mix, DensityMatrix, StateRef};
pub(crate) use gate::rz;
pub use gate::{Gate, Mat2};
pub use outcome::{all_branches, ForcedOutcomes, Outcome, OutcomeSource};
pub use pauli::{Pauli, PauliString};
pub use state::{prepare_plus_theta, StateVector, MAX_QUBITS};

pub use num_complex::Complex64 as C64;

/// Tolerance used when validating normalisation and Hermiticity.
pub const NORM_TOL: f64 = 1e-10;
/// Smallest eigenvalue tolerated in a density matrix.
pub const PSD_TOL: f64 = 1e-9;
