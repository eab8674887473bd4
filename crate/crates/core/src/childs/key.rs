use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::SecretToken;
use crate::qcore::{Gate, Pauli, StateVector};

/// One-time-pad key: qubit `q` is padded with `X^{x_q} Z^{z_q}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliKey {
    x: Vec<u8>,
    z: Vec<u8>,
}

impl PauliKey {
    pub fn zero(n: usize) -> Self {
        PauliKey { x: vec![0; n], z: vec![0; n] }
    }

    pub fn new(x: Vec<u8>, z: Vec<u8>) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch(x.len(), z.len()));
        }
        if x.iter().chain(&z).any(|&b| b > 1) {
            return Err(Error::Protocol("key bits must be 0 or 1".into()));
        }
        Ok(PauliKey { x, z })
    }

    pub fn random<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut k = PauliKey::zero(n);
        for q in 0..n {
            k.x[q] = rng.gen_range(0..2);
            k.z[q] = rng.gen_range(0..2);
        }
        k
    }

    /// All `4^n` keys on `n` qubits.
    pub fn all(n: usize) -> impl Iterator<Item = PauliKey> {
        (0..1usize << (2 * n)).map(move |m| PauliKey {
            x: (0..n).map(|q| ((m >> (2 * q)) & 1) as u8).collect(),
            z: (0..n).map(|q| ((m >> (2 * q + 1)) & 1) as u8).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn get(&self, q: usize) -> (u8, u8) {
        (self.x[q], self.z[q])
    }

    pub fn pauli(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x[q], self.z[q])
    }

    /// Composes with another pad (phases dropped).
    pub fn xor(&self, other: &PauliKey) -> Result<PauliKey> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(self.len(), other.len()));
        }
        Ok(PauliKey {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn secret_tokens(&self) -> Vec<SecretToken> {
        (0..self.len()).map(|q| SecretToken::Key { qubit: q as u32, x: self.x[q], z: self.z[q] }).collect()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch(self.len(), n));
        }
        Ok(())
    }
}

/// Applies `X^x Z^z` to every qubit.
pub fn qotp_encrypt(state: &StateVector, key: &PauliKey) -> Result<StateVector> {
    key.check(state.n_qubits())?;
    let mut s = state.clone();
    for q in 0..key.len() {
        s.apply_xz(q, key.x[q], key.z[q])?;
    }
    Ok(s)
}

/// Inverts [`qotp_encrypt`] exactly.
pub fn qotp_decrypt(state: &StateVector, key: &PauliKey) -> Result<StateVector> {
    key.check(state.n_qubits())?;
    let mut s = state.clone();
    for q in 0..key.len() {
        if key.x[q] == 1 {
            s.apply_pauli(q, Pauli::X)?;
        }
        if key.z[q] == 1 {
            s.apply_pauli(q, Pauli::Z)?;
        }
    }
    Ok(s)
}

/// Key after the server applies Clifford `gate` to padded data, so that
/// `C sigma |psi> = sigma' C |psi>` with `sigma' = C sigma C^dagger`.
pub fn key_update_clifford(key: &PauliKey, gate: &Gate) -> Result<PauliKey> {
    let mut k = key.clone();
    for &q in &gate.targets() {
        if q >= k.len() {
            return Err(Error::QubitOutOfRange { qubit: q, n: k.len() });
        }
    }
    match *gate {
        Gate::H(q) => std::mem::swap(&mut k.x[q], &mut k.z[q]),
        Gate::S(q) => k.z[q] ^= k.x[q],
        Gate::X(_) | Gate::Y(_) | Gate::Z(_) => {}
        Gate::Rz(q, a) if a.k() % 2 == 0 => {
            // pi/2 and 3pi/2 act like S on the key; 0 and pi leave it alone.
            if a.k() % 4 == 2 {
                k.z[q] ^= k.x[q];
            }
        }
        Gate::Cnot { control, target } => {
            k.x[target] ^= k.x[control];
            k.z[control] ^= k.z[target];
        }
        Gate::Cz(a, b) => {
            k.z[a] ^= k.x[b];
            k.z[b] ^= k.x[a];
        }
        Gate::T(_) | Gate::Rz(..) => return Err(Error::NotClifford(gate.to_string())),
    }
    Ok(k)
}

/// One line of the conjugation table: a generator, an input Pauli on its
/// targets, the symplectic prediction and whether dense conjugation agrees.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugationRow {
    pub gate: String,
    pub input: Vec<Pauli>,
    pub predicted: Vec<Pauli>,
    pub dense_match: bool,
}

fn dense<F: Fn(&mut StateVector) -> Result<()>>(n: usize, f: F) -> Result<DMatrix<C64>> {
    let d = 1 << n;
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        let mut s = StateVector::basis(n, j)?;
        f(&mut s)?;
        for (i, a) in s.amplitudes().iter().enumerate() {
            m[(i, j)] = *a;
        }
    }
    Ok(m)
}

fn pauli_matrix(ps: &[Pauli]) -> Result<DMatrix<C64>> {
    dense(ps.len(), |s| ps.iter().enumerate().try_for_each(|(q, &p)| s.apply_pauli(q, p)))
}

/// Equal up to a global phase.
fn proportional(a: &DMatrix<C64>, b: &DMatrix<C64>) -> bool {
    let d = a.nrows() as f64;
    ((a.adjoint() * b).trace().norm() - d).abs() < 1e-9
}

/// Every supported Clifford generator against every Pauli on its targets.
pub fn conjugation_table() -> Result<Vec<ConjugationRow>> {
    let gens = [
        Gate::H(0),
        Gate::S(0),
        Gate::X(0),
        Gate::Y(0),
        Gate::Z(0),
        Gate::Cnot { control: 0, target: 1 },
        Gate::Cnot { control: 1, target: 0 },
        Gate::Cz(0, 1),
    ];
    let mut rows = Vec::new();
    for g in gens {
        let n = g.arity();
        let u = dense(n, |s| s.apply(&g))?;
        for m in 0..1usize << (2 * n) {
            let input: Vec<Pauli> = (0..n).map(|q| Pauli::ALL[(m >> (2 * q)) & 3]).collect();
            let key = PauliKey {
                x: input.iter().map(|p| p.bits().0).collect(),
                z: input.iter().map(|p| p.bits().1).collect(),
            };
            let k2 = key_update_clifford(&key, &g)?;
            let predicted: Vec<Pauli> = (0..n).map(|q| k2.pauli(q)).collect();
            let conj = &u * pauli_matrix(&input)? * u.adjoint();
            rows.push(ConjugationRow {
                gate: g.to_string(),
                dense_match: proportional(&conj, &pauli_matrix(&predicted)?),
                input,
                predicted,
            });
        }
    }
    Ok(rows)
}
