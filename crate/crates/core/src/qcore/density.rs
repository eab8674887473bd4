use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::state::{StateVector, MAX_QUBITS};
use super::{NORM_TOL, PSD_TOL};
use crate::error::{Error, Result};

/// Density operator on `n` qubits, same qubit ordering as [`StateVector`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<C64>,
}

/// Either kind of state, for ensemble mixing.
#[derive(Clone, Copy, Debug)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(s: &'a StateVector) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(d: &'a DensityMatrix) -> Self {
        StateRef::Mixed(d)
    }
}

impl DensityMatrix {
    pub fn from_pure(s: &StateVector) -> Self {
        let a = s.amplitudes();
        let d = a.len();
        let m = DMatrix::from_fn(d, d, |r, c| a[r] * a[c].conj());
        DensityMatrix { n: s.n_qubits(), m }
    }

    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() {
            return Err(Error::DimensionMismatch(d, m.ncols()));
        }
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::BadLength(d));
        }
        let n = d.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n, max: MAX_QUBITS });
        }
        let herm = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > NORM_TOL {
            return Err(Error::Audit(format!("matrix is not Hermitian (deviation {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        let rho = DensityMatrix { n, m };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::Audit(format!("matrix is not positive semidefinite (min eigenvalue {min:e})")));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(n: usize, m: DMatrix<C64>) -> Self {
        DensityMatrix { n, m }
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n, max: MAX_QUBITS });
        }
        let d = 1usize << n;
        Ok(DensityMatrix { n, m: DMatrix::identity(d, d) / C64::new(d as f64, 0.0) })
    }

    /// Diagonal density matrix from a probability vector over basis states.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::BadLength(d));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL || probs.iter().any(|p| *p < -NORM_TOL) {
            return Err(Error::BadWeights(sum));
        }
        let m = DMatrix::from_fn(d, d, |r, c| if r == c { C64::new(probs[r], 0.0) } else { C64::new(0.0, 0.0) });
        Ok(DensityMatrix { n: d.trailing_zeros() as usize, m })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// Diagonal in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.m.nrows()).map(|i| self.m[(i, i)].re).collect()
    }

    /// Eigenvalues of the (Hermitian) matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = hermitian_eigenvalues(&self.m);
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `(1/2) sum |eig(a - b)|`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(trace_norm(&(&self.m - &other.m)) / 2.0)
    }

    /// `self (x) other`, with `self` on the low qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.n + other.n;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n, max: MAX_QUBITS });
        }
        // kron(other, self) puts `self` on the low bits.
        Ok(DensityMatrix { n, m: other.m.kronecker(&self.m) })
    }

    /// Partial trace onto `keep` (qubit `i` of the result is `keep[i]`).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Empty("keep set"));
        }
        let mut seen = vec![false; self.n];
        for &q in keep {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::DuplicateTargets(keep.to_vec()));
            }
        }
        let env: Vec<usize> = (0..self.n).filter(|q| !seen[*q]).collect();
        let dk = 1usize << keep.len();
        let spread = |bits: usize, qs: &[usize]| {
            qs.iter().enumerate().fold(0usize, |acc, (j, &q)| acc | (((bits >> j) & 1) << q))
        };
        let mut out = DMatrix::<C64>::zeros(dk, dk);
        for r in 0..dk {
            for c in 0..dk {
                let (ri, ci) = (spread(r, keep), spread(c, keep));
                let mut v = C64::new(0.0, 0.0);
                for e in 0..1usize << env.len() {
                    let ei = spread(e, &env);
                    v += self.m[(ri | ei, ci | ei)];
                }
                out[(r, c)] = v;
            }
        }
        Ok(DensityMatrix { n: keep.len(), m: out })
    }

    /// `U rho U^dagger` for a dense unitary of matching dimension.
    pub fn conjugate(&self, u: &DMatrix<C64>) -> Result<DensityMatrix> {
        if u.nrows() != self.m.nrows() || u.ncols() != self.m.ncols() {
            return Err(Error::DimensionMismatch(u.nrows(), self.m.nrows()));
        }
        Ok(DensityMatrix { n: self.n, m: u * &self.m * u.adjoint() })
    }

    /// Applies a channel given by Kraus operators (square, same dimension).
    pub fn apply_kraus(&self, kraus: &[DMatrix<C64>]) -> Result<DensityMatrix> {
        if kraus.is_empty() {
            return Err(Error::Empty("Kraus operators"));
        }
        let d = self.m.nrows();
        let mut out = DMatrix::<C64>::zeros(d, d);
        for k in kraus {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::DimensionMismatch(k.nrows(), d));
            }
            out += k * &self.m * k.adjoint();
        }
        DensityMatrix::from_matrix(out)
    }
}

/// Eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    // Symmetrise to wash out rounding asymmetry before the Hermitian solver.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// Schatten 1-norm of a Hermitian matrix.
pub(crate) fn trace_norm(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(m).iter().map(|e| e.abs()).sum()
}

/// Convex combination of states.
pub fn mix<'a, I>(items: I) -> Result<DensityMatrix>
where
    I: IntoIterator<Item = (f64, StateRef<'a>)>,
{
    let mut acc: Option<DensityMatrix> = None;
    let mut total = 0.0;
    for (w, s) in items {
        if w.is_nan() || w < 0.0 {
            return Err(Error::BadWeights(w));
        }
        total += w;
        let rho = match s {
            StateRef::Pure(p) => DensityMatrix::from_pure(p),
            StateRef::Mixed(d) => d.clone(),
        };
        match &mut acc {
            None => acc = Some(DensityMatrix { n: rho.n, m: rho.m * C64::new(w, 0.0) }),
            Some(a) => {
                if a.n != rho.n {
                    return Err(Error::DimensionMismatch(a.n, rho.n));
                }
                a.m += rho.m * C64::new(w, 0.0);
            }
        }
    }
    if (total - 1.0).abs() > NORM_TOL {
        return Err(Error::BadWeights(total));
    }
    acc.ok_or(Error::Empty("mixture"))
}
