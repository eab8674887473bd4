use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use super::gate::{rz, Gate, Mat2};
use super::outcome::{Outcome, OutcomeSource};
use super::pauli::{Pauli, PauliString};
use super::NORM_TOL;
use crate::angle::Angle8;
use crate::error::{Error, Result};

/// Largest register the engine will allocate (2^20 amplitudes, 16 MiB).
pub const MAX_QUBITS: usize = 20;

/// Branches whose probability falls below this are treated as impossible.
const ZERO_BRANCH: f64 = 1e-14;

/// Normalised pure state of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amp: Vec<C64>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyRegister);
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: n, max: MAX_QUBITS });
    }
    Ok(())
}

/// `(|0> + (-1)^r e^{i theta} |1>) / sqrt 2`.
pub fn prepare_plus_theta(r: u8, theta: Angle8) -> StateVector {
    let phase = C64::from_polar(FRAC_1_SQRT_2, theta.radians());
    let phase = if r & 1 == 1 { -phase } else { phase };
    StateVector { n: 1, amp: vec![C64::new(FRAC_1_SQRT_2, 0.0), phase] }
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        if index >= 1 << n {
            return Err(Error::DimensionMismatch(index, 1 << n));
        }
        let mut amp = vec![C64::new(0.0, 0.0); 1 << n];
        amp[index] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amp })
    }

    /// `|+>^n`.
    pub fn plus(n: usize) -> Result<Self> {
        check_size(n)?;
        let a = C64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Ok(StateVector { n, amp: vec![a; 1 << n] })
    }

    pub fn from_amplitudes(amp: Vec<C64>) -> Result<Self> {
        let len = amp.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        let n = len.trailing_zeros() as usize;
        check_size(n)?;
        let s = StateVector { n, amp };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    /// Normalises arbitrary non-zero amplitudes.
    pub fn normalized(mut amp: Vec<C64>) -> Result<Self> {
        let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        for a in &mut amp {
            *a /= norm;
        }
        Self::from_amplitudes(amp)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        let targets = gate.targets();
        for &q in &targets {
            self.check_qubit(q)?;
        }
        match *gate {
            Gate::Cz(a, b) => {
                if a == b {
                    return Err(Error::DuplicateTargets(targets));
                }
                self.cz(a, b);
            }
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::DuplicateTargets(targets));
                }
                self.cnot(control, target);
            }
            g => {
                let m = g.matrix_1q().expect("single-qubit gate");
                self.apply_1q(targets[0], &m);
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(g))
    }

    pub(crate) fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amp[i], self.amp[i | bit]);
                self.amp[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amp[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amp.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..self.amp.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amp.swap(i, i | tb);
            }
        }
    }

    /// Applies `R_z(a) = diag(1, e^{ia})` to qubit `q`.
    pub fn apply_rz(&mut self, q: usize, a: Angle8) -> Result<()> {
        self.check_qubit(q)?;
        self.apply_1q(q, &rz(a));
        Ok(())
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) -> Result<()> {
        self.check_qubit(q)?;
        if p != Pauli::I {
            self.apply_1q(q, &p.matrix());
        }
        Ok(())
    }

    /// `X^x Z^z` on qubit `q` (Z applied first).
    pub fn apply_xz(&mut self, q: usize, x: u8, z: u8) -> Result<()> {
        if z & 1 == 1 {
            self.apply_pauli(q, Pauli::Z)?;
        }
        if x & 1 == 1 {
            self.apply_pauli(q, Pauli::X)?;
        }
        self.check_qubit(q)
    }

    /// `self (x) other`, with `self` on the low qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_size(self.n + other.n)?;
        let lo = self.amp.len();
        let mut amp = Vec::with_capacity(lo * other.amp.len());
        for b in &other.amp {
            for a in &self.amp {
                amp.push(a * b);
            }
        }
        Ok(StateVector { n: self.n + other.n, amp })
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2`, i.e. equality up to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Probability of outcome 0 when measuring `q` in the `|+-_delta>` basis.
    pub fn prob_xy(&self, q: usize, delta: Angle8) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let e = C64::from_polar(1.0, -delta.radians());
        let mut p = 0.0;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                // <+_delta| on qubit q: (<0| + e^{-i delta} <1|) / sqrt 2
                p += (self.amp[i] + e * self.amp[i | bit]).norm_sqr() * 0.5;
            }
        }
        Ok(p)
    }

    pub fn prob_z(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self.amp.iter().enumerate().filter(|(i, _)| i & bit == 0).map(|(_, a)| a.norm_sqr()).sum())
    }

    /// Collapses qubit `q` onto `|+_delta>` (outcome 0) or `|-_delta>` (outcome 1).
    /// Returns the probability of the branch.
    pub fn project_xy(&mut self, q: usize, delta: Angle8, outcome: Outcome) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let sign = if outcome == Outcome::Zero { 1.0 } else { -1.0 };
        let e = C64::from_polar(sign, delta.radians());
        let mut p = 0.0;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                let c = (self.amp[i] + e.conj() * self.amp[i | bit]) * 0.5;
                p += 2.0 * c.norm_sqr();
                self.amp[i] = c;
                self.amp[i | bit] = e * c;
            }
        }
        self.renormalize(p)?;
        Ok(p)
    }

    pub fn project_z(&mut self, q: usize, outcome: Outcome) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let keep = if outcome == Outcome::Zero { 0 } else { bit };
        let mut p = 0.0;
        for (i, a) in self.amp.iter_mut().enumerate() {
            if i & bit == keep {
                p += a.norm_sqr();
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
        self.renormalize(p)?;
        Ok(p)
    }

    fn renormalize(&mut self, p: f64) -> Result<()> {
        if p < ZERO_BRANCH {
            return Err(Error::ZeroProbabilityBranch);
        }
        let s = 1.0 / p.sqrt();
        for a in &mut self.amp {
            *a *= s;
        }
        Ok(())
    }

    /// Born-rule measurement of `q` in the `|+-_delta>` basis; the measured
    /// qubit is left in the corresponding basis state.
    pub fn measure_xy<S: OutcomeSource + ?Sized>(&mut self, q: usize, delta: Angle8, src: &mut S) -> Result<Outcome> {
        let p0 = self.prob_xy(q, delta)?.clamp(0.0, 1.0);
        let o = src.choose(p0)?;
        self.project_xy(q, delta, o)?;
        Ok(o)
    }

    pub fn measure_z<S: OutcomeSource + ?Sized>(&mut self, q: usize, src: &mut S) -> Result<Outcome> {
        let p0 = self.prob_z(q)?.clamp(0.0, 1.0);
        let o = src.choose(p0)?;
        self.project_z(q, o)?;
        Ok(o)
    }

    /// Applies a Pauli string to a copy of the state.
    fn pauli_image(&self, ps: &PauliString) -> Result<StateVector> {
        let mut img = self.clone();
        for &(q, p) in &ps.terms {
            img.apply_pauli(q, p)?;
        }
        Ok(img)
    }

    /// `<psi| P |psi>` for a Hermitian Pauli string.
    pub fn expectation(&self, ps: &PauliString) -> Result<f64> {
        let img = self.pauli_image(ps)?;
        Ok(self.inner(&img)?.re)
    }

    /// Measures the observable `ps` (outcome 0 is eigenvalue +1).
    pub fn measure_pauli<S: OutcomeSource + ?Sized>(&mut self, ps: &PauliString, src: &mut S) -> Result<Outcome> {
        let img = self.pauli_image(ps)?;
        let ev = self.inner(&img)?.re;
        let p0 = ((1.0 + ev) / 2.0).clamp(0.0, 1.0);
        let o = src.choose(p0)?;
        let (sign, p) = if o == Outcome::Zero { (1.0, p0) } else { (-1.0, 1.0 - p0) };
        if p < ZERO_BRANCH {
            return Err(Error::ZeroProbabilityBranch);
        }
        for (a, b) in self.amp.iter_mut().zip(&img.amp) {
            *a = (*a + sign * b) * 0.5;
        }
        self.renormalize(p)?;
        Ok(o)
    }

    /// Splits off qubit `q`, which must be unentangled with the rest.
    /// Returns `(rest, single)` where `single` is the one-qubit factor.
    pub fn split_qubit(&self, q: usize) -> Result<(StateVector, StateVector)> {
        self.check_qubit(q)?;
        if self.n == 1 {
            return Err(Error::EmptyRegister);
        }
        let bit = 1usize << q;
        // Pick the largest amplitude to anchor the factorisation.
        let (imax, _) =
            self.amp.iter().enumerate().max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr())).expect("non-empty");
        let base = imax & !bit;
        let single = StateVector::normalized(vec![self.amp[base], self.amp[base | bit]])?;
        let (s0, s1) = (single.amp[0], single.amp[1]);
        let use_one = s1.norm_sqr() > s0.norm_sqr();
        let mut rest = Vec::with_capacity(self.amp.len() / 2);
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                let v = if use_one { self.amp[i | bit] / s1 } else { self.amp[i] / s0 };
                rest.push(v);
            }
        }
        // Pushed in increasing index order, so `rest` is already compacted.
        let rest = StateVector::normalized(rest)?;
        // Verify the factorisation reproduces the state.
        let check = rest.insert_qubit(q, &single)?;
        let f = check.fidelity(self)?;
        if (f - 1.0).abs() > 1e-9 {
            return Err(Error::NotProduct(q));
        }
        Ok((rest, single))
    }

    /// Removes qubit `q` (which must be in product form) and returns the rest.
    pub fn remove_qubit(&self, q: usize) -> Result<StateVector> {
        Ok(self.split_qubit(q)?.0)
    }

    /// Inserts a one-qubit state so that it becomes qubit `q`.
    pub fn insert_qubit(&self, q: usize, single: &StateVector) -> Result<StateVector> {
        if single.n != 1 {
            return Err(Error::DimensionMismatch(single.n, 1));
        }
        if q > self.n {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n + 1 });
        }
        check_size(self.n + 1)?;
        let low = (1usize << q) - 1;
        let mut amp = vec![C64::new(0.0, 0.0); 1 << (self.n + 1)];
        for (j, a) in self.amp.iter().enumerate() {
            let i = (j & low) | ((j & !low) << 1);
            amp[i] = a * single.amp[0];
            amp[i | (1 << q)] = a * single.amp[1];
        }
        Ok(StateVector { n: self.n + 1, amp })
    }

    /// Reorders qubits: qubit `i` of the result is qubit `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<StateVector> {
        if order.len() != self.n {
            return Err(Error::DimensionMismatch(order.len(), self.n));
        }
        let mut seen = vec![false; self.n];
        for &q in order {
            self.check_qubit(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::DuplicateTargets(order.to_vec()));
            }
        }
        let mut amp = vec![C64::new(0.0, 0.0); self.amp.len()];
        for (old, a) in self.amp.iter().enumerate() {
            let mut new = 0usize;
            for (i, &q) in order.iter().enumerate() {
                new |= ((old >> q) & 1) << i;
            }
            amp[new] = *a;
        }
        Ok(StateVector { n: self.n, amp })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Partial trace onto `keep` (qubit `i` of the result is `keep[i]`).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Empty("keep set"));
        }
        let mut seen = vec![false; self.n];
        for &q in keep {
            self.check_qubit(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::DuplicateTargets(keep.to_vec()));
            }
        }
        let env: Vec<usize> = (0..self.n).filter(|q| !seen[*q]).collect();
        let dk = 1usize << keep.len();
        let de = 1usize << env.len();
        // A[k][e] = amplitude with kept bits k and environment bits e.
        let mut a = vec![C64::new(0.0, 0.0); dk * de];
        for (i, amp) in self.amp.iter().enumerate() {
            let k = keep.iter().enumerate().fold(0, |acc, (j, &q)| acc | (((i >> q) & 1) << j));
            let e = env.iter().enumerate().fold(0, |acc, (j, &q)| acc | (((i >> q) & 1) << j));
            a[k * de + e] = *amp;
        }
        let mut rho = nalgebra::DMatrix::<C64>::zeros(dk, dk);
        for r in 0..dk {
            for c in r..dk {
                let v: C64 = (0..de).map(|e| a[r * de + e] * a[c * de + e].conj()).sum();
                rho[(r, c)] = v;
                rho[(c, r)] = v.conj();
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(keep.len(), rho))
    }
}
