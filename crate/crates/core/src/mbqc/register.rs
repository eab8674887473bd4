use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::qcore::{DensityMatrix, Gate, Outcome, OutcomeSource, Pauli, StateVector};

/// A state vector whose qubits are labelled by vertex indices.
///
/// Qubits can be added and removed as a computation streams through a graph;
/// callers address them by label only.
#[derive(Clone, Debug, Default)]
pub struct Register {
    state: Option<StateVector>,
    labels: Vec<usize>,
}

impl Register {
    pub fn new() -> Self {
        Register::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn contains(&self, label: usize) -> bool {
        self.labels.contains(&label)
    }

    pub fn state(&self) -> Option<&StateVector> {
        self.state.as_ref()
    }

    fn pos(&self, label: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::Registry(format!("vertex {label} is not held")))
    }

    fn st(&mut self) -> Result<&mut StateVector> {
        self.state.as_mut().ok_or(Error::EmptyRegister)
    }

    /// Appends a joint state; `labels[i]` names its qubit `i`.
    pub fn add_joint(&mut self, labels: &[usize], s: &StateVector) -> Result<()> {
        if labels.len() != s.n_qubits() {
            return Err(Error::DimensionMismatch(labels.len(), s.n_qubits()));
        }
        if let Some(&l) = labels.iter().find(|&&l| self.contains(l)) {
            return Err(Error::Registry(format!("vertex {l} is already held")));
        }
        self.state = Some(match &self.state {
            None => s.clone(),
            Some(cur) => cur.tensor(s)?,
        });
        self.labels.extend_from_slice(labels);
        Ok(())
    }

    pub fn add(&mut self, label: usize, s: &StateVector) -> Result<()> {
        self.add_joint(&[label], s)
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<()> {
        let (pa, pb) = (self.pos(a)?, self.pos(b)?);
        self.st()?.apply(&Gate::Cz(pa, pb))
    }

    pub fn apply_xz(&mut self, label: usize, x: u8, z: u8) -> Result<()> {
        let p = self.pos(label)?;
        self.st()?.apply_xz(p, x, z)
    }

    pub fn apply_pauli(&mut self, label: usize, pauli: Pauli) -> Result<()> {
        let p = self.pos(label)?;
        self.st()?.apply_pauli(p, pauli)
    }

    pub fn measure_xy<S: OutcomeSource + ?Sized>(
        &mut self,
        label: usize,
        delta: Angle8,
        src: &mut S,
    ) -> Result<Outcome> {
        let p = self.pos(label)?;
        self.st()?.measure_xy(p, delta, src)
    }

    pub fn measure_z<S: OutcomeSource + ?Sized>(&mut self, label: usize, src: &mut S) -> Result<Outcome> {
        let p = self.pos(label)?;
        self.st()?.measure_z(p, src)
    }

    /// Removes an unentangled qubit and returns its state.
    pub fn remove(&mut self, label: usize) -> Result<StateVector> {
        let p = self.pos(label)?;
        let st = self.state.as_ref().ok_or(Error::EmptyRegister)?;
        let single = if st.n_qubits() == 1 {
            self.state.take().ok_or(Error::EmptyRegister)?
        } else {
            let (rest, single) = st.split_qubit(p)?;
            self.state = Some(rest);
            single
        };
        self.labels.remove(p);
        Ok(single)
    }

    /// Drops every qubit not in `keep` and returns the rest ordered as `keep`.
    ///
    /// The dropped qubits must be unentangled from the kept ones as a group.
    /// Each is projected onto its likelier Z outcome, which leaves the kept
    /// factor unchanged.
    pub fn extract(mut self, keep: &[usize]) -> Result<StateVector> {
        if keep.is_empty() {
            return Err(Error::EmptyRegister);
        }
        for &k in keep {
            self.pos(k)?;
        }
        let drop: Vec<usize> = self.labels.iter().copied().filter(|l| !keep.contains(l)).collect();
        for l in drop {
            let p = self.pos(l)?;
            let st = self.st()?;
            let o = if st.prob_z(p)? >= 0.5 { Outcome::Zero } else { Outcome::One };
            st.project_z(p, o)?;
            self.remove(l)?;
        }
        let order: Vec<usize> = keep.iter().map(|&k| self.pos(k)).collect::<Result<_>>()?;
        self.state.ok_or(Error::EmptyRegister)?.permuted(&order)
    }

    /// Splits into labels and the joint state (`None` when empty).
    pub fn into_parts(self) -> (Vec<usize>, Option<StateVector>) {
        (self.labels, self.state)
    }

    /// Moves every qubit of `other` into `self`.
    pub fn absorb(&mut self, other: Register) -> Result<()> {
        match other.state {
            Some(s) => self.add_joint(&other.labels, &s),
            None => Ok(()),
        }
    }

    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let ps: Vec<usize> = keep.iter().map(|&k| self.pos(k)).collect::<Result<_>>()?;
        self.state.as_ref().ok_or(Error::EmptyRegister)?.reduced_density(&ps)
    }
}
