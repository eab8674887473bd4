use rand::{Rng, RngCore};

use super::server::ServerView;
use crate::angle::Angle8;
use crate::qcore::Pauli;

/// A deviating server.
///
/// Every hook sees only the [`ServerView`]; client secrets are out of reach by
/// construction. Defaults behave honestly.
pub trait Adversary {
    /// Paulis to apply just before vertex `v` is measured. A Pauli on a qubit
    /// whose neighbours have not all arrived waits until they have.
    fn before_measure(&mut self, _view: &ServerView, _v: usize) -> Vec<(usize, Pauli)> {
        Vec::new()
    }

    /// Angle actually used to measure `v`.
    fn alter_delta(&mut self, _view: &ServerView, _v: usize, delta: Angle8) -> Angle8 {
        delta
    }

    /// Bit actually reported for `v`.
    fn alter_report(&mut self, _view: &ServerView, _v: usize, b: u8) -> u8 {
        b
    }
}

/// Reports the complement of every outcome.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlipReports;

impl Adversary for FlipReports {
    fn alter_report(&mut self, _: &ServerView, _: usize, b: u8) -> u8 {
        b ^ 1
    }
}

/// Applies a fixed Pauli to a fixed vertex before the first measurement.
#[derive(Clone, Copy, Debug)]
pub struct PauliAt {
    pub vertex: usize,
    pub pauli: Pauli,
}

impl Adversary for PauliAt {
    fn before_measure(&mut self, view: &ServerView, _: usize) -> Vec<(usize, Pauli)> {
        if view.round == 0 {
            vec![(self.vertex, self.pauli)]
        } else {
            Vec::new()
        }
    }
}

/// Before the first measurement, applies X, Y or Z (uniformly) to a
/// uniformly chosen vertex of the public graph.
#[derive(Clone, Debug)]
pub struct RandomPauli<R> {
    rng: R,
}

impl<R: RngCore> RandomPauli<R> {
    pub fn new(rng: R) -> Self {
        RandomPauli { rng }
    }
}

impl<R: RngCore> Adversary for RandomPauli<R> {
    fn before_measure(&mut self, view: &ServerView, _: usize) -> Vec<(usize, Pauli)> {
        if view.round != 0 {
            return Vec::new();
        }
        let v = self.rng.gen_range(0..view.rows * view.cols);
        let p = [Pauli::X, Pauli::Y, Pauli::Z][self.rng.gen_range(0..3)];
        vec![(v, p)]
    }
}
