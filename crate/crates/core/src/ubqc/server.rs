use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::mbqc::{BrickworkGraph, Register};
use crate::qcore::{Outcome, OutcomeSource, Pauli, StateVector};

/// What a server legitimately knows: the public graph, the angles it received
/// and the bits it reported.
#[derive(Clone, Debug)]
pub struct ServerView {
    pub rows: usize,
    pub cols: usize,
    pub deltas: Vec<Option<Angle8>>,
    pub reported: Vec<Option<u8>>,
    pub held: Vec<usize>,
    /// Number of measurement rounds completed.
    pub round: usize,
}

/// Server side of a preparing-client session.
#[derive(Clone, Debug)]
pub struct ServerState {
    graph: BrickworkGraph,
    reg: Register,
    arrived: Vec<bool>,
    measured: Vec<bool>,
    entangled: bool,
    view: ServerView,
    deferred: Vec<(usize, Pauli)>,
}

impl ServerState {
    pub fn new(graph: BrickworkGraph) -> Self {
        let n = graph.n_vertices();
        let view = ServerView {
            rows: graph.rows(),
            cols: graph.cols(),
            deltas: vec![None; n],
            reported: vec![None; n],
            held: Vec::new(),
            round: 0,
        };
        ServerState {
            graph,
            reg: Register::new(),
            arrived: vec![false; n],
            measured: vec![false; n],
            entangled: false,
            view,
            deferred: Vec::new(),
        }
    }

    pub fn graph(&self) -> &BrickworkGraph {
        &self.graph
    }

    pub fn view(&self) -> &ServerView {
        &self.view
    }

    fn sync_held(&mut self) {
        self.view.held = self.reg.labels().to_vec();
    }

    /// Stores a payload without entangling it.
    pub fn receive(&mut self, payload: Register) -> Result<()> {
        let labels = payload.labels().to_vec();
        for &v in &labels {
            if v >= self.arrived.len() {
                return Err(Error::Protocol(format!("payload for unknown vertex {v}")));
            }
            if self.arrived[v] {
                return Err(Error::Protocol(format!("second payload for vertex {v}")));
            }
        }
        self.reg.absorb(payload)?;
        for v in labels {
            self.arrived[v] = true;
        }
        self.sync_held();
        Ok(())
    }

    /// Applies CZ along every graph edge once all payloads have arrived.
    pub fn entangle(&mut self) -> Result<()> {
        if let Some(v) = self.arrived.iter().position(|a| !a) {
            return Err(Error::Protocol(format!("payload for vertex {v} missing")));
        }
        if self.entangled {
            return Err(Error::Protocol("graph already entangled".into()));
        }
        for &(a, b) in self.graph.graph().edges() {
            self.reg.cz(a, b)?;
        }
        self.entangled = true;
        Ok(())
    }

    /// Streaming variant: stores a payload and entangles it with every
    /// neighbour currently held.
    pub fn receive_streamed(&mut self, payload: Register) -> Result<()> {
        let labels = payload.labels().to_vec();
        self.receive(payload)?;
        for v in labels {
            for &u in self.graph.neighbors(v) {
                if self.reg.contains(u) && !(self.measured[u]) {
                    self.reg.cz(v, u)?;
                } else if self.measured[u] {
                    return Err(Error::Ordering(format!("vertex {v} arrived after its neighbour {u} was measured")));
                }
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, v: usize, p: Pauli) -> Result<()> {
        self.reg.apply_pauli(v, p)
    }

    /// `v` and all its neighbours have arrived (so every CZ on `v` is done)
    /// and `v` is still unmeasured.
    fn settled(&self, v: usize) -> bool {
        self.arrived[v] && !self.measured[v] && self.graph.neighbors(v).iter().all(|&u| self.arrived[u])
    }

    /// Queues deviating Paulis and applies each one as soon as its target is
    /// settled. A Pauli on a settled qubit commutes with everything the server
    /// still does to other qubits, so streamed sessions see the same attack as
    /// monolithic ones, where every qubit is settled before the first round.
    pub fn deviate(&mut self, paulis: Vec<(usize, Pauli)>) -> Result<()> {
        for &(v, _) in &paulis {
            if v >= self.arrived.len() || self.measured[v] {
                return Err(Error::Protocol(format!("deviation on vertex {v} that is gone or unknown")));
            }
        }
        self.deferred.extend(paulis);
        let (now, later): (Vec<_>, Vec<_>) =
            std::mem::take(&mut self.deferred).into_iter().partition(|&(v, _)| self.settled(v));
        self.deferred = later;
        for (v, p) in now {
            self.reg.apply_pauli(v, p)?;
        }
        Ok(())
    }

    pub fn record_delta(&mut self, v: usize, delta: Angle8) {
        self.view.deltas[v] = Some(delta);
    }

    pub fn record_report(&mut self, v: usize, b: u8) {
        self.view.reported[v] = Some(b);
        self.view.round += 1;
    }

    /// Measures `v` in the `|+-_delta>` basis.
    pub fn measure<S: OutcomeSource + ?Sized>(&mut self, v: usize, delta: Angle8, src: &mut S) -> Result<Outcome> {
        if self.measured.get(v).copied().unwrap_or(false) {
            return Err(Error::Protocol(format!("vertex {v} already measured")));
        }
        let o = self.reg.measure_xy(v, delta, src)?;
        self.measured[v] = true;
        Ok(o)
    }

    /// Measures `v` in the computational basis.
    pub fn measure_z<S: OutcomeSource + ?Sized>(&mut self, v: usize, src: &mut S) -> Result<Outcome> {
        if self.measured.get(v).copied().unwrap_or(false) {
            return Err(Error::Protocol(format!("vertex {v} already measured")));
        }
        let o = self.reg.measure_z(v, src)?;
        self.measured[v] = true;
        Ok(o)
    }

    /// Drops a measured qubit from memory.
    pub fn discard(&mut self, v: usize) -> Result<StateVector> {
        if !self.measured[v] {
            return Err(Error::Protocol(format!("vertex {v} discarded before measurement")));
        }
        let s = self.reg.remove(v)?;
        self.sync_held();
        Ok(s)
    }

    /// Held qubits that were never measured.
    pub fn unmeasured(&self) -> Vec<usize> {
        self.reg.labels().iter().copied().filter(|&v| !self.measured[v]).collect()
    }

    /// Hands back the unmeasured qubits.
    pub fn release_unmeasured(&mut self) -> Result<Register> {
        for (v, p) in std::mem::take(&mut self.deferred) {
            self.reg.apply_pauli(v, p)?;
        }
        let keep = self.unmeasured();
        let mut rest = std::mem::take(&mut self.reg);
        let mut out = Register::new();
        for v in rest.labels().to_vec() {
            if !keep.contains(&v) {
                rest.remove(v)?;
            }
        }
        if !keep.is_empty() {
            let (labels, state) = rest.into_parts();
            out.add_joint(&labels, &state.ok_or(Error::EmptyRegister)?)?;
        }
        self.sync_held();
        Ok(out)
    }

    pub fn held_qubits(&self) -> usize {
        self.reg.len()
    }
}
