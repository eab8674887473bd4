use serde::{Deserialize, Serialize};

use super::graph::{BrickworkGraph, Vertex};
use crate::angle::Angle8;
use crate::error::{Error, Result};

/// What a vertex is used for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Measured at its adapted angle.
    Compute,
    /// Prepared in the computational basis state `|d>`; cuts its edges.
    Dummy(u8),
    /// Isolated test qubit with a predictable outcome.
    Trap,
    /// Left unmeasured in the last column.
    Output,
}

/// Dependency sets for adaptive measurement.
///
/// `xdep[v]` flips the sign of `v`'s angle, `zdep[v]` adds `pi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub successor: Vec<Option<usize>>,
    pub xdep: Vec<Vec<usize>>,
    pub zdep: Vec<Vec<usize>>,
}

/// `(-1)^sx * phi + sz * pi`.
pub fn adapt_angle(phi: Angle8, sx: u8, sz: u8) -> Angle8 {
    let a = if sx & 1 == 1 { -phi } else { phi };
    if sz & 1 == 1 {
        a + Angle8::PI
    } else {
        a
    }
}

/// Flow of the brickwork graph once dummies are cut out: each measured vertex
/// feeds the next vertex in its row.
pub fn brickwork_flow(g: &BrickworkGraph, roles: &[Role]) -> Result<Flow> {
    let n = g.n_vertices();
    if roles.len() != n {
        return Err(Error::DimensionMismatch(roles.len(), n));
    }
    let live = |v: usize| !matches!(roles[v], Role::Dummy(_));
    let mut successor = vec![None; n];
    let mut xdep = vec![Vec::new(); n];
    let mut zdep = vec![Vec::new(); n];
    for u in 0..n {
        let Vertex { row, col } = g.vertex(u);
        if col + 1 == g.cols() || !matches!(roles[u], Role::Compute) {
            continue;
        }
        let s = g.index(Vertex::new(row, col + 1));
        if !live(s) {
            continue;
        }
        successor[u] = Some(s);
        xdep[s].push(u);
        for &w in g.neighbors(s) {
            if w != u && live(w) {
                zdep[w].push(u);
            }
        }
    }
    Ok(Flow { successor, xdep, zdep })
}

/// A brickwork graph with an angle and role per vertex and a measurement order.
///
/// Rows `0..logical_rows` carry the computation; any further rows are padding.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPattern {
    graph: BrickworkGraph,
    logical_rows: usize,
    angles: Vec<Angle8>,
    roles: Vec<Role>,
    order: Vec<usize>,
    flow: Flow,
    static_z: Vec<u8>,
}

impl MeasurementPattern {
    pub fn new(graph: BrickworkGraph, logical_rows: usize, angles: Vec<Angle8>, roles: Vec<Role>) -> Result<Self> {
        let n = graph.n_vertices();
        if angles.len() != n || roles.len() != n {
            return Err(Error::InvalidPattern(format!(
                "{} angles and {} roles for {n} vertices",
                angles.len(),
                roles.len()
            )));
        }
        if logical_rows == 0 || logical_rows > graph.rows() {
            return Err(Error::InvalidPattern(format!("{logical_rows} logical rows in a {}-row graph", graph.rows())));
        }
        let last = graph.cols() - 1;
        for (v, role) in roles.iter().enumerate() {
            let Vertex { row, col } = graph.vertex(v);
            let ok = match role {
                Role::Dummy(d) => *d <= 1 && row >= logical_rows,
                Role::Output => col == last,
                Role::Compute => col < last,
                Role::Trap => col < last && row >= logical_rows,
            };
            if !ok {
                return Err(Error::InvalidPattern(format!("role {role:?} not allowed at ({row},{col})")));
            }
        }
        let flow = brickwork_flow(&graph, &roles)?;
        let static_z = (0..n)
            .map(|v| {
                graph.neighbors(v).iter().fold(0, |acc, &w| match roles[w] {
                    Role::Dummy(d) => acc ^ d,
                    _ => acc,
                })
            })
            .collect();
        // Column-major: left to right, top to bottom within a column.
        let order = (0..last)
            .flat_map(|c| (0..graph.rows()).map(move |r| (r, c)))
            .map(|(r, c)| graph.index(Vertex::new(r, c)))
            .collect();
        Ok(MeasurementPattern { graph, logical_rows, angles, roles, order, flow, static_z })
    }

    /// Replaces the measurement order; it must list every measured vertex once
    /// and respect the dependency sets.
    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        let n = self.graph.n_vertices();
        let mut at = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || at[v] != usize::MAX || self.roles[v] == Role::Output {
                return Err(Error::Ordering(format!("vertex {v} misplaced in measurement order")));
            }
            at[v] = i;
        }
        for v in 0..n {
            if self.roles[v] == Role::Output {
                continue;
            }
            // Last-column dummies are left alone, like the outputs they sit beside.
            if at[v] == usize::MAX && self.graph.vertex(v).col + 1 < self.graph.cols() {
                return Err(Error::Ordering(format!("vertex {v} is never measured")));
            }
            for &u in self.flow.xdep[v].iter().chain(&self.flow.zdep[v]) {
                if at[u] > at[v] {
                    return Err(Error::Ordering(format!("vertex {v} measured before its dependency {u}")));
                }
            }
        }
        self.order = order;
        Ok(self)
    }

    pub fn graph(&self) -> &BrickworkGraph {
        &self.graph
    }

    pub fn logical_rows(&self) -> usize {
        self.logical_rows
    }

    pub fn angles(&self) -> &[Angle8] {
        &self.angles
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    /// Z byproduct each vertex inherits from its dummy neighbours.
    pub fn static_z(&self, v: usize) -> u8 {
        self.static_z[v]
    }

    /// First-column vertices of the logical rows.
    pub fn inputs(&self) -> Vec<usize> {
        (0..self.logical_rows).map(|r| self.graph.index(Vertex::new(r, 0))).collect()
    }

    /// Last-column vertices of the logical rows.
    pub fn logical_outputs(&self) -> Vec<usize> {
        let c = self.graph.cols() - 1;
        (0..self.logical_rows).map(|r| self.graph.index(Vertex::new(r, c))).collect()
    }

    /// Last-column vertices of the padding rows that are not dummies.
    pub fn padding_outputs(&self) -> Vec<usize> {
        let c = self.graph.cols() - 1;
        (self.logical_rows..self.graph.rows())
            .map(|r| self.graph.index(Vertex::new(r, c)))
            .filter(|&v| self.roles[v] == Role::Output)
            .collect()
    }

    pub fn traps(&self) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| self.roles[v] == Role::Trap).collect()
    }

    /// Accumulated `(sx, sz)` for `v` given the outcomes recorded so far.
    pub fn signals(&self, v: usize, outcomes: &[Option<u8>]) -> Result<(u8, u8)> {
        let get = |u: usize| {
            outcomes
                .get(u)
                .copied()
                .flatten()
                .ok_or_else(|| Error::Ordering(format!("outcome of {u} needed by {v} is missing")))
        };
        let mut sx = 0;
        for &u in &self.flow.xdep[v] {
            sx ^= get(u)?;
        }
        let mut sz = self.static_z[v];
        for &u in &self.flow.zdep[v] {
            sz ^= get(u)?;
        }
        Ok((sx, sz))
    }

    /// Angle at which `v` should be measured in the plain (unblinded) setting.
    pub fn adapted_angle(&self, v: usize, outcomes: &[Option<u8>]) -> Result<Angle8> {
        match self.roles[v] {
            Role::Compute => {
                let (sx, sz) = self.signals(v, outcomes)?;
                Ok(adapt_angle(self.angles[v], sx, sz))
            }
            Role::Trap => Ok(self.angles[v]),
            Role::Dummy(_) => Ok(Angle8::ZERO),
            Role::Output => Err(Error::InvalidPattern(format!("output vertex {v} is not measured"))),
        }
    }
}
