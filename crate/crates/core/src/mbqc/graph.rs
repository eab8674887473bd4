use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{Gate, StateVector, MAX_QUBITS};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) outside {n} vertices")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on {a}")));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a},{b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
            list.push(key);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(Graph { n, edges: list, adj })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n
    }
}

/// `|+>` on every vertex followed by CZ along every edge.
pub fn graph_state(g: &Graph) -> Result<StateVector> {
    if g.n > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: g.n, max: MAX_QUBITS });
    }
    let mut s = StateVector::plus(g.n)?;
    for &(a, b) in &g.edges {
        s.apply(&Gate::Cz(a, b))?;
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub row: usize,
    pub col: usize,
}

impl Vertex {
    pub fn new(row: usize, col: usize) -> Self {
        Vertex { row, col }
    }
}

/// Brickwork resource graph of `rows x cols` vertices.
///
/// Rows are horizontal chains. With 1-based columns `c` and rows `i`,
/// vertical edges join rows `(i, i+1)` for odd `i` at columns `c = 3, 5 (mod 8)`,
/// and for even `i` at columns `c = 7 (mod 8)` and `c + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickworkGraph {
    rows: usize,
    cols: usize,
    graph: Graph,
}

/// Which rows (0-based, upper row of the pair) carry a vertical edge at 0-based column `col`.
fn vertical_pairs(rows: usize, col: usize) -> Vec<usize> {
    let first_row = match col % 8 {
        2 | 4 => 0,
        6 => 1,
        0 if col > 0 => 1,
        _ => return Vec::new(),
    };
    (first_row..rows.saturating_sub(1)).step_by(2).collect()
}

pub fn build_brickwork(rows: usize, cols: usize) -> Result<BrickworkGraph> {
    BrickworkGraph::new(rows, cols)
}

impl BrickworkGraph {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidGraph(format!("brickwork dimensions {rows}x{cols} must be positive")));
        }
        let idx = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols - 1 {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
        }
        for c in 0..cols {
            for r in vertical_pairs(rows, c) {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
        Ok(BrickworkGraph { rows, cols, graph: Graph::new(rows * cols, edges)? })
    }

    /// Accepts an explicit edge list only if it is exactly the brickwork rule.
    pub fn from_edges(rows: usize, cols: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let g = Self::new(rows, cols)?;
        let want: BTreeSet<_> = g.graph.edges.iter().copied().collect();
        let got: BTreeSet<_> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        if want != got || got.len() != edges.len() {
            return Err(Error::InvalidGraph("edge set is not a brickwork graph".into()));
        }
        Ok(g)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_vertices(&self) -> usize {
        self.rows * self.cols
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn index(&self, v: Vertex) -> usize {
        v.row * self.cols + v.col
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        Vertex { row: index / self.cols, col: index % self.cols }
    }

    pub fn neighbors(&self, index: usize) -> &[usize] {
        self.graph.neighbors(index)
    }

    /// Vertical edges at column `col`, as `(upper, lower)` vertex indices.
    pub fn vertical_edges_at(&self, col: usize) -> Vec<(usize, usize)> {
        vertical_pairs(self.rows, col)
            .into_iter()
            .map(|r| (self.index(Vertex::new(r, col)), self.index(Vertex::new(r + 1, col))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{Pauli, PauliString};

    #[test]
    fn single_row_is_a_path() {
        let g = build_brickwork(1, 6).unwrap();
        assert_eq!(g.graph().edges().len(), 5);
        assert!(g.graph().edges().iter().all(|&(a, b)| b == a + 1));
    }

    #[test]
    fn two_by_one_is_edgeless() {
        let g = build_brickwork(2, 1).unwrap();
        assert!(g.graph().edges().is_empty());
        assert_eq!(g.n_vertices(), 2);
    }

    #[test]
    fn two_by_nine_edge_count() {
        // Enumerating the rule by hand: horizontal 2*8; vertical between rows 1,2 (1-based)
        // at 1-based columns 3 and 5; columns 7 and 9 pair rows 2,3 which do not exist.
        let g = build_brickwork(2, 9).unwrap();
        assert_eq!(g.graph().edges().len(), 18);
        let verticals: Vec<_> = g.graph().edges().iter().filter(|(a, b)| b - a == 9).collect();
        assert_eq!(verticals, vec![&(2, 11), &(4, 13)]);
    }

    #[test]
    fn four_rows_alternate_brick_layers() {
        let g = build_brickwork(4, 10).unwrap();
        let v = |c| g.vertical_edges_at(c).iter().map(|&(a, _)| g.vertex(a).row).collect::<Vec<_>>();
        assert_eq!(v(2), vec![0, 2]);
        assert_eq!(v(4), vec![0, 2]);
        assert_eq!(v(6), vec![1]);
        assert_eq!(v(8), vec![1]);
        assert!(v(0).is_empty() && v(1).is_empty() && v(3).is_empty() && v(5).is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_brickwork(0, 3).is_err());
        assert!(Graph::new(2, [(0, 0)]).is_err());
        assert!(Graph::new(2, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
        assert!(BrickworkGraph::from_edges(1, 3, &[(0, 1)]).is_err());
        assert!(BrickworkGraph::from_edges(1, 3, &[(1, 0), (1, 2)]).is_ok());
    }

    #[test]
    fn graph_state_examples() {
        let one = graph_state(&Graph::new(1, []).unwrap()).unwrap();
        assert_eq!(one, StateVector::plus(1).unwrap());

        let e = graph_state(&Graph::new(2, [(0, 1)]).unwrap()).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (a, w) in e.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() < 1e-12 && a.im.abs() < 1e-12);
        }

        // 3-path stabilisers X1Z2, Z1X2Z3, Z2X3
        let p = graph_state(&Graph::new(3, [(0, 1), (1, 2)]).unwrap()).unwrap();
        let k = |t: Vec<(usize, Pauli)>| p.expectation(&PauliString::new(t)).unwrap();
        assert!((k(vec![(0, Pauli::X), (1, Pauli::Z)]) - 1.0).abs() < 1e-12);
        assert!((k(vec![(0, Pauli::Z), (1, Pauli::X), (2, Pauli::Z)]) - 1.0).abs() < 1e-12);
        assert!((k(vec![(1, Pauli::Z), (2, Pauli::X)]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn graph_state_is_order_independent() {
        let g = build_brickwork(3, 5).unwrap();
        let a = graph_state(g.graph()).unwrap();
        let mut rev = g.graph().edges().to_vec();
        rev.reverse();
        let b = graph_state(&Graph::new(15, rev).unwrap()).unwrap();
        assert!(a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn oversized_graph_state_is_rejected() {
        let g = Graph::new(MAX_QUBITS + 1, []).unwrap();
        assert!(matches!(graph_state(&g), Err(Error::TooManyQubits { .. })));
    }
}
