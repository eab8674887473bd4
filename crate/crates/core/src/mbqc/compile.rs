use std::collections::hash_map::Entry;
use std::collections::HashMap;

use super::cells::{brick_cell, single_cell, single_key};
use super::graph::{build_brickwork, Vertex};
use super::pattern::{MeasurementPattern, Role};
use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::qcore::{Gate, StateVector};

/// A gate sequence on `width` wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one wire".into()));
        }
        for g in &gates {
            let t = g.targets();
            if let Some(&q) = t.iter().find(|&&q| q >= width) {
                return Err(Error::InvalidCircuit(format!("{g} touches wire {q} of {width}")));
            }
            if t.len() == 2 && t[0] == t[1] {
                return Err(Error::DuplicateTargets(t));
            }
        }
        Ok(Circuit { width, gates })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Applies the gates directly to `input`.
    pub fn simulate(&self, input: &StateVector) -> Result<StateVector> {
        if input.n_qubits() != self.width {
            return Err(Error::DimensionMismatch(input.n_qubits(), self.width));
        }
        let mut s = input.clone();
        s.apply_all(&self.gates)?;
        Ok(s)
    }
}

/// Cell that wire `q` belongs to in layer `layer`: `(top, bottom)`.
fn cell_of(layer: usize, width: usize, q: usize) -> (usize, Option<usize>) {
    let parity = layer % 2;
    if q < parity {
        return (q, None);
    }
    let top = q - (q - parity) % 2;
    if top + 1 < width {
        (top, Some(top + 1))
    } else {
        (q, None)
    }
}

/// Compiles a circuit into a brickwork pattern of `width` rows and `4L + 1` columns.
///
/// Gates are placed greedily in the earliest layer where their cell is free.
/// Two-qubit gates must act on neighbouring wires; `CZ` is expanded to
/// `H CNOT H` because no single brick realises it.
pub fn compile_circuit(c: &Circuit) -> Result<MeasurementPattern> {
    let w = c.width;
    let mut expanded = Vec::new();
    for g in &c.gates {
        match *g {
            Gate::Cz(a, b) => expanded.extend([Gate::H(b), Gate::Cnot { control: a, target: b }, Gate::H(b)]),
            other => expanded.push(other),
        }
    }
    let mut layers: Vec<HashMap<usize, String>> = Vec::new();
    let mut frontier = vec![0usize; w];
    for g in &expanded {
        let wires = g.targets();
        let start = wires.iter().map(|&q| frontier[q]).max().unwrap_or(0);
        let mut layer = start;
        loop {
            if layers.len() <= layer {
                layers.push(HashMap::new());
            }
            let placed = match *g {
                Gate::Cnot { control, target } => {
                    let top = control.min(target);
                    if control.abs_diff(target) != 1 {
                        return Err(Error::InvalidCircuit(format!("{g} acts on non-adjacent wires")));
                    }
                    if cell_of(layer, w, top) == (top, Some(top + 1)) && !layers[layer].contains_key(&top) {
                        let key = if control == top { "CNOT_DOWN" } else { "CNOT_UP" };
                        layers[layer].insert(top, key.to_string());
                        true
                    } else {
                        false
                    }
                }
                _ => {
                    let q = wires[0];
                    let (top, bottom) = cell_of(layer, w, q);
                    match layers[layer].entry(top) {
                        Entry::Occupied(_) => false,
                        Entry::Vacant(slot) => {
                            let k = single_key(g)?;
                            slot.insert(match bottom {
                                None => k,
                                Some(_) if q == top => format!("TOP_{k}"),
                                Some(_) => format!("BOTTOM_{k}"),
                            });
                            true
                        }
                    }
                }
            };
            if placed {
                for &q in &wires {
                    frontier[q] = layer + 1;
                }
                break;
            }
            layer += 1;
        }
    }
    let n_layers = layers.len().max(1);
    let cols = 4 * n_layers + 1;
    let graph = build_brickwork(w, cols)?;
    let mut angles = vec![Angle8::ZERO; w * cols];
    let empty = HashMap::new();
    for l in 0..n_layers {
        let content = layers.get(l).unwrap_or(&empty);
        let mut q = 0;
        while q < w {
            let (top, bottom) = cell_of(l, w, q);
            let mut put = |row: usize, a: &[Angle8]| {
                for (i, &x) in a.iter().enumerate() {
                    angles[graph.index(Vertex::new(row, 4 * l + i))] = x;
                }
            };
            match bottom {
                None => {
                    let key = content.get(&top).map(String::as_str).unwrap_or("RZ0");
                    put(top, &single_cell(key)?);
                    q = top + 1;
                }
                Some(b) => {
                    let key = content.get(&top).map(String::as_str).unwrap_or("TOP_RZ0");
                    let a = brick_cell(key)?;
                    put(top, &a[0..4]);
                    put(b, &a[4..8]);
                    q = b + 1;
                }
            }
        }
    }
    let roles = (0..w * cols).map(|v| if v % cols == cols - 1 { Role::Output } else { Role::Compute }).collect();
    MeasurementPattern::new(graph, w, angles, roles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_alternate_between_layers() {
        assert_eq!(cell_of(0, 4, 0), (0, Some(1)));
        assert_eq!(cell_of(0, 4, 3), (2, Some(3)));
        assert_eq!(cell_of(1, 4, 0), (0, None));
        assert_eq!(cell_of(1, 4, 2), (1, Some(2)));
        assert_eq!(cell_of(1, 4, 3), (3, None));
        assert_eq!(cell_of(0, 3, 2), (2, None));
        assert_eq!(cell_of(1, 2, 1), (1, None));
    }

    #[test]
    fn empty_circuit_gives_one_layer() {
        let p = compile_circuit(&Circuit::new(2, vec![]).unwrap()).unwrap();
        assert_eq!((p.graph().rows(), p.graph().cols()), (2, 5));
    }

    #[test]
    fn cnot_fits_in_one_layer() {
        let c = Circuit::new(2, vec![Gate::Cnot { control: 0, target: 1 }]).unwrap();
        assert_eq!(compile_circuit(&c).unwrap().graph().cols(), 5);
    }

    #[test]
    fn rejects_non_adjacent_two_qubit_gates() {
        let c = Circuit::new(3, vec![Gate::Cnot { control: 0, target: 2 }]).unwrap();
        assert!(matches!(compile_circuit(&c), Err(Error::InvalidCircuit(_))));
        assert!(Circuit::new(2, vec![Gate::H(2)]).is_err());
    }
}
