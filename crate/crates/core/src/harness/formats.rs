//! JSON file formats.
//!
//! A circuit file is `{"width": 2, "gates": [{"gate": "h", "q": 0},
//! {"gate": "cnot", "control": 0, "target": 1}, {"gate": "rz", "q": 1, "k": 3}]}`
//! with `k` counting multiples of pi/4.
//!
//! A pattern file lists one angle index and one role per vertex in row-major
//! order: `{"rows": 1, "cols": 3, "logical_rows": 1, "angles": [1, 0, 0],
//! "roles": ["compute", "compute", "output"]}`. Roles are `"compute"`,
//! `"trap"`, `"output"` or `{"dummy": 0|1}`. An optional `"order"` overrides
//! the column-major measurement order.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::mbqc::{BrickworkGraph, Circuit, MeasurementPattern, Role};
use crate::qcore::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase", deny_unknown_fields)]
pub enum GateSpec {
    H { q: usize },
    S { q: usize },
    T { q: usize },
    X { q: usize },
    Y { q: usize },
    Z { q: usize },
    Rz { q: usize, k: Angle8 },
    Cz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
}

impl From<Gate> for GateSpec {
    fn from(g: Gate) -> Self {
        match g {
            Gate::H(q) => GateSpec::H { q },
            Gate::S(q) => GateSpec::S { q },
            Gate::T(q) => GateSpec::T { q },
            Gate::X(q) => GateSpec::X { q },
            Gate::Y(q) => GateSpec::Y { q },
            Gate::Z(q) => GateSpec::Z { q },
            Gate::Rz(q, k) => GateSpec::Rz { q, k },
            Gate::Cz(a, b) => GateSpec::Cz { a, b },
            Gate::Cnot { control, target } => GateSpec::Cnot { control, target },
        }
    }
}

impl From<GateSpec> for Gate {
    fn from(g: GateSpec) -> Self {
        match g {
            GateSpec::H { q } => Gate::H(q),
            GateSpec::S { q } => Gate::S(q),
            GateSpec::T { q } => Gate::T(q),
            GateSpec::X { q } => Gate::X(q),
            GateSpec::Y { q } => Gate::Y(q),
            GateSpec::Z { q } => Gate::Z(q),
            GateSpec::Rz { q, k } => Gate::Rz(q, k),
            GateSpec::Cz { a, b } => Gate::Cz(a, b),
            GateSpec::Cnot { control, target } => Gate::Cnot { control, target },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub width: usize,
    pub gates: Vec<GateSpec>,
}

impl From<&Circuit> for CircuitFile {
    fn from(c: &Circuit) -> Self {
        CircuitFile { width: c.width(), gates: c.gates().iter().map(|&g| g.into()).collect() }
    }
}

impl TryFrom<CircuitFile> for Circuit {
    type Error = Error;

    fn try_from(f: CircuitFile) -> Result<Circuit> {
        Circuit::new(f.width, f.gates.into_iter().map(Gate::from).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub rows: usize,
    pub cols: usize,
    pub logical_rows: usize,
    pub angles: Vec<Angle8>,
    pub roles: Vec<Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

impl From<&MeasurementPattern> for PatternFile {
    fn from(p: &MeasurementPattern) -> Self {
        let g = p.graph();
        let default = MeasurementPattern::new(g.clone(), p.logical_rows(), p.angles().to_vec(), p.roles().to_vec())
            .map(|d| d.order() == p.order())
            .unwrap_or(false);
        PatternFile {
            rows: g.rows(),
            cols: g.cols(),
            logical_rows: p.logical_rows(),
            angles: p.angles().to_vec(),
            roles: p.roles().to_vec(),
            order: (!default).then(|| p.order().to_vec()),
        }
    }
}

impl TryFrom<PatternFile> for MeasurementPattern {
    type Error = Error;

    fn try_from(f: PatternFile) -> Result<MeasurementPattern> {
        let g = BrickworkGraph::new(f.rows, f.cols)?;
        let p = MeasurementPattern::new(g, f.logical_rows, f.angles, f.roles)?;
        match f.order {
            Some(order) => p.with_order(order),
            None => Ok(p),
        }
    }
}

/// Parses JSON, reporting the line and column of the first problem.
pub fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("{what}: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Wire(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json(&text, &path.display().to_string())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_circuit(path: &Path) -> Result<Circuit> {
    read_json::<CircuitFile>(path)?.try_into()
}

pub fn load_pattern(path: &Path) -> Result<MeasurementPattern> {
    read_json::<PatternFile>(path)?.try_into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbqc::compile_circuit;
    use proptest::prelude::*;

    fn gate_strategy(width: usize) -> impl Strategy<Value = Gate> {
        let q = 0..width;
        prop_oneof![
            q.clone().prop_map(Gate::H),
            q.clone().prop_map(Gate::S),
            q.clone().prop_map(Gate::T),
            q.clone().prop_map(Gate::X),
            (q.clone(), 0..8i64).prop_map(|(q, k)| Gate::Rz(q, Angle8::new(k))),
            (0..width - 1).prop_map(|q| Gate::Cnot { control: q, target: q + 1 }),
            (0..width - 1).prop_map(|q| Gate::Cz(q + 1, q)),
        ]
    }

    proptest! {
        #[test]
        fn circuits_round_trip(gates in proptest::collection::vec(gate_strategy(3), 0..12)) {
            let c = Circuit::new(3, gates).unwrap();
            let text = to_json(&CircuitFile::from(&c)).unwrap();
            let back: Circuit = from_json::<CircuitFile>(&text, "t").unwrap().try_into().unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn compiled_patterns_round_trip(gates in proptest::collection::vec(gate_strategy(2), 0..3)) {
            let p = compile_circuit(&Circuit::new(2, gates).unwrap()).unwrap();
            let text = to_json(&PatternFile::from(&p)).unwrap();
            let back: MeasurementPattern = from_json::<PatternFile>(&text, "t").unwrap().try_into().unwrap();
            prop_assert_eq!(back, p);
        }
    }

    #[test]
    fn custom_order_survives() {
        let g = BrickworkGraph::new(2, 2).unwrap();
        let p = MeasurementPattern::new(
            g,
            2,
            vec![Angle8::ZERO; 4],
            vec![Role::Compute, Role::Output, Role::Compute, Role::Output],
        )
        .unwrap()
        .with_order(vec![2, 0])
        .unwrap();
        let f = PatternFile::from(&p);
        assert_eq!(f.order, Some(vec![2, 0]));
        assert_eq!(MeasurementPattern::try_from(f).unwrap(), p);
    }

    #[test]
    fn documented_examples_parse() {
        let c: CircuitFile = from_json(
            r#"{"width": 2, "gates": [{"gate": "h", "q": 0}, {"gate": "cnot", "control": 0, "target": 1}, {"gate": "rz", "q": 1, "k": 3}]}"#,
            "c",
        )
        .unwrap();
        assert_eq!(Circuit::try_from(c).unwrap().gates()[2], Gate::Rz(1, Angle8::new(3)));
        let p: PatternFile = from_json(
            r#"{"rows": 2, "cols": 2, "logical_rows": 1, "angles": [1, 0, 0, 0], "roles": ["compute", "output", "trap", {"dummy": 1}]}"#,
            "p",
        )
        .unwrap();
        let p = MeasurementPattern::try_from(p).unwrap();
        assert_eq!(p.roles()[3], Role::Dummy(1));
    }

    #[test]
    fn errors_name_the_problem() {
        let e = from_json::<CircuitFile>("{\"width\": 1,\n \"gates\": [], \"colour\": 3}", "c.json").unwrap_err();
        let Error::Config(msg) = e else { panic!() };
        assert!(msg.contains("colour") && msg.contains("line 2"), "{msg}");
        assert!(from_json::<CircuitFile>(r#"{"width": 1, "gates": [{"gate": "rz", "q": 0, "k": 9}]}"#, "c").is_err());
        assert!(from_json::<CircuitFile>(r#"{"width": 1, "gates": [{"gate": "h", "q": 0, "extra": 1}]}"#, "c").is_err());
    }
}
