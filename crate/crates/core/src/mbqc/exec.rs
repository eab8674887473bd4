use super::graph::Graph;
use super::pattern::{MeasurementPattern, Role};
use super::register::Register;
use crate::error::{Error, Result};
use crate::qcore::{Outcome, OutcomeSource, Pauli, PauliString, StateVector};

/// Result of running a pattern: per-vertex outcomes (`None` for unmeasured
/// and dummy vertices) and the corrected logical output.
#[derive(Clone, Debug)]
pub struct PatternRun {
    pub outcomes: Vec<Option<u8>>,
    pub output: StateVector,
}

fn initial_single(role: Role) -> Result<StateVector> {
    match role {
        Role::Dummy(d) => StateVector::basis(1, d as usize),
        _ => StateVector::plus(1),
    }
}

fn default_input(p: &MeasurementPattern, input: Option<&StateVector>) -> Result<StateVector> {
    match input {
        Some(s) if s.n_qubits() != p.logical_rows() => Err(Error::DimensionMismatch(s.n_qubits(), p.logical_rows())),
        Some(s) => Ok(s.clone()),
        None => StateVector::plus(p.logical_rows()),
    }
}

fn measure_vertex<S: OutcomeSource + ?Sized>(
    p: &MeasurementPattern,
    reg: &mut Register,
    v: usize,
    outcomes: &mut [Option<u8>],
    src: &mut S,
) -> Result<()> {
    if matches!(p.roles()[v], Role::Dummy(_)) {
        return Ok(());
    }
    let delta = p.adapted_angle(v, outcomes)?;
    outcomes[v] = Some(reg.measure_xy(v, delta, src)?.bit());
    Ok(())
}

fn finish(p: &MeasurementPattern, reg: Register, outcomes: Vec<Option<u8>>) -> Result<PatternRun> {
    let outs = p.logical_outputs();
    let mut output = reg.extract(&outs)?;
    for (i, &v) in outs.iter().enumerate() {
        let (sx, sz) = p.signals(v, &outcomes)?;
        output.apply_xz(i, sx, sz)?;
    }
    Ok(PatternRun { outcomes, output })
}

/// Runs a pattern on the full graph state. `input` (default `|+>^w`) enters
/// on the first column of the logical rows.
pub fn run_pattern<S: OutcomeSource + ?Sized>(
    p: &MeasurementPattern,
    input: Option<&StateVector>,
    src: &mut S,
) -> Result<PatternRun> {
    let input = default_input(p, input)?;
    let mut reg = Register::new();
    let inputs = p.inputs();
    reg.add_joint(&inputs, &input)?;
    for v in 0..p.n_vertices() {
        if !inputs.contains(&v) {
            reg.add(v, &initial_single(p.roles()[v])?)?;
        }
    }
    for &(a, b) in p.graph().graph().edges() {
        reg.cz(a, b)?;
    }
    let mut outcomes = vec![None; p.n_vertices()];
    for &v in p.order() {
        measure_vertex(p, &mut reg, v, &mut outcomes, src)?;
    }
    finish(p, reg, outcomes)
}

/// Runs a pattern column by column holding at most `rows + 1` qubits.
///
/// Requires the default column-major order. Before a vertex is measured its
/// right neighbour is created and entangled with everything already present.
pub fn run_pattern_streamed<S: OutcomeSource + ?Sized>(
    p: &MeasurementPattern,
    input: Option<&StateVector>,
    src: &mut S,
) -> Result<PatternRun> {
    let g = p.graph();
    let canonical = MeasurementPattern::new(g.clone(), p.logical_rows(), p.angles().to_vec(), p.roles().to_vec())?;
    if canonical.order() != p.order() {
        return Err(Error::Ordering("streaming needs the column-major order".into()));
    }
    let input = default_input(p, input)?;
    let mut reg = Register::new();
    reg.add_joint(&p.inputs(), &input)?;
    for r in p.logical_rows()..g.rows() {
        let v = g.index(super::Vertex::new(r, 0));
        reg.add(v, &initial_single(p.roles()[v])?)?;
    }
    for (a, b) in g.vertical_edges_at(0) {
        reg.cz(a, b)?;
    }
    let mut outcomes = vec![None; p.n_vertices()];
    for &v in p.order() {
        let next = v + 1;
        reg.add(next, &initial_single(p.roles()[next])?)?;
        for &u in g.neighbors(next) {
            if reg.contains(u) {
                reg.cz(next, u)?;
            }
        }
        measure_vertex(p, &mut reg, v, &mut outcomes, src)?;
        reg.remove(v)?;
    }
    finish(p, reg, outcomes)
}

/// Measures the stabiliser `X_v prod_{u in N(v)} Z_u` of a graph state.
/// Outcome `Zero` is eigenvalue +1.
pub fn stabilizer_check<S: OutcomeSource + ?Sized>(
    state: &mut StateVector,
    g: &Graph,
    v: usize,
    src: &mut S,
) -> Result<Outcome> {
    if !g.contains(v) || state.n_qubits() != g.n_vertices() {
        return Err(Error::DimensionMismatch(state.n_qubits(), g.n_vertices()));
    }
    let mut terms = vec![(v, Pauli::X)];
    terms.extend(g.neighbors(v).iter().map(|&u| (u, Pauli::Z)));
    state.measure_pauli(&PauliString::new(terms), src)
}
