use rand::RngCore;

use super::key::PauliKey;
use super::session::{apply_t_gadget, data_part, ChildsDriver, ChildsRun, EncryptedRegister};
use crate::error::{Error, Result};
use crate::mbqc::Circuit;
use crate::qcore::{Gate, Pauli, StateVector};

/// Position in the fixed gate cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    H,
    Cnot,
    T,
    S,
}

const CYCLE: [Slot; 4] = [Slot::H, Slot::Cnot, Slot::T, Slot::S];

/// One step of a hidden schedule: a cycle slot carrying either a real gate or
/// a decoy on the ancilla pair, or a Pauli the client applies locally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Slot(Slot, Option<Gate>),
    Local(Gate),
}

fn slot_of(g: &Gate) -> Option<Slot> {
    match g {
        Gate::H(_) => Some(Slot::H),
        Gate::Cnot { .. } => Some(Slot::Cnot),
        Gate::T(_) => Some(Slot::T),
        Gate::S(_) => Some(Slot::S),
        _ => None,
    }
}

/// Packs `circuit` into repetitions of the (H, CNOT, T, S) cycle, padded to
/// at least `min_cycles`. Returns the steps and the cycle count.
pub fn hidden_schedule(circuit: &Circuit, min_cycles: usize) -> Result<(Vec<Step>, usize)> {
    let mut gates = Vec::new();
    for g in circuit.gates() {
        match *g {
            Gate::Cz(a, b) => gates.extend([Gate::H(b), Gate::Cnot { control: a, target: b }, Gate::H(b)]),
            Gate::Rz(q, a) => gates.extend(std::iter::repeat_n(Gate::T(q), a.k() as usize)),
            other => gates.push(other),
        }
    }
    let mut steps = Vec::new();
    let mut next = 0usize;
    let mut cycles = 0usize;
    for g in gates {
        let Some(slot) = slot_of(&g) else {
            steps.push(Step::Local(g));
            continue;
        };
        let pos = slot as usize;
        if next == 0 || pos < next {
            if next != 0 {
                steps.extend(CYCLE[next..].iter().map(|&s| Step::Slot(s, None)));
            }
            cycles += 1;
            next = 0;
        }
        steps.extend(CYCLE[next..pos].iter().map(|&s| Step::Slot(s, None)));
        steps.push(Step::Slot(slot, Some(g)));
        next = pos + 1;
        if next == CYCLE.len() {
            next = 0;
        }
    }
    if next != 0 {
        steps.extend(CYCLE[next..].iter().map(|&s| Step::Slot(s, None)));
    }
    while cycles < min_cycles {
        steps.extend(CYCLE.iter().map(|&s| Step::Slot(s, None)));
        cycles += 1;
    }
    Ok((steps, cycles))
}

/// Runs `circuit` hidden in a fixed gate cycle: every cycle requests H, CNOT,
/// T (with its S repair) and S, in that order. Unused slots act on an
/// ancillary pair that starts in `|00>` and is padded like the data.
pub fn run_hidden_circuit<R: RngCore + ?Sized>(
    circuit: &Circuit,
    input: &StateVector,
    min_cycles: usize,
    rng: &mut R,
) -> Result<ChildsRun> {
    let w = circuit.width();
    if input.n_qubits() != w {
        return Err(Error::DimensionMismatch(input.n_qubits(), w));
    }
    let (steps, _) = hidden_schedule(circuit, min_cycles)?;
    let (a0, a1) = (w, w + 1);
    let plain = input.tensor(&StateVector::zero(2)?)?;
    let mut reg = EncryptedRegister::encrypt(&plain, PauliKey::random(w + 2, rng))?;
    let mut driver = ChildsDriver::new("childs-hidden", w + 2, 0);
    for step in steps {
        match step {
            Step::Local(g) => {
                let p = match g {
                    Gate::X(_) => Pauli::X,
                    Gate::Y(_) => Pauli::Y,
                    Gate::Z(_) => Pauli::Z,
                    other => return Err(Error::InvalidCircuit(format!("{other} has no slot in the cycle"))),
                };
                reg.apply_local(g.targets()[0], p)?;
            }
            Step::Slot(Slot::H, g) => driver.round_trip(&mut reg, g.unwrap_or(Gate::H(a0)), rng)?,
            Step::Slot(Slot::Cnot, g) => {
                driver.round_trip(&mut reg, g.unwrap_or(Gate::Cnot { control: a0, target: a1 }), rng)?
            }
            Step::Slot(Slot::T, g) => {
                let q = g.map_or(a0, |g| g.targets()[0]);
                apply_t_gadget(&mut reg, q, a1, &mut driver, rng)?;
            }
            Step::Slot(Slot::S, g) => driver.round_trip(&mut reg, g.unwrap_or(Gate::S(a0)), rng)?,
        }
    }
    let output = data_part(reg.decrypt()?, w)?;
    let secrets = driver.secrets().to_vec();
    Ok(ChildsRun { output, transcript: driver.into_transcript()?, secrets })
}
