use rand::RngCore;

use super::key::{key_update_clifford, qotp_decrypt, qotp_encrypt, PauliKey};
use crate::error::{Error, Result};
use crate::harness::{
    Channel, Endpoint, GateName, Message, QuantumRegistry, SecretToken, SessionMeta, Topology, Transcript,
};
use crate::mbqc::{Circuit, Register};
use crate::qcore::{Gate, Pauli, StateVector};

/// Padded data together with the client's key. The state is what travels to
/// the server; the key never leaves the client.
#[derive(Clone, Debug)]
pub struct EncryptedRegister {
    state: StateVector,
    key: PauliKey,
}

impl EncryptedRegister {
    pub fn encrypt(plain: &StateVector, key: PauliKey) -> Result<Self> {
        Ok(EncryptedRegister { state: qotp_encrypt(plain, &key)?, key })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn key(&self) -> &PauliKey {
        &self.key
    }

    pub fn n_qubits(&self) -> usize {
        self.state.n_qubits()
    }

    pub fn decrypt(&self) -> Result<StateVector> {
        qotp_decrypt(&self.state, &self.key)
    }

    /// Pads `qubits` once more with fresh random Paulis.
    pub fn refresh<R: RngCore + ?Sized>(&mut self, qubits: &[usize], rng: &mut R) -> Result<()> {
        let pad = PauliKey::random(qubits.len(), rng);
        for (i, &q) in qubits.iter().enumerate() {
            let (x, z) = pad.get(i);
            self.state.apply_xz(q, x, z)?;
            // X^x Z^z X^kx Z^kz = +-X^(x^kx) Z^(z^kz)
            self.key = self.key.xor(&single(self.key.len(), q, x, z)?)?;
        }
        Ok(())
    }

    /// A Pauli the client applies itself; the key is unaffected.
    pub fn apply_local(&mut self, q: usize, p: Pauli) -> Result<()> {
        self.state.apply_pauli(q, p)
    }
}

fn single(n: usize, q: usize, x: u8, z: u8) -> Result<PauliKey> {
    let mut xs = vec![0; n];
    let mut zs = vec![0; n];
    xs[q] = x;
    zs[q] = z;
    PauliKey::new(xs, zs)
}

fn gate_name(g: &Gate) -> Result<GateName> {
    Ok(match g {
        Gate::H(_) => GateName::H,
        Gate::S(_) => GateName::S,
        Gate::T(_) => GateName::T,
        Gate::Cnot { .. } => GateName::Cnot,
        Gate::Cz(..) => GateName::Cz,
        other => return Err(Error::InvalidCircuit(format!("{other} is not requested from the server"))),
    })
}

/// Client-server channel for one encrypted-computation session.
///
/// Each round trip pads the addressed qubits afresh, sends them under new
/// registry references together with the gate name, and receives them back
/// under new references. Gate targets therefore never appear in the clear.
#[derive(Debug)]
pub struct ChildsDriver {
    ch: Channel,
    registry: QuantumRegistry<usize>,
    secrets: Vec<SecretToken>,
}

impl ChildsDriver {
    pub fn new(protocol: &str, n_qubits: usize, seed: u64) -> Self {
        let meta = SessionMeta { protocol: protocol.into(), rows: n_qubits as u32, cols: 0, seed };
        ChildsDriver {
            ch: Channel::new(Topology::SingleServer, meta),
            registry: QuantumRegistry::new(),
            secrets: Vec::new(),
        }
    }

    pub fn transcript(&self) -> &Transcript {
        self.ch.transcript()
    }

    /// Every key the client held during the session.
    pub fn secrets(&self) -> &[SecretToken] {
        &self.secrets
    }

    fn remember(&mut self, key: &PauliKey) {
        for t in key.secret_tokens() {
            if !self.secrets.contains(&t) {
                self.secrets.push(t);
            }
        }
    }

    /// Sends the qubits of `gate` for the server to act on. Clifford gates
    /// update the key; `T` is left to the gadget.
    pub(super) fn round_trip<R: RngCore + ?Sized>(
        &mut self,
        reg: &mut EncryptedRegister,
        gate: Gate,
        rng: &mut R,
    ) -> Result<()> {
        let name = gate_name(&gate)?;
        let targets = gate.targets();
        reg.refresh(&targets, rng)?;
        self.remember(&reg.key);
        let refs = targets.iter().map(|&q| self.registry.deposit(q)).collect();
        self.ch.send(Endpoint::Client, Endpoint::Server, Message::GateRequest { gate: name, refs })?;

        // Server: resolve, act, hand back.
        let Message::GateRequest { gate: got, refs } = self.ch.recv(Endpoint::Server)?.1 else {
            return Err(Error::Protocol("server expected a gate request".into()));
        };
        let qubits: Vec<usize> = refs.iter().map(|&r| self.registry.resolve(r)).collect::<Result<_>>()?;
        if got.arity() != qubits.len() {
            return Err(Error::Protocol(format!("{got:?} request with {} qubits", qubits.len())));
        }
        reg.state.apply(&gate.retarget(&qubits))?;
        let back = qubits.iter().map(|&q| self.registry.deposit(q)).collect();
        self.ch.send(Endpoint::Server, Endpoint::Client, Message::GateReturn { refs: back })?;

        let Message::GateReturn { refs } = self.ch.recv(Endpoint::Client)?.1 else {
            return Err(Error::Protocol("client expected its qubits back".into()));
        };
        let returned: Vec<usize> = refs.iter().map(|&r| self.registry.resolve(r)).collect::<Result<_>>()?;
        if returned != targets {
            return Err(Error::Protocol("server returned different qubits".into()));
        }
        if gate.is_clifford() {
            reg.key = key_update_clifford(&reg.key, &gate)?;
            self.remember(&reg.key);
        }
        Ok(())
    }

    pub fn into_transcript(self) -> Result<Transcript> {
        self.registry.close()?;
        Ok(self.ch.into_transcript())
    }
}

/// Applies `T` to padded qubit `q`.
///
/// If the pad on `q` has an X component the server's `T` acted as `T^dagger`
/// on the data and an `S` on `q` repairs it. Otherwise the `S` is spent on
/// `decoy`, so the server always sees a `T` request followed by an `S` request.
pub fn apply_t_gadget<R: RngCore + ?Sized>(
    reg: &mut EncryptedRegister,
    q: usize,
    decoy: usize,
    driver: &mut ChildsDriver,
    rng: &mut R,
) -> Result<()> {
    if decoy >= reg.n_qubits() || decoy == q {
        return Err(Error::Protocol("the gadget needs a separate decoy qubit".into()));
    }
    driver.round_trip(reg, Gate::T(q), rng)?;
    // The refresh inside the T round trip happened before the server acted,
    // so the key now holds the pad that was on q when T was applied.
    let target = if reg.key.get(q).0 == 1 { q } else { decoy };
    driver.round_trip(reg, Gate::S(target), rng)
}

#[derive(Clone, Debug)]
pub struct ChildsRun {
    pub output: StateVector,
    pub transcript: Transcript,
    /// Every key value the client held, for transcript scans.
    pub secrets: Vec<SecretToken>,
}

/// Drops the ancillas (which stay unentangled from the data).
pub(super) fn data_part(plain: StateVector, width: usize) -> Result<StateVector> {
    let n = plain.n_qubits();
    let mut r = Register::new();
    r.add_joint(&(0..n).collect::<Vec<_>>(), &plain)?;
    r.extract(&(0..width).collect::<Vec<_>>())
}

/// Runs `circuit` on padded data, one server round trip per gate, with one
/// ancilla as the gadget decoy. Paulis are applied by the client itself.
pub fn run_encrypted_circuit<R: RngCore + ?Sized>(
    circuit: &Circuit,
    input: &StateVector,
    rng: &mut R,
) -> Result<ChildsRun> {
    let w = circuit.width();
    if input.n_qubits() != w {
        return Err(Error::DimensionMismatch(input.n_qubits(), w));
    }
    let ancilla = w;
    let plain = input.tensor(&StateVector::zero(1)?)?;
    let mut reg = EncryptedRegister::encrypt(&plain, PauliKey::random(w + 1, rng))?;
    let mut driver = ChildsDriver::new("childs", w + 1, 0);
    driver.remember(&reg.key.clone());
    for g in circuit.gates() {
        match *g {
            Gate::H(_) | Gate::S(_) | Gate::Cnot { .. } | Gate::Cz(..) => driver.round_trip(&mut reg, *g, rng)?,
            Gate::T(q) => apply_t_gadget(&mut reg, q, ancilla, &mut driver, rng)?,
            Gate::Rz(q, a) => {
                for _ in 0..a.k() {
                    apply_t_gadget(&mut reg, q, ancilla, &mut driver, rng)?;
                }
            }
            Gate::X(q) => reg.apply_local(q, Pauli::X)?,
            Gate::Y(q) => reg.apply_local(q, Pauli::Y)?,
            Gate::Z(q) => reg.apply_local(q, Pauli::Z)?,
        }
    }
    let output = data_part(reg.decrypt()?, w)?;
    let secrets = driver.secrets().to_vec();
    Ok(ChildsRun { output, transcript: driver.into_transcript()?, secrets })
}
