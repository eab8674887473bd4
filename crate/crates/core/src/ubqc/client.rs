use rand::{Rng, RngCore};

use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::harness::SecretToken;
use crate::mbqc::{adapt_angle, MeasurementPattern, Register, Role};
use crate::qcore::{prepare_plus_theta, Pauli, StateVector};

/// The client's secret randomness for one session.
///
/// `theta` is zero on output vertices; `decoy` is the angle sent for a dummy;
/// `input_x` is the X part of the one-time pad on each logical input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClientKeys {
    pub r: Vec<u8>,
    pub theta: Vec<Angle8>,
    pub decoy: Vec<Angle8>,
    pub input_x: Vec<u8>,
}

impl ClientKeys {
    pub fn sample<R: RngCore + ?Sized>(p: &MeasurementPattern, rng: &mut R) -> Self {
        let n = p.n_vertices();
        let mut k = ClientKeys {
            r: vec![0; n],
            theta: vec![Angle8::ZERO; n],
            decoy: vec![Angle8::ZERO; n],
            input_x: vec![0; p.logical_rows()],
        };
        for v in 0..n {
            k.r[v] = rng.gen_range(0..2);
            match p.roles()[v] {
                Role::Compute | Role::Trap => k.theta[v] = Angle8::random(rng),
                Role::Dummy(_) => k.decoy[v] = Angle8::random(rng),
                Role::Output => {}
            }
        }
        for x in &mut k.input_x {
            *x = rng.gen_range(0..2);
        }
        k
    }

    fn check(&self, p: &MeasurementPattern) -> Result<()> {
        let n = p.n_vertices();
        if self.r.len() != n || self.theta.len() != n || self.decoy.len() != n || self.input_x.len() != p.logical_rows()
        {
            return Err(Error::Protocol("client keys do not fit the pattern".into()));
        }
        if self.r.iter().chain(&self.input_x).any(|&b| b > 1) {
            return Err(Error::Protocol("key bits must be 0 or 1".into()));
        }
        Ok(())
    }
}

/// How the client combines the adapted angle with its rotation key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DeltaSign {
    /// `delta = phi' - theta`.
    #[default]
    Honest,
    /// `delta = phi' + theta`; kept as a regression canary, never correct.
    MisSigned,
}

/// Client side of one session.
#[derive(Clone, Debug)]
pub struct ClientState {
    pattern: MeasurementPattern,
    keys: ClientKeys,
    frame_x: Vec<u8>,
    frame_z: Vec<u8>,
    m: Vec<Option<u8>>,
    b: Vec<Option<u8>>,
    cursor: usize,
    sign: DeltaSign,
}

/// A quantum payload addressed to the given vertices.
#[derive(Clone, Debug)]
pub struct Payload {
    pub vertices: Vec<usize>,
    pub state: StateVector,
}

impl Payload {
    pub fn into_register(self) -> Result<Register> {
        let mut r = Register::new();
        r.add_joint(&self.vertices, &self.state)?;
        Ok(r)
    }
}

impl ClientState {
    pub fn new(pattern: MeasurementPattern, keys: ClientKeys, sign: DeltaSign) -> Result<Self> {
        keys.check(&pattern)?;
        let n = pattern.n_vertices();
        if keys.theta.iter().zip(pattern.roles()).any(|(t, r)| *r == Role::Output && *t != Angle8::ZERO) {
            return Err(Error::Protocol("output vertices carry no rotation key".into()));
        }
        let mut frame_x = vec![0u8; n];
        let mut frame_z = vec![0u8; n];
        // X on an input before entangling becomes X there and Z on its neighbours.
        for (i, &a) in pattern.inputs().iter().enumerate() {
            let x = keys.input_x[i];
            frame_x[a] ^= x;
            for &w in pattern.graph().neighbors(a) {
                frame_z[w] ^= x;
            }
        }
        for (v, role) in pattern.roles().iter().enumerate() {
            if *role == Role::Output {
                frame_z[v] ^= keys.r[v];
            }
        }
        Ok(ClientState { pattern, keys, frame_x, frame_z, m: vec![None; n], b: vec![None; n], cursor: 0, sign })
    }

    pub fn pattern(&self) -> &MeasurementPattern {
        &self.pattern
    }

    pub fn keys(&self) -> &ClientKeys {
        &self.keys
    }

    pub fn decoded(&self) -> &[Option<u8>] {
        &self.m
    }

    /// Bits exactly as the server reported them.
    pub fn reported(&self) -> &[Option<u8>] {
        &self.b
    }

    pub fn finished(&self) -> bool {
        self.cursor == self.pattern.order().len()
    }

    /// Next vertex to be measured.
    pub fn next_vertex(&self) -> Option<usize> {
        self.pattern.order().get(self.cursor).copied()
    }

    /// Prepared single-qubit states, except the logical inputs which are
    /// returned jointly as one payload first.
    pub fn payloads(&self, input: Option<&StateVector>) -> Result<Vec<Payload>> {
        let p = &self.pattern;
        let inputs = p.inputs();
        let mut joint = match input {
            Some(s) if s.n_qubits() != inputs.len() => {
                return Err(Error::DimensionMismatch(s.n_qubits(), inputs.len()))
            }
            Some(s) => s.clone(),
            None => StateVector::plus(inputs.len())?,
        };
        for (i, &a) in inputs.iter().enumerate() {
            if self.keys.input_x[i] == 1 {
                joint.apply_pauli(i, Pauli::X)?;
            }
            if self.keys.r[a] == 1 {
                joint.apply_pauli(i, Pauli::Z)?;
            }
            joint.apply_rz(i, -self.keys.theta[a])?;
        }
        let mut out = vec![Payload { vertices: inputs.clone(), state: joint }];
        for v in 0..p.n_vertices() {
            if inputs.contains(&v) {
                continue;
            }
            let state = match p.roles()[v] {
                Role::Dummy(d) => StateVector::basis(1, d as usize)?,
                Role::Output => prepare_plus_theta(self.keys.r[v], Angle8::ZERO),
                Role::Compute | Role::Trap => prepare_plus_theta(self.keys.r[v], -self.keys.theta[v]),
            };
            out.push(Payload { vertices: vec![v], state });
        }
        Ok(out)
    }

    fn expect_next(&self, v: usize) -> Result<()> {
        match self.next_vertex() {
            Some(w) if w == v => Ok(()),
            w => Err(Error::Ordering(format!("client expected vertex {w:?}, got {v}"))),
        }
    }

    fn frame(&self, v: usize) -> Result<(u8, u8)> {
        let (sx, sz) = self.pattern.signals(v, &self.m)?;
        Ok((sx ^ self.frame_x[v], sz ^ self.frame_z[v]))
    }

    /// Adapted angle the client wants measured at `v`.
    pub fn adapted(&self, v: usize) -> Result<Angle8> {
        let (sx, sz) = self.frame(v)?;
        Ok(adapt_angle(self.pattern.angles()[v], sx, sz))
    }

    pub fn secret_tokens(&self) -> Vec<SecretToken> {
        let p = &self.pattern;
        let mut t = Vec::new();
        for v in 0..p.n_vertices() {
            let vertex = v as u32;
            t.push(SecretToken::R { vertex, bit: self.keys.r[v] });
            t.push(SecretToken::Theta { vertex, angle: self.keys.theta[v] });
            t.push(SecretToken::Phi { vertex, angle: p.angles()[v] });
            if let Role::Dummy(bit) = p.roles()[v] {
                t.push(SecretToken::DummyBit { vertex, bit });
            }
        }
        t
    }

    /// Corrects the returned output register and keeps the logical rows.
    pub fn output(&self, returned: Register) -> Result<StateVector> {
        if !self.finished() {
            return Err(Error::Protocol("output requested before all measurements".into()));
        }
        let outs = self.pattern.logical_outputs();
        let mut s = returned.extract(&outs)?;
        for (i, &v) in outs.iter().enumerate() {
            let (sx, sz) = self.frame(v)?;
            s.apply_xz(i, sx, sz)?;
        }
        Ok(s)
    }

    /// Decodes Z-basis readouts of the logical outputs (in row order).
    pub fn classical_output(&self, bits: &[(usize, u8)]) -> Result<Vec<u8>> {
        self.pattern
            .logical_outputs()
            .iter()
            .map(|&v| {
                let b = bits
                    .iter()
                    .find(|(w, _)| *w == v)
                    .map(|&(_, b)| b)
                    .ok_or_else(|| Error::Protocol(format!("missing readout for output {v}")))?;
                Ok(b ^ self.frame(v)?.0)
            })
            .collect()
    }
}

/// Samples keys and prepares the payloads for `pattern`.
pub fn client_init<R: RngCore + ?Sized>(
    pattern: &MeasurementPattern,
    input: Option<&StateVector>,
    rng: &mut R,
) -> Result<(ClientState, Vec<Payload>)> {
    let keys = ClientKeys::sample(pattern, rng);
    let cs = ClientState::new(pattern.clone(), keys, DeltaSign::Honest)?;
    let payloads = cs.payloads(input)?;
    Ok((cs, payloads))
}

/// Angle the client sends for `v`: `phi' - theta` for computation vertices,
/// `phi - theta` for traps and a fresh random angle for dummies.
pub fn client_delta(cs: &ClientState, v: usize) -> Result<Angle8> {
    cs.expect_next(v)?;
    let theta = cs.keys.theta[v];
    let combine = |a: Angle8| match cs.sign {
        DeltaSign::Honest => a - theta,
        DeltaSign::MisSigned => a + theta,
    };
    match cs.pattern.roles()[v] {
        Role::Compute => Ok(combine(cs.adapted(v)?)),
        Role::Trap => Ok(combine(cs.pattern.angles()[v])),
        Role::Dummy(_) => Ok(cs.keys.decoy[v]),
        Role::Output => Err(Error::Protocol(format!("output vertex {v} is never measured"))),
    }
}

/// Records the server's bit for `v` and returns `m = b xor r`.
pub fn client_decode(cs: &mut ClientState, v: usize, b: u8) -> Result<u8> {
    cs.expect_next(v)?;
    if b > 1 {
        return Err(Error::Protocol(format!("reported bit {b}")));
    }
    let m = b ^ cs.keys.r[v];
    cs.b[v] = Some(b);
    cs.m[v] = Some(m);
    cs.cursor += 1;
    Ok(m)
}
