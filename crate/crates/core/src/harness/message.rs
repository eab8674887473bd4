use serde::{Deserialize, Serialize};

use crate::angle::Angle8;
use crate::error::{Error, Result};

/// Parties on the simulated channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Client,
    Server,
    Server2,
}

impl Endpoint {
    fn code(self) -> u8 {
        self as u8
    }

    fn from_code(c: u8) -> Result<Self> {
        match c {
            0 => Ok(Endpoint::Client),
            1 => Ok(Endpoint::Server),
            2 => Ok(Endpoint::Server2),
            _ => Err(Error::Wire(format!("unknown endpoint {c}"))),
        }
    }

    pub(crate) fn write(self, out: &mut Vec<u8>) {
        out.push(self.code());
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        Self::from_code(r.u8()?)
    }
}

/// Gate names a client may request from a server.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateName {
    H,
    #[serde(rename = "CNOT")]
    Cnot,
    T,
    S,
    #[serde(rename = "CZ")]
    Cz,
}

impl GateName {
    const ALL: [GateName; 5] = [GateName::H, GateName::Cnot, GateName::T, GateName::S, GateName::Cz];

    pub fn arity(self) -> usize {
        match self {
            GateName::Cnot | GateName::Cz => 2,
            _ => 1,
        }
    }
}

/// Everything that can cross the channel. Quantum payloads appear only as
/// opaque registry references.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Message {
    GraphDecl { rows: u32, cols: u32 },
    QubitPayload { vertices: Vec<u32>, reference: u64 },
    AngleMsg { vertex: u32, delta: Angle8 },
    OutcomeMsg { vertex: u32, bit: u8 },
    RspRequest { pair: u32, angle: Angle8 },
    RspOutcome { pair: u32, bit: u8 },
    GateRequest { gate: GateName, refs: Vec<u64> },
    GateReturn { refs: Vec<u64> },
    OutputMeasured { vertex: u32, bit: u8 },
    Debug { bytes: Vec<u8> },
}

/// Cursor over a byte slice with little-endian readers.
pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub(crate) fn done(&self) -> bool {
        self.pos == self.buf.len()
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Wire(format!("truncated record at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn angle(&mut self) -> Result<Angle8> {
        Angle8::try_from(self.u8()?).map_err(|e| Error::Wire(e.to_string()))
    }

    fn bit(&mut self) -> Result<u8> {
        match self.u8()? {
            b @ 0..=1 => Ok(b),
            b => Err(Error::Wire(format!("bit field holds {b}"))),
        }
    }

    fn u64s(&mut self) -> Result<Vec<u64>> {
        let n = self.u32()? as usize;
        (0..n).map(|_| self.u64()).collect()
    }

    /// Reads one `u32` length-prefixed record.
    pub(crate) fn record(&mut self) -> Result<&'a [u8]> {
        let n = self.u32()? as usize;
        self.take(n)
    }
}

fn put_u64s(out: &mut Vec<u8>, xs: &[u64]) {
    out.extend_from_slice(&(xs.len() as u32).to_le_bytes());
    for x in xs {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

impl Message {
    fn tag(&self) -> u8 {
        match self {
            Message::GraphDecl { .. } => 0,
            Message::QubitPayload { .. } => 1,
            Message::AngleMsg { .. } => 2,
            Message::OutcomeMsg { .. } => 3,
            Message::RspRequest { .. } => 4,
            Message::RspOutcome { .. } => 5,
            Message::GateRequest { .. } => 6,
            Message::GateReturn { .. } => 7,
            Message::OutputMeasured { .. } => 8,
            Message::Debug { .. } => 9,
        }
    }

    /// Whether the message carries a quantum payload reference.
    pub fn is_quantum(&self) -> bool {
        matches!(self, Message::QubitPayload { .. } | Message::GateRequest { .. } | Message::GateReturn { .. })
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        out.push(self.tag());
        match self {
            Message::GraphDecl { rows, cols } => {
                out.extend_from_slice(&rows.to_le_bytes());
                out.extend_from_slice(&cols.to_le_bytes());
            }
            Message::QubitPayload { vertices, reference } => {
                out.extend_from_slice(&(vertices.len() as u32).to_le_bytes());
                for v in vertices {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                out.extend_from_slice(&reference.to_le_bytes());
            }
            Message::AngleMsg { vertex, delta: a } | Message::RspRequest { pair: vertex, angle: a } => {
                out.extend_from_slice(&vertex.to_le_bytes());
                out.push(a.k());
            }
            Message::OutcomeMsg { vertex, bit }
            | Message::RspOutcome { pair: vertex, bit }
            | Message::OutputMeasured { vertex, bit } => {
                out.extend_from_slice(&vertex.to_le_bytes());
                out.push(*bit);
            }
            Message::GateRequest { gate, refs } => {
                out.push(GateName::ALL.iter().position(|g| g == gate).expect("listed") as u8);
                put_u64s(out, refs);
            }
            Message::GateReturn { refs } => put_u64s(out, refs),
            Message::Debug { bytes } => {
                out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
                out.extend_from_slice(bytes);
            }
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.encode(&mut v);
        v
    }

    pub(crate) fn decode_from(r: &mut Reader<'_>) -> Result<Message> {
        Ok(match r.u8()? {
            0 => Message::GraphDecl { rows: r.u32()?, cols: r.u32()? },
            1 => {
                let n = r.u32()? as usize;
                let vertices = (0..n).map(|_| r.u32()).collect::<Result<_>>()?;
                Message::QubitPayload { vertices, reference: r.u64()? }
            }
            2 => Message::AngleMsg { vertex: r.u32()?, delta: r.angle()? },
            3 => Message::OutcomeMsg { vertex: r.u32()?, bit: r.bit()? },
            4 => Message::RspRequest { pair: r.u32()?, angle: r.angle()? },
            5 => Message::RspOutcome { pair: r.u32()?, bit: r.bit()? },
            6 => {
                let g = r.u8()? as usize;
                let gate = *GateName::ALL.get(g).ok_or_else(|| Error::Wire(format!("unknown gate code {g}")))?;
                Message::GateRequest { gate, refs: r.u64s()? }
            }
            7 => Message::GateReturn { refs: r.u64s()? },
            8 => Message::OutputMeasured { vertex: r.u32()?, bit: r.bit()? },
            9 => {
                let n = r.u32()? as usize;
                Message::Debug { bytes: r.take(n)?.to_vec() }
            }
            t => return Err(Error::Wire(format!("unknown message tag {t}"))),
        })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Message> {
        let mut r = Reader::new(bytes);
        let m = Self::decode_from(&mut r)?;
        if !r.done() {
            return Err(Error::Wire("trailing bytes after message".into()));
        }
        Ok(m)
    }
}
