use serde::{Deserialize, Serialize};

use super::message::{Endpoint, Message, Reader};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionMeta {
    pub protocol: String,
    pub rows: u32,
    pub cols: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub seq: u64,
    pub clock: u64,
    pub from: Endpoint,
    pub to: Endpoint,
    pub message: Message,
}

/// Ordered record of every message in one session.
///
/// Time is a logical clock that ticks once per message.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transcript {
    pub meta: SessionMeta,
    entries: Vec<Entry>,
}

const MAGIC: &[u8; 4] = b"BLTR";

impl Transcript {
    pub fn new(meta: SessionMeta) -> Self {
        Transcript { meta, entries: Vec::new() }
    }

    pub fn push(&mut self, from: Endpoint, to: Endpoint, message: Message) {
        let seq = self.entries.len() as u64;
        self.entries.push(Entry { seq, clock: seq + 1, from, to, message });
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Messages sent by `from` (to anyone).
    pub fn sent_by(&self, from: Endpoint) -> impl Iterator<Item = &Message> {
        self.entries.iter().filter(move |e| e.from == from).map(|e| &e.message)
    }

    /// Binary form: magic, a metadata record, then one length-prefixed record per entry.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        let mut meta = Vec::new();
        meta.extend_from_slice(&(self.meta.protocol.len() as u32).to_le_bytes());
        meta.extend_from_slice(self.meta.protocol.as_bytes());
        meta.extend_from_slice(&self.meta.rows.to_le_bytes());
        meta.extend_from_slice(&self.meta.cols.to_le_bytes());
        meta.extend_from_slice(&self.meta.seed.to_le_bytes());
        push_record(&mut out, &meta);
        for e in &self.entries {
            let mut rec = Vec::new();
            rec.extend_from_slice(&e.seq.to_le_bytes());
            rec.extend_from_slice(&e.clock.to_le_bytes());
            e.from.write(&mut rec);
            e.to.write(&mut rec);
            e.message.encode(&mut rec);
            push_record(&mut out, &rec);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(4)? != MAGIC {
            return Err(Error::Wire("not a transcript".into()));
        }
        let mut m = Reader::new(r.record()?);
        let n = m.u32()? as usize;
        let protocol = String::from_utf8(m.take(n)?.to_vec()).map_err(|e| Error::Wire(e.to_string()))?;
        let meta = SessionMeta { protocol, rows: m.u32()?, cols: m.u32()?, seed: m.u64()? };
        let mut t = Transcript::new(meta);
        while !r.done() {
            let mut e = Reader::new(r.record()?);
            let seq = e.u64()?;
            let clock = e.u64()?;
            let from = Endpoint::read(&mut e)?;
            let to = Endpoint::read(&mut e)?;
            let message = Message::decode_from(&mut e)?;
            if !e.done() {
                return Err(Error::Wire(format!("trailing bytes in entry {seq}")));
            }
            if seq != t.entries.len() as u64 {
                return Err(Error::Wire(format!("sequence gap at {seq}")));
            }
            t.entries.push(Entry { seq, clock, from, to, message });
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Wire(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Wire(e.to_string()))
    }
}

fn push_record(out: &mut Vec<u8>, rec: &[u8]) {
    out.extend_from_slice(&(rec.len() as u32).to_le_bytes());
    out.extend_from_slice(rec);
}
