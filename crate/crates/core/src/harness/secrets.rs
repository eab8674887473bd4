use super::transcript::Transcript;
use crate::angle::Angle8;

/// A client secret in the byte form a careless implementation would emit.
///
/// Each token is tagged so that a transcript scan can look for it without
/// false positives from ordinary message fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SecretToken {
    R { vertex: u32, bit: u8 },
    Theta { vertex: u32, angle: Angle8 },
    Phi { vertex: u32, angle: Angle8 },
    DummyBit { vertex: u32, bit: u8 },
    Prediction { vertex: u32, bit: u8 },
    Key { qubit: u32, x: u8, z: u8 },
}

const TAG: &[u8; 4] = b"SCRT";

impl SecretToken {
    pub fn to_bytes(&self) -> Vec<u8> {
        let (kind, id, value) = match *self {
            SecretToken::R { vertex, bit } => (0u8, vertex, bit),
            SecretToken::Theta { vertex, angle } => (1, vertex, angle.k()),
            SecretToken::Phi { vertex, angle } => (2, vertex, angle.k()),
            SecretToken::DummyBit { vertex, bit } => (3, vertex, bit),
            SecretToken::Prediction { vertex, bit } => (4, vertex, bit),
            SecretToken::Key { qubit, x, z } => (5, qubit, x | (z << 1)),
        };
        let mut v = TAG.to_vec();
        v.push(kind);
        v.extend_from_slice(&id.to_le_bytes());
        v.push(value);
        v
    }
}

/// `true` iff none of `secrets` appears anywhere in the serialized transcript.
pub fn transcript_scan(t: &Transcript, secrets: &[SecretToken]) -> bool {
    let bytes = t.to_bytes();
    secrets.iter().all(|s| {
        let needle = s.to_bytes();
        !bytes.windows(needle.len()).any(|w| w == needle.as_slice())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Endpoint, Message, SessionMeta};

    #[test]
    fn finds_leaked_token_only() {
        let secret = SecretToken::Theta { vertex: 3, angle: Angle8::PI_2 };
        let mut t = Transcript::new(SessionMeta::default());
        t.push(Endpoint::Client, Endpoint::Server, Message::AngleMsg { vertex: 3, delta: Angle8::PI_2 });
        assert!(transcript_scan(&t, &[secret]));
        t.push(Endpoint::Client, Endpoint::Server, Message::Debug { bytes: secret.to_bytes() });
        assert!(!transcript_scan(&t, &[secret]));
        assert!(transcript_scan(&t, &[SecretToken::R { vertex: 3, bit: 1 }]));
    }
}
