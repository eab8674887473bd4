use rand::RngCore;

use crate::error::{Error, Result};

/// A single measurement result. `Zero` is the `+1` eigenspace of the measured
/// observable (for XY-plane measurements, projection onto `|+_delta>`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Zero,
    One,
}

impl Outcome {
    pub fn from_bit(bit: u8) -> Outcome {
        if bit & 1 == 0 {
            Outcome::Zero
        } else {
            Outcome::One
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
        }
    }

    pub fn flipped(self) -> Outcome {
        Outcome::from_bit(self.bit() ^ 1)
    }
}

/// Decides measurement outcomes.
///
/// Any RNG samples by the Born rule; [`ForcedOutcomes`] replays a fixed branch
/// and accumulates its probability.
pub trait OutcomeSource {
    fn choose(&mut self, p_zero: f64) -> Result<Outcome>;
}

impl<R: RngCore> OutcomeSource for R {
    fn choose(&mut self, p_zero: f64) -> Result<Outcome> {
        let u = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        Ok(if u < p_zero { Outcome::Zero } else { Outcome::One })
    }
}

/// Replays a predetermined list of outcome bits.
#[derive(Clone, Debug)]
pub struct ForcedOutcomes {
    bits: Vec<u8>,
    pos: usize,
    weight: f64,
}

impl ForcedOutcomes {
    pub fn new(bits: Vec<u8>) -> Self {
        ForcedOutcomes { bits, pos: 0, weight: 1.0 }
    }

    /// Probability of the branch replayed so far.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }

    pub fn exhausted(&self) -> bool {
        self.pos == self.bits.len()
    }
}

impl OutcomeSource for ForcedOutcomes {
    fn choose(&mut self, p_zero: f64) -> Result<Outcome> {
        let bit = *self.bits.get(self.pos).ok_or_else(|| Error::Protocol("forced outcome list exhausted".into()))?;
        self.pos += 1;
        let o = Outcome::from_bit(bit);
        self.weight *= if o == Outcome::Zero { p_zero } else { 1.0 - p_zero };
        Ok(o)
    }
}

/// Every bit string of length `k`, in counting order.
pub fn all_branches(k: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1u64 << k).map(move |mask| (0..k).map(|i| ((mask >> i) & 1) as u8).collect())
}
