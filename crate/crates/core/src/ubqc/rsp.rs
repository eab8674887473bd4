use std::f64::consts::FRAC_1_SQRT_2;

use crate::angle::Angle8;
use crate::error::Result;
use crate::qcore::{Outcome, OutcomeSource, StateVector, C64};

/// The four maximally entangled two-qubit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];
}

/// Pair shared for remote preparation. Measuring one half at `theta` with
/// outcome `o` leaves the other half in `Z^o |+_theta>`.
pub const RSP_PAIR: BellState = BellState::PsiPlus;

pub fn bell_pair(kind: BellState) -> StateVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    let amp = match kind {
        BellState::PhiPlus => vec![h, z, z, h],
        BellState::PhiMinus => vec![h, z, z, -h],
        BellState::PsiPlus => vec![z, h, h, z],
        BellState::PsiMinus => vec![z, h, -h, z],
    };
    StateVector::from_amplitudes(amp).expect("normalised")
}

/// Measures qubit 0 of `pair` in the `|+-_theta>` basis and returns the
/// outcome with the post-measurement state of qubit 1.
pub fn rsp_measure<S: OutcomeSource + ?Sized>(
    pair: &StateVector,
    theta: Angle8,
    src: &mut S,
) -> Result<(Outcome, StateVector)> {
    let mut s = pair.clone();
    let o = s.measure_xy(0, theta, src)?;
    Ok((o, s.remove_qubit(0)?))
}
