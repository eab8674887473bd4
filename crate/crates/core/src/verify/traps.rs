use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::mbqc::{BrickworkGraph, MeasurementPattern, Role};
use crate::ubqc::{ClientKeys, ClientState, UbqcOptions};

/// Padding rows tried, in order, when looking for room for the traps.
const MAX_PADDING_ROWS: usize = 2;
const PLACEMENT_ATTEMPTS: usize = 10_000;

/// A pattern enlarged with isolated trap qubits, together with the keys the
/// client will use and the outcomes it expects.
#[derive(Clone, Debug)]
pub struct TrappedPattern {
    /// The untrapped pattern.
    pub base: MeasurementPattern,
    /// The enlarged pattern that is actually run.
    pub pattern: MeasurementPattern,
    pub traps: Vec<usize>,
    pub dummies: Vec<usize>,
    /// Expected reported bit per trap, fixed before any run.
    pub predictions: BTreeMap<usize, u8>,
    pub keys: ClientKeys,
}

impl TrappedPattern {
    /// Session options that run with the keys the predictions were made for.
    pub fn options(&self) -> UbqcOptions {
        UbqcOptions { keys: Some(self.keys.clone()), ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrapFailure {
    pub vertex: usize,
    pub expected: u8,
    pub observed: u8,
}

/// Monte Carlo rejection rate with a 95% Wilson interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectionEstimate {
    pub trials: u64,
    pub rejections: u64,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl DetectionEstimate {
    pub fn new(rejections: u64, trials: u64) -> Self {
        let (lower, upper) = wilson_interval(rejections, trials, 1.96);
        let rate = if trials == 0 { 0.0 } else { rejections as f64 / trials as f64 };
        DetectionEstimate { trials, rejections, rate, lower, upper }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub accepted: bool,
    pub traps_checked: usize,
    pub failures: Vec<TrapFailure>,
    pub estimate: Option<DetectionEstimate>,
}

impl VerdictReport {
    pub(super) fn from_failures(traps_checked: usize, failures: Vec<TrapFailure>) -> Self {
        VerdictReport { accepted: failures.is_empty(), traps_checked, failures, estimate: None }
    }
}

fn independent(g: &BrickworkGraph, set: &[usize]) -> bool {
    set.iter().all(|&a| g.neighbors(a).iter().all(|w| !set.contains(w)))
}

/// Adds padding rows below `pattern` and hides `n_traps` traps in them.
///
/// Padding vertices touching the logical rows become dummies, which cuts the
/// padding off from the computation. Traps are drawn uniformly among the
/// non-adjacent sets of padding vertices that do not touch the logical rows
/// and are not in the last column; every trap neighbour becomes a dummy. The
/// rest of the padding is filler measured at angle zero.
pub fn insert_traps<R: RngCore + ?Sized>(
    pattern: &MeasurementPattern,
    n_traps: usize,
    rng: &mut R,
) -> Result<TrappedPattern> {
    let base_rows = pattern.graph().rows();
    let cols = pattern.graph().cols();
    for pad in 1..=MAX_PADDING_ROWS {
        let g = BrickworkGraph::new(base_rows + pad, cols)?;
        let logical = |v: usize| g.vertex(v).row < base_rows;
        let eligible: Vec<usize> = (base_rows * cols..g.n_vertices())
            .filter(|&v| g.vertex(v).col + 1 < cols && !g.neighbors(v).iter().any(|&w| logical(w)))
            .collect();
        if eligible.len() < n_traps {
            continue;
        }
        let mut traps = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let mut pick: Vec<usize> = sample(rng, eligible.len(), n_traps).iter().map(|i| eligible[i]).collect();
            if independent(&g, &pick) {
                pick.sort_unstable();
                traps = Some(pick);
                break;
            }
        }
        let Some(traps) = traps else { continue };
        return build(pattern, g, traps, rng);
    }
    Err(Error::Traps(format!(
        "no room for {n_traps} non-adjacent traps within {MAX_PADDING_ROWS} padding rows of a {base_rows}x{cols} pattern"
    )))
}

fn build<R: RngCore + ?Sized>(
    base: &MeasurementPattern,
    g: BrickworkGraph,
    traps: Vec<usize>,
    rng: &mut R,
) -> Result<TrappedPattern> {
    let n = g.n_vertices();
    let cols = g.cols();
    let base_n = base.n_vertices();
    let mut angles = vec![Angle8::ZERO; n];
    let mut roles: Vec<Option<Role>> = vec![None; n];
    angles[..base_n].copy_from_slice(base.angles());
    for (slot, &role) in roles.iter_mut().zip(base.roles()) {
        *slot = Some(role);
    }
    let dummy = |roles: &mut Vec<Option<Role>>, v: usize, rng: &mut R| {
        if roles[v].is_none() {
            roles[v] = Some(Role::Dummy(rng.gen_range(0..2)));
        }
    };
    for v in base_n..n {
        if g.neighbors(v).iter().any(|&w| w < base_n) {
            dummy(&mut roles, v, rng);
        }
    }
    for &t in &traps {
        roles[t] = Some(Role::Trap);
        for &w in g.neighbors(t) {
            dummy(&mut roles, w, rng);
        }
    }
    let roles: Vec<Role> = roles
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.unwrap_or(if g.vertex(v).col + 1 == cols { Role::Output } else { Role::Compute }))
        .collect();
    let dummies = (0..n).filter(|&v| matches!(roles[v], Role::Dummy(_))).collect();
    let pattern = MeasurementPattern::new(g, base.logical_rows(), angles, roles)?;
    let keys = ClientKeys::sample(&pattern, rng);
    let predictions = traps.iter().map(|&t| (t, keys.r[t] ^ pattern.static_z(t))).collect();
    Ok(TrappedPattern { base: base.clone(), pattern, traps, dummies, predictions, keys })
}

/// Compares each trap's reported bit with its prediction.
pub fn check_traps(tp: &TrappedPattern, client: &ClientState) -> Result<VerdictReport> {
    let mut failures = Vec::new();
    for (&t, &expected) in &tp.predictions {
        let observed = client.reported()[t].ok_or_else(|| Error::Protocol(format!("trap {t} was never measured")))?;
        if observed != expected {
            failures.push(TrapFailure { vertex: t, expected, observed });
        }
    }
    Ok(VerdictReport::from_failures(tp.predictions.len(), failures))
}
