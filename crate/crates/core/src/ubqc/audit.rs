use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::adversary::Adversary;
use super::client::{client_decode, client_delta, ClientKeys, ClientState, DeltaSign};
use super::rsp::{bell_pair, rsp_measure, RSP_PAIR};
use super::session::{run_ubqc_with, ExecMode, UbqcOptions};
use super::two_server::{run_two_server, TwoServerOptions};
use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::harness::{Endpoint, Message, Transcript};
use crate::mbqc::{MeasurementPattern, Register, Role};
use crate::qcore::{trace_norm, ForcedOutcomes, StateVector};

/// Largest pattern the exact audit will enumerate.
pub const EXACT_AUDIT_MAX_VERTICES: usize = 4;

/// Pooled delta-uniformity test level.
const DELTA_CONFIDENCE: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    /// Full key enumeration; small patterns only.
    Exact,
    /// Seeded protocol runs compared with two-sample tests.
    Sampled { trials: usize, seed: u64 },
}

/// Whose view is audited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ViewProtocol {
    #[default]
    Ubqc,
    /// The computing server of the two-server variant.
    TwoServer,
}

/// Outcome of a blindness audit.
///
/// In exact mode `distance` is the trace distance between the two server
/// views, maximised over the bits the server reports. In sampled mode it is the
/// largest total-variation distance between per-vertex empirical view
/// marginals, with `tv_noise` the value expected from sampling alone; the
/// verdict then rests on the z-scores.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub mode: String,
    pub distance: f64,
    pub trials: usize,
    pub tv_noise: Option<f64>,
    pub z_single: Option<f64>,
    pub z_pair: Option<f64>,
    pub delta_chi2: Option<f64>,
    pub delta_chi2_critical: Option<f64>,
    pub passed: bool,
}

pub type AdversaryFactory = dyn Fn() -> Box<dyn Adversary> + Sync;

/// Compares the server's views for two patterns of equal dimensions.
pub fn blindness_audit(a: &MeasurementPattern, b: &MeasurementPattern, mode: AuditMode) -> Result<AuditReport> {
    blindness_audit_in(a, b, mode, ViewProtocol::Ubqc, None)
}

/// As [`blindness_audit`], choosing the protocol and optionally a deviating
/// server (sampled mode; the exact audit already maximises over reports).
pub fn blindness_audit_in(
    a: &MeasurementPattern,
    b: &MeasurementPattern,
    mode: AuditMode,
    protocol: ViewProtocol,
    adversary: Option<&AdversaryFactory>,
) -> Result<AuditReport> {
    same_dimensions(a, b)?;
    match mode {
        AuditMode::Exact => {
            let d = exact_view_distance(&[(1.0, a.clone())], &[(1.0, b.clone())], protocol)?;
            Ok(AuditReport {
                mode: "exact".into(),
                distance: d,
                trials: 0,
                tv_noise: None,
                z_single: None,
                z_pair: None,
                delta_chi2: None,
                delta_chi2_critical: None,
                passed: d < 1e-10,
            })
        }
        AuditMode::Sampled { trials, seed } => sampled_audit(a, b, trials, seed, protocol, adversary),
    }
}

fn same_dimensions(a: &MeasurementPattern, b: &MeasurementPattern) -> Result<()> {
    let (ga, gb) = (a.graph(), b.graph());
    if (ga.rows(), ga.cols()) != (gb.rows(), gb.cols()) {
        return Err(Error::Audit(format!(
            "dimensions {}x{} and {}x{} differ, which the protocol openly leaks",
            ga.rows(),
            ga.cols(),
            gb.rows(),
            gb.cols()
        )));
    }
    Ok(())
}

/// Trace distance between the server views of two weighted mixtures of
/// patterns, for example a trapped pattern averaged over trap placements.
pub fn exact_view_distance(
    a: &[(f64, MeasurementPattern)],
    b: &[(f64, MeasurementPattern)],
    protocol: ViewProtocol,
) -> Result<f64> {
    ExactView::build(a, protocol)?.distance(&ExactView::build(b, protocol)?)
}

type Bits = Vec<(u32, u8)>;

/// The server's complete view, block-diagonal in the classical messages:
/// for each string of reported bits, the unnormalised payload state that
/// accompanies each sequence of received angles.
#[derive(Clone, Debug)]
pub struct ExactView {
    rows: usize,
    cols: usize,
    blocks: BTreeMap<Bits, BTreeMap<Bits, DMatrix<C64>>>,
}

/// One value of a vertex's secret, with its probability and (two-server
/// mode) the state the computing server ends up holding.
#[derive(Clone)]
struct KeyOption {
    weight: f64,
    r: u8,
    theta: Angle8,
    decoy: Angle8,
    held: Option<StateVector>,
}

fn key_options(role: Role, protocol: ViewProtocol) -> Result<Vec<KeyOption>> {
    let opt = |weight, r, theta, decoy| KeyOption { weight, r, theta, decoy, held: None };
    Ok(match (protocol, role) {
        (ViewProtocol::Ubqc, Role::Compute | Role::Trap) => {
            (0..2).flat_map(|r| Angle8::all().map(move |t| opt(1.0 / 16.0, r, t, Angle8::ZERO))).collect()
        }
        (ViewProtocol::Ubqc, Role::Dummy(_)) => Angle8::all().map(|d| opt(1.0 / 8.0, 0, Angle8::ZERO, d)).collect(),
        (ViewProtocol::Ubqc, Role::Output) => (0..2).map(|r| opt(0.5, r, Angle8::ZERO, Angle8::ZERO)).collect(),
        (ViewProtocol::TwoServer, Role::Compute | Role::Output) => {
            let alphas: Vec<Angle8> = if role == Role::Output { vec![Angle8::ZERO] } else { Angle8::all().collect() };
            let mut out = Vec::new();
            for &alpha in &alphas {
                for o in 0..2u8 {
                    let mut forced = ForcedOutcomes::new(vec![o]);
                    let (_, half) = rsp_measure(&bell_pair(RSP_PAIR), alpha, &mut forced)?;
                    out.push(KeyOption {
                        weight: forced.weight() / alphas.len() as f64,
                        r: o,
                        theta: -alpha,
                        decoy: Angle8::ZERO,
                        held: Some(half),
                    });
                }
            }
            out
        }
        (ViewProtocol::TwoServer, _) => {
            return Err(Error::Audit("two-server mode has no dummy or trap vertices".into()));
        }
    })
}

/// Every assignment of the dummy bits, each as its own pattern.
fn dummy_variants(p: &MeasurementPattern) -> Result<Vec<MeasurementPattern>> {
    let dummies: Vec<usize> = (0..p.n_vertices()).filter(|&v| matches!(p.roles()[v], Role::Dummy(_))).collect();
    let mut out = Vec::new();
    for mask in 0..1usize << dummies.len() {
        let mut roles = p.roles().to_vec();
        for (i, &v) in dummies.iter().enumerate() {
            roles[v] = Role::Dummy(((mask >> i) & 1) as u8);
        }
        let q = MeasurementPattern::new(p.graph().clone(), p.logical_rows(), p.angles().to_vec(), roles)?;
        out.push(q.with_order(p.order().to_vec())?);
    }
    Ok(out)
}

fn held_state(cs: &ClientState, options: &[&KeyOption]) -> Result<StateVector> {
    let n = options.len();
    if options.iter().all(|o| o.held.is_some()) {
        let mut s = options[0].held.clone().expect("checked");
        for o in &options[1..] {
            s = s.tensor(o.held.as_ref().expect("checked"))?;
        }
        return Ok(s);
    }
    let mut reg = Register::new();
    for pl in cs.payloads(None)? {
        reg.absorb(pl.into_register()?)?;
    }
    reg.extract(&(0..n).collect::<Vec<_>>())
}

impl ExactView {
    pub fn build(mixture: &[(f64, MeasurementPattern)], protocol: ViewProtocol) -> Result<Self> {
        let first = &mixture.first().ok_or(Error::Empty("pattern mixture"))?.1;
        let (rows, cols) = (first.graph().rows(), first.graph().cols());
        let total: f64 = mixture.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-10 || mixture.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::BadWeights(total));
        }
        let mut view = ExactView { rows, cols, blocks: BTreeMap::new() };
        for (w, p) in mixture {
            same_dimensions(first, p)?;
            if p.n_vertices() > EXACT_AUDIT_MAX_VERTICES {
                return Err(Error::Audit(format!(
                    "exact audit enumerates at most {EXACT_AUDIT_MAX_VERTICES} vertices, pattern has {}",
                    p.n_vertices()
                )));
            }
            let variants = dummy_variants(p)?;
            let vw = w / variants.len() as f64;
            for q in &variants {
                view.add_pattern(q, vw, protocol)?;
            }
        }
        Ok(view)
    }

    fn add_pattern(&mut self, p: &MeasurementPattern, weight: f64, protocol: ViewProtocol) -> Result<()> {
        let n = p.n_vertices();
        let options: Vec<Vec<KeyOption>> =
            p.roles().iter().map(|&r| key_options(r, protocol)).collect::<Result<_>>()?;
        let order = p.order().to_vec();
        let mut digits = vec![0usize; n];
        loop {
            let chosen: Vec<&KeyOption> = (0..n).map(|v| &options[v][digits[v]]).collect();
            let w = weight * chosen.iter().map(|o| o.weight).product::<f64>();
            let keys = ClientKeys {
                r: chosen.iter().map(|o| o.r).collect(),
                theta: chosen.iter().map(|o| o.theta).collect(),
                decoy: chosen.iter().map(|o| o.decoy).collect(),
                input_x: vec![0; p.logical_rows()],
            };
            let cs = ClientState::new(p.clone(), keys, DeltaSign::Honest)?;
            let psi = held_state(&cs, &chosen)?;
            let amp = psi.amplitudes();
            let rho = DMatrix::from_fn(amp.len(), amp.len(), |i, j| amp[i] * amp[j].conj() * w);
            for mask in 0..1usize << order.len() {
                let mut c = cs.clone();
                let mut bits = Vec::with_capacity(order.len());
                let mut deltas = Vec::with_capacity(order.len());
                for (i, &v) in order.iter().enumerate() {
                    let b = ((mask >> i) & 1) as u8;
                    deltas.push((v as u32, client_delta(&c, v)?.k()));
                    client_decode(&mut c, v, b)?;
                    bits.push((v as u32, b));
                }
                let block = self.blocks.entry(bits).or_default();
                match block.get_mut(&deltas) {
                    Some(m) => *m += &rho,
                    None => {
                        block.insert(deltas, rho.clone());
                    }
                }
            }
            // Mixed-radix increment over the per-vertex key options.
            let mut i = 0;
            while i < n {
                digits[i] += 1;
                if digits[i] < options[i].len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == n {
                return Ok(());
            }
        }
    }

    /// Largest trace distance over the server's report strings.
    pub fn distance(&self, other: &ExactView) -> Result<f64> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Audit("views of different dimensions".into()));
        }
        let empty = BTreeMap::new();
        let mut worst = 0.0f64;
        let keys: std::collections::BTreeSet<&Bits> = self.blocks.keys().chain(other.blocks.keys()).collect();
        for bits in keys {
            let a = self.blocks.get(bits).unwrap_or(&empty);
            let b = other.blocks.get(bits).unwrap_or(&empty);
            let deltas: std::collections::BTreeSet<&Bits> = a.keys().chain(b.keys()).collect();
            let mut d = 0.0;
            for delta in deltas {
                d += match (a.get(delta), b.get(delta)) {
                    (Some(x), Some(y)) => block_norm(&(x - y)),
                    (Some(x), None) | (None, Some(x)) => block_norm(x),
                    (None, None) => 0.0,
                };
            }
            worst = worst.max(0.5 * d);
        }
        Ok(worst)
    }
}

/// Trace norm of a Hermitian block. When the block is numerically zero the
/// bound `sqrt(dim) * ||X||_F` is returned instead of diagonalising.
fn block_norm(m: &DMatrix<C64>) -> f64 {
    let bound = (m.nrows() as f64).sqrt() * m.norm();
    if bound < 1e-13 {
        bound
    } else {
        trace_norm(m)
    }
}

/// Bins per vertex: nine angle slots (the ninth for "never measured") times
/// two tomography bases times two outcomes.
const SINGLE_BINS: usize = 9 * 4;
const PAIR_BINS: usize = 9 * 9;
const CHUNK: usize = 2048;

#[derive(Clone, Debug)]
struct Counts {
    single: Vec<Vec<u64>>,
    pair: Vec<Vec<u64>>,
    delta: [u64; 8],
}

impl Counts {
    fn new(n: usize) -> Self {
        Counts { single: vec![vec![0; SINGLE_BINS]; n], pair: vec![vec![0; PAIR_BINS]; n / 2], delta: [0; 8] }
    }

    fn merge(&mut self, o: &Counts) {
        for (a, b) in self.single.iter_mut().zip(&o.single) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        for (a, b) in self.pair.iter_mut().zip(&o.pair) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self.delta.iter_mut().zip(&o.delta).for_each(|(x, y)| *x += y);
    }
}

fn angles_seen(t: &Transcript, n: usize) -> Vec<Option<u8>> {
    let mut seen = vec![None; n];
    for e in t.entries() {
        if let (Endpoint::Client, Message::AngleMsg { vertex, delta }) = (e.from, &e.message) {
            seen[*vertex as usize] = Some(delta.k());
        }
    }
    seen
}

/// Marginal state of every qubit the server received, by vertex.
fn received_qubits(cs: &ClientState) -> Result<Vec<(usize, StateVector, usize)>> {
    let mut out = Vec::new();
    for pl in cs.payloads(None)? {
        for (i, &v) in pl.vertices.iter().enumerate() {
            out.push((v, pl.state.clone(), i));
        }
    }
    Ok(out)
}

fn one_trial(
    p: &MeasurementPattern,
    protocol: ViewProtocol,
    adversary: Option<&AdversaryFactory>,
    rng: &mut ChaCha8Rng,
    counts: &mut Counts,
) -> Result<()> {
    let n = p.n_vertices();
    let (transcript, client) = match protocol {
        ViewProtocol::Ubqc => {
            let opts = UbqcOptions { mode: ExecMode::Streamed, ..Default::default() };
            let mut adv = adversary.map(|f| f());
            let mut nature = ChaCha8Rng::from_rng(&mut *rng).map_err(|e| Error::Audit(e.to_string()))?;
            let run = run_ubqc_with(p, &opts, adv.as_deref_mut(), rng, &mut nature)?;
            (run.transcript, run.client)
        }
        ViewProtocol::TwoServer => {
            let mut nature = ChaCha8Rng::from_rng(&mut *rng).map_err(|e| Error::Audit(e.to_string()))?;
            let run = run_two_server(p, &TwoServerOptions::default(), rng, &mut nature)?;
            (run.transcript, run.client)
        }
    };
    let seen = angles_seen(&transcript, n);
    for &d in seen.iter().flatten() {
        counts.delta[d as usize] += 1;
    }
    let slot = |v: usize| seen[v].map_or(8, |d| d as usize);
    for (v, state, q) in received_qubits(&client)? {
        // Random-basis tomography: X or Y, outcome drawn by the Born rule.
        let basis = rng.gen_range(0..2usize);
        let p0 = state.prob_xy(q, Angle8::new(2 * basis as i64))?;
        let o = usize::from(rng.gen::<f64>() >= p0);
        counts.single[v][slot(v) * 4 + basis * 2 + o] += 1;
    }
    for (i, c) in counts.pair.iter_mut().enumerate() {
        c[slot(2 * i) * 9 + slot(2 * i + 1)] += 1;
    }
    Ok(())
}

fn sample_counts(
    p: &MeasurementPattern,
    trials: usize,
    seed: u64,
    stream: u64,
    protocol: ViewProtocol,
    adversary: Option<&AdversaryFactory>,
) -> Result<Counts> {
    use rayon::prelude::*;
    let chunks: Vec<usize> = (0..trials.div_ceil(CHUNK)).collect();
    let parts: Vec<Counts> = chunks
        .par_iter()
        .map(|&c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((stream << 32) | c as u64);
            let mut counts = Counts::new(p.n_vertices());
            let len = CHUNK.min(trials - c * CHUNK);
            for _ in 0..len {
                one_trial(p, protocol, adversary, &mut rng, &mut counts)?;
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    let mut total = Counts::new(p.n_vertices());
    for part in &parts {
        total.merge(part);
    }
    Ok(total)
}

/// Two-sample chi-square over matching histograms; returns (statistic, df).
fn two_sample_chi2(a: &[u64], b: &[u64]) -> (f64, usize) {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return (0.0, 0);
    }
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let mut x2 = 0.0;
    let mut bins = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        if x + y > 0 {
            let d = x as f64 * ka - y as f64 * kb;
            x2 += d * d / (x + y) as f64;
            bins += 1;
        }
    }
    (x2, bins.saturating_sub(1))
}

fn tv(a: &[u64], b: &[u64]) -> (f64, f64) {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut d = 0.0;
    let mut noise = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        d += (x as f64 / na - y as f64 / nb).abs();
        let p = (x + y) as f64 / (na + nb);
        // E|X| for a centred normal is sqrt(2/pi) sigma.
        noise += (2.0 / std::f64::consts::PI).sqrt() * (p * (1.0 - p) * (1.0 / na + 1.0 / nb)).sqrt();
    }
    (0.5 * d, 0.5 * noise)
}

/// Sum of independent chi-square terms as a standard score.
fn combined_z(terms: impl Iterator<Item = (f64, usize)>) -> Option<f64> {
    let (x2, df) = terms.fold((0.0, 0usize), |(s, d), (x, k)| (s + x, d + k));
    (df > 0).then(|| (x2 - df as f64) / (2.0 * df as f64).sqrt())
}

fn sampled_audit(
    a: &MeasurementPattern,
    b: &MeasurementPattern,
    trials: usize,
    seed: u64,
    protocol: ViewProtocol,
    adversary: Option<&AdversaryFactory>,
) -> Result<AuditReport> {
    if trials < 2 {
        return Err(Error::Audit("sampled audit needs at least two trials".into()));
    }
    let ca = sample_counts(a, trials, seed, 1, protocol, adversary)?;
    let cb = sample_counts(b, trials, seed, 2, protocol, adversary)?;
    let z_single = combined_z(ca.single.iter().zip(&cb.single).map(|(x, y)| two_sample_chi2(x, y)));
    let z_pair = combined_z(ca.pair.iter().zip(&cb.pair).map(|(x, y)| two_sample_chi2(x, y)));
    let (mut distance, mut tv_noise) = (0.0f64, 0.0f64);
    for (x, y) in ca.single.iter().zip(&cb.single) {
        let (d, n) = tv(x, y);
        if d > distance {
            distance = d;
            tv_noise = n;
        }
    }
    let pooled: Vec<u64> = ca.delta.iter().zip(&cb.delta).map(|(x, y)| x + y).collect();
    let total = pooled.iter().sum::<u64>() as f64;
    let (delta_chi2, critical) = if total > 0.0 {
        let e = total / 8.0;
        let x2 = pooled.iter().map(|&c| (c as f64 - e).powi(2) / e).sum::<f64>();
        let crit = ChiSquared::new(7.0).map_err(|e| Error::Audit(e.to_string()))?.inverse_cdf(DELTA_CONFIDENCE);
        (Some(x2), Some(crit))
    } else {
        (None, None)
    };
    let within = |z: Option<f64>| z.is_none_or(|z| z.abs() <= 3.0);
    let uniform = match (delta_chi2, critical) {
        (Some(x), Some(c)) => x <= c,
        _ => true,
    };
    Ok(AuditReport {
        mode: "sampled".into(),
        distance,
        trials,
        tv_noise: Some(tv_noise),
        z_single,
        z_pair,
        delta_chi2,
        delta_chi2_critical: critical,
        passed: within(z_single) && within(z_pair) && uniform,
    })
}
