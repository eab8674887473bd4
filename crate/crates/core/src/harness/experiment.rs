use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{AdversarySpec, AuditKind, ExecSpec, ExperimentConfig, Protocol};
use super::formats::{load_circuit, load_pattern};
use super::secrets::{transcript_scan, SecretToken};
use super::transcript::Transcript;
use crate::childs::{run_encrypted_circuit, run_hidden_circuit};
use crate::error::Result;
use crate::mbqc::{compile_circuit, run_pattern, Circuit, MeasurementPattern};
use crate::qcore::StateVector;
use crate::ubqc::{
    blindness_audit_in, run_client_measuring, run_two_server, run_ubqc_with, Adversary, AuditMode, AuditReport,
    ExecMode, FlipReports, PauliAt, RandomPauli, ResourceServer, TwoServerOptions, UbqcOptions, ViewProtocol,
};
use crate::verify::{check_traps, insert_traps, DetectionEstimate, TrapFailure, VerdictReport};

const CHUNK: usize = 256;

/// Everything one experiment produced. Serialises deterministically, so the
/// same config and seed give byte-identical report files.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub protocol: Protocol,
    pub seed: u64,
    pub trials: usize,
    /// Number of logical output wires.
    pub width: usize,
    /// Z-basis readouts of the outputs; bit `i` of the index is wire `i`.
    pub histogram: Vec<u64>,
    /// Readout distribution of the honest computation.
    pub expected: Vec<f64>,
    pub tv_distance: f64,
    /// No client secret appeared in any transcript.
    pub secrets_clean: bool,
    pub verdict: Option<VerdictReport>,
    pub audit: Option<AuditReport>,
    pub transcript: Option<Transcript>,
}

impl ExperimentReport {
    /// False if traps rejected a session or the audit failed.
    pub fn accepted(&self) -> bool {
        self.verdict.as_ref().is_none_or(|v| v.accepted) && self.audit.as_ref().is_none_or(|a| a.passed)
    }
}

enum Source {
    Pattern(MeasurementPattern),
    Circuit(Circuit, MeasurementPattern),
    CircuitOnly(Circuit),
}

impl Source {
    fn pattern(&self) -> Option<&MeasurementPattern> {
        match self {
            Source::Pattern(p) | Source::Circuit(_, p) => Some(p),
            Source::CircuitOnly(_) => None,
        }
    }

    fn width(&self) -> usize {
        match self {
            Source::Pattern(p) | Source::Circuit(_, p) => p.logical_rows(),
            Source::CircuitOnly(c) => c.width(),
        }
    }

    fn expected(&self) -> Result<Vec<f64>> {
        let out = match self {
            Source::Circuit(c, _) | Source::CircuitOnly(c) => c.simulate(&StateVector::plus(c.width())?)?,
            // The corrected output does not depend on the branch taken.
            Source::Pattern(p) => run_pattern(p, None, &mut ChaCha8Rng::seed_from_u64(0))?.output,
        };
        Ok(out.amplitudes().iter().map(|a| a.norm_sqr()).collect())
    }
}

fn load_source(cfg: &ExperimentConfig, base: &Path) -> Result<Source> {
    if let Some(p) = &cfg.pattern {
        return Ok(Source::Pattern(load_pattern(&ExperimentConfig::resolve(base, p))?));
    }
    let path = cfg.circuit.as_ref().expect("validated: pattern or circuit");
    let c = load_circuit(&ExperimentConfig::resolve(base, path))?;
    if matches!(cfg.protocol, Protocol::Childs | Protocol::ChildsHidden) {
        Ok(Source::CircuitOnly(c))
    } else {
        let p = compile_circuit(&c)?;
        Ok(Source::Circuit(c, p))
    }
}

#[derive(Default)]
struct Tally {
    histogram: Vec<u64>,
    clean: bool,
    traps_checked: usize,
    failures: Vec<TrapFailure>,
    rejected: u64,
    transcript: Option<Transcript>,
}

struct Trial {
    readout: usize,
    transcript: Transcript,
    secrets: Vec<SecretToken>,
    verdict: Option<VerdictReport>,
}

fn readout<R: RngCore>(out: &mut StateVector, rng: &mut R) -> Result<usize> {
    let mut idx = 0;
    for q in 0..out.n_qubits() {
        idx |= (out.measure_z(q, rng)?.bit() as usize) << q;
    }
    Ok(idx)
}

fn adversary(spec: AdversarySpec, rng: &mut ChaCha8Rng) -> Option<Box<dyn Adversary>> {
    match spec {
        AdversarySpec::FlipReports => Some(Box::new(FlipReports)),
        AdversarySpec::RandomPauli => Some(Box::new(RandomPauli::new(ChaCha8Rng::seed_from_u64(rng.next_u64())))),
        AdversarySpec::PauliAt { vertex, pauli } => Some(Box::new(PauliAt { vertex, pauli })),
        AdversarySpec::None | AdversarySpec::ProductResource => None,
    }
}

fn one_trial(cfg: &ExperimentConfig, src: &Source, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let mut nature = ChaCha8Rng::seed_from_u64(rng.next_u64());
    match (cfg.protocol, src) {
        (Protocol::Ubqc, _) => {
            let base = src.pattern().expect("ubqc runs a pattern");
            let trapped = if cfg.traps > 0 { Some(insert_traps(base, cfg.traps, rng)?) } else { None };
            let (pattern, mut opts) = match &trapped {
                Some(tp) => (&tp.pattern, tp.options()),
                None => (base, UbqcOptions::default()),
            };
            opts.mode = if cfg.exec == ExecSpec::Streamed { ExecMode::Streamed } else { ExecMode::Monolithic };
            opts.seed = cfg.seed;
            let mut adv = adversary(cfg.adversary, rng);
            let mut run = run_ubqc_with(pattern, &opts, adv.as_deref_mut(), rng, &mut nature)?;
            let mut secrets = run.client.secret_tokens();
            let verdict = match &trapped {
                Some(tp) => {
                    secrets.extend(
                        tp.predictions.iter().map(|(&t, &bit)| SecretToken::Prediction { vertex: t as u32, bit }),
                    );
                    Some(check_traps(tp, &run.client)?)
                }
                None => None,
            };
            Ok(Trial { readout: readout(&mut run.output, &mut nature)?, transcript: run.transcript, secrets, verdict })
        }
        (Protocol::ClientMeasuring, _) => {
            let p = src.pattern().expect("measuring client runs a pattern");
            let server = if cfg.adversary == AdversarySpec::ProductResource {
                ResourceServer::ProductCheater
            } else {
                ResourceServer::Honest
            };
            let mut run = run_client_measuring(p, server, &mut nature)?;
            let secrets =
                (0..p.n_vertices()).map(|v| SecretToken::Phi { vertex: v as u32, angle: p.angles()[v] }).collect();
            Ok(Trial {
                readout: readout(&mut run.output, &mut nature)?,
                transcript: run.transcript,
                secrets,
                verdict: None,
            })
        }
        (Protocol::TwoServer, _) => {
            let p = src.pattern().expect("two-server runs a pattern");
            let opts = TwoServerOptions { seed: cfg.seed, ..Default::default() };
            let run = run_two_server(p, &opts, rng, &mut nature)?;
            let readout = run.output_bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as usize) << i);
            Ok(Trial { readout, transcript: run.transcript, secrets: run.client.secret_tokens(), verdict: None })
        }
        (Protocol::Childs | Protocol::ChildsHidden, Source::CircuitOnly(c)) => {
            let input = StateVector::plus(c.width())?;
            let mut run = if cfg.protocol == Protocol::Childs {
                run_encrypted_circuit(c, &input, rng)?
            } else {
                run_hidden_circuit(c, &input, cfg.min_cycles, rng)?
            };
            Ok(Trial {
                readout: readout(&mut run.output, &mut nature)?,
                transcript: run.transcript,
                secrets: run.secrets,
                verdict: None,
            })
        }
        (Protocol::Childs | Protocol::ChildsHidden, _) => unreachable!("validated: childs runs circuits"),
    }
}

/// Runs `cfg.trials` sessions. Trials run in parallel chunks with one seeded
/// stream each; chunk results are merged in order.
pub fn run_experiment(cfg: &ExperimentConfig, base: &Path) -> Result<ExperimentReport> {
    cfg.validate()?;
    let src = load_source(cfg, base)?;
    let width = src.width();
    let expected = src.expected()?;
    let chunks: Vec<usize> = (0..cfg.trials.div_ceil(CHUNK)).collect();
    let parts: Vec<Tally> = chunks
        .par_iter()
        .map(|&c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let mut t = Tally { histogram: vec![0; 1 << width], clean: true, ..Default::default() };
            for i in 0..CHUNK.min(cfg.trials - c * CHUNK) {
                let trial = one_trial(cfg, &src, &mut rng)?;
                t.histogram[trial.readout] += 1;
                t.clean &= transcript_scan(&trial.transcript, &trial.secrets);
                if let Some(v) = trial.verdict {
                    t.traps_checked += v.traps_checked;
                    t.rejected += u64::from(!v.accepted);
                    t.failures.extend(v.failures);
                }
                if c == 0 && i == 0 && cfg.transcript {
                    t.transcript = Some(trial.transcript);
                }
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let mut total = Tally { histogram: vec![0; 1 << width], clean: true, ..Default::default() };
    for part in parts {
        for (a, b) in total.histogram.iter_mut().zip(&part.histogram) {
            *a += b;
        }
        total.clean &= part.clean;
        total.traps_checked += part.traps_checked;
        total.rejected += part.rejected;
        total.failures.extend(part.failures);
        total.transcript = total.transcript.or(part.transcript);
    }
    let n = cfg.trials as f64;
    let tv_distance = total.histogram.iter().zip(&expected).map(|(&h, p)| (h as f64 / n - p).abs()).sum::<f64>() / 2.0;
    let verdict = (cfg.traps > 0).then(|| {
        let mut v = VerdictReport {
            accepted: total.failures.is_empty(),
            traps_checked: total.traps_checked,
            failures: total.failures,
            estimate: None,
        };
        v.estimate = Some(DetectionEstimate::new(total.rejected, cfg.trials as u64));
        v
    });
    let audit = match (&cfg.audit, src.pattern()) {
        (Some(a), Some(p)) => {
            let other = load_pattern(&ExperimentConfig::resolve(base, &a.against))?;
            let mode = match a.mode {
                AuditKind::Exact => AuditMode::Exact,
                AuditKind::Sampled => AuditMode::Sampled { trials: a.trials, seed: cfg.seed },
            };
            let view = if cfg.protocol == Protocol::TwoServer { ViewProtocol::TwoServer } else { ViewProtocol::Ubqc };
            Some(blindness_audit_in(p, &other, mode, view, None)?)
        }
        _ => None,
    };
    Ok(ExperimentReport {
        protocol: cfg.protocol,
        seed: cfg.seed,
        trials: cfg.trials,
        width,
        histogram: total.histogram,
        expected,
        tv_distance,
        secrets_clean: total.clean,
        verdict,
        audit,
        transcript: total.transcript,
    })
}
