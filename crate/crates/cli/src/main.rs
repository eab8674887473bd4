//! `blindlab`: compile circuits, run protocol experiments, audit blindness,
//! run trap and stabilizer verification and check the Pauli key tables.
//!
//! Exit codes: 0 success or accept, 1 verification reject, 2 usage or
//! configuration error, 3 internal invariant violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blindlab_core::childs::{conjugation_table, key_update_clifford, qotp_decrypt, qotp_encrypt, PauliKey};
use blindlab_core::harness::{load_circuit, load_pattern, run_experiment, to_json, ExperimentConfig, PatternFile};
use blindlab_core::mbqc::compile_circuit;
use blindlab_core::qcore::Gate;
use blindlab_core::ubqc::{
    blindness_audit_in, Adversary, AuditMode, FlipReports, RandomPauli, ResourceServer, ViewProtocol,
};
use blindlab_core::verify::{detection_rate, insert_traps, random_state, stabilizer_verify};
use blindlab_core::{Circuit, Error};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "blindlab", version, about = "Blind and delegated quantum computation laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Seed for every random choice (default 0; `run` defaults to the config's seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of trials or sessions; each verb has its own default.
    #[arg(long)]
    trials: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit file into a brickwork pattern file.
    Compile {
        circuit: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the server's views of two patterns.
    Audit {
        a: PathBuf,
        b: PathBuf,
        /// Enumerate every key instead of sampling.
        #[arg(long)]
        exact: bool,
        /// Audit the computing server of the two-server variant.
        #[arg(long)]
        two_server: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Trap or stabilizer verification experiments.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Check the Pauli key update rules against dense conjugation.
    Keycheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Hide traps in a pattern and measure how often a deviation is caught.
    Traps {
        pattern: PathBuf,
        #[arg(long, default_value_t = 1)]
        traps: usize,
        #[arg(long, value_enum, default_value_t = TrapAdversary::None)]
        adversary: TrapAdversary,
        #[command(flatten)]
        common: Common,
    },
    /// Test the streamed resource of the measuring-client protocol.
    Stabilizer {
        pattern: PathBuf,
        /// Serve unentangled `|+>` qubits instead of the graph state.
        #[arg(long)]
        cheat: bool,
        /// Fraction of sessions diverted into tests.
        #[arg(long, default_value_t = 1.0)]
        test_fraction: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TrapAdversary {
    None,
    FlipReports,
    RandomPauli,
}

struct Honest;

impl Adversary for Honest {}

enum Failure {
    Reject,
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::Io(_)
            | Error::InvalidCircuit(_)
            | Error::InvalidPattern(_)
            | Error::InvalidGraph(_)
            | Error::Unrepresentable(_)
            | Error::TooManyQubits { .. }
            | Error::QubitOutOfRange { .. }
            | Error::DuplicateTargets(_)
            | Error::Traps(_)
            | Error::Audit(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit(out: Option<&Path>, value: &impl serde::Serialize) -> Outcome {
    let text = to_json(value)?;
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Reject)
    }
}

fn compile(path: &Path, c: &Common) -> Outcome {
    let pattern = compile_circuit(&load_circuit(path)?)?;
    eprintln!("{} x {} pattern", pattern.graph().rows(), pattern.graph().cols());
    emit(c.out.as_deref(), &PatternFile::from(&pattern))
}

fn run(path: &Path, c: &Common) -> Outcome {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(t) = c.trials {
        cfg.trials = t;
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let report = run_experiment(&cfg, base)?;
    eprintln!(
        "tv distance {:.4}, secrets clean: {}, accepted: {}",
        report.tv_distance,
        report.secrets_clean,
        report.accepted()
    );
    emit(c.out.as_deref(), &report)?;
    if !report.secrets_clean {
        return Err(Failure::Internal("a client secret reached the transcript".into()));
    }
    verdict(report.accepted())
}

fn audit(a: &Path, b: &Path, exact: bool, two_server: bool, c: &Common) -> Outcome {
    let (pa, pb) = (load_pattern(a)?, load_pattern(b)?);
    let mode =
        if exact { AuditMode::Exact } else { AuditMode::Sampled { trials: c.trials.unwrap_or(100_000), seed: c.seed.unwrap_or(0) } };
    let view = if two_server { ViewProtocol::TwoServer } else { ViewProtocol::Ubqc };
    let report = blindness_audit_in(&pa, &pb, mode, view, None)?;
    eprintln!("{} audit: distance {:.3e}, passed: {}", report.mode, report.distance, report.passed);
    emit(c.out.as_deref(), &report)?;
    verdict(report.passed)
}

fn verify_traps(path: &Path, n_traps: usize, adversary: TrapAdversary, c: &Common) -> Outcome {
    let base = load_pattern(path)?;
    // Fail early on a pattern that cannot take the traps.
    insert_traps(&base, n_traps, &mut ChaCha8Rng::seed_from_u64(c.seed.unwrap_or(0)))?;
    let generate = move |rng: &mut ChaCha8Rng| insert_traps(&base, n_traps, rng);
    let build = move |rng: &mut ChaCha8Rng| -> Box<dyn Adversary> {
        match adversary {
            TrapAdversary::None => Box::new(Honest),
            TrapAdversary::FlipReports => Box::new(FlipReports),
            TrapAdversary::RandomPauli => Box::new(RandomPauli::new(ChaCha8Rng::from_rng(rng).expect("chacha seeds"))),
        }
    };
    let report = detection_rate(&generate, &build, c.trials.unwrap_or(10_000), c.seed.unwrap_or(0))?;
    if let Some(e) = &report.estimate {
        eprintln!("rejected {} of {} sessions, 95% interval [{:.4}, {:.4}]", e.rejections, e.trials, e.lower, e.upper);
    }
    emit(c.out.as_deref(), &report)?;
    verdict(report.accepted)
}

fn verify_stabilizer(path: &Path, cheat: bool, p: f64, c: &Common) -> Outcome {
    let pattern = load_pattern(path)?;
    let server = if cheat { ResourceServer::ProductCheater } else { ResourceServer::Honest };
    let report =
        stabilizer_verify(&pattern, server, p, c.trials.unwrap_or(10_000), &mut ChaCha8Rng::seed_from_u64(c.seed.unwrap_or(0)))?;
    if let Some(e) = &report.estimate {
        eprintln!("failed {} of {} tests, 95% interval [{:.4}, {:.4}]", e.rejections, e.trials, e.lower, e.upper);
    }
    emit(c.out.as_deref(), &report)?;
    verdict(report.accepted)
}

fn random_clifford(width: usize, len: usize, rng: &mut ChaCha8Rng) -> Result<Circuit, Error> {
    let gates = (0..len)
        .map(|_| {
            let q = rng.gen_range(0..width);
            let other = (q + 1) % width;
            match rng.gen_range(0..7) {
                0 => Gate::H(q),
                1 => Gate::S(q),
                2 => Gate::X(q),
                3 => Gate::Y(q),
                4 => Gate::Z(q),
                5 if width > 1 => Gate::Cnot { control: q, target: other },
                _ if width > 1 => Gate::Cz(q, other),
                _ => Gate::H(q),
            }
        })
        .collect();
    Circuit::new(width, gates)
}

/// The generator table, then random Clifford circuits run on padded states:
/// decrypting with the updated key must give the plaintext result.
fn keycheck(c: &Common) -> Outcome {
    let table = conjugation_table()?;
    let table_ok = table.iter().all(|r| r.dense_match);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.unwrap_or(0));
    let trials = c.trials.unwrap_or(200);
    let mut worst: f64 = 1.0;
    for _ in 0..trials {
        let width = rng.gen_range(1..=3);
        let circuit = random_clifford(width, 12, &mut rng)?;
        let input = random_state(width, &mut rng)?;
        let mut key = PauliKey::random(width, &mut rng);
        let mut state = qotp_encrypt(&input, &key)?;
        for g in circuit.gates() {
            state.apply(g)?;
            key = key_update_clifford(&key, g)?;
        }
        worst = worst.min(qotp_decrypt(&state, &key)?.fidelity(&circuit.simulate(&input)?)?);
    }
    let ok = table_ok && worst > 1.0 - 1e-9;
    eprintln!(
        "{} table rows, all match: {table_ok}; {trials} random circuits, worst fidelity {worst:.12}",
        table.len()
    );
    let mismatches: Vec<_> = table.iter().filter(|r| !r.dense_match).collect();
    emit(
        c.out.as_deref(),
        &json!({ "rows": table.len(), "mismatches": mismatches, "trials": trials, "worst_fidelity": worst, "passed": ok }),
    )?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Internal("Pauli key update disagrees with dense conjugation".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Compile { circuit, common } => compile(circuit, common),
        Command::Run { config, common } => run(config, common),
        Command::Audit { a, b, exact, two_server, common } => audit(a, b, *exact, *two_server, common),
        Command::Verify { kind: VerifyKind::Traps { pattern, traps, adversary, common } } => {
            verify_traps(pattern, *traps, *adversary, common)
        }
        Command::Verify { kind: VerifyKind::Stabilizer { pattern, cheat, test_fraction, common } } => {
            verify_stabilizer(pattern, *cheat, *test_fraction, common)
        }
        Command::Keycheck { common } => keycheck(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Reject) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
