//! Exact honest-server output channels of each protocol, for comparison with
//! the ideal resource.
//!
//! Measurement branches are enumerated with forced outcomes and weighted by
//! their Born probability. The client's own randomness (keys, trap placement,
//! preparation angles) is averaged over a fixed number of seeded draws, since
//! every draw must already be exactly correct on its own.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ideal::{accepted, error_state, ProtocolChannel};
use super::traps::{check_traps, insert_traps};
use crate::angle::Angle8;
use crate::childs::{run_encrypted_circuit, run_hidden_circuit};
use crate::error::{Error, Result};
use crate::mbqc::{Circuit, MeasurementPattern, Role};
use crate::qcore::{all_branches, DensityMatrix, ForcedOutcomes, StateVector, C64};
use crate::ubqc::{
    run_client_measuring, run_two_server, run_ubqc_with, ClientKeys, DeltaSign, ExecMode, FlipReports, ResourceServer,
    TwoServerOptions, UbqcOptions,
};

const WEIGHT_TOL: f64 = 1e-9;

fn draw_rng(seed: u64, draw: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw as u64);
    rng
}

struct Accumulator {
    m: Option<DMatrix<C64>>,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator { m: None }
    }

    fn add(&mut self, w: f64, rho: &DensityMatrix) -> Result<()> {
        let term = rho.matrix() * C64::new(w, 0.0);
        match &mut self.m {
            None => self.m = Some(term),
            Some(m) if m.nrows() == term.nrows() => *m += term,
            Some(m) => return Err(Error::DimensionMismatch(m.nrows(), term.nrows())),
        }
        Ok(())
    }

    fn finish(self) -> Result<DensityMatrix> {
        DensityMatrix::from_matrix(self.m.ok_or(Error::Empty("protocol branches"))?)
    }
}

/// Sums `run` over every branch of `n_bits` forced outcomes. Branches of zero
/// probability are skipped; the surviving weights must add up to one.
fn branch_sum<F>(n_bits: usize, scale: f64, acc: &mut Accumulator, mut run: F) -> Result<()>
where
    F: FnMut(&mut ForcedOutcomes) -> Result<DensityMatrix>,
{
    let mut total = 0.0;
    for bits in all_branches(n_bits) {
        let mut forced = ForcedOutcomes::new(bits);
        let rho = match run(&mut forced) {
            Err(Error::ZeroProbabilityBranch) => continue,
            r => r?,
        };
        if !forced.exhausted() {
            return Err(Error::Protocol(format!("run used {} of {n_bits} outcomes", forced.consumed())));
        }
        total += forced.weight();
        acc.add(forced.weight() * scale, &rho)?;
    }
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::Protocol(format!("branch weights sum to {total}")));
    }
    Ok(())
}

fn check_draws(draws: usize) -> Result<f64> {
    if draws == 0 {
        return Err(Error::Empty("key draws"));
    }
    Ok(1.0 / draws as f64)
}

fn require_plus(input: &StateVector, n: usize) -> Result<()> {
    let plus = StateVector::plus(n)?;
    if input.n_qubits() != n {
        return Err(Error::DimensionMismatch(input.n_qubits(), n));
    }
    if input.fidelity(&plus)? < 1.0 - 1e-12 {
        return Err(Error::Protocol("this protocol starts from |+> on every row".into()));
    }
    Ok(())
}

/// Preparing-client blind computation.
#[derive(Clone, Debug)]
pub struct UbqcChannel {
    pub pattern: MeasurementPattern,
    pub sign: DeltaSign,
    pub draws: usize,
    pub seed: u64,
}

impl ProtocolChannel for UbqcChannel {
    fn output(&self, input: &StateVector) -> Result<DensityMatrix> {
        let scale = check_draws(self.draws)?;
        let mut acc = Accumulator::new();
        for d in 0..self.draws {
            let mut rng = draw_rng(self.seed, d);
            let opts = UbqcOptions {
                input: Some(input.clone()),
                mode: ExecMode::Streamed,
                sign: self.sign,
                keys: Some(ClientKeys::sample(&self.pattern, &mut rng)),
                seed: self.seed,
            };
            branch_sum(self.pattern.order().len(), scale, &mut acc, |forced| {
                let run = run_ubqc_with(&self.pattern, &opts, None::<&mut FlipReports>, &mut rng, forced)?;
                Ok(run.output.to_density())
            })?;
        }
        acc.finish()
    }
}

/// Blind computation with traps; outputs carry the accept flag.
#[derive(Clone, Debug)]
pub struct TrappedChannel {
    pub base: MeasurementPattern,
    pub n_traps: usize,
    pub draws: usize,
    pub seed: u64,
}

impl ProtocolChannel for TrappedChannel {
    fn output(&self, input: &StateVector) -> Result<DensityMatrix> {
        let scale = check_draws(self.draws)?;
        let width = self.base.logical_rows();
        let mut acc = Accumulator::new();
        for d in 0..self.draws {
            let mut rng = draw_rng(self.seed, d);
            let tp = insert_traps(&self.base, self.n_traps, &mut rng)?;
            let opts = UbqcOptions { input: Some(input.clone()), mode: ExecMode::Streamed, ..tp.options() };
            branch_sum(tp.pattern.order().len(), scale, &mut acc, |forced| {
                let run = run_ubqc_with(&tp.pattern, &opts, None::<&mut FlipReports>, &mut rng, forced)?;
                if check_traps(&tp, &run.client)?.accepted {
                    accepted(&run.output.to_density())
                } else {
                    error_state(width)
                }
            })?;
        }
        acc.finish()
    }
}

/// Measuring-client computation on an honest streamed resource. Inputs are
/// fixed to `|+>`.
#[derive(Clone, Debug)]
pub struct MeasuringChannel {
    pub pattern: MeasurementPattern,
}

impl ProtocolChannel for MeasuringChannel {
    fn output(&self, input: &StateVector) -> Result<DensityMatrix> {
        require_plus(input, self.pattern.logical_rows())?;
        let mut acc = Accumulator::new();
        branch_sum(self.pattern.order().len(), 1.0, &mut acc, |forced| {
            Ok(run_client_measuring(&self.pattern, ResourceServer::Honest, forced)?.output.to_density())
        })?;
        acc.finish()
    }
}

/// Two-server computation with a classical client; inputs are fixed to `|+>`
/// and the result is the distribution of decoded readouts.
#[derive(Clone, Debug)]
pub struct TwoServerChannel {
    pub pattern: MeasurementPattern,
    pub draws: usize,
    pub seed: u64,
}

impl ProtocolChannel for TwoServerChannel {
    fn output(&self, input: &StateVector) -> Result<DensityMatrix> {
        let p = &self.pattern;
        let width = p.logical_rows();
        require_plus(input, width)?;
        let scale = check_draws(self.draws)?;
        // One pair outcome per vertex, one bit per measurement, one readout per output.
        let n_bits = p.n_vertices() + p.order().len() + p.logical_outputs().len();
        let mut acc = Accumulator::new();
        for d in 0..self.draws {
            let mut rng = draw_rng(self.seed, d);
            let alphas = p
                .roles()
                .iter()
                .map(|r| if *r == Role::Output { Angle8::ZERO } else { Angle8::random(&mut rng) })
                .collect();
            let opts = TwoServerOptions { alphas: Some(alphas), seed: self.seed, ..Default::default() };
            branch_sum(n_bits, scale, &mut acc, |forced| {
                let run = run_two_server(p, &opts, &mut rng, forced)?;
                let idx = run.output_bits.iter().enumerate().fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
                let mut probs = vec![0.0; 1 << width];
                probs[idx] = 1.0;
                DensityMatrix::diagonal(&probs)
            })?;
        }
        acc.finish()
    }

    fn classical(&self) -> bool {
        true
    }
}

/// Computation on one-time-padded data, optionally hidden in the fixed gate
/// cycle (`hidden_cycles = Some(min_cycles)`).
#[derive(Clone, Debug)]
pub struct ChildsChannel {
    pub circuit: Circuit,
    pub hidden_cycles: Option<usize>,
    pub draws: usize,
    pub seed: u64,
}

impl ProtocolChannel for ChildsChannel {
    fn output(&self, input: &StateVector) -> Result<DensityMatrix> {
        let scale = check_draws(self.draws)?;
        let mut acc = Accumulator::new();
        for d in 0..self.draws {
            let mut rng = draw_rng(self.seed, d);
            let run = match self.hidden_cycles {
                None => run_encrypted_circuit(&self.circuit, input, &mut rng)?,
                Some(c) => run_hidden_circuit(&self.circuit, input, c, &mut rng)?,
            };
            acc.add(scale, &run.output.to_density())?;
        }
        acc.finish()
    }
}
