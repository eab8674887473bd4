use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::traps::{check_traps, DetectionEstimate, TrapFailure, TrappedPattern, VerdictReport};
use crate::error::Result;
use crate::ubqc::{run_ubqc_with, Adversary};

const CHUNK: usize = 1024;

/// Builds a fresh trapped pattern for one trial.
pub type TrapGenerator = dyn Fn(&mut ChaCha8Rng) -> Result<TrappedPattern> + Sync;

/// Builds the deviating server for one trial.
pub type AdversaryBuilder = dyn Fn(&mut ChaCha8Rng) -> Box<dyn Adversary> + Sync;

/// Monte Carlo rejection rate of trap checking against `adversary`.
///
/// Trials run in parallel chunks, each with its own seeded stream, and are
/// merged in chunk order, so the report depends only on `seed`.
pub fn detection_rate(
    generate: &TrapGenerator,
    adversary: &AdversaryBuilder,
    trials: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let chunks: Vec<usize> = (0..trials.div_ceil(CHUNK)).collect();
    let parts: Vec<(usize, Vec<TrapFailure>, u64)> = chunks
        .par_iter()
        .map(|&c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let (mut checked, mut failures, mut rejected) = (0, Vec::new(), 0u64);
            for _ in 0..CHUNK.min(trials - c * CHUNK) {
                let tp = generate(&mut rng)?;
                let mut adv = adversary(&mut rng);
                let run = run_ubqc_with(&tp.pattern, &tp.options(), Some(adv.as_mut()), &mut rng.clone(), &mut rng)?;
                let verdict = check_traps(&tp, &run.client)?;
                checked += verdict.traps_checked;
                rejected += u64::from(!verdict.accepted);
                failures.extend(verdict.failures);
            }
            Ok((checked, failures, rejected))
        })
        .collect::<Result<_>>()?;
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut rejected = 0;
    for (c, f, r) in parts {
        checked += c;
        failures.extend(f);
        rejected += r;
    }
    let mut report = VerdictReport::from_failures(checked, failures);
    report.estimate = Some(DetectionEstimate::new(rejected, trials as u64));
    Ok(report)
}
