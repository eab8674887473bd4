use rand::{Rng, RngCore};

use super::traps::{DetectionEstimate, TrapFailure, VerdictReport};
use crate::error::{Error, Result};
use crate::mbqc::MeasurementPattern;
use crate::qcore::Outcome;
use crate::ubqc::{run_client_measuring, stabilizer_round, ResourceServer};

/// Runs `sessions` measuring-client sessions of `pattern`. Each one is, with
/// probability `p`, diverted into a test of `K_v` for a uniformly chosen `v`;
/// otherwise the computation runs and is not checked.
pub fn stabilizer_verify<R: RngCore>(
    pattern: &MeasurementPattern,
    server: ResourceServer,
    p: f64,
    sessions: usize,
    rng: &mut R,
) -> Result<VerdictReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("test fraction {p} outside [0, 1]")));
    }
    let g = pattern.graph();
    let mut tests = 0usize;
    let mut failures = Vec::new();
    for _ in 0..sessions {
        if rng.gen_bool(p) {
            let v = rng.gen_range(0..g.n_vertices());
            tests += 1;
            if stabilizer_round(g, server, v, rng)? == Outcome::One {
                failures.push(TrapFailure { vertex: v, expected: 0, observed: 1 });
            }
        } else {
            run_client_measuring(pattern, server, rng)?;
        }
    }
    let mut report = VerdictReport::from_failures(tests, failures);
    if tests > 0 {
        report.estimate = Some(DetectionEstimate::new(report.failures.len() as u64, tests as u64));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle8;
    use crate::mbqc::{build_brickwork, Role};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plain(rows: usize, cols: usize) -> MeasurementPattern {
        let g = build_brickwork(rows, cols).unwrap();
        let roles = (0..rows * cols).map(|v| if v % cols == cols - 1 { Role::Output } else { Role::Compute }).collect();
        MeasurementPattern::new(g, rows, vec![Angle8::PI_4; rows * cols], roles).unwrap()
    }

    #[test]
    fn honest_server_always_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = stabilizer_verify(&plain(2, 5), ResourceServer::Honest, 0.7, 200, &mut rng).unwrap();
        assert!(r.accepted && r.traps_checked > 100);
    }

    #[test]
    fn zero_fraction_is_vacuous() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = stabilizer_verify(&plain(1, 3), ResourceServer::ProductCheater, 0.0, 20, &mut rng).unwrap();
        assert!(r.accepted);
        assert_eq!(r.traps_checked, 0);
        assert!(r.estimate.is_none());
    }

    #[test]
    fn product_server_is_caught() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = stabilizer_verify(&plain(1, 3), ResourceServer::ProductCheater, 1.0, 400, &mut rng).unwrap();
        assert!(!r.accepted);
        // Every vertex of a chain has a neighbour.
        assert!(r.estimate.unwrap().contains(0.5));
    }

    #[test]
    fn bad_fraction_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(stabilizer_verify(&plain(1, 3), ResourceServer::Honest, 1.5, 1, &mut rng).is_err());
    }
}
