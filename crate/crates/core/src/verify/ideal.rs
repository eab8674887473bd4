use nalgebra::DMatrix;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mbqc::Circuit;
use crate::qcore::{DensityMatrix, StateVector, C64};

/// Which ideal functionality a protocol is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResourceMode {
    Blind,
    BlindVerif,
}

/// What the server feeds into the ideal resource.
#[derive(Clone, Debug)]
pub enum ServerInput {
    /// `b = 0` (blind) or `c = 0` (blind-verif).
    Honest,
    /// `b = 1`: the map `E`, given by Kraus operators on `psi_A (x) psi_B`,
    /// with `psi_A` on the low qubits.
    Deviate { kraus: Vec<DMatrix<C64>>, psi_b: StateVector },
    /// `c = 1`: the client receives the error flag.
    Abort,
}

/// Ideal delegated computation of a fixed public unitary.
///
/// In blind-verif mode the output carries one extra flag qubit above the
/// data: `|0>` for a delivered result, and the error state is `|0..0>|1>`,
/// orthogonal to every delivered result.
#[derive(Clone, Debug)]
pub struct IdealResource {
    pub mode: ResourceMode,
    pub unitary: Circuit,
}

impl IdealResource {
    pub fn new(mode: ResourceMode, unitary: Circuit) -> Self {
        IdealResource { mode, unitary }
    }

    pub fn output_qubits(&self) -> usize {
        match self.mode {
            ResourceMode::Blind => self.unitary.width(),
            ResourceMode::BlindVerif => self.unitary.width() + 1,
        }
    }

    pub fn eval(&self, psi_a: &StateVector, input: &ServerInput) -> Result<DensityMatrix> {
        let w = self.unitary.width();
        if psi_a.n_qubits() != w {
            return Err(Error::DimensionMismatch(psi_a.n_qubits(), w));
        }
        match (self.mode, input) {
            (ResourceMode::Blind, ServerInput::Honest) => Ok(self.unitary.simulate(psi_a)?.to_density()),
            (ResourceMode::Blind, ServerInput::Deviate { kraus, psi_b }) => {
                let joint = psi_a.tensor(psi_b)?;
                check_kraus(kraus, 1 << joint.n_qubits())?;
                joint.to_density().apply_kraus(kraus)
            }
            (ResourceMode::BlindVerif, ServerInput::Honest) => accepted(&self.unitary.simulate(psi_a)?.to_density()),
            (ResourceMode::BlindVerif, ServerInput::Abort) => error_state(w),
            (mode, other) => Err(Error::Config(format!("{other:?} is not a server input of the {mode:?} resource"))),
        }
    }
}

/// Convenience form of [`IdealResource::eval`].
pub fn ideal_resource_eval(
    resource: &IdealResource,
    psi_a: &StateVector,
    input: &ServerInput,
) -> Result<DensityMatrix> {
    resource.eval(psi_a, input)
}

fn check_kraus(kraus: &[DMatrix<C64>], d: usize) -> Result<()> {
    if kraus.is_empty() {
        return Err(Error::Config("deviation map has no Kraus operators".into()));
    }
    let mut sum = DMatrix::<C64>::zeros(d, d);
    for k in kraus {
        if k.nrows() != d || k.ncols() != d {
            return Err(Error::Config(format!("Kraus operator is {}x{}, expected {d}x{d}", k.nrows(), k.ncols())));
        }
        sum += k.adjoint() * k;
    }
    let err = (sum - DMatrix::<C64>::identity(d, d)).norm();
    if err > 1e-9 {
        return Err(Error::Config(format!("deviation map is not trace preserving (deviation {err:.2e})")));
    }
    Ok(())
}

/// `rho (x) |0><0|` on a new top flag qubit.
pub fn accepted(rho: &DensityMatrix) -> Result<DensityMatrix> {
    rho.tensor(&DensityMatrix::diagonal(&[1.0, 0.0])?)
}

/// The designated error state `|0..0><0..0| (x) |1><1|`.
pub fn error_state(width: usize) -> Result<DensityMatrix> {
    let mut probs = vec![0.0; 1 << (width + 1)];
    probs[1 << width] = 1.0;
    DensityMatrix::diagonal(&probs)
}

/// Z-basis dephasing, for protocols that return classical readouts.
pub fn dephase(rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::diagonal(&rho.probabilities())
}

/// Exact output of a protocol run with an honest server, averaged over all
/// measurement branches and the client's randomness.
pub trait ProtocolChannel {
    fn output(&self, input: &StateVector) -> Result<DensityMatrix>;

    /// True if the client ends up with Z-basis readouts rather than qubits.
    fn classical(&self) -> bool {
        false
    }
}

/// Largest trace distance between the protocol's output and the ideal
/// resource's honest output over `inputs`.
pub fn epsilon_correctness(
    channel: &dyn ProtocolChannel,
    ideal: &IdealResource,
    inputs: &[StateVector],
) -> Result<f64> {
    if inputs.is_empty() {
        return Err(Error::Empty("test inputs"));
    }
    let mut worst = 0.0f64;
    for psi in inputs {
        let mut want = ideal.eval(psi, &ServerInput::Honest)?;
        if channel.classical() {
            want = dephase(&want)?;
        }
        let got = channel.output(psi)?;
        worst = worst.max(got.trace_distance(&want)?);
    }
    Ok(worst)
}

/// Haar-random pure state.
pub fn random_state<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    let mut rng = rng;
    let amp =
        (0..1usize << n).map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).collect();
    StateVector::normalized(amp)
}

/// Every computational basis state followed by `n_random` Haar-random states.
pub fn input_battery<R: RngCore + ?Sized>(width: usize, n_random: usize, rng: &mut R) -> Result<Vec<StateVector>> {
    let mut out = (0..1usize << width).map(|i| StateVector::basis(width, i)).collect::<Result<Vec<_>>>()?;
    for _ in 0..n_random {
        out.push(random_state(width, rng)?);
    }
    Ok(out)
}
