//! Trap insertion and checking, stabilizer testing of a streamed resource,
//! the ideal-resource oracle, exact protocol channels for correctness
//! estimates and detection-rate experiments.

mod channels;
mod detection;
mod ideal;
mod stabilizer;
mod traps;

pub use channels::{ChildsChannel, MeasuringChannel, TrappedChannel, TwoServerChannel, UbqcChannel};
pub use detection::{detection_rate, AdversaryBuilder, TrapGenerator};
pub use ideal::{
    accepted, dephase, epsilon_correctness, error_state, ideal_resource_eval, input_battery, random_state,
    IdealResource, ProtocolChannel, ResourceMode, ServerInput,
};
pub use stabilizer::stabilizer_verify;
pub use traps::{
    check_traps, insert_traps, wilson_interval, DetectionEstimate, TrapFailure, TrappedPattern, VerdictReport,
};
