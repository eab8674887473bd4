//! Simulated channel, transcripts, wire and file formats, experiment runner.

mod channel;
mod config;
mod experiment;
mod formats;
mod message;
mod registry;
mod secrets;
mod transcript;

pub use channel::{Channel, Topology};
pub use config::{AdversarySpec, AuditKind, AuditSpec, ExecSpec, ExperimentConfig, Protocol};
pub use experiment::{run_experiment, ExperimentReport};
pub use formats::{
    from_json, load_circuit, load_pattern, read_json, to_json, write_json, CircuitFile, GateSpec, PatternFile,
};
pub use message::{Endpoint, GateName, Message};
pub use registry::QuantumRegistry;
pub use secrets::{transcript_scan, SecretToken};
pub use transcript::{Entry, SessionMeta, Transcript};
