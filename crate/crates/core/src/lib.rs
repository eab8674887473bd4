//! Desk-scale laboratory for blind and delegated quantum computation.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: dense statevector / density-matrix engine (gates, XY-plane and Z
//!   measurements, partial trace, trace distance).
//! - [`mbqc`]: graph states, the brickwork resource, circuit compilation into
//!   measurement patterns, flow-based angle adaptation and pattern execution.
//! - [`ubqc`]: client/server state machines for the preparing-client protocol,
//!   the measuring-client variant, remote state preparation and the two-server
//!   classical-client variant, together with blindness audits.
//! - [`childs`]: computing on one-time-padded data with Pauli key tracking and
//!   the interactive T-gate gadget.
//! - [`verify`]: trap insertion, stabilizer testing, the ideal-resource oracle
//!   and correctness/detection experiments.
//! - [`harness`]: the simulated channel, transcripts, wire and file formats and
//!   the experiment runner used by the command-line tool.

pub mod angle;
pub mod childs;
pub mod error;
pub mod harness;
pub mod mbqc;
pub mod qcore;
pub mod ubqc;
pub mod verify;

pub use angle::Angle8;
pub use error::{Error, Result};
pub use mbqc::{BrickworkGraph, Circuit, Graph, MeasurementPattern, Role, Vertex};
pub use qcore::{DensityMatrix, Gate, Outcome, StateVector};
