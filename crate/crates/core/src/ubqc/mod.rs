//! Blind delegated computation: the preparing-client protocol, the
//! measuring-client variant, remote state preparation, the two-server
//! classical-client variant and blindness audits.

mod adversary;
mod audit;
mod client;
mod measuring;
mod rsp;
mod server;
mod session;
mod two_server;

pub use adversary::{Adversary, FlipReports, PauliAt, RandomPauli};
pub use audit::{
    blindness_audit, blindness_audit_in, exact_view_distance, AdversaryFactory, AuditMode, AuditReport, ExactView,
    ViewProtocol, EXACT_AUDIT_MAX_VERTICES,
};
pub use client::{client_decode, client_delta, client_init, ClientKeys, ClientState, DeltaSign, Payload};
pub use measuring::{run_client_measuring, stabilizer_round, MeasuringRun, ResourceServer};
pub use rsp::{bell_pair, rsp_measure, BellState, RSP_PAIR};
pub use server::{ServerState, ServerView};
pub use session::{run_ubqc, run_ubqc_with, ExecMode, UbqcOptions, UbqcRun};
pub use two_server::{run_two_server, TwoServerOptions, TwoServerRun};
