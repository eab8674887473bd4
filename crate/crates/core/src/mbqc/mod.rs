//! Measurement-based computation on graph states.

mod cells;
mod compile;
mod exec;
mod graph;
mod pattern;
mod register;

pub use cells::{
    brick_target, brick_unitary, chain_unitary, same_up_to_phase2, same_up_to_phase4, search_brick, search_single,
    single_key, single_target, Mat4, BRICK_TABLE, SINGLE_KEYS, SINGLE_TABLE,
};
pub use compile::{compile_circuit, Circuit};
pub use exec::{run_pattern, run_pattern_streamed, stabilizer_check, PatternRun};
pub use graph::{build_brickwork, graph_state, BrickworkGraph, Graph, Vertex};
pub use pattern::{adapt_angle, brickwork_flow, Flow, MeasurementPattern, Role};
pub use register::Register;
