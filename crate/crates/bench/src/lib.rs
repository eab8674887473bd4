//! Criterion benchmarks for the simulation engine and protocol runners.
