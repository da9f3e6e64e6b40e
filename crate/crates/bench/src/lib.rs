//! Criterion benchmarks for the trikernel workbench live in `benches/`.
