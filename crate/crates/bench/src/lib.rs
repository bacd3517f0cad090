//! Criterion benchmarks for gamma-core live in `benches/`.
