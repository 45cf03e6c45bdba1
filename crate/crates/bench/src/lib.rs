//! Criterion benchmarks for `durfee-core`; see `benches/engine.rs`.
