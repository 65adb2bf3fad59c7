//! Criterion benchmarks for the precoders; see `benches/`.
