//! Benchmarks for `cdiff-core`; see `benches/`.
