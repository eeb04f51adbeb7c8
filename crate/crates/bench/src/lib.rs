//! Benchmarks for `camlab`; see `benches/numerics.rs`.
