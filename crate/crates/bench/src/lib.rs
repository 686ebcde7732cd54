//! Criterion benchmarks for `spin1-epr`; see `benches/`.
