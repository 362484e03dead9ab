//! Criterion benchmarks for `hcfix-core`; see `benches/`.
