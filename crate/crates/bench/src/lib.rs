//! Criterion benchmarks for kappamu-core live in `benches/`.
