//! Criterion benchmarks for the goppa-orbits kernels; see `benches/`.
