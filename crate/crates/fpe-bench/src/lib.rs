//! Shared fixtures for the criterion benchmarks.

use fpe_core::spectral::{Field, GridSpec};

/// Smooth multi-mode field with O(1) amplitude — the standard benchmark
/// workload.  Deterministic, so repeated runs time the same data.
pub fn bench_field(grid: GridSpec) -> Field {
    use std::f64::consts::PI;
    Field::from_fn(grid, |x, z| {
        let mut v = 0.0;
        for kx in 1..=4 {
            for mz in 1..=3 {
                let a = 1.0 / (kx * mz) as f64;
                v += a * (2.0 * PI * kx as f64 * x + 0.3 * kx as f64).sin()
                    * (PI * mz as f64 * z).cos();
            }
        }
        v
    })
}
