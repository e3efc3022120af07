//! Shared fixtures for the estimator benchmarks.

use sgrid_core::{generate, Dataset, SyntheticSpec};

/// A synthetic dataset with five two-attribute groups.
pub fn fixture(n: usize, d: usize) -> Dataset {
    let groups = (d / 2).min(5);
    generate(&SyntheticSpec {
        n,
        d,
        group_sizes: vec![2; groups],
        outlier_count: (n / 100).max(1),
        seed: 42,
    })
    .expect("valid fixture spec")
    .dataset
}
