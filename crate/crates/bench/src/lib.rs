//! Seeded inputs shared by the benchmarks.

use nnet_core::generate::{random_circular_system, random_euclidean, random_ordering, rng};
use nnet_core::{metric_from_splits, DissimilarityMap};

/// Taxon counts the scaling benchmarks sweep over.
pub const SIZES: [usize; 3] = [20, 50, 100];

/// Distances between `n` seeded random points in the unit square.
pub fn euclidean(n: usize) -> DissimilarityMap {
    random_euclidean(&mut rng(n as u64), n)
}

/// A circular decomposable metric with weights on every circular split.
pub fn circular(n: usize) -> DissimilarityMap {
    let mut r = rng(1000 + n as u64);
    let ordering = random_ordering(&mut r, n);
    metric_from_splits(&random_circular_system(&mut r, &ordering, 0.1, 2.0))
}
