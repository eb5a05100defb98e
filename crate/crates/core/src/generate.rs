//! Seeded random instances for tests, benchmarks and the CLI.
//!
//! Weights are multiples of 1/1024, so each instance is represented exactly
//! both in `f64` and as rationals.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dissimilarity::DissimilarityMap;
use crate::kalmanson::Noise;
use crate::ordering::CircularOrdering;
use crate::split::{Split, TaxonSet, WeightedSplitSystem};

const GRID: f64 = 1024.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A multiple of 1/1024 drawn uniformly from `[lo, hi]`.
pub fn dyadic<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let a = (lo * GRID).ceil() as i64;
    let b = (hi * GRID).floor() as i64;
    rng.gen_range(a..=b) as f64 / GRID
}

pub fn random_ordering<R: Rng>(rng: &mut R, n: usize) -> CircularOrdering {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    CircularOrdering::new(order).expect("n >= 3")
}

/// Every circular split of `ordering`, weighted uniformly in `[lo, hi]`.
pub fn random_circular_system<R: Rng>(
    rng: &mut R,
    ordering: &CircularOrdering,
    lo: f64,
    hi: f64,
) -> WeightedSplitSystem {
    let entries = ordering
        .all_circular_splits()
        .into_iter()
        .map(|s| (s, dyadic(rng, lo, hi)))
        .collect();
    WeightedSplitSystem::new(ordering.n(), entries).expect("distinct circular splits")
}

/// A random subset of the circular splits of `ordering`, each kept with
/// probability `keep`, weighted uniformly in `[lo, hi]`.
pub fn random_sparse_circular_system<R: Rng>(
    rng: &mut R,
    ordering: &CircularOrdering,
    keep: f64,
    lo: f64,
    hi: f64,
) -> WeightedSplitSystem {
    let entries = ordering
        .all_circular_splits()
        .into_iter()
        .filter_map(|s| rng.gen_bool(keep).then(|| (s, dyadic(rng, lo, hi))))
        .collect();
    WeightedSplitSystem::new(ordering.n(), entries).expect("distinct circular splits")
}

/// Splits of a random binary tree on `n` leaves, pendant splits included.
pub fn random_tree_splits<R: Rng>(rng: &mut R, n: usize) -> Vec<Split> {
    let mut clusters: Vec<TaxonSet> = (0..n).map(|t| TaxonSet::from_iter(n, [t])).collect();
    let mut splits: Vec<Split> = (0..n).map(|t| Split::new(n, [t]).expect("n >= 3")).collect();
    while clusters.len() > 3 {
        let a = rng.gen_range(0..clusters.len());
        let first = clusters.swap_remove(a);
        let b = rng.gen_range(0..clusters.len());
        let second = clusters.swap_remove(b);
        let merged = TaxonSet::from_iter(n, first.iter().chain(second.iter()));
        splits.push(Split::from_set(n, merged.clone()).expect("proper subset"));
        clusters.push(merged);
    }
    splits
}

/// A random binary tree with edge weights in `[lo, hi]`.
pub fn random_tree_system<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> WeightedSplitSystem {
    let entries = random_tree_splits(rng, n)
        .into_iter()
        .map(|s| (s, dyadic(rng, lo, hi)))
        .collect();
    WeightedSplitSystem::new(n, entries).expect("tree splits are distinct")
}

/// Integer dissimilarities drawn uniformly from `1..=max`.
pub fn random_dissimilarity<R: Rng>(rng: &mut R, n: usize, max: u32) -> DissimilarityMap {
    DissimilarityMap::from_fn(n, |_, _| f64::from(rng.gen_range(1..=max))).expect("positive entries")
}

/// Symmetric noise with entries uniform in `[-bound, bound]`.
pub fn random_noise<R: Rng>(rng: &mut R, n: usize, bound: f64) -> Noise {
    Noise::from_fn(n, |_, _| rng.gen_range(-bound..=bound))
}

/// Random points in the unit square, as a Euclidean distance matrix.
pub fn random_euclidean<R: Rng>(rng: &mut R, n: usize) -> DissimilarityMap {
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    DissimilarityMap::from_fn(n, |i, j| (points[i].0 - points[j].0).hypot(points[i].1 - points[j].1))
        .expect("distances are nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::is_pairwise_compatible;

    #[test]
    fn tree_splits_are_compatible() {
        let mut r = rng(7);
        for n in 4..10 {
            let splits = random_tree_splits(&mut r, n);
            assert_eq!(splits.len(), 2 * n - 3);
            assert!(is_pairwise_compatible(&splits));
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_dissimilarity(&mut rng(3), 6, 50);
        let b = random_dissimilarity(&mut rng(3), 6, 50);
        assert_eq!(a, b);
        let o = random_ordering(&mut rng(1), 7);
        let sys = random_circular_system(&mut rng(1), &o, 0.1, 2.0);
        assert!(sys
            .entries()
            .iter()
            .all(|(_, w)| (0.1..=2.0).contains(w) && (w * GRID).fract() == 0.0));
    }
}
