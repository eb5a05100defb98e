//! Splits, split systems and split metrics.

use std::collections::HashSet;
use std::fmt;

use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fixed-width set of taxa.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TaxonSet {
    words: Vec<u64>,
}

impl TaxonSet {
    pub fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_iter(n: usize, taxa: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for t in taxa {
            set.insert(t);
        }
        set
    }

    #[inline]
    pub fn contains(&self, t: usize) -> bool {
        self.words.get(t / 64).is_some_and(|w| w & (1u64 << (t % 64)) != 0)
    }

    #[inline]
    pub fn insert(&mut self, t: usize) {
        self.words[t / 64] |= 1u64 << (t % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |b| w & (1u64 << b) != 0).map(move |b| k * 64 + b))
    }

    pub fn complement(&self, n: usize) -> Self {
        Self::from_iter(n, (0..n).filter(|&t| !self.contains(t)))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for TaxonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A bipartition of `0..n` into two nonempty blocks.
///
/// Stored as the block containing taxon 0, so equal bipartitions compare
/// equal whichever side they were built from.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    n: usize,
    side: TaxonSet,
}

impl Split {
    /// Builds the split `{block | complement}`.
    pub fn new(n: usize, block: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewTaxa { n, min: 3 });
        }
        let mut side = TaxonSet::empty(n);
        for t in block {
            if t >= n {
                return Err(Error::IndexOutOfRange { index: t, n });
            }
            side.insert(t);
        }
        Self::from_set(n, side)
    }

    pub fn from_set(n: usize, side: TaxonSet) -> Result<Self> {
        let size = side.len();
        if size == 0 || size == n {
            return Err(Error::InvalidSplit("both blocks must be nonempty".to_string()));
        }
        let side = if side.contains(0) { side } else { side.complement(n) };
        Ok(Self { n, side })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The block containing taxon 0.
    pub fn block_with_zero(&self) -> &TaxonSet {
        &self.side
    }

    /// The block not containing taxon 0.
    pub fn other_block(&self) -> TaxonSet {
        self.side.complement(self.n)
    }

    /// Size of the smaller block; 1 for trivial splits.
    pub fn min_block_size(&self) -> usize {
        let k = self.side.len();
        k.min(self.n - k)
    }

    pub fn is_trivial(&self) -> bool {
        self.min_block_size() == 1
    }

    #[inline]
    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.side.contains(i) != self.side.contains(j)
    }

    /// The split pseudometric: 1 when `i` and `j` lie in different blocks.
    pub fn split_metric(&self, i: usize, j: usize) -> Result<u8> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        Ok(u8::from(self.separates(i, j)))
    }

    /// True when `{i, j}` and `{k, l}` lie on opposite sides.
    pub fn separates_pairs(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        let a = self.side.contains(i);
        a == self.side.contains(j) && a != self.side.contains(k) && a != self.side.contains(l)
    }

    pub fn is_compatible_with(&self, other: &Split) -> bool {
        let a = &self.side;
        let b = self.side.complement(self.n);
        let a2 = &other.side;
        let b2 = other.side.complement(other.n);
        a.is_disjoint(a2) || a.is_disjoint(&b2) || b.is_disjoint(a2) || b.is_disjoint(&b2)
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.side, self.other_block())
    }
}

/// True when every pair of distinct splits has an empty block intersection.
pub fn is_pairwise_compatible<'a>(splits: impl IntoIterator<Item = &'a Split>) -> bool {
    let splits: Vec<&Split> = splits.into_iter().collect();
    splits
        .iter()
        .enumerate()
        .all(|(k, a)| splits[k + 1..].iter().all(|b| a == b || a.is_compatible_with(b)))
}

/// Splits with nonnegative weights, no duplicates.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSplitSystem<T = f64> {
    n: usize,
    entries: Vec<(Split, T)>,
}

impl<T: Scalar> WeightedSplitSystem<T> {
    pub fn empty(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn new(n: usize, entries: Vec<(Split, T)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for (split, weight) in &entries {
            if split.n() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    got: split.n(),
                });
            }
            if *weight < T::zero() {
                return Err(Error::InvalidSplitSystem(format!(
                    "negative weight {weight} on split {split:?}"
                )));
            }
            if !seen.insert(split) {
                return Err(Error::InvalidSplitSystem(format!("duplicate split {split:?}")));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Split, T)] {
        &self.entries
    }

    pub fn splits(&self) -> impl Iterator<Item = &Split> {
        self.entries.iter().map(|(s, _)| s)
    }

    pub fn weight(&self, split: &Split) -> Option<&T> {
        self.entries.iter().find(|(s, _)| s == split).map(|(_, w)| w)
    }

    pub fn total_weight(&self) -> T {
        crate::scalar::sum(self.entries.iter().map(|(_, w)| w.clone()))
    }

    pub fn min_weight(&self) -> Option<T> {
        self.entries
            .iter()
            .map(|(_, w)| w.clone())
            .reduce(|a, b| if b < a { b } else { a })
    }

    /// Drops splits whose weight is zero.
    pub fn without_zero_weights(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().filter(|(_, w)| !w.is_zero()).cloned().collect(),
        }
    }

    pub fn to_f64(&self) -> WeightedSplitSystem<f64> {
        WeightedSplitSystem {
            n: self.n,
            entries: self.entries.iter().map(|(s, w)| (s.clone(), w.to_f64())).collect(),
        }
    }
}

/// `d(i, j) = Σ_S λ_S · δ_S(i, j)`.
pub fn metric_from_splits<T: Scalar>(sys: &WeightedSplitSystem<T>) -> DissimilarityMap<T> {
    let n = sys.n();
    let mut rows = vec![vec![T::zero(); n]; n];
    for (split, weight) in sys.entries() {
        let side = split.block_with_zero();
        let inside: Vec<usize> = side.iter().collect();
        let outside: Vec<usize> = split.other_block().iter().collect();
        for &i in &inside {
            for &j in &outside {
                rows[i][j] += weight.clone();
                rows[j][i] += weight.clone();
            }
        }
    }
    DissimilarityMap::from_rows(rows).expect("split metrics are symmetric and nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(n: usize, block: &[usize]) -> Split {
        Split::new(n, block.iter().copied()).unwrap()
    }

    #[test]
    fn split_metric_examples() {
        let s = split(4, &[0, 1]);
        assert_eq!(s.split_metric(0, 1).unwrap(), 0);
        assert_eq!(s.split_metric(1, 2).unwrap(), 1);
        let t = split(4, &[0]);
        assert_eq!(t.split_metric(0, 0).unwrap(), 0);
        assert!(s.split_metric(0, 4).is_err());
    }

    #[test]
    fn canonical_side_contains_zero() {
        assert_eq!(split(4, &[2, 3]), split(4, &[0, 1]));
        assert!(split(5, &[3]).block_with_zero().contains(0));
    }

    #[test]
    fn rejects_degenerate_splits() {
        assert!(Split::new(4, []).is_err());
        assert!(Split::new(4, 0..4).is_err());
        assert!(Split::new(2, [0]).is_err());
        assert!(Split::new(4, [7]).is_err());
    }

    #[test]
    fn compatibility_examples() {
        assert!(is_pairwise_compatible(&[split(4, &[0, 1]), split(4, &[0, 1, 2])]));
        assert!(!is_pairwise_compatible(&[split(4, &[0, 1]), split(4, &[1, 2])]));
    }

    #[test]
    fn metric_from_empty_and_single_split() {
        let empty = WeightedSplitSystem::<f64>::empty(4);
        assert!(metric_from_splits(&empty).is_all_zero());
        let sys = WeightedSplitSystem::new(4, vec![(split(4, &[0, 1]), 2.0)]).unwrap();
        let d = metric_from_splits(&sys);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(*d.get(i, j), 2.0);
        }
        assert_eq!(*d.get(0, 1), 0.0);
        assert_eq!(*d.get(2, 3), 0.0);
    }

    #[test]
    fn system_rejects_duplicates_and_negative_weights() {
        let s = split(4, &[0, 1]);
        assert!(WeightedSplitSystem::new(4, vec![(s.clone(), 1.0), (s.clone(), 2.0)]).is_err());
        assert!(WeightedSplitSystem::new(4, vec![(s, -1.0)]).is_err());
    }
}
