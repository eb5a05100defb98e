//! Circular orderings, partial circular orderings and node weightings.

use std::fmt;

use crate::dissimilarity::check_permutation;
use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};
use crate::split::{Split, TaxonSet};

/// A cyclic arrangement of `0..n`, identified up to rotation and reflection.
///
/// Canonical form: `order[0] == 0` and `order[1] < order[n - 1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircularOrdering {
    order: Vec<usize>,
}

impl CircularOrdering {
    /// Canonicalizes any permutation of `0..n`, `n >= 3`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return Err(Error::TooFewTaxa { n, min: 3 });
        }
        check_permutation(&order, n)
            .map_err(|_| Error::InvalidOrdering(format!("{order:?} is not a permutation of 0..{n}")))?;
        let zero = order.iter().position(|&t| t == 0).unwrap_or(0);
        let mut canon: Vec<usize> = (0..n).map(|k| order[(zero + k) % n]).collect();
        if canon[1] > canon[n - 1] {
            canon[1..].reverse();
        }
        Ok(Self { order: canon })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    /// Taxon at cyclic position `k` (taken mod n).
    pub fn at(&self, k: usize) -> usize {
        self.order[k % self.order.len()]
    }

    /// Position of every taxon.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n()];
        for (k, &t) in self.order.iter().enumerate() {
            pos[t] = k;
        }
        pos
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        let n = self.n();
        let pos = self.positions();
        let diff = pos[a].abs_diff(pos[b]);
        diff == 1 || diff == n - 1
    }

    /// Cycle edges `(x_k, x_{k+1})` for `k = 0..n`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).map(move |k| (self.at(k), self.at(k + 1)))
    }

    /// The split cut out by positions `a..=b` with `1 <= a <= b < n`.
    pub fn arc_split(&self, a: usize, b: usize) -> Result<Split> {
        let n = self.n();
        if a == 0 || a > b || b >= n {
            return Err(Error::InvalidArgument(format!(
                "arc {a}..={b} is not inside positions 1..{n}"
            )));
        }
        Split::new(n, (a..=b).map(|k| self.order[k]))
    }

    /// Position ranges `(a, b)` of every circular split, in lexicographic order.
    pub fn arc_ranges(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n();
        (1..n).flat_map(move |a| (a..n).map(move |b| (a, b)))
    }

    /// All `n(n-1)/2` circular splits, each bipartition listed once.
    pub fn all_circular_splits(&self) -> Vec<Split> {
        self.arc_ranges()
            .map(|(a, b)| self.arc_split(a, b).expect("valid arc"))
            .collect()
    }

    /// True when one block of `split` is a contiguous arc of this ordering.
    pub fn is_circular_split(&self, split: &Split) -> bool {
        if split.n() != self.n() {
            return false;
        }
        let side = split.block_with_zero();
        let boundaries = self
            .edges()
            .filter(|&(a, b)| side.contains(a) != side.contains(b))
            .count();
        boundaries == 2
    }

    pub fn is_circular_system<'a>(&self, splits: impl IntoIterator<Item = &'a Split>) -> bool {
        splits.into_iter().all(|s| self.is_circular_split(s))
    }

    /// Applies a relabeling: taxon `t` becomes `map[t]`.
    pub fn relabeled(&self, map: &[usize]) -> Result<Self> {
        check_permutation(map, self.n())?;
        Self::new(self.order.iter().map(|&t| map[t]).collect())
    }
}

impl fmt::Debug for CircularOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.order)
    }
}

/// Free-function form of [`CircularOrdering::is_circular_split`].
pub fn is_circular_split(split: &Split, ordering: &CircularOrdering) -> bool {
    ordering.is_circular_split(split)
}

/// Free-function form of [`CircularOrdering::all_circular_splits`].
pub fn all_circular_splits(ordering: &CircularOrdering) -> Vec<Split> {
    ordering.all_circular_splits()
}

/// Every canonical circular ordering of `0..n`, in lexicographic order.
pub fn canonical_orderings(n: usize) -> Result<CanonicalOrderings> {
    if n < 3 {
        return Err(Error::TooFewTaxa { n, min: 3 });
    }
    Ok(CanonicalOrderings {
        next: Some((0..n).collect()),
    })
}

/// Iterator behind [`canonical_orderings`].
pub struct CanonicalOrderings {
    next: Option<Vec<usize>>,
}

impl Iterator for CanonicalOrderings {
    type Item = CircularOrdering;

    fn next(&mut self) -> Option<CircularOrdering> {
        loop {
            let current = self.next.take()?;
            let mut succ = current.clone();
            if next_permutation(&mut succ[1..]) {
                self.next = Some(succ);
            }
            let n = current.len();
            if current[1] < current[n - 1] {
                return Some(CircularOrdering { order: current });
            }
        }
    }
}

/// Lexicographic successor; returns false at the last permutation.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("pivot exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Joins two paths with the edge `(i, j)`: `a` is oriented to end at `i`,
/// `b` to start at `j`.
pub fn join_paths(a: &[usize], b: &[usize], i: usize, j: usize) -> Result<Vec<usize>> {
    let end_a = path_endpoints(a);
    let end_b = path_endpoints(b);
    if !end_a.contains(&i) || !end_b.contains(&j) {
        return Err(Error::InvalidArgument(format!(
            "({i}, {j}) are not endpoints of {a:?} and {b:?}"
        )));
    }
    let mut joined: Vec<usize> = a.to_vec();
    if joined.last() != Some(&i) {
        joined.reverse();
    }
    if b.first() == Some(&j) {
        joined.extend_from_slice(b);
    } else {
        joined.extend(b.iter().rev());
    }
    Ok(joined)
}

/// Endpoints of a path, ascending; one entry for a singleton.
pub fn path_endpoints(path: &[usize]) -> Vec<usize> {
    match path {
        [] => Vec::new(),
        [x] => vec![*x],
        [first, .., last] => vec![*first.min(last), *first.max(last)],
    }
}

/// A partition of the taxa into directed paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialCircularOrdering {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl PartialCircularOrdering {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewTaxa { n, min: 3 });
        }
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidOrdering("empty block".to_string()));
            }
            for &t in block {
                if t >= n {
                    return Err(Error::IndexOutOfRange { index: t, n });
                }
                if std::mem::replace(&mut seen[t], true) {
                    return Err(Error::InvalidOrdering(format!("taxon {t} appears twice")));
                }
            }
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidOrdering(format!("taxon {t} is missing")));
        }
        Ok(Self { n, blocks })
    }

    /// All taxa as singleton blocks.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|t| vec![t]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn endpoints(&self, r: usize) -> Vec<usize> {
        path_endpoints(&self.blocks[r])
    }

    pub fn block_of(&self) -> Vec<usize> {
        let mut owner = vec![0; self.n];
        for (r, block) in self.blocks.iter().enumerate() {
            for &t in block {
                owner[t] = r;
            }
        }
        owner
    }

    /// Pairs adjacent inside some block.
    pub fn internal_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.iter().flat_map(|b| b.windows(2).map(|w| (w[0], w[1])))
    }

    /// True when every within-block adjacency is a cycle edge of `ordering`.
    pub fn is_consistent(&self, ordering: &CircularOrdering) -> bool {
        ordering.n() == self.n && self.internal_edges().all(|(a, b)| ordering.are_adjacent(a, b))
    }

    /// Merges blocks `r` and `s` through the edge `(i, j)`.
    pub fn join(&self, r: usize, s: usize, i: usize, j: usize) -> Result<Self> {
        if r == s || r >= self.len() || s >= self.len() {
            return Err(Error::InvalidArgument(format!("cannot join blocks {r} and {s}")));
        }
        let joined = join_paths(&self.blocks[r], &self.blocks[s], i, j)?;
        let mut blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != r && k != s)
            .map(|(_, b)| b.clone())
            .collect();
        blocks.push(joined);
        Self::new(self.n, blocks)
    }

    /// The circular ordering obtained by closing a single block.
    pub fn closed(&self) -> Result<CircularOrdering> {
        match self.blocks.as_slice() {
            [only] => CircularOrdering::new(only.clone()),
            _ => Err(Error::InvalidOrdering(format!(
                "{} blocks remain; closing needs exactly one",
                self.blocks.len()
            ))),
        }
    }

    pub fn block_sets(&self) -> Vec<TaxonSet> {
        self.blocks
            .iter()
            .map(|b| TaxonSet::from_iter(self.n, b.iter().copied()))
            .collect()
    }
}

/// Per-taxon weights `μ` summing to one on every block, positive on endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeWeighting<T = f64> {
    mu: Vec<T>,
}

impl<T: Scalar> NodeWeighting<T> {
    pub fn new(pco: &PartialCircularOrdering, mu: Vec<T>) -> Result<Self> {
        if mu.len() != pco.n() {
            return Err(Error::SizeMismatch {
                expected: pco.n(),
                got: mu.len(),
            });
        }
        if let Some(t) = mu.iter().position(|v| *v < T::zero()) {
            return Err(Error::InvalidWeighting(format!("negative weight on taxon {t}")));
        }
        for (r, block) in pco.blocks().iter().enumerate() {
            let total = sum(block.iter().map(|&t| mu[t].clone()));
            if (total - T::one()).abs() > T::check_tolerance() {
                return Err(Error::InvalidWeighting(format!("block {r} does not sum to one")));
            }
            if pco.endpoints(r).iter().any(|&t| mu[t].is_zero()) {
                return Err(Error::InvalidWeighting(format!(
                    "zero weight on an endpoint of block {r}"
                )));
            }
        }
        Ok(Self { mu })
    }

    /// Weights 1/2 on the two endpoints of a path, 1 on a singleton, 0 inside.
    pub fn balanced_tsp(pco: &PartialCircularOrdering) -> Self {
        let mut mu = vec![T::zero(); pco.n()];
        for r in 0..pco.len() {
            let ends = pco.endpoints(r);
            let w = T::one() / T::from_i64(ends.len() as i64);
            for t in ends {
                mu[t] = w.clone();
            }
        }
        Self { mu }
    }

    pub fn get(&self, t: usize) -> &T {
        &self.mu[t]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.mu
    }

    pub fn into_vec(self) -> Vec<T> {
        self.mu
    }
}
