//! Balanced length of a dissimilarity map over the circular orderings
//! consistent with a partial ordering or a split system, with brute-force
//! enumerators for checking closed forms.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::agglomerate::BlockDistanceState;
use crate::counting::factorial;
use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::ordering::{canonical_orderings, CircularOrdering, PartialCircularOrdering};
use crate::scalar::{sum, Scalar};
use crate::split::Split;

/// Default bound on the number of orderings an enumerator may visit.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// `|o(C)| = (m-1)! Π|Ĉ_r| / 2`, or 1 when a single block remains.
pub fn count_consistent_orderings(pco: &PartialCircularOrdering) -> BigUint {
    let m = pco.len();
    if m <= 1 {
        return BigUint::from(1u32);
    }
    let ends: BigUint = (0..m).map(|r| BigUint::from(pco.endpoints(r).len())).product();
    factorial(m as u64 - 1) * ends / BigUint::from(2u32)
}

fn check_cap(count: &BigUint, cap: usize) -> Result<usize> {
    match count.to_usize() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::CapExceeded {
            count: count.to_string(),
            cap,
        }),
    }
}

/// Every canonical circular ordering consistent with `pco`, sorted.
pub fn enumerate_consistent_orderings(pco: &PartialCircularOrdering, cap: usize) -> Result<Vec<CircularOrdering>> {
    check_cap(&count_consistent_orderings(pco), cap)?;
    let blocks = pco.blocks();
    let m = blocks.len();
    if m == 1 {
        return Ok(vec![CircularOrdering::new(blocks[0].clone())?]);
    }
    // Block 0 keeps its orientation; the rest are permuted and flipped.
    let mut found = BTreeSet::new();
    let mut rest: Vec<usize> = (1..m).collect();
    loop {
        let flippable: Vec<usize> = rest.iter().copied().filter(|&r| blocks[r].len() > 1).collect();
        for mask in 0u64..(1u64 << flippable.len()) {
            let mut order = blocks[0].clone();
            for &r in &rest {
                let flip = flippable
                    .iter()
                    .position(|&f| f == r)
                    .is_some_and(|bit| mask >> bit & 1 == 1);
                if flip {
                    order.extend(blocks[r].iter().rev());
                } else {
                    order.extend_from_slice(&blocks[r]);
                }
            }
            found.insert(CircularOrdering::new(order)?);
        }
        if !crate::ordering::next_permutation(&mut rest) {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

/// Adjacency counts `η(i, j)` over a set of circular orderings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaTable {
    n: usize,
    orderings: u64,
    counts: Vec<u64>,
}

impl EtaTable {
    pub fn from_orderings<'a>(n: usize, orderings: impl IntoIterator<Item = &'a CircularOrdering>) -> Self {
        let mut counts = vec![0u64; n * n];
        let mut total = 0;
        for o in orderings {
            total += 1;
            for (a, b) in o.edges() {
                counts[a * n + b] += 1;
                counts[b * n + a] += 1;
            }
        }
        Self {
            n,
            orderings: total,
            counts,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of orderings counted.
    pub fn orderings(&self) -> u64 {
        self.orderings
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        if i == j {
            0
        } else {
            self.counts[i * self.n + j]
        }
    }

    /// `(1 / 2|o|) Σ_{i<j} η(i,j) d(i,j)`.
    pub fn balanced_length<T: Scalar>(&self, d: &DissimilarityMap<T>) -> Result<T> {
        if d.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: d.n(),
            });
        }
        if self.orderings == 0 {
            return Err(Error::NoConsistentOrdering);
        }
        let total = sum((0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| T::from_i64(self.get(i, j) as i64) * d.get(i, j).clone())));
        Ok(total / T::from_i64(2 * self.orderings as i64))
    }
}

/// η counted over the orderings consistent with `pco`.
pub fn eta_table(pco: &PartialCircularOrdering, cap: usize) -> Result<EtaTable> {
    let orderings = enumerate_consistent_orderings(pco, cap)?;
    Ok(EtaTable::from_orderings(pco.n(), &orderings))
}

/// Orderings consistent with `pco` in which an endpoint of block `r` is
/// adjacent to an endpoint of block `s`.
pub fn enumerate_joined_orderings(
    pco: &PartialCircularOrdering,
    r: usize,
    s: usize,
    cap: usize,
) -> Result<Vec<CircularOrdering>> {
    if r == s || r >= pco.len() || s >= pco.len() {
        return Err(Error::InvalidArgument(format!(
            "blocks ({r}, {s}) are not a valid pair"
        )));
    }
    let (er, es) = (pco.endpoints(r), pco.endpoints(s));
    Ok(enumerate_consistent_orderings(pco, cap)?
        .into_iter()
        .filter(|o| er.iter().any(|&i| es.iter().any(|&j| o.are_adjacent(i, j))))
        .collect())
}

/// η over the orderings in which blocks `r` and `s` are joined, by enumeration.
pub fn eta_table_joined(pco: &PartialCircularOrdering, r: usize, s: usize, cap: usize) -> Result<EtaTable> {
    let orderings = enumerate_joined_orderings(pco, r, s, cap)?;
    Ok(EtaTable::from_orderings(pco.n(), &orderings))
}

/// Closed form of η over the orderings in which blocks `r` and `s` are
/// joined, for the balanced TSP weighting of `pco` and `m >= 3` blocks.
///
/// Returns `|o(C_{r,s})|` and the `n × n` table of counts, row-major.
pub fn eta_joined_closed_form<T: Scalar>(pco: &PartialCircularOrdering, r: usize, s: usize) -> Result<(T, Vec<T>)> {
    let m = pco.len();
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "closed form needs three blocks, got {m}"
        )));
    }
    if r == s || r >= m || s >= m {
        return Err(Error::InvalidArgument(format!(
            "blocks ({r}, {s}) are not a valid pair"
        )));
    }
    let n = pco.n();
    let o = T::from_i64(
        count_consistent_orderings(pco)
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument("ordering count too large".to_string()))?,
    );
    let mu = crate::ordering::NodeWeighting::<T>::balanced_tsp(pco).into_vec();
    let owner = pco.block_of();
    let m1 = T::from_i64(m as i64 - 1);
    let m2 = T::from_i64(m as i64 - 2);
    let two = T::from_i64(2);
    let joined = two.clone() * o.clone() / m1.clone();
    let mut table = vec![T::zero(); n * n];
    for (a, b) in pco.internal_edges() {
        table[a * n + b] = joined.clone();
        table[b * n + a] = joined.clone();
    }
    for i in 0..n {
        for j in 0..n {
            let (bi, bj) = (owner[i], owner[j]);
            if bi == bj {
                continue;
            }
            let w = mu[i].clone() * mu[j].clone();
            let pair = |x: usize, y: usize| (bi == x && bj == y) || (bi == y && bj == x);
            let touches = |x: usize| bi == x || bj == x;
            table[i * n + j] = if pair(r, s) {
                joined.clone() * w
            } else if !touches(r) && !touches(s) {
                two.clone() * joined.clone() * w / m2.clone()
            } else {
                joined.clone() * w / m2.clone()
            };
        }
    }
    Ok((joined, table))
}

/// Average half tour length over the orderings consistent with `pco`.
pub fn balanced_length<T: Scalar>(d: &DissimilarityMap<T>, pco: &PartialCircularOrdering, cap: usize) -> Result<T> {
    check_sizes(d, pco.n())?;
    let orderings = enumerate_consistent_orderings(pco, cap)?;
    mean_half_tour(d, &orderings)
}

/// Average half tour length over the orderings in which blocks `r` and `s`
/// are joined.
pub fn joined_balanced_length<T: Scalar>(
    d: &DissimilarityMap<T>,
    pco: &PartialCircularOrdering,
    r: usize,
    s: usize,
    cap: usize,
) -> Result<T> {
    check_sizes(d, pco.n())?;
    mean_half_tour(d, &enumerate_joined_orderings(pco, r, s, cap)?)
}

fn check_sizes<T: Scalar>(d: &DissimilarityMap<T>, n: usize) -> Result<()> {
    if d.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: d.n(),
        });
    }
    Ok(())
}

fn mean_half_tour<T: Scalar>(d: &DissimilarityMap<T>, orderings: &[CircularOrdering]) -> Result<T> {
    if orderings.is_empty() {
        return Err(Error::NoConsistentOrdering);
    }
    let total = sum(orderings.iter().map(|o| crate::tsp::tour_length(d, o)));
    Ok(total / T::from_i64(2 * orderings.len() as i64))
}

/// Decrease in balanced length from joining blocks `r` and `s`:
/// `-(S / (m-1) + Q(r,s) / 2) / (m-2)` with `S` the sum of block distances
/// over all unordered block pairs. Zero when `m <= 3`, since then every
/// consistent ordering already joins the two blocks.
pub fn z_criterion<T: Scalar>(state: &BlockDistanceState<'_, T>, r: usize, s: usize) -> Result<T> {
    let q = state.q_criterion(r, s)?;
    let m = state.m();
    if m <= 3 {
        return Ok(T::zero());
    }
    let total = sum((0..m).flat_map(|t| ((t + 1)..m).map(move |u| state.block_distance(t, u).clone())));
    let m1 = T::from_i64(m as i64 - 1);
    let m2 = T::from_i64(m as i64 - 2);
    Ok(-(total / m1 + q / T::from_i64(2)) / m2)
}

/// The neighborliness `w(C_r C_s : C_t C_u)`.
pub fn neighborliness<T: Scalar>(state: &BlockDistanceState<'_, T>, r: usize, s: usize, t: usize, u: usize) -> T {
    let b = |x: usize, y: usize| state.block_distance(x, y).clone();
    (b(r, t) + b(r, u) + b(s, t) + b(s, u) - T::from_i64(2) * b(r, s) - T::from_i64(2) * b(t, u)) / T::from_i64(2)
}

/// `Σ_{t<u, t,u ∉ {r,s}} w(C_r C_s : C_t C_u)`, which equals
/// `(m-1)(m-2)` times [`z_criterion`].
pub fn neighborliness_sum<T: Scalar>(state: &BlockDistanceState<'_, T>, r: usize, s: usize) -> Result<T> {
    if r == s {
        return Err(Error::InvalidArgument(format!("block pair ({r}, {s}) is not distinct")));
    }
    let others: Vec<usize> = (0..state.m()).filter(|&t| t != r && t != s).collect();
    Ok(sum(others.iter().enumerate().flat_map(|(k, &t)| {
        others[k + 1..].iter().map(move |&u| neighborliness(state, r, s, t, u))
    })))
}

/// Canonical orderings with respect to which every split of `splits` is circular.
pub fn enumerate_split_consistent_orderings(n: usize, splits: &[Split], cap: usize) -> Result<Vec<CircularOrdering>> {
    if let Some(s) = splits.iter().find(|s| s.n() != n) {
        return Err(Error::SizeMismatch {
            expected: n,
            got: s.n(),
        });
    }
    check_cap(&(factorial(n as u64 - 1) / BigUint::from(2u32)), cap)?;
    Ok(canonical_orderings(n)?
        .filter(|o| o.is_circular_system(splits))
        .collect())
}

/// η over the orderings consistent with a split system.
pub fn split_system_eta(n: usize, splits: &[Split], cap: usize) -> Result<EtaTable> {
    let orderings = enumerate_split_consistent_orderings(n, splits, cap)?;
    if orderings.is_empty() {
        return Err(Error::NoConsistentOrdering);
    }
    Ok(EtaTable::from_orderings(n, &orderings))
}

/// Balanced length `(1 / 2|o(S)|) Σ_{i<j} η_S(i,j) d(i,j)` of a split system.
pub fn split_system_length<T: Scalar>(d: &DissimilarityMap<T>, splits: &[Split], cap: usize) -> Result<T> {
    split_system_eta(d.n(), splits, cap)?.balanced_length(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn pco(n: usize, blocks: &[&[usize]]) -> PartialCircularOrdering {
        PartialCircularOrdering::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn filtered(p: &PartialCircularOrdering) -> Vec<CircularOrdering> {
        canonical_orderings(p.n())
            .unwrap()
            .filter(|o| p.is_consistent(o))
            .collect()
    }

    #[test]
    fn counts_match_small_cases() {
        assert_eq!(
            count_consistent_orderings(&PartialCircularOrdering::singletons(4).unwrap()),
            3u32.into()
        );
        assert_eq!(count_consistent_orderings(&pco(4, &[&[0, 1], &[2, 3]])), 2u32.into());
        assert_eq!(count_consistent_orderings(&pco(4, &[&[2, 0, 1, 3]])), 1u32.into());
    }

    #[test]
    fn singletons_enumerate_all_orderings() {
        let all = enumerate_consistent_orderings(&PartialCircularOrdering::singletons(4).unwrap(), 100).unwrap();
        let listed: Vec<&[usize]> = all.iter().map(|o| o.as_slice()).collect();
        assert_eq!(listed, vec![&[0, 1, 2, 3][..], &[0, 1, 3, 2], &[0, 2, 1, 3]]);
    }

    #[test]
    fn four_blocks_of_two_two_one_one_give_twelve() {
        let p = pco(6, &[&[0, 3], &[1, 2], &[4], &[5]]);
        let all = enumerate_consistent_orderings(&p, 100).unwrap();
        assert_eq!(all.len(), 12);
        assert_eq!(all, filtered(&p));
    }

    #[test]
    fn cap_is_enforced() {
        let p = PartialCircularOrdering::singletons(8).unwrap();
        assert!(matches!(
            enumerate_consistent_orderings(&p, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn eta_rows_sum_to_twice_the_count() {
        let p = PartialCircularOrdering::singletons(5).unwrap();
        let eta = eta_table(&p, 1000).unwrap();
        for i in 0..5 {
            let row: u64 = (0..5).map(|j| eta.get(i, j)).sum();
            assert_eq!(row, 2 * eta.orderings());
        }
    }

    #[test]
    fn unit_distances_have_length_half_n() {
        let d = DissimilarityMap::<Rational>::from_fn(6, |_, _| Rational::from_i64(1)).unwrap();
        let p = pco(6, &[&[0, 3, 5], &[1], &[2, 4]]);
        assert_eq!(balanced_length(&d, &p, 1000).unwrap(), Rational::from_i64(3));
    }

    #[test]
    fn single_block_length_is_half_the_tour() {
        let d = DissimilarityMap::from_fn(4, |i, j| (i * 3 + j) as f64).unwrap();
        let p = pco(4, &[&[0, 2, 1, 3]]);
        let o = CircularOrdering::new(vec![0, 2, 1, 3]).unwrap();
        let tour: f64 = o.edges().map(|(a, b)| *d.get(a, b)).sum();
        assert_eq!(balanced_length(&d, &p, 10).unwrap(), tour / 2.0);
    }

    #[test]
    fn split_system_of_a_full_ordering_has_one_consistent_ordering() {
        let o = CircularOrdering::new(vec![0, 3, 1, 4, 2]).unwrap();
        let splits = o.all_circular_splits();
        let found = enumerate_split_consistent_orderings(5, &splits, 100).unwrap();
        assert_eq!(found, vec![o]);
    }

    #[test]
    fn empty_split_system_has_uniform_eta() {
        let eta = split_system_eta(5, &[], 100).unwrap();
        let first = eta.get(0, 1);
        assert!((0..5).all(|i| (0..5).all(|j| i == j || eta.get(i, j) == first)));
    }
}
