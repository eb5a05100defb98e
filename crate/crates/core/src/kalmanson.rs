//! Kalmanson and four-point conditions, strict quartets, and recovery of
//! circular orderings under bounded noise.

use std::collections::BTreeSet;

use crate::agglomerate::{run_neighbor_net, WeightingScheme};
use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::ordering::{canonical_orderings, CircularOrdering};
use crate::scalar::Scalar;
use crate::split::{metric_from_splits, WeightedSplitSystem};

/// A quartet `ab|cd`, stored with `a < b`, `c < d` and `a < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quartet {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

impl Quartet {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        let p = (a.min(b), a.max(b));
        let q = (c.min(d), c.max(d));
        if p < q {
            Self { left: p, right: q }
        } else {
            Self { left: q, right: p }
        }
    }
}

/// Quartets relative to a fixed circular ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuartetSet {
    pub ordering: CircularOrdering,
    pub quartets: BTreeSet<Quartet>,
}

impl QuartetSet {
    pub fn len(&self) -> usize {
        self.quartets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quartets.is_empty()
    }

    pub fn contains(&self, q: &Quartet) -> bool {
        self.quartets.contains(q)
    }

    pub fn is_subset(&self, other: &QuartetSet) -> bool {
        self.quartets.is_subset(&other.quartets)
    }
}

/// A quadruple at positions `i < j < k < l` of an ordering whose Kalmanson
/// inequalities fail, with the three pair sums
/// `[d(x_i,x_j)+d(x_k,x_l), d(x_i,x_l)+d(x_j,x_k), d(x_i,x_k)+d(x_j,x_l)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation<T> {
    pub taxa: [usize; 4],
    pub sums: [T; 3],
}

fn check_n<T: Scalar>(d: &DissimilarityMap<T>, ordering: &CircularOrdering) -> Result<()> {
    if d.n() != ordering.n() {
        return Err(Error::SizeMismatch {
            expected: d.n(),
            got: ordering.n(),
        });
    }
    Ok(())
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |i| {
        ((i + 1)..n).flat_map(move |j| ((j + 1)..n).flat_map(move |k| ((k + 1)..n).map(move |l| [i, j, k, l])))
    })
}

/// Pair sums for taxa `a, b, c, d` in cyclic order: the two sides, the
/// other two sides, and the diagonals.
fn pair_sums<T: Scalar>(d: &DissimilarityMap<T>, [a, b, c, e]: [usize; 4]) -> [T; 3] {
    [
        d.get(a, b).clone() + d.get(c, e).clone(),
        d.get(a, e).clone() + d.get(b, c).clone(),
        d.get(a, c).clone() + d.get(b, e).clone(),
    ]
}

/// First quadruple of positions breaking the Kalmanson conditions by more
/// than `tol`.
pub fn first_kalmanson_violation<T: Scalar>(
    d: &DissimilarityMap<T>,
    ordering: &CircularOrdering,
    tol: &T,
) -> Result<Option<Violation<T>>> {
    check_n(d, ordering)?;
    for pos in quadruples(d.n()) {
        let taxa = pos.map(|p| ordering.at(p));
        let sums = pair_sums(d, taxa);
        let bound = sums[2].clone() + tol.clone();
        if sums[0] > bound || sums[1] > bound {
            return Ok(Some(Violation { taxa, sums }));
        }
    }
    Ok(None)
}

/// Both Kalmanson inequalities hold within `tol` for every quadruple of
/// positions `i < j < k < l`.
pub fn is_kalmanson<T: Scalar>(d: &DissimilarityMap<T>, ordering: &CircularOrdering, tol: &T) -> bool {
    matches!(first_kalmanson_violation(d, ordering, tol), Ok(None))
}

/// First quadruple of taxa whose largest pair sum is attained only once
/// (beyond `tol`).
pub fn first_four_point_violation<T: Scalar>(d: &DissimilarityMap<T>, tol: &T) -> Option<Violation<T>> {
    for taxa in quadruples(d.n()) {
        let sums = pair_sums(d, taxa);
        let mut sorted = sums.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("comparable sums"));
        if sorted[2] > sorted[1].clone() + tol.clone() {
            return Some(Violation { taxa, sums });
        }
    }
    None
}

pub fn satisfies_four_point<T: Scalar>(d: &DissimilarityMap<T>, tol: &T) -> bool {
    first_four_point_violation(d, tol).is_none()
}

/// Every quartet compatible with `ordering`: for positions `i < j < k < l`,
/// `x_i x_j | x_k x_l` and `x_i x_l | x_j x_k`.
pub fn circular_quartets(ordering: &CircularOrdering) -> QuartetSet {
    let mut quartets = BTreeSet::new();
    for pos in quadruples(ordering.n()) {
        let [a, b, c, e] = pos.map(|p| ordering.at(p));
        quartets.insert(Quartet::new(a, b, c, e));
        quartets.insert(Quartet::new(a, e, b, c));
    }
    QuartetSet {
        ordering: ordering.clone(),
        quartets,
    }
}

/// The quartets whose Kalmanson inequality is strict by more than `tol`.
pub fn strict_quartets<T: Scalar>(d: &DissimilarityMap<T>, ordering: &CircularOrdering, tol: &T) -> Result<QuartetSet> {
    if let Some(v) = first_kalmanson_violation(d, ordering, tol)? {
        return Err(Error::InvalidDissimilarity(format!(
            "not Kalmanson for {ordering:?}: quadruple {:?} breaks the conditions",
            v.taxa
        )));
    }
    let mut quartets = BTreeSet::new();
    for pos in quadruples(d.n()) {
        let taxa = pos.map(|p| ordering.at(p));
        let [a, b, c, e] = taxa;
        let sums = pair_sums(d, taxa);
        let bound = sums[2].clone() - tol.clone();
        if sums[0] < bound {
            quartets.insert(Quartet::new(a, b, c, e));
        }
        if sums[1] < bound {
            quartets.insert(Quartet::new(a, e, b, c));
        }
    }
    Ok(QuartetSet {
        ordering: ordering.clone(),
        quartets,
    })
}

/// Quartets separated by some split of positive weight.
pub fn separated_quartets<T: Scalar>(sys: &WeightedSplitSystem<T>) -> BTreeSet<Quartet> {
    let mut out = BTreeSet::new();
    let positive: Vec<_> = sys
        .entries()
        .iter()
        .filter(|(_, w)| *w > T::zero())
        .map(|(s, _)| s)
        .collect();
    for [a, b, c, e] in quadruples(sys.n()) {
        for q in [
            Quartet::new(a, b, c, e),
            Quartet::new(a, c, b, e),
            Quartet::new(a, e, b, c),
        ] {
            let (l, r) = (q.left, q.right);
            if positive.iter().any(|s| s.separates_pairs(l.0, l.1, r.0, r.1)) {
                out.insert(q);
            }
        }
    }
    out
}

/// The first canonical ordering for which `d` is Kalmanson, by exhaustive search.
pub fn find_kalmanson_ordering_exhaustive<T: Scalar>(
    d: &DissimilarityMap<T>,
    tol: &T,
) -> Result<Option<CircularOrdering>> {
    Ok(canonical_orderings(d.n())?.find(|o| is_kalmanson(d, o, tol)))
}

/// Runs neighbor-net and returns its ordering when `d` is Kalmanson for it.
/// Sound but incomplete: `None` does not prove that no ordering exists.
pub fn find_kalmanson_ordering<T: Scalar>(d: &DissimilarityMap<T>, tol: &T) -> Result<Option<CircularOrdering>> {
    let ordering = run_neighbor_net(d, WeightingScheme::BalancedTsp)?.ordering;
    Ok(is_kalmanson(d, &ordering, tol).then_some(ordering))
}

/// A symmetric perturbation with zero diagonal; entries may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct Noise<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Noise<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    /// Mirrors `f(i, j)` for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut noise = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                noise.data[i * n + j] = v.clone();
                noise.data[j * n + i] = v;
            }
        }
        noise
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn sup_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| T::max_of(acc, v.abs()))
    }

    /// `d + noise`; fails when an entry turns negative.
    pub fn apply(&self, d: &DissimilarityMap<T>) -> Result<DissimilarityMap<T>> {
        if d.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: d.n(),
                got: self.n,
            });
        }
        DissimilarityMap::from_fn(self.n, |i, j| d.get(i, j).clone() + self.get(i, j).clone())
    }
}

/// Perturbs the metric of `sys` by `noise`, runs neighbor-net and reports
/// whether every split of `sys` is circular for the resulting ordering.
///
/// Requires all weights positive and `‖noise‖∞ < min λ / 2`.
pub fn radius_perturbation_check<T: Scalar>(sys: &WeightedSplitSystem<T>, noise: &Noise<T>) -> Result<bool> {
    let epsilon = sys
        .min_weight()
        .ok_or_else(|| Error::InvalidArgument("empty split system".to_string()))?;
    if epsilon <= T::zero() {
        return Err(Error::InvalidArgument("split weights must be positive".to_string()));
    }
    if noise.sup_norm() * T::from_i64(2) >= epsilon {
        return Err(Error::InvalidArgument(format!(
            "noise {} is not below half the smallest weight {}",
            noise.sup_norm(),
            epsilon
        )));
    }
    let d = noise.apply(&metric_from_splits(sys))?;
    let ordering = run_neighbor_net(&d, WeightingScheme::BalancedTsp)?.ordering;
    Ok(ordering.is_circular_system(sys.splits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::split::Split;

    #[test]
    fn zero_map_is_kalmanson_everywhere() {
        let d = DissimilarityMap::<f64>::zeros(5);
        for o in canonical_orderings(5).unwrap() {
            assert!(is_kalmanson(&d, &o, &0.0));
        }
        assert!(strict_quartets(&d, &CircularOrdering::identity(5).unwrap(), &0.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn crossing_diagonals_break_kalmanson() {
        // Short diagonals 0-2 and 1-3 on the square 0,1,2,3.
        let d = DissimilarityMap::from_rows(vec![
            vec![0.0, 2.0, 1.0, 2.0],
            vec![2.0, 0.0, 2.0, 1.0],
            vec![1.0, 2.0, 0.0, 2.0],
            vec![2.0, 1.0, 2.0, 0.0],
        ])
        .unwrap();
        let o = CircularOrdering::identity(4).unwrap();
        assert!(!is_kalmanson(&d, &o, &0.0));
        assert!(first_kalmanson_violation(&d, &o, &0.0).unwrap().is_some());
        assert!(strict_quartets(&d, &o, &0.0).is_err());
    }

    #[test]
    fn four_point_on_equilateral_and_crossing_splits() {
        let ones = DissimilarityMap::from_fn(4, |_, _| 1.0).unwrap();
        assert!(satisfies_four_point(&ones, &0.0));
        let sys = WeightedSplitSystem::new(
            4,
            vec![
                (Split::new(4, [0, 1]).unwrap(), 1.0),
                (Split::new(4, [1, 2]).unwrap(), 1.0),
            ],
        )
        .unwrap();
        assert!(!satisfies_four_point(&metric_from_splits(&sys), &0.0));
    }

    #[test]
    fn single_split_gives_exactly_its_quartets() {
        let o = CircularOrdering::identity(6).unwrap();
        let split = o.arc_split(2, 4).unwrap();
        let sys = WeightedSplitSystem::new(6, vec![(split, Rational::from_i64(3))]).unwrap();
        let d = metric_from_splits(&sys);
        let strict = strict_quartets(&d, &o, &Rational::from_i64(0)).unwrap();
        assert_eq!(strict.quartets, separated_quartets(&sys));
        assert!(strict.is_subset(&circular_quartets(&o)));
    }

    #[test]
    fn zero_noise_recovers() {
        let o = CircularOrdering::new(vec![0, 2, 4, 1, 3]).unwrap();
        let sys = WeightedSplitSystem::new(5, o.all_circular_splits().into_iter().map(|s| (s, 1.0)).collect()).unwrap();
        assert!(radius_perturbation_check(&sys, &Noise::zeros(5)).unwrap());
        let loud = Noise::from_fn(5, |_, _| 0.6);
        assert!(radius_perturbation_check(&sys, &loud).is_err());
    }
}
