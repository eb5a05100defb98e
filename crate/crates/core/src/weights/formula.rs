use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::ordering::CircularOrdering;
use crate::scalar::Scalar;
use crate::split::{Split, WeightedSplitSystem};

/// Split weights that may still be negative.
pub type SplitWeights<T> = Vec<(Split, T)>;

/// Closed-form weight of every circular split of `ordering`.
///
/// For the arc of positions `a..=b` (indices mod `n`),
/// `λ = (d(x_{a-1},x_b) + d(x_a,x_{b+1}) - d(x_a,x_b) - d(x_{a-1},x_{b+1})) / 2`,
/// which inverts `metric_from_splits` on metrics circular for `ordering`.
pub fn lambda_formula<T: Scalar>(d: &DissimilarityMap<T>, ordering: &CircularOrdering) -> Result<SplitWeights<T>> {
    let n = d.n();
    if n < 4 {
        return Err(Error::TooFewTaxa { n, min: 4 });
    }
    if ordering.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: ordering.n(),
        });
    }
    let x = |k: usize| ordering.at(k);
    let half = T::from_ratio(1, 2);
    ordering
        .arc_ranges()
        .map(|(a, b)| {
            let before = x(a + n - 1);
            let after = x(b + 1);
            let v = d.get(before, x(b)).clone() + d.get(x(a), after).clone()
                - d.get(x(a), x(b)).clone()
                - d.get(before, after).clone();
            Ok((ordering.arc_split(a, b)?, half.clone() * v))
        })
        .collect()
}

/// Replaces negative weights by zero.
pub fn clamp_nonnegative<T: Scalar>(weights: &[(Split, T)]) -> Result<WeightedSplitSystem<T>> {
    let n = weights
        .first()
        .map(|(s, _)| s.n())
        .ok_or_else(|| Error::InvalidSplitSystem("no splits to clamp".to_string()))?;
    WeightedSplitSystem::new(
        n,
        weights
            .iter()
            .map(|(s, w)| (s.clone(), T::max_of(w.clone(), T::zero())))
            .collect(),
    )
}
