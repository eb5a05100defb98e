use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordering::path_endpoints;
use crate::scalar::{sum, Scalar};

use super::state::{Block, SubBlock};

/// How node weights are reassigned when two blocks merge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightingScheme {
    /// Endpoints of a path share weight 1/2, a singleton has weight 1,
    /// interior taxa get 0.
    BalancedTsp,
    /// `μ' = α μ` on the first block of the pair, `(1 - α) μ` on the second.
    /// The first block is the one holding the smaller taxon.
    Tree { alpha: f64 },
    /// The quarter/half/quarter reweighting of the original neighbor-net
    /// implementation.
    OriginalBm,
}

impl WeightingScheme {
    /// The tree weighting with `α = 1/2` at every step.
    pub const BALANCED_TREE: WeightingScheme = WeightingScheme::Tree { alpha: 0.5 };

    pub fn tree(alpha: f64) -> Result<Self> {
        let scheme = WeightingScheme::Tree { alpha };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightingScheme::Tree { alpha } if !(0.0..=1.0).contains(&alpha) => Err(Error::InvalidWeighting(format!(
                "tree parameter {alpha} outside [0, 1]"
            ))),
            _ => Ok(()),
        }
    }
}

/// New weights for the taxa of `first ∪ second`, joined through `(i, j)`
/// with `i` in `first` and `j` in `second`.
pub(crate) fn adjust_weights<T: Scalar>(
    scheme: &WeightingScheme,
    first: &Block<T>,
    second: &Block<T>,
    i: usize,
    j: usize,
    mu: &[T],
) -> Result<Vec<(usize, T)>> {
    scheme.validate()?;
    let (lo, hi) = if first.min_taxon < second.min_taxon {
        (first, second)
    } else {
        (second, first)
    };
    match *scheme {
        WeightingScheme::BalancedTsp => {
            let mut path = first.path.clone();
            path.extend_from_slice(&second.path);
            // After joining, the far ends of the two paths are the endpoints.
            let far = |b: &Block<T>, e: usize| {
                let ends = path_endpoints(&b.path);
                if ends.len() == 1 {
                    e
                } else if ends[0] == e {
                    ends[1]
                } else {
                    ends[0]
                }
            };
            let ends = [far(first, i), far(second, j)];
            let half = T::from_ratio(1, 2);
            Ok(path
                .into_iter()
                .map(|t| {
                    let w = if ends.contains(&t) { half.clone() } else { T::zero() };
                    (t, w)
                })
                .collect())
        }
        WeightingScheme::Tree { alpha } => {
            let a = T::from_f64(alpha);
            let b = T::one() - a.clone();
            let mut out: Vec<(usize, T)> = lo.path.iter().map(|&t| (t, a.clone() * mu[t].clone())).collect();
            out.extend(hi.path.iter().map(|&t| (t, b.clone() * mu[t].clone())));
            Ok(out)
        }
        WeightingScheme::OriginalBm => {
            let join_end = |b: &Block<T>| if b.path.contains(&i) { i } else { j };
            let current = |b: &Block<T>| -> SubBlock<T> {
                SubBlock {
                    members: b.path.clone(),
                    weights: b.path.iter().map(|&t| mu[t].clone()).collect(),
                }
            };
            match (lo.parts.as_deref(), hi.parts.as_deref()) {
                (None, None) => {
                    let half = T::from_ratio(1, 2);
                    Ok(vec![(lo.path[0], half.clone()), (hi.path[0], half)])
                }
                (Some(parts), None) => Ok(quarter_half_quarter(parts, join_end(lo), &current(hi))),
                (None, Some(parts)) => Ok(quarter_half_quarter(parts, join_end(hi), &current(lo))),
                (Some(lo_parts), Some(hi_parts)) => {
                    // Compound on both sides: reweight around the block with the
                    // smaller taxon first, then around the other one.
                    let first_pass = quarter_half_quarter(lo_parts, join_end(lo), &current(hi));
                    let lo_weights: Vec<(usize, T)> =
                        first_pass.into_iter().filter(|(t, _)| lo.path.contains(t)).collect();
                    let total = sum(lo_weights.iter().map(|(_, w)| w.clone()));
                    let atom = SubBlock {
                        members: lo_weights.iter().map(|(t, _)| *t).collect(),
                        weights: lo_weights.iter().map(|(_, w)| w.clone() / total.clone()).collect(),
                    };
                    Ok(quarter_half_quarter(hi_parts, join_end(hi), &atom))
                }
            }
        }
    }
}

/// The part of a compound block touching the join gets 1/2 of its weights,
/// the far part 1/4, and the block joined to it 1/4.
fn quarter_half_quarter<T: Scalar>(parts: &[SubBlock<T>; 2], join_end: usize, atom: &SubBlock<T>) -> Vec<(usize, T)> {
    let (middle, outer) = if parts[0].members.contains(&join_end) {
        (&parts[0], &parts[1])
    } else {
        (&parts[1], &parts[0])
    };
    let quarter = T::from_ratio(1, 4);
    let half = T::from_ratio(1, 2);
    let scaled = |p: &SubBlock<T>, f: &T| -> Vec<(usize, T)> {
        p.members
            .iter()
            .zip(&p.weights)
            .map(|(&t, w)| (t, f.clone() * w.clone()))
            .collect::<Vec<_>>()
    };
    let mut out = scaled(outer, &quarter);
    out.extend(scaled(middle, &half));
    out.extend(scaled(atom, &quarter));
    out
}
