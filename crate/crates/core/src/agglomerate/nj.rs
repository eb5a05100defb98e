//! Plain neighbor-joining, kept separate from the neighbor-net engine so the
//! two can be compared.

use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::split::{Split, TaxonSet};

/// Clusters merged by neighbor-joining, in merge order.
#[derive(Clone, Debug, PartialEq)]
pub struct NjResult {
    /// Distinct nontrivial clade splits.
    pub splits: Vec<Split>,
    /// `(first, second)` cluster memberships for every join.
    pub joins: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone)]
struct Cluster {
    members: Vec<usize>,
    min_taxon: usize,
}

/// Neighbor-joining with the agglomeration parameter `alpha`.
///
/// Joined clusters `a`, `b` become a node `u` with branch lengths
/// `b_a = d(a,b)/2 + (R_a - R_b)/(2(m-2))`, `b_b = d(a,b) - b_a`, and
/// `d(u,k) = α (d(a,k) - b_a) + (1-α)(d(b,k) - b_b)`. `α` applies to the
/// cluster holding the smaller taxon. Ties in Q go to the pair whose
/// minimum taxa are lexicographically smallest.
pub fn neighbor_joining<T: Scalar>(d: &DissimilarityMap<T>, alpha: f64) -> Result<NjResult> {
    let n = d.n();
    if n < 3 {
        return Err(Error::TooFewTaxa { n, min: 3 });
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    let alpha = T::from_f64(alpha);
    let mut clusters: Vec<Cluster> = (0..n)
        .map(|t| Cluster {
            members: vec![t],
            min_taxon: t,
        })
        .collect();
    let mut dist: Vec<Vec<T>> = (0..n).map(|i| d.row(i).to_vec()).collect();
    let mut splits: Vec<Split> = Vec::new();
    let mut joins = Vec::new();

    while clusters.len() > 1 {
        let m = clusters.len();
        // Visit pairs in lexicographic order of minimum taxa.
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&k| clusters[k].min_taxon);
        let totals: Vec<T> = (0..m)
            .map(|a| dist[a].iter().fold(T::zero(), |acc, v| acc + v.clone()))
            .collect();
        let mut best: Option<(usize, usize, T)> = None;
        for (x, &a) in order.iter().enumerate() {
            for &b in &order[x + 1..] {
                let q = T::from_i64(m as i64 - 2) * dist[a][b].clone() - totals[a].clone() - totals[b].clone();
                if best
                    .as_ref()
                    .is_none_or(|(_, _, incumbent)| q.definitely_less(incumbent))
                {
                    best = Some((a, b, q));
                }
            }
        }
        let (a, b, _) = best.expect("at least one pair");

        let mut members = clusters[a].members.clone();
        members.extend_from_slice(&clusters[b].members);
        members.sort_unstable();
        joins.push((clusters[a].members.clone(), clusters[b].members.clone()));
        if m > 2 {
            let split = Split::from_set(n, TaxonSet::from_iter(n, members.iter().copied()))?;
            if !split.is_trivial() && !splits.contains(&split) {
                splits.push(split);
            }
        }
        if m == 2 {
            break;
        }

        let dab = dist[a][b].clone();
        let branch_a =
            dab.clone() / T::from_i64(2) + (totals[a].clone() - totals[b].clone()) / T::from_i64(2 * (m as i64 - 2));
        let branch_b = dab - branch_a.clone();
        let beta = T::one() - alpha.clone();
        let new_row: Vec<T> = (0..m)
            .map(|k| {
                if k == a || k == b {
                    T::zero()
                } else {
                    alpha.clone() * (dist[a][k].clone() - branch_a.clone())
                        + beta.clone() * (dist[b][k].clone() - branch_b.clone())
                }
            })
            .collect();

        // `a` holds the smaller taxon; the new node takes its slot.
        for k in 0..m {
            dist[a][k] = new_row[k].clone();
            dist[k][a] = new_row[k].clone();
        }
        dist[a][a] = T::zero();
        clusters[a] = Cluster {
            min_taxon: clusters[a].min_taxon.min(clusters[b].min_taxon),
            members,
        };
        clusters.remove(b);
        dist.remove(b);
        for row in &mut dist {
            row.remove(b);
        }
    }
    Ok(NjResult { splits, joins })
}
