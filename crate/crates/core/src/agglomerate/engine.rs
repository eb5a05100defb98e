use serde::{Deserialize, Serialize};

use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::ordering::CircularOrdering;
use crate::scalar::Scalar;
use crate::split::{Split, TaxonSet};

use super::state::BlockDistanceState;
use super::weighting::WeightingScheme;

/// How the join between the two selected blocks is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointRule {
    /// Pick the join that minimizes the balanced length of the resulting
    /// partial ordering ([`BlockDistanceState::endpoint_length_criterion`]).
    #[default]
    MinimizeLength,
    /// Pick the join minimizing the reduced Q-criterion over endpoints with
    /// raw within-pair sums ([`BlockDistanceState::q_hat_criterion`]).
    ReducedQ,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeighborNetOptions {
    pub scheme: WeightingScheme,
    pub endpoint_rule: EndpointRule,
}

impl NeighborNetOptions {
    pub fn new(scheme: WeightingScheme) -> Self {
        Self {
            scheme,
            endpoint_rule: EndpointRule::default(),
        }
    }

    pub fn with_endpoint_rule(mut self, rule: EndpointRule) -> Self {
        self.endpoint_rule = rule;
        self
    }
}

/// One agglomeration step.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep<T> {
    pub step: usize,
    /// Block count before the merge.
    pub blocks_before: usize,
    /// Paths of the two selected blocks, the one holding the smaller taxon first.
    pub first_block: Vec<usize>,
    pub second_block: Vec<usize>,
    pub q_value: T,
    pub i: usize,
    pub j: usize,
    /// The reduced Q-criterion at the chosen join.
    pub q_hat: T,
    /// The value of the active endpoint rule at the chosen join.
    pub endpoint_score: T,
    pub merged_path: Vec<usize>,
    /// `None` for the final merge, whose complement is empty.
    pub split: Option<Split>,
    pub mu: Vec<T>,
}

pub type AgglomerationTrace<T> = Vec<TraceStep<T>>;

#[derive(Clone, Debug, PartialEq)]
pub struct NeighborNetResult<T = f64> {
    pub ordering: CircularOrdering,
    /// Distinct nontrivial splits added by the tree construction steps: the
    /// `n - 3` interior edges of a binary tree.
    pub tree_splits: Vec<Split>,
    pub trace: AgglomerationTrace<T>,
}

/// Runs neighbor-net with the default endpoint rule.
pub fn run_neighbor_net<T: Scalar>(d: &DissimilarityMap<T>, scheme: WeightingScheme) -> Result<NeighborNetResult<T>> {
    run_neighbor_net_with(d, &NeighborNetOptions::new(scheme))
}

/// Index of the first strict minimum: later candidates replace the incumbent
/// only when definitely smaller.
fn argmin<T: Scalar, K: Copy>(candidates: impl IntoIterator<Item = (K, T)>) -> Option<(K, T)> {
    let mut best: Option<(K, T)> = None;
    for (key, value) in candidates {
        match &best {
            Some((_, incumbent)) if !value.definitely_less(incumbent) => {}
            _ => best = Some((key, value)),
        }
    }
    best
}

pub fn run_neighbor_net_with<T: Scalar>(
    d: &DissimilarityMap<T>,
    options: &NeighborNetOptions,
) -> Result<NeighborNetResult<T>> {
    let n = d.n();
    if n < 3 {
        return Err(Error::TooFewTaxa { n, min: 3 });
    }
    options.scheme.validate()?;
    let mut state = BlockDistanceState::new(d);
    let mut trace = Vec::with_capacity(n - 1);
    let mut tree_splits: Vec<Split> = Vec::with_capacity(n - 2);

    while state.m() > 1 {
        let m = state.m();
        let q_values = state.q_values();
        let (best_pair, _) = argmin(q_values.iter().map(|(r, s, q)| ((*r, *s), q.clone())))
            .ok_or_else(|| Error::Invariant("no block pair to compare".to_string()))?;
        // With three blocks Q is the same for every pair, so the pair is
        // chosen together with the join by the endpoint rule.
        let pairs: Vec<(usize, usize)> = if m == 3 {
            q_values.iter().map(|(r, s, _)| (*r, *s)).collect()
        } else {
            vec![best_pair]
        };

        let mut candidates = Vec::new();
        for &(r, s) in &pairs {
            for &i in &state.endpoints(r) {
                for &j in &state.endpoints(s) {
                    let score = match options.endpoint_rule {
                        EndpointRule::MinimizeLength => state.endpoint_length_criterion(r, s, i, j)?,
                        EndpointRule::ReducedQ => state.q_hat_criterion(r, s, i, j)?,
                    };
                    candidates.push(((r, s, i, j), score));
                }
            }
        }
        let ((r, s, i, j), endpoint_score) =
            argmin(candidates).ok_or_else(|| Error::Invariant("no endpoint pair to compare".to_string()))?;
        let q_value = q_values
            .iter()
            .find(|(a, b, _)| (*a, *b) == (r, s))
            .map(|(_, _, q)| q.clone())
            .ok_or_else(|| Error::Invariant("chosen pair has no Q value".to_string()))?;
        let q_hat = state.q_hat_criterion(r, s, i, j)?;
        let first_block = state.path(r).to_vec();
        let second_block = state.path(s).to_vec();

        let outcome = state.merge(r, s, i, j, &options.scheme)?;
        let split = if m > 2 {
            let split = Split::from_set(n, TaxonSet::from_iter(n, outcome.path.iter().copied()))?;
            // The split added with three blocks left is trivial or repeats an
            // earlier one.
            if !split.is_trivial() && !tree_splits.contains(&split) {
                tree_splits.push(split.clone());
            }
            Some(split)
        } else {
            None
        };
        trace.push(TraceStep {
            step: trace.len(),
            blocks_before: m,
            first_block,
            second_block,
            q_value,
            i,
            j,
            q_hat,
            endpoint_score,
            merged_path: outcome.path,
            split,
            mu: state.mu().to_vec(),
        });
    }

    let ordering = state.partial_ordering().closed()?;
    Ok(NeighborNetResult {
        ordering,
        tree_splits,
        trace,
    })
}
