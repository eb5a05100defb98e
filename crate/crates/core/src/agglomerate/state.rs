use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::ordering::{join_paths, path_endpoints, NodeWeighting, PartialCircularOrdering};
use crate::scalar::{sum, Scalar};

use super::weighting::{adjust_weights, WeightingScheme};

/// One of the two blocks a compound block was formed from, with the
/// weights it carried (normalized over `members`) at that moment.
#[derive(Clone, Debug)]
pub(crate) struct SubBlock<T> {
    pub members: Vec<usize>,
    pub weights: Vec<T>,
}

#[derive(Clone, Debug)]
pub(crate) struct Block<T> {
    pub path: Vec<usize>,
    pub min_taxon: usize,
    pub parts: Option<Box<[SubBlock<T>; 2]>>,
    /// `δ(x, C)` for every taxon `x`.
    pub to_taxon: Vec<T>,
}

/// Partial circular ordering plus weighting and the block-level distances
///
/// `δ(C_r, C_s) = Σ μ(i) μ(j) δ(i, j)` and `δ(x, C_r) = Σ μ(i) δ(x, i)`.
///
/// Blocks are kept sorted by their smallest taxon; block indices therefore
/// order pairs lexicographically by minimum taxon, which is what the tie
/// rule relies on. Distances are updated incrementally on every merge.
#[derive(Clone, Debug)]
pub struct BlockDistanceState<'a, T: Scalar> {
    d: &'a DissimilarityMap<T>,
    blocks: Vec<Block<T>>,
    mu: Vec<T>,
    between: Vec<Vec<T>>,
}

/// What a merge did, for tracing.
#[derive(Clone, Debug)]
pub struct MergeOutcome {
    /// Index of the merged block after the merge.
    pub index: usize,
    pub path: Vec<usize>,
}

impl<'a, T: Scalar> BlockDistanceState<'a, T> {
    /// All taxa as singleton blocks with unit weight.
    pub fn new(d: &'a DissimilarityMap<T>) -> Self {
        let n = d.n();
        let blocks = (0..n)
            .map(|t| Block {
                path: vec![t],
                min_taxon: t,
                parts: None,
                to_taxon: d.row(t).to_vec(),
            })
            .collect();
        let between = (0..n).map(|i| d.row(i).to_vec()).collect();
        Self {
            d,
            blocks,
            mu: vec![T::one(); n],
            between,
        }
    }

    pub fn dissimilarity(&self) -> &DissimilarityMap<T> {
        self.d
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }

    /// Current block count.
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn path(&self, r: usize) -> &[usize] {
        &self.blocks[r].path
    }

    pub fn endpoints(&self, r: usize) -> Vec<usize> {
        path_endpoints(&self.blocks[r].path)
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn partial_ordering(&self) -> PartialCircularOrdering {
        PartialCircularOrdering::new(self.n(), self.blocks.iter().map(|b| b.path.clone()).collect())
            .expect("blocks partition the taxa")
    }

    pub fn weighting(&self) -> Result<NodeWeighting<T>> {
        NodeWeighting::new(&self.partial_ordering(), self.mu.clone())
    }

    /// `δ(C_r, C_s)`.
    pub fn block_distance(&self, r: usize, s: usize) -> &T {
        &self.between[r][s]
    }

    /// `δ(x, C_r)`.
    pub fn taxon_block_distance(&self, x: usize, r: usize) -> &T {
        &self.blocks[r].to_taxon[x]
    }

    /// `Σ_{t ≠ r} δ(C_r, C_t)`.
    pub fn row_sum(&self, r: usize) -> T {
        sum((0..self.m()).filter(|&t| t != r).map(|t| self.between[r][t].clone()))
    }

    fn check_pair(&self, r: usize, s: usize) -> Result<()> {
        if r == s {
            return Err(Error::InvalidArgument(format!("block pair ({r}, {s}) is not distinct")));
        }
        let m = self.m();
        if r >= m || s >= m {
            return Err(Error::InvalidArgument(format!(
                "block index out of range for {m} blocks"
            )));
        }
        Ok(())
    }

    /// `(m-2) δ(C_r,C_s) - Σ_{t≠r} δ(C_r,C_t) - Σ_{t≠s} δ(C_t,C_s)`.
    pub fn q_criterion(&self, r: usize, s: usize) -> Result<T> {
        self.check_pair(r, s)?;
        let m = T::from_i64(self.m() as i64);
        Ok((m - T::from_i64(2)) * self.between[r][s].clone() - self.row_sum(r) - self.row_sum(s))
    }

    /// Q for every pair `r < s`, in lexicographic order.
    pub fn q_values(&self) -> Vec<(usize, usize, T)> {
        let m = self.m();
        let coeff = T::from_i64(m as i64 - 2);
        let rows: Vec<T> = (0..m).map(|r| self.row_sum(r)).collect();
        let mut out = Vec::with_capacity(m * (m - 1) / 2);
        for r in 0..m {
            for s in (r + 1)..m {
                let q = coeff.clone() * self.between[r][s].clone() - rows[r].clone() - rows[s].clone();
                out.push((r, s, q));
            }
        }
        out
    }

    fn check_endpoints(&self, r: usize, s: usize, i: usize, j: usize) -> Result<()> {
        self.check_pair(r, s)?;
        if !self.endpoints(r).contains(&i) || !self.endpoints(s).contains(&j) {
            return Err(Error::InvalidArgument(format!(
                "taxa ({i}, {j}) are not endpoints of blocks ({r}, {s})"
            )));
        }
        Ok(())
    }

    /// The endpoint criterion
    ///
    /// `(m-4+|Ĉ_r|+|Ĉ_s|) δ(i,j) - Σ_{t≠r,s} δ(i,C_t) - Σ_{t≠r,s} δ(j,C_t)
    ///  - Σ_{k∈(C_r∪C_s)\{i}} δ(i,k) - Σ_{k∈(C_r∪C_s)\{j}} δ(j,k)`,
    ///
    /// with the last two sums over raw taxon distances.
    pub fn q_hat_criterion(&self, r: usize, s: usize, i: usize, j: usize) -> Result<T> {
        self.check_endpoints(r, s, i, j)?;
        let m = self.m() as i64;
        let ends = (self.endpoints(r).len() + self.endpoints(s).len()) as i64;
        let d = self.d;
        let mut q = T::from_i64(m - 4 + ends) * d.get(i, j).clone();
        for t in (0..self.m()).filter(|&t| t != r && t != s) {
            q -= self.blocks[t].to_taxon[i].clone();
            q -= self.blocks[t].to_taxon[j].clone();
        }
        for &k in self.blocks[r].path.iter().chain(&self.blocks[s].path) {
            q -= d.get(i, k).clone();
            q -= d.get(j, k).clone();
        }
        Ok(q)
    }

    /// Balanced length of the partial ordering obtained by joining `i` and
    /// `j`, up to terms that do not depend on the choice of endpoints.
    ///
    /// With `i'`, `j'` the far ends of the two paths and `e(x, C_t)` the mean
    /// distance from `x` to the endpoints of `C_t`, this is
    /// `(m-2) δ(i,j) + Σ_{t≠r,s} (e(i',C_t) + e(j',C_t))` for `m >= 3`, and
    /// `δ(i,j) + δ(i',j')` when the join closes the last two blocks.
    pub fn endpoint_length_criterion(&self, r: usize, s: usize, i: usize, j: usize) -> Result<T> {
        self.check_endpoints(r, s, i, j)?;
        let far = |block: &Block<T>, end: usize| -> usize {
            let path = &block.path;
            if path[0] == end {
                path[path.len() - 1]
            } else {
                path[0]
            }
        };
        let fi = far(&self.blocks[r], i);
        let fj = far(&self.blocks[s], j);
        let d = self.d;
        let m = self.m();
        if m == 2 {
            return Ok(d.get(i, j).clone() + d.get(fi, fj).clone());
        }
        let mut score = T::from_i64(m as i64 - 2) * d.get(i, j).clone();
        for t in (0..m).filter(|&t| t != r && t != s) {
            let ends = self.endpoints(t);
            let k = T::from_i64(ends.len() as i64);
            let e_i = sum(ends.iter().map(|&e| d.get(fi, e).clone()));
            let e_j = sum(ends.iter().map(|&e| d.get(fj, e).clone()));
            score += (e_i + e_j) / k;
        }
        Ok(score)
    }

    /// Joins blocks `r` and `s` through the edge `(i, j)` and reweights the
    /// merged block according to `scheme`.
    pub fn merge(&mut self, r: usize, s: usize, i: usize, j: usize, scheme: &WeightingScheme) -> Result<MergeOutcome> {
        self.check_endpoints(r, s, i, j)?;
        let (lo, hi) = if r < s { (r, s) } else { (s, r) };
        let path = join_paths(&self.blocks[r].path, &self.blocks[s].path, i, j)?;
        let new_mu = adjust_weights(scheme, &self.blocks[r], &self.blocks[s], i, j, &self.mu)?;
        let parts = [r, s].map(|b| {
            let block = &self.blocks[b];
            SubBlock {
                members: block.path.clone(),
                weights: block.path.iter().map(|&t| self.mu[t].clone()).collect(),
            }
        });
        for (t, w) in new_mu {
            self.mu[t] = w;
        }

        let n = self.n();
        let d = self.d;
        let to_taxon: Vec<T> = (0..n)
            .map(|x| sum(path.iter().map(|&k| self.mu[k].clone() * d.get(x, k).clone())))
            .collect();
        let merged = Block {
            min_taxon: self.blocks[lo].min_taxon.min(self.blocks[hi].min_taxon),
            path: path.clone(),
            parts: Some(Box::new(parts)),
            to_taxon,
        };

        self.blocks.remove(hi);
        self.between.remove(hi);
        for row in &mut self.between {
            row.remove(hi);
        }
        self.blocks[lo] = merged;
        for t in 0..self.m() {
            let value = if t == lo {
                T::zero()
            } else {
                let block = &self.blocks[lo];
                sum(block
                    .path
                    .iter()
                    .map(|&x| self.mu[x].clone() * self.blocks[t].to_taxon[x].clone()))
            };
            self.between[lo][t] = value.clone();
            self.between[t][lo] = value;
        }
        debug_assert!(self.blocks.windows(2).all(|w| w[0].min_taxon < w[1].min_taxon));
        Ok(MergeOutcome { index: lo, path })
    }

    /// `δ(C_r, C_s)` recomputed from the original matrix and current weights.
    pub fn exhaustive_block_distance(&self, r: usize, s: usize) -> T {
        if r == s {
            return T::zero();
        }
        let (a, b) = (&self.blocks[r].path, &self.blocks[s].path);
        sum(a.iter().flat_map(|&i| {
            b.iter()
                .map(move |&j| self.mu[i].clone() * self.mu[j].clone() * self.d.get(i, j).clone())
        }))
    }

    /// `δ(x, C_r)` recomputed from the original matrix and current weights.
    pub fn exhaustive_taxon_block_distance(&self, x: usize, r: usize) -> T {
        sum(self.blocks[r]
            .path
            .iter()
            .map(|&i| self.mu[i].clone() * self.d.get(x, i).clone()))
    }

    /// Largest deviation between the maintained and recomputed distances.
    pub fn max_incremental_error(&self) -> T {
        let m = self.m();
        let mut worst = T::zero();
        for r in 0..m {
            for s in 0..m {
                let diff = (self.between[r][s].clone() - self.exhaustive_block_distance(r, s)).abs();
                worst = T::max_of(worst, diff);
            }
            for x in 0..self.n() {
                let diff = (self.blocks[r].to_taxon[x].clone() - self.exhaustive_taxon_block_distance(x, r)).abs();
                worst = T::max_of(worst, diff);
            }
        }
        worst
    }
}
