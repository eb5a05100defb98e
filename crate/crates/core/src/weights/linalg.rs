//! The circular-split design matrix and a small dense solver.

use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};
use crate::split::Split;

/// Rows are taxon pairs `i < j` in lexicographic order, columns are splits;
/// an entry is 1 when the split separates the pair.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    n: usize,
    splits: Vec<Split>,
    pairs: Vec<(usize, usize)>,
    entries: Vec<bool>,
}

impl DesignMatrix {
    pub fn new(n: usize, splits: Vec<Split>) -> Result<Self> {
        if let Some(s) = splits.iter().find(|s| s.n() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                got: s.n(),
            });
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        let entries = pairs
            .iter()
            .flat_map(|&(i, j)| splits.iter().map(move |s| s.separates(i, j)))
            .collect();
        Ok(Self {
            n,
            splits,
            pairs,
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.pairs.len()
    }

    pub fn cols(&self) -> usize {
        self.splits.len()
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.entries[row * self.cols() + col]
    }

    /// `A λ`, one value per pair.
    pub fn apply<T: Scalar>(&self, lambda: &[T]) -> Vec<T> {
        (0..self.rows())
            .map(|r| {
                sum((0..self.cols())
                    .filter(|&c| self.entry(r, c))
                    .map(|c| lambda[c].clone()))
            })
            .collect()
    }

    /// Targets `d(i, j)` in row order.
    pub fn targets<T: Scalar>(&self, d: &DissimilarityMap<T>) -> Vec<T> {
        self.pairs.iter().map(|&(i, j)| d.get(i, j).clone()).collect()
    }

    /// Row weights in row order; all ones when `weights` is `None`.
    pub fn row_weights<T: Scalar>(&self, weights: Option<&DissimilarityMap<T>>) -> Vec<T> {
        match weights {
            Some(w) => self.pairs.iter().map(|&(i, j)| w.get(i, j).clone()).collect(),
            None => vec![T::one(); self.rows()],
        }
    }

    /// `Σ w(i,j) (d(i,j) - (Aλ)(i,j))²`.
    pub fn residual<T: Scalar>(
        &self,
        d: &DissimilarityMap<T>,
        lambda: &[T],
        weights: Option<&DissimilarityMap<T>>,
    ) -> T {
        let fitted = self.apply(lambda);
        let w = self.row_weights(weights);
        sum(self.targets(d).into_iter().zip(fitted).zip(w).map(|((t, f), w)| {
            let r = t - f;
            w * r.clone() * r
        }))
    }

    /// `AᵀWA` and `AᵀWb`.
    pub fn normal_equations<T: Scalar>(
        &self,
        d: &DissimilarityMap<T>,
        weights: Option<&DissimilarityMap<T>>,
    ) -> (Vec<Vec<T>>, Vec<T>) {
        let k = self.cols();
        let w = self.row_weights(weights);
        let b = self.targets(d);
        let mut gram = vec![vec![T::zero(); k]; k];
        let mut rhs = vec![T::zero(); k];
        for r in 0..self.rows() {
            if w[r].is_zero() {
                continue;
            }
            let active: Vec<usize> = (0..k).filter(|&c| self.entry(r, c)).collect();
            for &a in &active {
                rhs[a] += w[r].clone() * b[r].clone();
                for &c in &active {
                    gram[a][c] += w[r].clone();
                }
            }
        }
        (gram, rhs)
    }
}

/// Solves `G x = c` by Gauss-Jordan elimination with partial pivoting.
/// Columns without a usable pivot are free and set to zero, so a consistent
/// singular system still yields a solution.
pub fn solve_consistent<T: Scalar>(mut g: Vec<Vec<T>>, mut c: Vec<T>) -> Vec<T> {
    let k = c.len();
    let scale = g.iter().flatten().fold(T::zero(), |acc, v| T::max_of(acc, v.abs()));
    let eps = if T::EXACT {
        T::zero()
    } else {
        T::from_f64(1e-12) * scale
    };
    let mut pivot_of_col = vec![None; k];
    let mut row = 0;
    for col in 0..k {
        if row == k {
            break;
        }
        let best = (row..k)
            .max_by(|&a, &b| g[a][col].abs().partial_cmp(&g[b][col].abs()).expect("comparable"))
            .expect("nonempty range");
        if g[best][col].abs() <= eps {
            continue;
        }
        g.swap(row, best);
        c.swap(row, best);
        let p = g[row][col].clone();
        for v in &mut g[row][col..] {
            *v = v.clone() / p.clone();
        }
        c[row] = c[row].clone() / p;
        for other in 0..k {
            if other == row || g[other][col].is_zero() {
                continue;
            }
            let f = g[other][col].clone();
            let pivot_row = g[row].clone();
            for (target, v) in g[other][col..].iter_mut().zip(&pivot_row[col..]) {
                *target -= f.clone() * v.clone();
            }
            let delta = f * c[row].clone();
            c[other] -= delta;
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    pivot_of_col
        .into_iter()
        .map(|p| p.map_or_else(T::zero, |r| c[r].clone()))
        .collect()
}
