use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::ordering::CircularOrdering;
use crate::scalar::Scalar;
use crate::split::{Split, WeightedSplitSystem};

use super::linalg::{solve_consistent, DesignMatrix};

/// Relative tolerance on the KKT conditions in floating point.
pub const NNLS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct NnlsFit<T = f64> {
    pub system: WeightedSplitSystem<T>,
    /// Weighted sum of squared residuals.
    pub residual: T,
    pub iterations: usize,
    /// Largest violation of the optimality conditions at the solution:
    /// `|g_j|` on positive coordinates and `max(-g_j, 0)` on zero ones,
    /// where `g` is the gradient of half the residual.
    pub kkt_violation: T,
}

/// Non-negative least squares over the circular splits of `ordering`.
pub fn nnls_fit<T: Scalar>(
    d: &DissimilarityMap<T>,
    ordering: &CircularOrdering,
    weights: Option<&DissimilarityMap<T>>,
) -> Result<NnlsFit<T>> {
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
    nnls_fit_splits(d, ordering.all_circular_splits(), weights)
}

/// Non-negative least squares over an arbitrary list of splits, by the
/// Lawson-Hanson active set method on the normal equations.
pub fn nnls_fit_splits<T: Scalar>(
    d: &DissimilarityMap<T>,
    splits: Vec<Split>,
    weights: Option<&DissimilarityMap<T>>,
) -> Result<NnlsFit<T>> {
    let n = d.n();
    if let Some(w) = weights {
        if w.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: w.n(),
            });
        }
        let any_zero = (0..n).any(|i| ((i + 1)..n).any(|j| *w.get(i, j) <= T::zero()));
        if any_zero {
            return Err(Error::InvalidArgument("pair weights must be positive".to_string()));
        }
    }
    let design = DesignMatrix::new(n, splits)?;
    let (gram, rhs) = design.normal_equations(d, weights);
    let (x, iterations) = lawson_hanson(&gram, &rhs)?;
    let kkt_violation = kkt_violation(&gram, &rhs, &x);
    let residual = design.residual(d, &x, weights);
    let system = WeightedSplitSystem::new(n, design.splits().iter().cloned().zip(x).collect())?;
    Ok(NnlsFit {
        system,
        residual,
        iterations,
        kkt_violation,
    })
}

fn tolerance<T: Scalar>(rhs: &[T]) -> T {
    if T::EXACT {
        return T::zero();
    }
    let scale = rhs.iter().fold(T::one(), |acc, v| T::max_of(acc, v.abs()));
    T::from_f64(NNLS_TOLERANCE) * scale
}

/// `c - G x`, the negated gradient of half the residual.
fn descent<T: Scalar>(gram: &[Vec<T>], rhs: &[T], x: &[T]) -> Vec<T> {
    rhs.iter()
        .zip(gram)
        .map(|(c, row)| {
            let gx = row
                .iter()
                .zip(x)
                .fold(T::zero(), |acc, (g, v)| acc + g.clone() * v.clone());
            c.clone() - gx
        })
        .collect()
}

fn kkt_violation<T: Scalar>(gram: &[Vec<T>], rhs: &[T], x: &[T]) -> T {
    descent(gram, rhs, x).into_iter().zip(x).fold(T::zero(), |acc, (w, v)| {
        let bad = if *v > T::zero() {
            w.abs()
        } else {
            T::max_of(w, T::zero())
        };
        T::max_of(acc, bad)
    })
}

fn solve_passive<T: Scalar>(gram: &[Vec<T>], rhs: &[T], passive: &[usize]) -> Vec<T> {
    let sub: Vec<Vec<T>> = passive
        .iter()
        .map(|&a| passive.iter().map(|&b| gram[a][b].clone()).collect())
        .collect();
    let c: Vec<T> = passive.iter().map(|&a| rhs[a].clone()).collect();
    solve_consistent(sub, c)
}

fn lawson_hanson<T: Scalar>(gram: &[Vec<T>], rhs: &[T]) -> Result<(Vec<T>, usize)> {
    let k = rhs.len();
    let cap = 10 * k.max(1);
    let tol = tolerance(rhs);
    let mut x = vec![T::zero(); k];
    let mut passive = vec![false; k];
    let mut iterations = 0;

    loop {
        let w = descent(gram, rhs, &x);
        let entering = (0..k)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&a, &b| w[a].partial_cmp(&w[b]).expect("comparable"));
        let Some(t) = entering else {
            return Ok((x, iterations));
        };
        passive[t] = true;

        loop {
            iterations += 1;
            if iterations > cap {
                return Err(Error::NonConvergence { iterations: cap });
            }
            let set: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
            let z = solve_passive(gram, rhs, &set);
            if z.iter().all(|v| *v > T::zero()) {
                for (&j, v) in set.iter().zip(z) {
                    x[j] = v;
                }
                break;
            }
            // Step towards z until the first passive coordinate hits zero.
            let mut alpha: Option<T> = None;
            for (&j, zj) in set.iter().zip(&z) {
                if *zj <= T::zero() {
                    let ratio = x[j].clone() / (x[j].clone() - zj.clone());
                    if alpha.as_ref().is_none_or(|a| ratio < *a) {
                        alpha = Some(ratio);
                    }
                }
            }
            let alpha = alpha.expect("some coordinate is nonpositive");
            for (&j, zj) in set.iter().zip(&z) {
                let step = alpha.clone() * (zj.clone() - x[j].clone());
                x[j] += step;
            }
            for &j in &set {
                if x[j] <= tol {
                    x[j] = T::zero();
                    passive[j] = false;
                }
            }
        }
    }
}
