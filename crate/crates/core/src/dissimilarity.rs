use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symmetric, nonnegative matrix with zero diagonal over taxa `0..n`.
///
/// No triangle inequality is required: Kalmanson matrices that are not
/// metrics are valid inputs everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct DissimilarityMap<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DissimilarityMap<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    /// Builds a map from the upper triangle: `f(i, j)` is called once for
    /// every `i < j` and mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut map = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                if v < T::zero() {
                    return Err(Error::InvalidDissimilarity(format!("negative entry {v} at ({i}, {j})")));
                }
                map.data[i * n + j] = v.clone();
                map.data[j * n + i] = v;
            }
        }
        Ok(map)
    }

    /// Builds a map from full rows, checking symmetry, the zero diagonal
    /// and nonnegativity exactly.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDissimilarity(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        for i in 0..n {
            if !data[i * n + i].is_zero() {
                return Err(Error::InvalidDissimilarity(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if data[i * n + j] < T::zero() {
                    return Err(Error::InvalidDissimilarity(format!("negative entry at ({i}, {j})")));
                }
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvalidDissimilarity(format!("asymmetric entries at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`. Panics when out of range.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn try_get(&self, i: usize, j: usize) -> Result<&T> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        Ok(self.get(i, j))
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DissimilarityMap<U> {
        DissimilarityMap {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> DissimilarityMap<f64> {
        self.map(|v| v.to_f64())
    }

    /// Relabels taxa: the result has `new(i, j) = self(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        Ok(Self {
            n: self.n,
            data: (0..self.n * self.n)
                .map(|k| self.get(perm[k / self.n], perm[k % self.n]).clone())
                .collect(),
        })
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| T::max_of(acc, (a.clone() - b.clone()).abs())))
    }

    pub fn is_all_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn satisfies_triangle_inequality(&self, tol: &T) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| self.get(i, k).clone() <= self.get(i, j).clone() + self.get(j, k).clone() + tol.clone())
            })
        })
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}
