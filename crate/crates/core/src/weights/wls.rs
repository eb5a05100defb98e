use crate::dissimilarity::DissimilarityMap;
use crate::error::{Error, Result};
use crate::length::{split_system_eta, EtaTable};
use crate::scalar::{sum, Scalar};
use crate::split::Split;

use super::linalg::{solve_consistent, DesignMatrix};

/// Unconstrained weighted least squares over `splits`. When the fit is not
/// unique, coordinates without a pivot are set to zero.
pub fn weighted_least_squares<T: Scalar>(
    d: &DissimilarityMap<T>,
    splits: Vec<Split>,
    weights: &DissimilarityMap<T>,
) -> Result<Vec<(Split, T)>> {
    if weights.n() != d.n() {
        return Err(Error::SizeMismatch {
            expected: d.n(),
            got: weights.n(),
        });
    }
    let design = DesignMatrix::new(d.n(), splits)?;
    let (gram, rhs) = design.normal_equations(d, Some(weights));
    let x = solve_consistent(gram, rhs);
    Ok(design.splits().iter().cloned().zip(x).collect())
}

/// Pair weights `η_S(i, j)`; pairs never adjacent get weight zero and drop
/// out of the fit.
pub fn eta_weights<T: Scalar>(eta: &EtaTable) -> Result<DissimilarityMap<T>> {
    DissimilarityMap::from_fn(eta.n(), |i, j| T::from_i64(eta.get(i, j) as i64))
}

/// Balanced length of `splits` against the total weight of the
/// η-weighted least squares fit: returns `(l(d, S), Σ λ_S)`.
///
/// The two agree whenever the trivial splits belong to `splits`.
pub fn wls_length_identity_check<T: Scalar>(d: &DissimilarityMap<T>, splits: &[Split], cap: usize) -> Result<(T, T)> {
    let eta = split_system_eta(d.n(), splits, cap)?;
    let lhs = eta.balanced_length(d)?;
    let fit = weighted_least_squares(d, splits.to_vec(), &eta_weights(&eta)?)?;
    let rhs = sum(fit.into_iter().map(|(_, w)| w));
    Ok((lhs, rhs))
}
