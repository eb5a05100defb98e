//! Split-weight estimation for circular split systems.

mod formula;
mod linalg;
mod nnls;
mod wls;

pub use formula::{clamp_nonnegative, lambda_formula, SplitWeights};
pub use linalg::{solve_consistent, DesignMatrix};
pub use nnls::{nnls_fit, nnls_fit_splits, NnlsFit, NNLS_TOLERANCE};
pub use wls::{eta_weights, weighted_least_squares, wls_length_identity_check};
