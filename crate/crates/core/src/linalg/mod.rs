//! Dense matrix kernels: SVD, symmetric eigendecomposition, SPD solves and
//! low-rank approximation.

mod cholesky;
mod eigen;
mod lra;
mod svd;

pub use cholesky::cholesky_solve;
pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use lra::{nuclear_norm, qr_lra, qr_norm, svt, truncated_lra, QrWeights};
pub(crate) use lra::svt_with_stats;
pub use svd::{svd, SvdFactors, MAX_SWEEPS};
