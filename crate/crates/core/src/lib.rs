//! Hankel structured low-rank approximation and low-rank completion of
//! scalar time series.
//!
//! Everything numeric is generic over [`Scalar`] (implemented for `f32` and
//! `f64`); the aliases at the bottom of this file fix `f64` for the common
//! case.
//!
//! Matrices are dense and row-major. Series are 1-based in the docs and
//! 0-based in slices.

// `!(x > 0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod completion;
mod error;
pub mod hankel;
pub mod linalg;
pub mod lrr;
mod matrix;
mod scalar;
mod series;
pub mod signals;
pub mod slra;

pub use completion::{
    complete, exact_complete, forecast_rmse, nn_complete_exactfit, nn_complete_regularized,
    nn_complete_tolerance, AdmmSettings, CompletionMode, CompletionProblem, CompletionReport, Loss,
    WeightScheme,
};
pub use error::{Error, Result};
pub use hankel::{
    antidiag_sums, antidiag_weights, detect_plateau, embed, minimal_lrr, minimal_lrr_with_tol,
    multiplication_matrix, project_hankel, project_hankel_weighted, rank_profile, AntidiagWeights,
    HankelStructure,
};
pub use linalg::{nuclear_norm, qr_lra, qr_norm, svd, svt, truncated_lra, QrWeights, SvdFactors};
pub use lrr::{apply_lrr, LrrCoefficients};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use series::TimeSeries;
pub use signals::{
    generate_canonical, generate_damped, generate_noise, CanonicalModel, DampedSinusoidModel,
    DampedTerm, ExponentialTerm, NoiseKind, NoiseModel,
};
pub use slra::{
    apbr, cadzow, scalar_correction, ssa, ApbrConfig, Schedule, SlraConfig, SlraWeights, SolveReport,
};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type TimeSeries64 = TimeSeries<f64>;
pub type TimeSeries32 = TimeSeries<f32>;
pub type QrWeights64 = QrWeights<f64>;
pub type SlraConfig64 = SlraConfig<f64>;
pub type ApbrConfig64 = ApbrConfig<f64>;
pub type SolveReport64 = SolveReport<f64>;
pub type CompletionProblem64 = CompletionProblem<f64>;
pub type CompletionReport64 = CompletionReport<f64>;
pub type LrrCoefficients64 = LrrCoefficients<f64>;
