//! Automatic differentiation, quadrature, interpolation and eigensolvers.

pub mod hyperdual;
pub mod lanczos;
pub mod quadrature;
pub mod sampled;
pub mod scaled;
pub mod sparse;
pub mod sturm;
pub mod tridiag;

pub use hyperdual::HyperDual;
pub use lanczos::{lanczos_smallest, lanczos_smallest_with, EigenPair, LanczosMode, LanczosOptions};
pub use quadrature::{
    cumulative_integral, cumulative_log_integral, integrate, integrate_many, QuadOutcome, QuadratureSpec,
};
pub use sampled::{Interpolation, SampledFunction};
pub use scaled::ScaledDual;
pub use sparse::{SparseSymOperator, SymmetricOperator};
pub use sturm::{sturm_liouville_eigs, sturm_liouville_eigs_log, LeftBoundary};
pub use tridiag::TridiagSystem;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("invalid quadrature spec {0:?}: tolerances must be positive and depth at least 1")]
    InvalidQuadratureSpec(QuadratureSpec),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("non-finite value at {at}")]
    NonFinite { at: f64 },
    #[error("quadrature tolerance not met: estimate {estimate:?}, error bound {error_bound:?}")]
    QuadratureExhausted {
        estimate: Vec<f64>,
        error_bound: Vec<f64>,
    },
    #[error("need at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("integrand must be positive, failed at {at}")]
    NonPositiveIntegrand { at: f64 },
    #[error("bad grid: {0}")]
    BadGrid(&'static str),
    #[error("{x} outside [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },
    #[error("requested {count} eigenvalues of a {dim}-dimensional system")]
    CountExceedsDimension { count: usize, dim: usize },
    #[error("mesh width {h} does not divide interval length {length}")]
    MeshMismatch { length: f64, h: f64 },
    #[error("entry ({row}, {col}) is not in the upper triangle of the matrix")]
    BadEntry { row: usize, col: usize },
    #[error("matrix not positive definite (pivot {row})")]
    NotPositiveDefinite { row: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("Lanczos did not converge; residuals {residuals:?}")]
    NonConvergence { residuals: Vec<f64> },
}
