//! Approximate eigenfunctions ("Weyl sequences") and their residuals.

mod cutoff;
mod family;
mod function;
mod residual;
mod sweep;

pub use cutoff::{beta_of, bottom_of, cutoff_H, node_radius};
pub use family::{closed_disjoint, disjoint_family, pairwise_disjoint, FamilyMember};
pub use function::{
    angular_profile, build_weyl, build_weyl_with, build_weyl_zero, build_weyl_zero_with, conformal_model,
    BuildOptions, WeylFunction, WeylParams, WeylPath, DEFAULT_V_STEPS,
};
pub use residual::{
    lemma5_ratios, residual, sphere_area, Lemma5Report, LemmaRatio, ResidualReport, TermNorm, LEMMA5_MIN_K,
    TERM_NAMES,
};
pub use sweep::{residual_sweep, LambdaSummary, SweepPath, SweepTable};

use crate::numerics::NumericsError;
use crate::warp::{DomainError, ModelError};

#[derive(Debug, Clone, thiserror::Error)]
pub enum WeylError {
    #[error("lambda={lambda} lies below the bottom {bottom}")]
    BelowBottom { lambda: f64, bottom: f64 },
    #[error("beta={0} must be positive")]
    ZeroBeta(f64),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
