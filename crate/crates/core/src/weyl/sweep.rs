//! Residual ratios over a grid of `(λ, k)`.

use super::cutoff::bottom_of;
use super::function::{build_weyl, build_weyl_zero, WeylParams};
use super::residual::{residual, ResidualReport};
use super::WeylError;
use crate::numerics::QuadratureSpec;
use crate::warp::ManifoldModel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "kebab-case")]
pub enum SweepPath {
    Standard { c: f64 },
    Zero { alpha: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaSummary {
    pub lambda: f64,
    pub strictly_decreasing: bool,
    /// Smallest `k` with `ratio ≤ epsilon`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_k_below: Option<usize>,
    pub best_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub path: SweepPath,
    pub m: usize,
    pub epsilon: f64,
    pub rows: Vec<ResidualReport>,
    pub summaries: Vec<LambdaSummary>,
}

impl SweepTable {
    pub fn summary(&self, lambda: f64) -> Option<&LambdaSummary> {
        self.summaries.iter().find(|s| s.lambda == lambda)
    }

    pub fn ratios(&self, lambda: f64) -> Vec<f64> {
        self.rows.iter().filter(|r| r.lambda == lambda).map(|r| r.ratio).collect()
    }
}

/// Builds and measures `u_k` for every `(λ, k)`; rows are ordered by λ, then
/// by k as given.
pub fn residual_sweep(
    model: &ManifoldModel,
    lambdas: &[f64],
    ks: &[usize],
    m: usize,
    path: SweepPath,
    epsilon: f64,
    quad: &QuadratureSpec,
) -> Result<SweepTable, WeylError> {
    let c = match path {
        SweepPath::Standard { c } => c,
        SweepPath::Zero { .. } => 0.0,
    };
    let bottom = bottom_of(model.n, c);
    if let Some(&lambda) = lambdas.iter().find(|&&l| !(l >= bottom)) {
        return Err(WeylError::BelowBottom { lambda, bottom });
    }
    let cells: Vec<(f64, usize)> = lambdas
        .iter()
        .flat_map(|&l| ks.iter().map(move |&k| (l, k)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(lambda, k)| {
            let wf = match path {
                SweepPath::Standard { c } => build_weyl(&WeylParams::for_model(model, lambda, c, k, m), model)?,
                SweepPath::Zero { alpha } => {
                    build_weyl_zero(&WeylParams::zero_for_model(model, lambda, alpha, k, m), model)?
                }
            };
            residual(&wf, quad)
        })
        .collect::<Result<Vec<_>, WeylError>>()?;

    let summaries = lambdas
        .iter()
        .map(|&lambda| {
            let sub: Vec<&ResidualReport> = rows.iter().filter(|r| r.lambda == lambda).collect();
            LambdaSummary {
                lambda,
                strictly_decreasing: sub.windows(2).all(|w| w[1].ratio < w[0].ratio),
                first_k_below: sub.iter().filter(|r| r.ratio <= epsilon).map(|r| r.k).min(),
                best_ratio: sub.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min),
            }
        })
        .collect();
    Ok(SweepTable {
        path,
        m,
        epsilon,
        rows,
        summaries,
    })
}
