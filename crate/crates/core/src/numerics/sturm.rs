//! Finite-difference Sturm–Liouville problems `−(p u′)′/w + q u = λ u`.
//!
//! Coefficients are taken in log form so warps like `e^{2r}` on long
//! intervals never leave the `f64` range: every matrix entry only needs
//! ratios such as `p_{i+1/2} / w_i`.

use super::sampled::SampledFunction;
use super::tridiag::TridiagSystem;
use super::NumericsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeftBoundary {
    Dirichlet,
    /// Zero flux through the left end (a regular point of a polar
    /// coordinate system, where `p` vanishes).
    Regular,
}

/// Number of mesh cells of width `h` in `[a, b]`; `h` must divide the length.
pub fn cell_count(a: f64, b: f64, h: f64) -> Result<usize, NumericsError> {
    if !(b > a) || !(h > 0.0) {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    let cells = (b - a) / h;
    let rounded = cells.round();
    if rounded < 2.0 || (cells - rounded).abs() > 1e-8 * cells.max(1.0) {
        return Err(NumericsError::MeshMismatch { length: b - a, h });
    }
    Ok(rounded as usize)
}

/// Builds the symmetrised tridiagonal matrix from log-coefficients.
pub fn sturm_liouville_system(
    ln_p: impl Fn(f64) -> f64,
    ln_w: impl Fn(f64) -> f64,
    q: impl Fn(f64) -> f64,
    interval: (f64, f64),
    h: f64,
    left: LeftBoundary,
) -> Result<TridiagSystem, NumericsError> {
    let (a, b) = interval;
    let cells = cell_count(a, b, h)?;
    let x = |i: usize| if i == cells { b } else { a + h * i as f64 };
    let h2 = h * h;
    let first = match left {
        LeftBoundary::Dirichlet => 1,
        LeftBoundary::Regular => 0,
    };
    let nodes: Vec<usize> = (first..cells).collect();
    // ln of the mass per unit length at each unknown.
    let lw: Vec<f64> = nodes
        .iter()
        .map(|&i| {
            if i == 0 {
                ln_w(a + 0.25 * h) - std::f64::consts::LN_2
            } else {
                ln_w(x(i))
            }
        })
        .collect();
    let lp_half: Vec<f64> = (0..cells).map(|i| ln_p(a + h * (i as f64 + 0.5))).collect();
    for (k, v) in lw.iter().chain(&lp_half).enumerate() {
        if !v.is_finite() {
            return Err(NumericsError::NonPositiveIntegrand {
                at: if k < lw.len() { x(nodes[k]) } else { a + h * ((k - lw.len()) as f64 + 0.5) },
            });
        }
    }
    let mut diagonal = Vec::with_capacity(nodes.len());
    let mut off = Vec::with_capacity(nodes.len().saturating_sub(1));
    for (k, &i) in nodes.iter().enumerate() {
        let right = (lp_half[i] - lw[k]).exp();
        let left_flux = if i == 0 { 0.0 } else { (lp_half[i - 1] - lw[k]).exp() };
        let qi = if i == 0 { q(a + 0.25 * h) } else { q(x(i)) };
        diagonal.push((right + left_flux) / h2 + qi);
        if k + 1 < nodes.len() {
            off.push(-(lp_half[i] - 0.5 * (lw[k] + lw[k + 1])).exp() / h2);
        }
    }
    TridiagSystem::new(diagonal, off)
}

/// The `count` smallest eigenvalues, log-coefficient form.
pub fn sturm_liouville_eigs_log(
    ln_p: impl Fn(f64) -> f64,
    ln_w: impl Fn(f64) -> f64,
    q: impl Fn(f64) -> f64,
    interval: (f64, f64),
    h: f64,
    count: usize,
    left: LeftBoundary,
) -> Result<Vec<f64>, NumericsError> {
    sturm_liouville_system(ln_p, ln_w, q, interval, h, left)?.smallest_eigenvalues(count)
}

/// The `count` smallest Dirichlet eigenvalues with tabulated coefficients.
pub fn sturm_liouville_eigs(
    p: &SampledFunction,
    q: &SampledFunction,
    w: &SampledFunction,
    interval: (f64, f64),
    h: f64,
    count: usize,
) -> Result<Vec<f64>, NumericsError> {
    sturm_liouville_eigs_with(p, q, w, interval, h, count, LeftBoundary::Dirichlet)
}

pub fn sturm_liouville_eigs_with(
    p: &SampledFunction,
    q: &SampledFunction,
    w: &SampledFunction,
    interval: (f64, f64),
    h: f64,
    count: usize,
    left: LeftBoundary,
) -> Result<Vec<f64>, NumericsError> {
    let (a, b) = interval;
    for f in [p, q, w] {
        let (lo, hi) = f.domain();
        if a < lo || b > hi {
            return Err(NumericsError::OutOfRange { x: if a < lo { a } else { b }, lo, hi });
        }
    }
    let log_of = |f: &SampledFunction, x: f64| match f.eval(x) {
        Ok(v) if v > 0.0 => v.ln(),
        _ => f64::NAN,
    };
    sturm_liouville_eigs_log(
        |x| log_of(p, x),
        |x| log_of(w, x),
        |x| q.eval(x).unwrap_or(f64::NAN),
        interval,
        h,
        count,
        left,
    )
}
