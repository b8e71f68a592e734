//! Eigenvalues of the Laplacian on truncated domains.

use crate::numerics::{
    lanczos_smallest, sturm_liouville_eigs_log, LeftBoundary, NumericsError, SparseSymOperator,
};
use crate::warp::{DomainError, ManifoldModel};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

pub const DEFAULT_COUNT: usize = 6;
/// Largest matrix (stored entries) `surface_eigs` will assemble.
pub const MAX_NONZEROS: usize = 4_000_000;
const LANCZOS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, thiserror::Error)]
pub enum EigenError {
    #[error("the warp depends on s; use surface_eigs")]
    NotRadial,
    #[error("surface solver needs n = 2, got n={0}")]
    NotSurface(usize),
    #[error("invalid domain: {0}")]
    BadDomain(String),
    #[error("mesh needs about {nonzeros} nonzeros (cap {cap}); try h_r={suggest_hr:.3e}, h_theta={suggest_ht:.3e}")]
    TooLarge {
        nonzeros: usize,
        cap: usize,
        suggest_hr: f64,
        suggest_ht: f64,
    },
    #[error("need at least 3 reports with increasing R, got {0}")]
    TooFewReports(usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenReport {
    pub kind: String,
    pub label: String,
    pub n: usize,
    pub r_start: f64,
    /// Truncation radius `R`.
    pub r_end: f64,
    pub h: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
    pub boundary: String,
    pub eigenvalues: Vec<f64>,
    /// Growth rate `c` behind `predicted_bottom`.
    pub c: f64,
    pub c_estimated: bool,
    /// `(n−1)²c²/4`.
    pub predicted_bottom: f64,
}

impl EigenReport {
    /// Replaces the estimated growth rate with a known one.
    pub fn with_growth_rate(mut self, c: f64) -> Self {
        let nm1 = (self.n - 1) as f64;
        self.c = c;
        self.c_estimated = false;
        self.predicted_bottom = nm1 * nm1 * c * c / 4.0;
        self
    }

    pub fn lowest(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn csv_header(count: usize) -> String {
        let mut s = String::from("R,h");
        for j in 1..=count {
            let _ = write!(s, ",lambda_{j}");
        }
        s
    }

    pub fn csv_row(&self) -> String {
        let mut s = format!("{},{}", self.r_end, self.h);
        for v in &self.eigenvalues {
            let _ = write!(s, ",{v}");
        }
        s
    }
}

/// `ψ_r/ψ` on the meridian at `r`, used as the growth-rate estimate.
fn growth_rate(model: &ManifoldModel, r: f64) -> Result<f64, EigenError> {
    Ok(model.log_jet(r, 0.0)?.r.max(0.0))
}

fn check_interval(r0: f64, r1: f64) -> Result<(), EigenError> {
    if !(r0 >= 0.0 && r1 > r0 && r1.is_finite()) {
        return Err(EigenError::BadDomain(format!("[{r0}, {r1}]")));
    }
    Ok(())
}

/// Eigenvalues of `−(ψ^{n−1} u′)′ / ψ^{n−1}` on `[r0, R]`, Dirichlet at `R`.
pub fn radial_eigs(
    model: &ManifoldModel,
    r0: f64,
    r_max: f64,
    h: f64,
    count: usize,
    left: LeftBoundary,
) -> Result<EigenReport, EigenError> {
    if !model.is_radial() {
        return Err(EigenError::NotRadial);
    }
    check_interval(r0, r_max)?;
    let nm1 = (model.n - 1) as f64;
    let failure = std::cell::RefCell::new(None);
    let ln_weight = |r: f64| match model.log_jet(r, 0.0) {
        Ok(j) if j.sign > 0.0 => nm1 * j.ln_psi,
        Ok(_) => f64::NAN,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let eigs = sturm_liouville_eigs_log(ln_weight, ln_weight, |_| 0.0, (r0, r_max), h, count, left);
    if let Some(e) = failure.into_inner() {
        return Err(e.into());
    }
    let eigenvalues = eigs?;
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite { at: r0 }.into());
    }
    let c = growth_rate(model, r_max)?;
    let boundary = match left {
        LeftBoundary::Dirichlet => "dirichlet",
        LeftBoundary::Regular => "regular-at-0/dirichlet",
    };
    Ok(EigenReport {
        kind: "radial".into(),
        label: model.label.clone(),
        n: model.n,
        r_start: r0,
        r_end: r_max,
        h,
        h_theta: None,
        theta_max: None,
        boundary: boundary.into(),
        eigenvalues,
        c,
        c_estimated: true,
        predicted_bottom: nm1 * nm1 * c * c / 4.0,
    })
}

/// Dirichlet eigenvalues of the Laplacian on `[r0, R] × [−θ_max, θ_max]`
/// for a surface with metric `dr² + ψ(r,θ)² dθ²`.
pub fn surface_eigs(
    model: &ManifoldModel,
    r0: f64,
    r_max: f64,
    h_r: f64,
    h_theta: f64,
    theta_max: f64,
    count: usize,
) -> Result<EigenReport, EigenError> {
    if model.n != 2 {
        return Err(EigenError::NotSurface(model.n));
    }
    check_interval(r0, r_max)?;
    if !(theta_max > 0.0 && h_theta > 0.0 && h_r > 0.0) {
        return Err(EigenError::BadDomain(format!("theta_max={theta_max}, h_r={h_r}, h_theta={h_theta}")));
    }
    let nr = cells(r_max - r0, h_r)?;
    let nt = cells(2.0 * theta_max, h_theta)?;
    let (mr, mt) = (nr - 1, nt - 1);
    let dim = mr * mt;
    // five-point stencil, both triangles stored
    let nonzeros = 5 * dim;
    if nonzeros > MAX_NONZEROS {
        let f = (nonzeros as f64 / MAX_NONZEROS as f64).sqrt() * 1.05;
        return Err(EigenError::TooLarge {
            nonzeros,
            cap: MAX_NONZEROS,
            suggest_hr: h_r * f,
            suggest_ht: h_theta * f,
        });
    }
    let radius = |i: usize| r0 + h_r * i as f64;
    let angle = |j: usize| -theta_max + h_theta * j as f64;
    let ln_psi = |r: f64, t: f64| -> Result<f64, EigenError> {
        let j = model.log_jet(r, t)?;
        if !(j.sign > 0.0) {
            return Err(EigenError::BadDomain(format!("warp not positive at r={r}, theta={t}")));
        }
        Ok(j.ln_psi)
    };

    // Node values and midpoint values of ln ψ, computed row by row in parallel.
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (1..nr)
        .into_par_iter()
        .map(|i| {
            let r = radius(i);
            let nodes = (1..nt).map(|j| ln_psi(r, angle(j))).collect::<Result<Vec<_>, _>>()?;
            let r_mid = (1..nt).map(|j| ln_psi(r + 0.5 * h_r, angle(j))).collect::<Result<Vec<_>, _>>()?;
            let t_mid = (0..nt).map(|j| ln_psi(r, angle(j) + 0.5 * h_theta)).collect::<Result<Vec<_>, _>>()?;
            Ok((nodes, r_mid, t_mid))
        })
        .collect::<Result<Vec<_>, EigenError>>()?;
    let r_mid_first = (1..nt)
        .map(|j| ln_psi(r0 + 0.5 * h_r, angle(j)))
        .collect::<Result<Vec<_>, _>>()?;

    // K u = λ W u with W = diag(ψ); entries of W^{-1/2} K W^{-1/2}.
    let idx = |i: usize, j: usize| (i - 1) * mt + (j - 1);
    let (ir2, it2) = (1.0 / (h_r * h_r), 1.0 / (h_theta * h_theta));
    let mut triplets = Vec::with_capacity(3 * dim);
    for i in 1..nr {
        let (nodes, r_mid, t_mid) = &rows[i - 1];
        let below = if i == 1 { &r_mid_first } else { &rows[i - 2].1 };
        for j in 1..nt {
            let lp = nodes[j - 1];
            let mut diag = ((r_mid[j - 1] - lp).exp() + (below[j - 1] - lp).exp()) * ir2;
            diag += ((-t_mid[j] - lp).exp() + (-t_mid[j - 1] - lp).exp()) * it2;
            let me = idx(i, j);
            triplets.push((me, me, diag));
            if i + 1 < nr {
                let lq = rows[i].0[j - 1];
                triplets.push((me, idx(i + 1, j), -(r_mid[j - 1] - 0.5 * (lp + lq)).exp() * ir2));
            }
            if j + 1 < nt {
                let lq = nodes[j];
                triplets.push((me, idx(i, j + 1), -(-t_mid[j] - 0.5 * (lp + lq)).exp() * it2));
            }
        }
    }
    let a = SparseSymOperator::from_upper_triplets(dim, &triplets)?;
    let pairs = lanczos_smallest(&a, count, LANCZOS_TOL)?;
    let c = growth_rate(model, r_max)?;
    Ok(EigenReport {
        kind: "surface".into(),
        label: model.label.clone(),
        n: 2,
        r_start: r0,
        r_end: r_max,
        h: h_r,
        h_theta: Some(h_theta),
        theta_max: Some(theta_max),
        boundary: "dirichlet".into(),
        eigenvalues: pairs.into_iter().map(|p| p.value).collect(),
        c,
        c_estimated: true,
        predicted_bottom: c * c / 4.0,
    })
}

fn cells(length: f64, h: f64) -> Result<usize, EigenError> {
    let n = (length / h).round();
    if n < 2.0 || ((length / h) - n).abs() > 1e-8 * n {
        return Err(NumericsError::MeshMismatch { length, h }.into());
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BottomTrend {
    /// Limit of `λ₁(R)` from the fit `λ₁ ≈ estimate + slope/R²`.
    pub estimate: f64,
    pub slope: f64,
    /// `λ₁(R)` non-increasing in `R`.
    pub monotone: bool,
}

/// Least-squares fit of `λ₁(R)` against `1/R²`.
pub fn bottom_trend(reports: &[EigenReport]) -> Result<BottomTrend, EigenError> {
    if reports.len() < 3 || reports.windows(2).any(|w| !(w[1].r_end > w[0].r_end)) {
        return Err(EigenError::TooFewReports(reports.len()));
    }
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| {
            r.lowest()
                .map(|l| (1.0 / (r.r_end * r.r_end), l))
                .ok_or(EigenError::TooFewReports(0))
        })
        .collect::<Result<_, _>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    Ok(BottomTrend {
        estimate: my - slope * mx,
        slope,
        monotone: pts.windows(2).all(|w| w[1].1 <= w[0].1),
    })
}

/// `radial_eigs` at each radius, in parallel; results keep the input order.
pub fn radial_trend(
    model: &ManifoldModel,
    r0: f64,
    radii: &[f64],
    h: f64,
    count: usize,
    left: LeftBoundary,
) -> Result<Vec<EigenReport>, EigenError> {
    radii
        .par_iter()
        .map(|&r| radial_eigs(model, r0, r, h, count, left))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warp::parse_warp;

    fn report(r: f64, l: f64) -> EigenReport {
        EigenReport {
            kind: "radial".into(),
            label: String::new(),
            n: 2,
            r_start: 0.0,
            r_end: r,
            h: 0.1,
            h_theta: None,
            theta_max: None,
            boundary: "dirichlet".into(),
            eigenvalues: vec![l],
            c: 0.0,
            c_estimated: true,
            predicted_bottom: 0.0,
        }
    }

    #[test]
    fn trend_of_constant_sequence() {
        let t = bottom_trend(&[report(10.0, 0.3), report(20.0, 0.3), report(40.0, 0.3)]).unwrap();
        assert!((t.estimate - 0.3).abs() < 1e-15);
        assert!(t.monotone);
    }

    #[test]
    fn trend_needs_three_reports() {
        assert!(bottom_trend(&[report(10.0, 0.3), report(20.0, 0.3)]).is_err());
        assert!(bottom_trend(&[report(10.0, 0.3), report(5.0, 0.3), report(20.0, 0.3)]).is_err());
    }

    #[test]
    fn flat_strip() {
        let m = ManifoldModel::new(2, parse_warp("1").unwrap(), 0.0, 1.0, 0.01, "flat").unwrap();
        let h = std::f64::consts::PI / 120.0;
        let rep = surface_eigs(&m, 0.0, std::f64::consts::PI, h, h, std::f64::consts::PI / 2.0, 3).unwrap();
        assert!((rep.eigenvalues[0] - 2.0).abs() < 1e-3, "{:?}", rep.eigenvalues);
        // next modes: 1 + 4 and 4 + 1
        assert!((rep.eigenvalues[1] - 5.0).abs() < 1e-2 && (rep.eigenvalues[2] - 5.0).abs() < 1e-2);
    }

    #[test]
    fn surface_rejects_oversized_mesh() {
        let m = ManifoldModel::new(2, parse_warp("1").unwrap(), 0.0, 1.0, 0.01, "flat").unwrap();
        match surface_eigs(&m, 0.0, 10.0, 1e-3, 1e-3, 1.0, 2) {
            Err(EigenError::TooLarge { suggest_hr, .. }) => assert!(suggest_hr > 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn radial_rejects_angular_warps() {
        let m = ManifoldModel::new(2, parse_warp("exp(r)*(1 + sin(s)^2)").unwrap(), 0.0, 1.0, 0.01, "").unwrap();
        assert!(matches!(radial_eigs(&m, 0.0, 5.0, 0.1, 2, LeftBoundary::Dirichlet), Err(EigenError::NotRadial)));
    }
}
