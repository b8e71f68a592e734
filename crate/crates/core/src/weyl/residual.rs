//! `L²` norms of `u`, of `Δu + λu` and of its addends.

use super::function::{WeylFunction, WeylPath};
use super::WeylError;
use crate::numerics::{integrate_many, NumericsError, QuadratureSpec};
use serde::Serialize;
use std::cell::RefCell;

/// Names of the seven addends of `Δu + λu`, in order.
pub const TERM_NAMES: [&str; 7] = [
    "A*F*g*h",
    "B*F'*g*h",
    "2*F'*g*h'",
    "F*g*lap(h)",
    "(n-3)*psi_s/psi^3*f*g'",
    "(n-2)*cot(s)/psi^2*f*g'",
    "f*g''/psi^2",
];

const LEMMA_NAMES: [&str; 5] = [
    "chi_h*F*g",
    "chi_h*F'*g",
    "psi_s/psi^3*f*g'",
    "cot(s)/psi^2*f*g'",
    "f*g''/psi^2",
];

// [u², R², T1²..T7², lemma a..d]
const NC: usize = 13;

#[derive(Debug, Clone, Serialize)]
pub struct TermNorm {
    pub name: String,
    pub norm: f64,
}

/// Norms are reported without the common factor `(|S^{n−2}| δ^{n−1})^{1/2}`;
/// its logarithm is `log_norm_scale`. Ratios are unaffected.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub path: WeylPath,
    pub lambda: f64,
    pub n: usize,
    pub c: f64,
    pub alpha: f64,
    pub k: usize,
    pub m: usize,
    pub p: usize,
    pub beta: f64,
    pub r_start: f64,
    pub r_end: f64,
    pub ln_delta: f64,
    pub norm_u: f64,
    pub norm_residual: f64,
    pub ratio: f64,
    pub terms: Vec<TermNorm>,
    pub log_norm_scale: f64,
    /// Estimated absolute error of `norm_residual`.
    pub residual_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaRatio {
    pub name: String,
    pub ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma5Report {
    pub lambda: f64,
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub ratios: Vec<LemmaRatio>,
}

impl Lemma5Report {
    pub fn all_within(&self) -> bool {
        self.ratios.iter().all(|r| r.within != Some(false))
    }
}

/// `|S^{d}|`, the area of the unit d-sphere.
pub fn sphere_area(d: usize) -> f64 {
    // |S^0| = 2, |S^1| = 2π, |S^d| = 2π/(d−1) |S^{d−2}|
    let mut area = if d.is_multiple_of(2) { 2.0 } else { 2.0 * std::f64::consts::PI };
    let mut j = if d.is_multiple_of(2) { 2 } else { 3 };
    while j <= d {
        area *= 2.0 * std::f64::consts::PI / (j - 1) as f64;
        j += 2;
    }
    area
}

struct Integrals {
    value: [f64; NC],
    error: [f64; NC],
    evaluations: usize,
}

fn integrate_all(wf: &WeylFunction, quad: &QuadratureSpec) -> Result<Integrals, WeylError> {
    quad.validate()?;
    let inner_spec = quad.tightened(0.1);
    let radial_only = wf.model().is_radial();
    let failure: RefCell<Option<WeylError>> = RefCell::new(None);
    let inner_evals = std::cell::Cell::new(0usize);
    let record = |e: WeylError| {
        failure.borrow_mut().get_or_insert(e);
        [f64::NAN; NC]
    };

    let inner = |r: f64| -> [f64; NC] {
        let rad = match wf.radial(r) {
            Ok(x) => x,
            Err(e) => return record(e),
        };
        let width = wf.width();
        let point = |sigma: f64| -> [f64; NC] {
            let jet = if radial_only {
                rad.meridian
            } else {
                match wf.model().log_jet(r, width * sigma) {
                    Ok(j) => j,
                    Err(e) => return record(e.into()),
                }
            };
            let loc = wf.local(&rad, &jet, sigma);
            let sum: f64 = loc.terms.iter().sum();
            let mut out = [0.0; NC];
            out[0] = loc.u * loc.u * loc.rho;
            out[1] = sum * sum * loc.rho;
            for (i, t) in loc.terms.iter().enumerate() {
                out[2 + i] = t * t * loc.rho;
            }
            for (i, t) in loc.lemma.iter().enumerate() {
                out[9 + i] = t * t * loc.rho;
            }
            out
        };
        match integrate_many(point, &[0.0, 0.5, 1.0], &inner_spec) {
            Ok(o) => {
                inner_evals.set(inner_evals.get() + o.evaluations);
                o.value
            }
            Err(e) => record(e.into()),
        }
    };

    let p = wf.p();
    let beta = wf.beta();
    let (r0, _) = wf.radial_support();
    // Every zero of cos(βr) in the support is a breakpoint.
    let breaks: Vec<f64> = (0..=4 * p)
        .map(|j| r0 + j as f64 * std::f64::consts::PI / beta)
        .collect();
    let out = integrate_many(inner, &breaks, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let out = out?;
    // The integrands use the unscaled profile, so tolerances do not depend
    // on the overall scale of u.
    let s2 = (2.0 * wf.ln_scale()).exp();
    Ok(Integrals {
        value: out.value.map(|v| v * s2),
        error: out.error.map(|e| e * s2),
        evaluations: out.evaluations + inner_evals.get(),
    })
}

fn log_norm_scale(wf: &WeylFunction) -> f64 {
    let n = wf.params().n;
    0.5 * (sphere_area(n - 2).ln() + (n - 1) as f64 * wf.ln_delta())
}

/// `‖Δu + λu‖ / ‖u‖` and the norms of the seven addends.
pub fn residual(wf: &WeylFunction, quad: &QuadratureSpec) -> Result<ResidualReport, WeylError> {
    let ints = integrate_all(wf, quad)?;
    let norm_u = ints.value[0].max(0.0).sqrt();
    if !(norm_u > 0.0) {
        return Err(WeylError::Numerics(NumericsError::NonFinite { at: wf.radial_support().0 }));
    }
    let norm_residual = ints.value[1].max(0.0).sqrt();
    let residual_error = if norm_residual > 0.0 {
        ints.error[1] / (2.0 * norm_residual)
    } else {
        ints.error[1].sqrt()
    };
    let params = wf.params();
    let (r_start, r_end) = wf.radial_support();
    Ok(ResidualReport {
        path: wf.path(),
        lambda: params.lambda,
        n: params.n,
        c: params.c,
        alpha: params.alpha,
        k: params.k,
        m: params.m,
        p: wf.p(),
        beta: wf.beta(),
        r_start,
        r_end,
        ln_delta: wf.ln_delta(),
        norm_u,
        norm_residual,
        ratio: norm_residual / norm_u,
        terms: TERM_NAMES
            .iter()
            .enumerate()
            .map(|(i, name)| TermNorm {
                name: name.to_string(),
                norm: ints.value[2 + i].max(0.0).sqrt(),
            })
            .collect(),
        log_norm_scale: log_norm_scale(wf),
        residual_error,
        evaluations: ints.evaluations,
    })
}

/// Minimum `k` for [`lemma5_ratios`].
pub const LEMMA5_MIN_K: usize = 12;

/// Ratios of the five auxiliary norms to `‖u‖`, with the bounds
/// `√2·3^{n/2}` for `χ_h F g` and `(2λ+3)√2·3^{n/2}` for `χ_h F′ g`.
pub fn lemma5_ratios(wf: &WeylFunction, quad: &QuadratureSpec) -> Result<Lemma5Report, WeylError> {
    let params = wf.params();
    if wf.path() != WeylPath::Standard {
        return Err(WeylError::BadParams("lemma ratios apply to the standard path".into()));
    }
    if params.k < LEMMA5_MIN_K {
        return Err(WeylError::BadParams(format!(
            "k={} is below the threshold {LEMMA5_MIN_K}",
            params.k
        )));
    }
    let ints = integrate_all(wf, quad)?;
    let norm_u = ints.value[0].sqrt();
    let base = 2f64.sqrt() * 3f64.powf(params.n as f64 / 2.0);
    let bounds = [Some(base), Some((2.0 * params.lambda + 3.0) * base), None, None, None];
    let measured = [
        ints.value[9],
        ints.value[10],
        ints.value[11],
        ints.value[12],
        ints.value[8],
    ];
    let ratios = LEMMA_NAMES
        .iter()
        .zip(measured)
        .zip(bounds)
        .map(|((name, sq), bound)| {
            let ratio = sq.max(0.0).sqrt() / norm_u;
            LemmaRatio {
                name: name.to_string(),
                ratio,
                bound,
                within: bound.map(|b| ratio <= b),
            }
        })
        .collect();
    Ok(Lemma5Report {
        lambda: params.lambda,
        n: params.n,
        k: params.k,
        p: wf.p(),
        ratios,
    })
}
