//! Construction and pointwise evaluation of the cut-off test functions.
//!
//! Everything is evaluated in a normalized form: with `w` the radial weight
//! (`v` on the standard path), `u = w^{-1/2} û` where
//! `û = cos(βr) h(r) ĝ(s/δ)`. Working with `û` keeps the arithmetic finite
//! at radii where `w` itself overflows.

use super::cutoff::{beta_of, cutoff_H, node_radius};
use super::WeylError;
use crate::numerics::{cumulative_log_integral, QuadratureSpec, SampledFunction};
use crate::warp::{BinOp, Func, LogJet, ManifoldModel, WarpExpr};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Number of panels in the `ln v` table.
pub const DEFAULT_V_STEPS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylParams {
    pub lambda: f64,
    pub n: usize,
    pub c: f64,
    pub a: f64,
    pub c2: f64,
    pub k: usize,
    pub m: usize,
    /// Conformal exponent; zero on the standard path.
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl WeylParams {
    /// Standard-path parameters; `n`, `a`, `c2` are taken from the model.
    pub fn for_model(model: &ManifoldModel, lambda: f64, c: f64, k: usize, m: usize) -> Self {
        Self {
            lambda,
            n: model.n,
            c,
            a: model.a,
            c2: model.c2,
            k,
            m,
            alpha: 0.0,
            gamma: None,
        }
    }

    /// Zero-path parameters (`c = 0`, conformal exponent `alpha`).
    pub fn zero_for_model(model: &ManifoldModel, lambda: f64, alpha: f64, k: usize, m: usize) -> Self {
        Self {
            lambda,
            n: model.n,
            c: 0.0,
            a: model.a,
            c2: model.c2,
            k,
            m,
            alpha,
            gamma: None,
        }
    }

    pub fn p(&self) -> usize {
        self.k.checked_div(self.m).unwrap_or(0)
    }

    fn check_against(&self, model: &ManifoldModel) -> Result<(), WeylError> {
        let bad = |what: String| Err(WeylError::BadParams(what));
        if self.n != model.n {
            return bad(format!("n={} but the model has n={}", self.n, model.n));
        }
        if self.a != model.a || self.c2 != model.c2 {
            return bad(format!(
                "(a, c2)=({}, {}) differ from the model's ({}, {})",
                self.a, self.c2, model.a, model.c2
            ));
        }
        if self.m < 1 || self.p() < 1 {
            return bad(format!("p = floor(k/m) must be at least 1 (k={}, m={})", self.k, self.m));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return bad(format!("c={} must be finite and non-negative", self.c));
        }
        if self.a > 0.0 && self.c > 0.0 && self.c <= self.a {
            return bad(format!("c={} must exceed a={}", self.c, self.a));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha={} must be finite and non-negative", self.alpha));
        }
        if let Some(g) = self.gamma {
            if !(g > 1.0) {
                return bad(format!("gamma={g} must exceed 1"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeylPath {
    Standard,
    Zero,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub v_steps: usize,
    pub table_quad: QuadratureSpec,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            v_steps: DEFAULT_V_STEPS,
            table_quad: QuadratureSpec {
                abs_tol: 1e-15,
                rel_tol: 1e-13,
                max_depth: 40,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeylFunction {
    params: WeylParams,
    path: WeylPath,
    model: ManifoldModel,
    beta: f64,
    /// Exponent of the `e^{κr}` factor (zero path), else 0.
    kappa: f64,
    /// `λ − β²`.
    shift: f64,
    nodes: [f64; 5],
    ln_width: f64,
    width: f64,
    ln_v: SampledFunction,
    ln_scale: f64,
}

/// Radial quantities at a fixed `r`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Radial {
    pub meridian: LogJet,
    pub ln_w: f64,
    /// `w′/w`
    pub wp: f64,
    pub a_coef: f64,
    pub f_hat: f64,
    pub fp_hat: f64,
    pub h: (f64, f64, f64),
}

/// Integrand components at one point, all scaled by `w^{1/2}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Local {
    pub u: f64,
    pub terms: [f64; 7],
    /// Volume density relative to `dr dσ`, up to the constant `|S^{n-2}| δ^{n-1}`.
    pub rho: f64,
    /// `χ_h F g`, `χ_h F′ g`, `(ψ_s/ψ³) f g′`, `(cot s/ψ²) f g′`.
    pub lemma: [f64; 4],
}

/// `ĝ(σ) = H(σ) cos(πσ)` and two derivatives in σ.
pub fn angular_profile(sigma: f64) -> (f64, f64, f64) {
    let (hh, h1, h2) = cutoff_H(sigma);
    if hh == 0.0 && h1 == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let (sn, cs) = (PI * sigma).sin_cos();
    (
        hh * cs,
        h1 * cs - PI * hh * sn,
        h2 * cs - 2.0 * PI * h1 * sn - PI * PI * hh * cs,
    )
}

/// Builds the standard-path function `u_k = F h g` on `model`.
pub fn build_weyl(params: &WeylParams, model: &ManifoldModel) -> Result<WeylFunction, WeylError> {
    build_weyl_with(params, model, &BuildOptions::default())
}

pub fn build_weyl_with(
    params: &WeylParams,
    model: &ManifoldModel,
    opts: &BuildOptions,
) -> Result<WeylFunction, WeylError> {
    params.check_against(model)?;
    if params.alpha != 0.0 {
        return Err(WeylError::BadParams("the standard path needs alpha = 0".into()));
    }
    let beta = beta_of(params.lambda, params.n, params.c)?;
    let nm1 = (params.n - 1) as f64;
    let shift = nm1 * nm1 * params.c * params.c / 4.0;
    assemble(*params, WeylPath::Standard, model, beta, shift, 0.0, opts)
}

/// Builds `u_k = e^{κr} u_k^α` with `κ = (n−1)α/2` and `β = sqrt(λ)`, where
/// `u_k^α` is the standard construction on the conformal model `e^{αr}ψ`
/// with a fixed angular width `c2`.
pub fn build_weyl_zero(params: &WeylParams, model: &ManifoldModel) -> Result<WeylFunction, WeylError> {
    build_weyl_zero_with(params, model, &BuildOptions::default())
}

pub fn build_weyl_zero_with(
    params: &WeylParams,
    model: &ManifoldModel,
    opts: &BuildOptions,
) -> Result<WeylFunction, WeylError> {
    params.check_against(model)?;
    if model.a != 0.0 {
        return Err(WeylError::BadParams(format!(
            "the zero path needs a cone neighbourhood (a = 0), got a={}",
            model.a
        )));
    }
    if params.c != 0.0 {
        return Err(WeylError::BadParams("the zero path uses c = 0".into()));
    }
    let beta = beta_of(params.lambda, params.n, 0.0)?;
    let kappa = (params.n - 1) as f64 * params.alpha / 2.0;
    assemble(*params, WeylPath::Zero, model, beta, 0.0, kappa, opts)
}

/// The model with warp `e^{αr} ψ`.
pub fn conformal_model(model: &ManifoldModel, alpha: f64) -> Result<ManifoldModel, WeylError> {
    let factor = WarpExpr::func(Func::Exp, WarpExpr::bin(BinOp::Mul, WarpExpr::num(alpha), WarpExpr::r()));
    let warp = WarpExpr::bin(BinOp::Mul, factor, model.warp.clone());
    Ok(ManifoldModel::new(
        model.n,
        warp,
        model.a,
        model.c2,
        model.r_min,
        format!("{} (conformal alpha={alpha})", model.label),
    )?)
}

fn assemble(
    params: WeylParams,
    path: WeylPath,
    model: &ManifoldModel,
    beta: f64,
    shift: f64,
    kappa: f64,
    opts: &BuildOptions,
) -> Result<WeylFunction, WeylError> {
    let p = params.p();
    let k = params.k;
    let nodes = [
        node_radius(k, beta)?,
        node_radius(k + p, beta)?,
        node_radius(k + 2 * p, beta)?,
        node_radius(k + 3 * p, beta)?,
        node_radius(k + 4 * p, beta)?,
    ];
    if nodes[0] < model.r_min {
        return Err(WeylError::BadParams(format!(
            "support starts at r={} below r_min={}",
            nodes[0], model.r_min
        )));
    }
    let ln_width = match path {
        WeylPath::Standard => model.c2.ln() - model.a * nodes[4],
        WeylPath::Zero => model.c2.ln(),
    };
    let nm1 = (params.n - 1) as f64;
    let alpha = params.alpha;
    let warp = model.warp.clone();
    let error = std::cell::RefCell::new(None);
    let ln_integrand = |t: f64| match crate::warp::eval_warp_log(&warp, t, 0.0) {
        Ok(j) => nm1 * (j.ln_psi + alpha * t),
        Err(e) => {
            error.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let table = cumulative_log_integral(ln_integrand, model.r_min, nodes[4] + 1.0, opts.v_steps, &opts.table_quad);
    if let Some(e) = error.into_inner() {
        return Err(e.into());
    }
    Ok(WeylFunction {
        params,
        path,
        model: model.clone(),
        beta,
        kappa,
        shift,
        nodes,
        ln_width,
        width: ln_width.exp(),
        ln_v: table?,
        ln_scale: 0.0,
    })
}

impl WeylFunction {
    pub fn params(&self) -> &WeylParams {
        &self.params
    }

    pub fn path(&self) -> WeylPath {
        self.path
    }

    pub fn model(&self) -> &ManifoldModel {
        &self.model
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn p(&self) -> usize {
        self.params.p()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `r_k, r_{k+p}, r_{k+2p}, r_{k+3p}, r_{k+4p}`.
    pub fn nodes(&self) -> [f64; 5] {
        self.nodes
    }

    /// `[r_k, r_{k+4p}]`.
    pub fn radial_support(&self) -> (f64, f64) {
        (self.nodes[0], self.nodes[4])
    }

    /// Angular half-width `δ` (may underflow to 0; see [`Self::ln_delta`]).
    pub fn delta(&self) -> f64 {
        self.width
    }

    pub fn ln_delta(&self) -> f64 {
        self.ln_width
    }

    /// Returns a copy whose values are multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self, WeylError> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(WeylError::BadParams(format!("scale factor {factor} must be positive")));
        }
        let mut out = self.clone();
        out.ln_scale += factor.ln();
        Ok(out)
    }

    pub fn ln_scale(&self) -> f64 {
        self.ln_scale
    }

    /// `ln v(r)` from the table; `v = ∫_0^r (e^{ατ} ψ(τ,0))^{n−1} dτ`.
    pub fn ln_v(&self, r: f64) -> Result<f64, WeylError> {
        Ok(self.ln_v.eval(r)?)
    }

    /// `ln w(r) = ln v(r) − 2κr`.
    pub fn ln_w(&self, r: f64) -> Result<f64, WeylError> {
        Ok(self.ln_v.eval(r)? - 2.0 * self.kappa * r)
    }

    /// `h(r)` with two derivatives.
    pub fn h(&self, r: f64) -> (f64, f64, f64) {
        let len = self.nodes[4] - self.nodes[0];
        let (v, d1, d2) = cutoff_H(2.0 * (r - self.nodes[2]) / len);
        (v, d1 * 2.0 / len, d2 * 4.0 / (len * len))
    }

    /// `g(s)` with two derivatives in `s`. Requires a representable `δ`.
    pub fn g(&self, s: f64) -> (f64, f64, f64) {
        let (v, d1, d2) = angular_profile(self.sigma_of(s));
        (v, d1 / self.width, d2 / (self.width * self.width))
    }

    fn sigma_of(&self, s: f64) -> f64 {
        if self.width > 0.0 {
            s.abs() / self.width
        } else if s == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// `F(r) = w^{-1/2} cos(βr)` and `F′`, in plain floating point.
    pub fn cap_f(&self, r: f64) -> Result<(f64, f64), WeylError> {
        let rad = self.radial(r)?;
        let scale = (self.ln_scale - 0.5 * rad.ln_w).exp();
        Ok((scale * rad.f_hat, scale * rad.fp_hat))
    }

    /// `u(r, s)`; zero off the support. May underflow for large `k`.
    pub fn u(&self, r: f64, s: f64) -> Result<f64, WeylError> {
        self.u_relative(r, s, None)
    }

    /// `u(r, s) · w(r_ref)^{1/2}`, which stays O(1) near `r_ref`.
    /// `None` means no rescaling.
    pub fn u_relative(&self, r: f64, s: f64, r_ref: Option<f64>) -> Result<f64, WeylError> {
        if !self.in_support(r, s) {
            return Ok(0.0);
        }
        let ln_ref = match r_ref {
            Some(x) => self.ln_w(x)?,
            None => 0.0,
        };
        let (h, _, _) = self.h(r);
        let (g, _, _) = angular_profile(self.sigma_of(s));
        let scale = (self.ln_scale - 0.5 * (self.ln_w(r)? - ln_ref)).exp();
        Ok(scale * (self.beta * r).cos() * h * g)
    }

    fn in_support(&self, r: f64, s: f64) -> bool {
        r > self.nodes[0] && r < self.nodes[4] && self.sigma_of(s) < 1.0
    }

    /// The seven addends of `Δu + λu` at `(r, s)`, each multiplied by
    /// `w(r)^{1/2}`. Their sum equals `(Δu + λu)(r, s) · w(r)^{1/2}`.
    pub fn residual_terms(&self, r: f64, s: f64) -> Result<[f64; 7], WeylError> {
        if !self.in_support(r, s) {
            return Ok([0.0; 7]);
        }
        let rad = self.radial(r)?;
        let jet = self.model.log_jet(r, s.abs())?;
        let scale = self.ln_scale.exp();
        Ok(self.local(&rad, &jet, self.sigma_of(s)).terms.map(|t| scale * t))
    }

    pub(crate) fn radial(&self, r: f64) -> Result<Radial, WeylError> {
        let meridian = self.model.log_jet(r, 0.0)?;
        let nm1 = (self.params.n - 1) as f64;
        let alpha = self.params.alpha;
        let ln_v = self.ln_v.eval(r)?;
        // v′/v and v″/v′ for v = ∫ (e^{ατ}ψ)^{n−1}.
        let q1 = (nm1 * (meridian.ln_psi + alpha * r) - ln_v).exp();
        let vpp_over_vp = nm1 * (alpha + meridian.r);
        let kappa = self.kappa;
        let wp = q1 - 2.0 * kappa;
        let wpp = vpp_over_vp * q1 - 4.0 * kappa * q1 + 4.0 * kappa * kappa;
        let a_coef = 0.25 * wp * wp - 0.5 * wpp + self.shift;
        let (sn, cs) = (self.beta * r).sin_cos();
        Ok(Radial {
            meridian,
            ln_w: ln_v - 2.0 * kappa * r,
            wp,
            a_coef,
            f_hat: cs,
            fp_hat: -self.beta * sn - 0.5 * wp * cs,
            h: self.h(r),
        })
    }

    /// Local integrand data for the unscaled profile; `jet` is the log-jet at `(r, δσ)`.
    pub(crate) fn local(&self, rad: &Radial, jet: &LogJet, sigma: f64) -> Local {
        let n = self.params.n;
        let nm1 = (n - 1) as f64;
        let (g, g1, g2) = angular_profile(sigma);
        let (h, h1, h2) = rad.h;
        let f = rad.f_hat;
        let fp = rad.fp_hat;
        let b_coef = nm1 * jet.r - rad.wp;
        let lap_h = h2 + nm1 * jet.r * h1;

        // δ/ψ²δ² and 1/ψ²δ², from logs so that neither factor overflows.
        let dq = (-self.ln_width - 2.0 * jet.ln_psi).exp();
        let q = (-2.0 * self.ln_width - 2.0 * jet.ln_psi).exp();
        // δ cot(δσ) ĝ′(σ), with the σ → 0 limit ĝ″(0).
        let x = self.width * sigma;
        let cot_g1 = if sigma == 0.0 {
            g2
        } else if x < 1e-8 {
            g1 / sigma * (1.0 - x * x / 3.0)
        } else {
            self.width * x.cos() / x.sin() * g1
        };
        let fh = f * h;
        let psi_s_part = jet.s * dq * fh * g1;
        let cot_part = cot_g1 * q * fh;
        let terms = [
            rad.a_coef * fh * g,
            b_coef * fp * h * g,
            2.0 * fp * g * h1,
            f * g * lap_h,
            (n as f64 - 3.0) * psi_s_part,
            (n as f64 - 2.0) * cot_part,
            q * fh * g2,
        ];
        let sin_ratio = if x < 1e-8 {
            sigma * (1.0 - x * x / 6.0)
        } else {
            x.sin() / self.width
        };
        let rho = (nm1 * jet.ln_psi - rad.ln_w).exp() * sin_ratio.powi(n as i32 - 2);
        Local {
            u: fh * g,
            terms,
            rho,
            lemma: [f * g, fp * g, psi_s_part, cot_part],
        }
    }

    /// Angular width used to rescale `s` (`δ` or `c2`).
    pub(crate) fn width(&self) -> f64 {
        self.width
    }
}
