//! Curvature diagnostics and sampled checks of the warp hypotheses.
//!
//! Limits cannot be certified from finitely many samples. A limit check
//! passes when the per-slice supremum is non-increasing along the radii and
//! ends below `tol_uniform`; small but non-monotone data is inconclusive.

use crate::warp::{DomainError, ManifoldModel};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

pub const DEFAULT_S_POINTS: usize = 33;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("sample grid is empty")]
    EmptyGrid,
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("check requires a = 0, model has a = {0}")]
    NeedsConeNeighbourhood(f64),
    #[error("gamma must exceed 1, got {0}")]
    BadGamma(f64),
    #[error("r = {r} is below the model's r_min = {r_min}")]
    BelowRMin { r: f64, r_min: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("non-finite {what} at (r={r}, s={s})")]
    NonFinite { what: &'static str, r: f64, s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// The less favourable of two verdicts.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub r: f64,
    pub s: f64,
    /// `ψ_r/ψ`
    pub mean_curvature_ratio: f64,
    /// `Δr = (n−1) ψ_r/ψ`
    pub laplacian_r: f64,
    /// `−ψ_rr/ψ`
    pub radial_k: f64,
}

pub fn curvature_at(model: &ManifoldModel, r: f64, s: f64) -> Result<CurvatureSample, GeometryError> {
    if r < model.r_min {
        return Err(GeometryError::BelowRMin { r, r_min: model.r_min });
    }
    let j = model.log_jet(r, s)?;
    let ratio = j.r;
    Ok(CurvatureSample {
        r,
        s,
        mean_curvature_ratio: ratio,
        laplacian_r: (model.n - 1) as f64 * ratio,
        radial_k: -j.rr,
    })
}

/// Radii to sample plus the number of `s` points per radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub radii: Vec<f64>,
    #[serde(default = "default_s_points")]
    pub s_points: usize,
}

fn default_s_points() -> usize {
    DEFAULT_S_POINTS
}

impl SampleGrid {
    pub fn new(radii: Vec<f64>, s_points: usize) -> Result<Self, GeometryError> {
        let g = Self { radii, s_points };
        g.validate()?;
        Ok(g)
    }

    /// `count` radii in geometric progression from `r0` to `r1`.
    pub fn geometric(r0: f64, r1: f64, count: usize) -> Result<Self, GeometryError> {
        if count == 0 {
            return Err(GeometryError::EmptyGrid);
        }
        if !(r0 > 0.0 && r1 >= r0) {
            return Err(GeometryError::BadGrid(format!("need 0 < r0 <= r1, got [{r0}, {r1}]")));
        }
        let radii = if count == 1 {
            vec![r0]
        } else {
            let q = (r1 / r0).powf(1.0 / (count - 1) as f64);
            (0..count)
                .map(|i| if i + 1 == count { r1 } else { r0 * q.powi(i as i32) })
                .collect()
        };
        Self::new(radii, DEFAULT_S_POINTS)
    }

    fn validate(&self) -> Result<(), GeometryError> {
        if self.radii.is_empty() || self.s_points == 0 {
            return Err(GeometryError::EmptyGrid);
        }
        if !self.radii.windows(2).all(|w| w[1] > w[0]) || !self.radii.iter().all(|r| r.is_finite()) {
            return Err(GeometryError::BadGrid("radii must be finite and strictly increasing".into()));
        }
        Ok(())
    }
}

/// Chebyshev–Lobatto points on `[0, width]`, clustered at both ends.
pub fn chebyshev_points(width: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    (0..count)
        .map(|j| 0.5 * width * (1.0 - (j as f64 * PI / (count - 1) as f64).cos()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckTolerances {
    /// Final slice supremum allowed for a limit that should be zero.
    pub tol_uniform: f64,
    /// Required `ψ(last)/ψ(first)` for the divergence check.
    pub growth_factor: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            tol_uniform: 1e-3,
            growth_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
}

/// One tested inequality or limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub condition: String,
    pub verdict: Verdict,
    pub observed_sup: f64,
    /// `(r, sup over s of the tested quantity)`, radii increasing.
    pub trend: Vec<(f64, f64)>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub condition: String,
    pub verdict: Verdict,
    pub observed_sup: f64,
    pub trend: Vec<(f64, f64)>,
    pub parameters: CheckParameters,
    pub subchecks: Vec<SubCheck>,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    fn assemble(condition: &str, parameters: CheckParameters, subchecks: Vec<SubCheck>, notes: Vec<String>) -> Self {
        let verdict = subchecks.iter().fold(Verdict::Pass, |v, c| v.and(c.verdict));
        let lead = &subchecks[0];
        Self {
            condition: condition.to_string(),
            verdict,
            observed_sup: lead.observed_sup,
            trend: lead.trend.clone(),
            parameters,
            subchecks,
            notes,
        }
    }

    /// Rows `condition,r,sup_value` for every sub-check trend.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("condition,r,sup_value\n");
        for sc in &self.subchecks {
            for (r, v) in &sc.trend {
                let _ = writeln!(out, "{},{},{}", sc.condition, r, v);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

// Slice values are differences of O(1) ratios, resolved only to a few ulps.
const ROUNDOFF_FLOOR: f64 = 1e-13;

fn non_increasing(trend: &[(f64, f64)]) -> bool {
    trend
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 + (1e-12 * w[0].1.abs()).max(ROUNDOFF_FLOOR))
}

fn limit_verdict(trend: &[(f64, f64)], tol: f64) -> Verdict {
    let last = trend.last().map_or(f64::INFINITY, |t| t.1);
    if !(last <= tol) {
        Verdict::Fail
    } else if non_increasing(trend) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

fn sup_of(trend: &[(f64, f64)]) -> f64 {
    trend.iter().map(|t| t.1).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy)]
struct Slice {
    r: f64,
    // sup over s of each probed quantity
    values: [f64; 3],
    ok_bound: bool,
}

/// Evaluates `probe` at the `s` samples of each radius, keeping per-slice
/// suprema. `probe` returns three quantities and a bound flag.
fn sweep<F>(
    model: &ManifoldModel,
    radii: &[f64],
    s_width: impl Fn(f64) -> f64 + Sync,
    s_points: usize,
    probe: F,
) -> Result<Vec<Slice>, GeometryError>
where
    F: Fn(f64, f64, &crate::warp::LogJet) -> ([f64; 3], bool) + Sync,
{
    radii
        .par_iter()
        .map(|&r| {
            if r < model.r_min {
                return Err(GeometryError::BelowRMin { r, r_min: model.r_min });
            }
            let mut values = [0.0f64; 3];
            let mut ok_bound = true;
            for s in chebyshev_points(s_width(r), s_points) {
                let j = model.log_jet(r, s)?;
                let (v, ok) = probe(r, s, &j);
                for (acc, x) in values.iter_mut().zip(v) {
                    if !x.is_finite() {
                        return Err(GeometryError::NonFinite { what: "warp ratio", r, s });
                    }
                    *acc = acc.max(x);
                }
                ok_bound &= ok;
            }
            Ok(Slice { r, values, ok_bound })
        })
        .collect()
}

fn trend_of(slices: &[Slice], k: usize) -> Vec<(f64, f64)> {
    slices.iter().map(|s| (s.r, s.values[k])).collect()
}

pub fn check_thm1(model: &ManifoldModel, c: f64, c1: f64, grid: &SampleGrid) -> Result<HypothesisReport, GeometryError> {
    check_thm1_with(model, c, c1, grid, &CheckTolerances::default())
}

/// Condition (i): `ψ_r/ψ → c` uniformly on the neighbourhood.
/// Condition (ii): `|ψ_s/ψ| ≤ c1` there.
pub fn check_thm1_with(
    model: &ManifoldModel,
    c: f64,
    c1: f64,
    grid: &SampleGrid,
    tol: &CheckTolerances,
) -> Result<HypothesisReport, GeometryError> {
    grid.validate()?;
    let slices = sweep(model, &grid.radii, |r| model.s_radius(r), grid.s_points, |_, _, j| {
        ([(j.r - c).abs(), j.s.abs(), 0.0], j.s.abs() <= c1)
    })?;
    let t1 = trend_of(&slices, 0);
    let t2 = trend_of(&slices, 1);
    let ii_ok = slices.iter().all(|s| s.ok_bound);
    let mut notes = Vec::new();
    if !(c > model.a) {
        notes.push(format!("strict_c_gt_a: false (c={c}, a={})", model.a));
    }
    if model.a == 0.0 {
        notes.push("a = 0: neighbourhood is a cone".to_string());
    }
    let subchecks = vec![
        SubCheck {
            condition: "thm1.i".into(),
            verdict: limit_verdict(&t1, tol.tol_uniform),
            observed_sup: sup_of(&t1),
            detail: format!("sup_s |psi_r/psi - {c}| per radius; final {:e}", t1.last().map_or(0.0, |t| t.1)),
            trend: t1,
        },
        SubCheck {
            condition: "thm1.ii".into(),
            verdict: if ii_ok { Verdict::Pass } else { Verdict::Fail },
            observed_sup: sup_of(&t2),
            detail: format!("sup |psi_s/psi| against c1 = {c1}"),
            trend: t2,
        },
    ];
    let params = CheckParameters {
        c: Some(c),
        a: Some(model.a),
        c1: Some(c1),
        c2: Some(model.c2),
        ..Default::default()
    };
    Ok(HypothesisReport::assemble("thm1", params, subchecks, notes))
}

pub fn check_thm2(model: &ManifoldModel, c1: f64, gamma: f64, grid: &SampleGrid) -> Result<HypothesisReport, GeometryError> {
    check_thm2_with(model, c1, gamma, grid, &CheckTolerances::default())
}

/// (i) `ψ_r/ψ → 0` slicewise, (ii) `ψ → ∞`, (iii) `|ψ_s/ψ| ≤ c1/r^γ`.
pub fn check_thm2_with(
    model: &ManifoldModel,
    c1: f64,
    gamma: f64,
    grid: &SampleGrid,
    tol: &CheckTolerances,
) -> Result<HypothesisReport, GeometryError> {
    grid.validate()?;
    if model.a != 0.0 {
        return Err(GeometryError::NeedsConeNeighbourhood(model.a));
    }
    if !(gamma > 1.0) {
        return Err(GeometryError::BadGamma(gamma));
    }
    let slices = sweep(model, &grid.radii, |_| model.c2, grid.s_points, |r, _, j| {
        let bound = c1 / r.powf(gamma);
        ([j.r.abs(), j.s.abs() * r.powf(gamma), 0.0], j.s.abs() <= bound)
    })?;
    let t1 = trend_of(&slices, 0);
    let t3 = trend_of(&slices, 1);

    // Growth of ψ along every sampled direction.
    let (r0, r1) = (grid.radii[0], *grid.radii.last().expect("non-empty"));
    let mut worst_growth = f64::INFINITY;
    let mut growth_trend = Vec::with_capacity(grid.radii.len());
    let ss = chebyshev_points(model.c2, grid.s_points);
    let first: Vec<f64> = ss
        .iter()
        .map(|&s| model.log_jet(r0, s).map(|j| j.ln_psi))
        .collect::<Result<_, _>>()?;
    for &r in &grid.radii {
        let mut low = f64::INFINITY;
        for (s, l0) in ss.iter().zip(&first) {
            low = low.min(model.log_jet(r, *s)?.ln_psi - l0);
        }
        growth_trend.push((r, low));
        if r == r1 {
            worst_growth = low;
        }
    }
    let grows = worst_growth >= tol.growth_factor.ln();

    let subchecks = vec![
        SubCheck {
            condition: "thm2.i".into(),
            verdict: limit_verdict(&t1, tol.tol_uniform),
            observed_sup: sup_of(&t1),
            detail: "sup_s |psi_r/psi| per radius".into(),
            trend: t1,
        },
        SubCheck {
            condition: "thm2.ii".into(),
            verdict: if grows { Verdict::Pass } else { Verdict::Fail },
            observed_sup: worst_growth,
            detail: format!(
                "min over s of ln(psi(r_last)/psi(r_first)) against ln {}",
                tol.growth_factor
            ),
            trend: growth_trend,
        },
        SubCheck {
            condition: "thm2.iii".into(),
            verdict: if slices.iter().all(|s| s.ok_bound) { Verdict::Pass } else { Verdict::Fail },
            observed_sup: sup_of(&t3),
            detail: format!("sup_s r^gamma |psi_s/psi| against c1 = {c1}"),
            trend: t3,
        },
    ];
    let params = CheckParameters {
        a: Some(0.0),
        c1: Some(c1),
        c2: Some(model.c2),
        gamma: Some(gamma),
        ..Default::default()
    };
    Ok(HypothesisReport::assemble("thm2", params, subchecks, Vec::new()))
}

/// Which directions the mean-curvature condition is tested on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SRange {
    /// `|s| ≤ c2 e^{-a r}`
    #[default]
    Neighbourhood,
    /// Every direction, `s ∈ [0, π]`.
    FullSphere,
}

/// For each `n` in `r_list`, `sup_{r ≥ n} |Δr − c|` over sampled radii
/// `r ∈ [n, 10·max(r_list)]`.
pub fn check_kumura(
    model: &ManifoldModel,
    c: f64,
    r_list: &[f64],
    s_range: SRange,
) -> Result<HypothesisReport, GeometryError> {
    check_kumura_with(model, c, r_list, s_range, DEFAULT_S_POINTS, &CheckTolerances::default())
}

pub fn check_kumura_with(
    model: &ManifoldModel,
    c: f64,
    r_list: &[f64],
    s_range: SRange,
    s_points: usize,
    tol: &CheckTolerances,
) -> Result<HypothesisReport, GeometryError> {
    if r_list.is_empty() || s_points == 0 {
        return Err(GeometryError::EmptyGrid);
    }
    if !r_list.windows(2).all(|w| w[1] > w[0]) {
        return Err(GeometryError::BadGrid("r_list must be increasing".into()));
    }
    let lo = r_list[0];
    let hi = 10.0 * r_list[r_list.len() - 1];
    let mut radii: Vec<f64> = SampleGrid::geometric(lo, hi, 256)?.radii;
    radii.extend_from_slice(r_list);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let nm1 = (model.n - 1) as f64;
    let width = |r: f64| match s_range {
        SRange::Neighbourhood => model.s_radius(r),
        SRange::FullSphere => PI,
    };
    let slices = sweep(model, &radii, width, s_points, |_, _, j| ([(nm1 * j.r - c).abs(), 0.0, 0.0], true))?;
    let trend: Vec<(f64, f64)> = r_list
        .iter()
        .map(|&n| {
            let sup = slices
                .iter()
                .filter(|s| s.r >= n)
                .map(|s| s.values[0])
                .fold(0.0, f64::max);
            (n, sup)
        })
        .collect();
    let sub = SubCheck {
        condition: "kumura".into(),
        verdict: limit_verdict(&trend, tol.tol_uniform),
        observed_sup: sup_of(&trend),
        detail: format!("sup over r >= n of |Delta r - {c}|, s range {s_range:?}"),
        trend,
    };
    let params = CheckParameters {
        c: Some(c),
        a: Some(model.a),
        c2: Some(model.c2),
        ..Default::default()
    };
    Ok(HypothesisReport::assemble("kumura", params, vec![sub], Vec::new()))
}

/// The set `{ s ≤ c e^{-b r} }` tested for inclusion in the horoball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoroballParams {
    pub c: f64,
    pub b: f64,
}

impl Default for HoroballParams {
    fn default() -> Self {
        Self { c: 1.0, b: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoroballResult {
    pub inside: bool,
    pub min_margin: f64,
    /// Where the minimum occurs.
    pub argmin: (f64, f64),
}

/// `(1 + cos s)² − sin²s · e^r`; non-negative exactly on the horoball.
pub fn horoball_margin_at(r: f64, s: f64) -> f64 {
    let sin = s.sin();
    let lhs = if sin == 0.0 { 0.0 } else { (2.0 * sin.abs().ln() + r).exp() };
    (1.0 + s.cos()).powi(2) - lhs
}

pub fn horoball_margin(r_max: f64, grid_steps: usize) -> Result<(bool, f64), GeometryError> {
    let res = horoball_margin_with(r_max, grid_steps, HoroballParams::default())?;
    Ok((res.inside, res.min_margin))
}

/// Grid `r_i = r_max·i/steps`, `s_j = c e^{-b r_i}·j/steps`, `i = 0..steps`, `j = 1..steps`.
pub fn horoball_margin_with(r_max: f64, grid_steps: usize, p: HoroballParams) -> Result<HoroballResult, GeometryError> {
    if !(r_max > 0.0) || grid_steps < 2 {
        return Err(GeometryError::BadGrid(format!("need r_max > 0 and steps >= 2, got {r_max}, {grid_steps}")));
    }
    let rows: Vec<(f64, f64, f64)> = (0..=grid_steps)
        .into_par_iter()
        .map(|i| {
            let r = r_max * i as f64 / grid_steps as f64;
            let width = p.c * (-p.b * r).exp();
            (1..=grid_steps)
                .map(|j| {
                    let s = width * j as f64 / grid_steps as f64;
                    (horoball_margin_at(r, s), r, s)
                })
                .fold((f64::INFINITY, 0.0, 0.0), |m, x| if x.0 < m.0 { x } else { m })
        })
        .collect();
    let (m, r, s) = rows
        .into_iter()
        .fold((f64::INFINITY, 0.0, 0.0), |m, x| if x.0 < m.0 { x } else { m });
    Ok(HoroballResult {
        inside: m >= 0.0,
        min_margin: m,
        argmin: (r, s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warp::{builtin_model, parse_warp};

    fn far_grid() -> SampleGrid {
        SampleGrid::geometric(1.0, 2000.0, 40).unwrap()
    }

    #[test]
    fn appendix_curvature_on_the_ray() {
        let m = builtin_model("appendix-surface(1)").unwrap();
        let k = curvature_at(&m, 2.0, 0.0).unwrap();
        assert!((k.radial_k + 2.0).abs() < 1e-12);
        assert_eq!(k.laplacian_r, k.mean_curvature_ratio);
    }

    #[test]
    fn constant_curvature_models() {
        let h = builtin_model("hyperbolic(2)").unwrap();
        for r in [0.5, 3.0, 40.0] {
            assert!((curvature_at(&h, r, 0.1).unwrap().radial_k + 1.0).abs() < 1e-12);
        }
        let cone = builtin_model("euclidean-cone(4, 0.5)").unwrap();
        let k = curvature_at(&cone, 5.0, 0.2).unwrap();
        assert_eq!(k.radial_k, 0.0);
        assert!((k.laplacian_r - 3.0 / 5.0).abs() < 1e-15);
        assert!(curvature_at(&cone, 0.001, 0.0).is_err());
    }

    #[test]
    fn thm1_verdicts() {
        let e = builtin_model("exp-model(2, 1, 0.5)").unwrap();
        let rep = check_thm1(&e, 1.0, 1.0, &far_grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert_eq!(rep.observed_sup, 0.0);

        let h = builtin_model("hyperbolic(2)").unwrap();
        let rep = check_thm1(&h, 0.5, 1.0, &far_grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!((rep.trend.last().unwrap().1 - 0.5).abs() < 1e-12);
        assert!(!rep.notes.is_empty());

        let ap = builtin_model("appendix-surface(1)").unwrap();
        let rep = check_thm1(&ap, 1.0, 1.0, &far_grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.subchecks[0].trend);
    }

    #[test]
    fn thm2_verdicts() {
        let cone = builtin_model("euclidean-cone(2, 0.5)").unwrap();
        let rep = check_thm2(&cone, 1.0, 1.2, &far_grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);

        let exp0 = ManifoldModel::new(2, parse_warp("exp(r)").unwrap(), 0.0, 0.5, 0.01, "").unwrap();
        let rep = check_thm2(&exp0, 1.0, 1.5, &far_grid()).unwrap();
        assert_eq!(rep.subchecks[0].verdict, Verdict::Fail);

        let bumpy = ManifoldModel::new(2, parse_warp("r*(2+sin(s))").unwrap(), 0.0, 0.5, 0.01, "").unwrap();
        let rep = check_thm2(&bumpy, 1.0, 1.5, &far_grid()).unwrap();
        assert_eq!(rep.subchecks[2].verdict, Verdict::Fail);

        let e = builtin_model("exp-model(2, 1, 0.5)").unwrap();
        assert!(matches!(check_thm2(&e, 1.0, 1.5, &far_grid()), Err(GeometryError::NeedsConeNeighbourhood(_))));
        assert!(matches!(check_thm2(&cone, 1.0, 1.0, &far_grid()), Err(GeometryError::BadGamma(_))));
    }

    #[test]
    fn kumura_verdicts() {
        let h = builtin_model("hyperbolic(2)").unwrap();
        let rep = check_kumura(&h, 1.0, &[1.0, 2.0, 4.0, 8.0, 16.0], SRange::Neighbourhood).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        for (n, sup) in &rep.trend {
            assert!((sup - (1.0 / n.tanh() - 1.0)).abs() < 1e-12);
        }
        let cone = builtin_model("euclidean-cone(2, 0.5)").unwrap();
        let rep = check_kumura(&cone, 0.0, &[10.0, 100.0, 2000.0], SRange::Neighbourhood).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!((rep.trend[1].1 - 0.01).abs() < 1e-15);

        let ap = builtin_model("appendix-surface(1)").unwrap();
        let rep = check_kumura(&ap, 1.0, &[10.0, 100.0, 1000.0], SRange::FullSphere).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn horoball() {
        let (inside, margin) = horoball_margin(50.0, 400).unwrap();
        assert!(inside && margin > 0.0);
        assert!((horoball_margin_at(0.0, 1.0) - ((1.0 + 1f64.cos()).powi(2) - 1f64.sin().powi(2))).abs() < 1e-15);
        assert!((horoball_margin_at(7.0, 1e-9) - 4.0).abs() < 1e-6);
        assert!(horoball_margin(0.0, 10).is_err());
    }

    #[test]
    fn csv_and_json() {
        let h = builtin_model("hyperbolic(2)").unwrap();
        let rep = check_thm1(&h, 1.0, 1.0, &SampleGrid::geometric(1.0, 4.0, 3).unwrap()).unwrap();
        let csv = rep.to_csv();
        assert!(csv.starts_with("condition,r,sup_value\nthm1.i,1,"));
        assert_eq!(csv.lines().count(), 1 + 6);
        let back: HypothesisReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }
}
