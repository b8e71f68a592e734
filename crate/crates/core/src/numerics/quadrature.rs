//! Globally adaptive Gauss–Legendre quadrature.
//!
//! Each panel is integrated with the 7-point Gauss–Legendre rule; the local
//! error is estimated by comparing against the 5-point rule on the same
//! panel. The panel with the largest weighted error is bisected until the
//! accumulated error meets `max(abs_tol, rel_tol * |I|)` for every
//! component, or a panel would exceed the depth limit.

use super::sampled::SampledFunction;
use super::NumericsError;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const GL7_NODES: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_5,
    -0.405_845_151_377_397_2,
    0.0,
    0.405_845_151_377_397_2,
    0.741_531_185_599_394_5,
    0.949_107_912_342_758_5,
];
const GL7_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_6,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_6,
    0.129_484_966_168_869_7,
];
const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Upper bound on live panels, independent of the depth limit.
const MAX_PANELS: usize = 400_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self, NumericsError> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_depth >= 1) {
            return Err(NumericsError::InvalidQuadratureSpec(*self));
        }
        Ok(())
    }

    /// Same spec with both tolerances multiplied by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_depth: self.max_depth,
        }
    }
}

/// Result of a vector-valued adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evaluations: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    depth: u32,
    est: [f64; N],
    err: [f64; N],
    key: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, o: &Self) -> bool {
        self.key.total_cmp(&o.key) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key.total_cmp(&o.key)
    }
}

fn rule<const N: usize, F>(f: &F, a: f64, b: f64) -> Result<([f64; N], [f64; N]), NumericsError>
where
    F: Fn(f64) -> [f64; N],
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut g7 = [0.0; N];
    let mut g5 = [0.0; N];
    for (x, w) in GL7_NODES.iter().zip(GL7_WEIGHTS) {
        let t = mid + half * x;
        let y = f(t);
        for j in 0..N {
            if !y[j].is_finite() {
                return Err(NumericsError::NonFinite { at: t });
            }
            g7[j] += w * y[j];
        }
    }
    for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
        let t = mid + half * x;
        let y = f(t);
        for j in 0..N {
            if !y[j].is_finite() {
                return Err(NumericsError::NonFinite { at: t });
            }
            g5[j] += w * y[j];
        }
    }
    let mut err = [0.0; N];
    for j in 0..N {
        g7[j] *= half;
        g5[j] *= half;
        err[j] = (g7[j] - g5[j]).abs();
    }
    Ok((g7, err))
}

/// Integrates a vector-valued function over consecutive intervals separated
/// by `breaks` (which must be non-decreasing). Breakpoints should sit on the
/// integrand's kinks.
pub fn integrate_many<const N: usize, F>(
    f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadOutcome<N>, NumericsError>
where
    F: Fn(f64) -> [f64; N],
{
    spec.validate()?;
    if breaks.len() < 2 {
        return Ok(QuadOutcome {
            value: [0.0; N],
            error: [0.0; N],
            evaluations: 0,
        });
    }
    for w in breaks.windows(2) {
        if !(w[0] <= w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(NumericsError::InvalidInterval { a: w[0], b: w[1] });
        }
    }

    let mut panels: Vec<Panel<N>> = Vec::new();
    let mut evaluations = 0usize;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (est, err) = rule(&f, w[0], w[1])?;
            evaluations += 12;
            panels.push(Panel {
                a: w[0],
                b: w[1],
                depth: 0,
                est,
                err,
                key: 0.0,
            });
        }
    }

    let mut total = [0.0; N];
    let mut errsum = [0.0; N];
    for p in &panels {
        for j in 0..N {
            total[j] += p.est[j];
            errsum[j] += p.err[j];
        }
    }
    let weights: [f64; N] = std::array::from_fn(|j| spec.abs_tol.max(spec.rel_tol * total[j].abs()));
    let key_of = |err: &[f64; N]| (0..N).map(|j| err[j] / weights[j]).fold(0.0, f64::max);

    let mut heap: BinaryHeap<Panel<N>> = panels
        .into_iter()
        .map(|mut p| {
            p.key = key_of(&p.err);
            p
        })
        .collect();

    let converged = |total: &[f64; N], errsum: &[f64; N]| {
        (0..N).all(|j| errsum[j] <= spec.abs_tol.max(spec.rel_tol * total[j].abs()))
    };

    while !converged(&total, &errsum) {
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= spec.max_depth || heap.len() + 2 > MAX_PANELS {
            heap.push(worst);
            let (value, error) = sum_panels(&heap);
            return Err(NumericsError::QuadratureExhausted {
                estimate: value.to_vec(),
                error_bound: error.to_vec(),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (e1, r1) = rule(&f, worst.a, mid)?;
        let (e2, r2) = rule(&f, mid, worst.b)?;
        evaluations += 24;
        for j in 0..N {
            total[j] += e1[j] + e2[j] - worst.est[j];
            errsum[j] += r1[j] + r2[j] - worst.err[j];
        }
        for (a, b, est, err) in [(worst.a, mid, e1, r1), (mid, worst.b, e2, r2)] {
            heap.push(Panel {
                a,
                b,
                depth: worst.depth + 1,
                est,
                err,
                key: key_of(&err),
            });
        }
    }

    let (value, error) = sum_panels(&heap);
    Ok(QuadOutcome {
        value,
        error,
        evaluations,
    })
}

fn sum_panels<const N: usize>(heap: &BinaryHeap<Panel<N>>) -> ([f64; N], [f64; N]) {
    // Sum left to right so the result does not depend on heap order.
    let mut ps: Vec<&Panel<N>> = heap.iter().collect();
    ps.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for p in ps {
        for j in 0..N {
            value[j] += p.est[j];
            error[j] += p.err[j];
        }
    }
    (value, error)
}

/// `∫_a^b f` to `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(a <= b) {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    let out = integrate_many(|x| [f(x)], &[a, b], spec)?;
    Ok(out.value[0])
}

/// Tabulates `V(r) = ∫_0^r f` on `steps` equal panels of `[r0, r1]`, with
/// `V(r0)` from a separate adaptive integral over `[0, r0]`. Returned as a
/// cubic Hermite interpolant whose node slopes are the exact `f` samples.
pub fn cumulative_integral<F>(
    f: F,
    r0: f64,
    r1: f64,
    steps: usize,
    spec: &QuadratureSpec,
) -> Result<SampledFunction, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if steps < 2 {
        return Err(NumericsError::TooFewSteps(steps));
    }
    if !(r0 >= 0.0 && r1 > r0) {
        return Err(NumericsError::InvalidInterval { a: r0, b: r1 });
    }
    let h = (r1 - r0) / steps as f64;
    let grid: Vec<f64> = (0..=steps).map(|i| r0 + h * i as f64).collect();
    let slopes: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    if let Some((i, _)) = slopes.iter().enumerate().find(|(_, y)| !(**y > 0.0)) {
        return Err(NumericsError::NonPositiveIntegrand { at: grid[i] });
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut acc = integrate(&f, 0.0, r0, spec)?;
    values.push(acc);
    for w in grid.windows(2) {
        acc += integrate(&f, w[0], w[1], spec)?;
        values.push(acc);
    }
    SampledFunction::cubic_hermite(grid, values, slopes)
}

/// Log-domain variant of [`cumulative_integral`]: the integrand is supplied
/// as `ln f` and the table holds `ln V`. Node slopes `f/V` are exact.
pub fn cumulative_log_integral<F>(
    ln_f: F,
    r0: f64,
    r1: f64,
    steps: usize,
    spec: &QuadratureSpec,
) -> Result<SampledFunction, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if steps < 2 {
        return Err(NumericsError::TooFewSteps(steps));
    }
    if !(r0 >= 0.0 && r1 > r0) {
        return Err(NumericsError::InvalidInterval { a: r0, b: r1 });
    }
    let h = (r1 - r0) / steps as f64;
    let grid: Vec<f64> = (0..=steps).map(|i| r0 + h * i as f64).collect();
    let ln_fs: Vec<f64> = grid.iter().map(|&x| ln_f(x)).collect();
    if let Some((i, _)) = ln_fs.iter().enumerate().find(|(_, y)| !y.is_finite()) {
        return Err(NumericsError::NonPositiveIntegrand { at: grid[i] });
    }

    // ∫_a^b e^{ln f} = e^L ∫_a^b e^{ln f - L}, with L the larger endpoint log.
    let ln_panel = |a: f64, b: f64, shift: f64| -> Result<f64, NumericsError> {
        let i = integrate(|x| (ln_f(x) - shift).exp(), a, b, spec)?;
        Ok(i.ln() + shift)
    };
    let first_shift = ln_f(r0).max(ln_f(0.5 * r0));
    let mut acc = if r0 > 0.0 {
        ln_panel(0.0, r0, first_shift)?
    } else {
        f64::NEG_INFINITY
    };
    let mut values = Vec::with_capacity(grid.len());
    values.push(acc);
    for (i, w) in grid.windows(2).enumerate() {
        let shift = ln_fs[i].max(ln_fs[i + 1]);
        let piece = ln_panel(w[0], w[1], shift)?;
        acc = log_add_exp(acc, piece);
        values.push(acc);
    }
    if !values.iter().skip(1).all(|v| v.is_finite()) || values[0].is_nan() {
        return Err(NumericsError::NonPositiveIntegrand { at: r0 });
    }
    if values[0] == f64::NEG_INFINITY {
        return Err(NumericsError::NonPositiveIntegrand { at: r0 });
    }
    let slopes: Vec<f64> = ln_fs
        .iter()
        .zip(&values)
        .map(|(lf, lv)| (lf - lv).exp())
        .collect();
    SampledFunction::cubic_hermite(grid, values, slopes)
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}
