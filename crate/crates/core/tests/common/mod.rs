#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weylspec_core::warp::{Builtin, ManifoldModel};
use weylspec_core::weyl::WeylFunction;

pub fn exp_model() -> ManifoldModel {
    Builtin::ExpModel { n: 2, c: 1.0, a: 0.5, c2: 1.0 }.model().unwrap()
}

pub fn cone() -> ManifoldModel {
    Builtin::EuclideanCone { n: 2, c2: 0.5 }.model().unwrap()
}

/// Δu + λu by 5-point differences on
/// u_rr + (n−1)(ψ_r/ψ)u_r + ψ^{-2}[u_ss + ((n−2)cot s + (n−3)ψ_s/ψ)u_s].
pub fn fd_residual(wf: &WeylFunction, r: f64, s: f64) -> f64 {
    let model = wf.model();
    let n = model.n as f64;
    let hr = 1e-3;
    let hs = 1e-3 * wf.delta();
    let u = |x: f64, y: f64| wf.u_relative(x, y, Some(r)).unwrap();
    let d1 = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    };
    let d2 = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
        (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
    };
    let ur = d1(&|x| u(x, s), r, hr);
    let urr = d2(&|x| u(x, s), r, hr);
    let us = d1(&|y| u(r, y), s, hs);
    let uss = d2(&|y| u(r, y), s, hs);
    let jet = model.jet(r, s).unwrap();
    let angular = uss + ((n - 2.0) / s.tan() + (n - 3.0) * jet.psi_s / jet.psi) * us;
    urr + (n - 1.0) * jet.psi_r / jet.psi * ur + angular / (jet.psi * jet.psi) + wf.params().lambda * u(r, s)
}

fn near(x: f64, marks: &[f64], gap: f64) -> bool {
    marks.iter().any(|m| (x - m).abs() < gap)
}

/// Largest `|fd − Σ terms|` over `points` random support points, relative to
/// the largest `|Σ terms|` seen.
pub fn termwise_error(wf: &WeylFunction, points: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = wf.nodes();
    let (r0, r1) = wf.radial_support();
    let delta = wf.delta();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut taken = 0;
    while taken < points {
        let r = rng.random_range(r0..r1);
        let sigma: f64 = rng.random_range(0.02..0.98);
        // The profile is only C² at its joins; keep the stencils off them.
        if near(r, &[nodes[1], nodes[3]], 0.01) || near(sigma, &[0.5], 0.01) {
            continue;
        }
        let s = sigma * delta;
        let sum: f64 = wf.residual_terms(r, s).unwrap().iter().sum();
        let fd = fd_residual(wf, r, s);
        scale = scale.max(sum.abs());
        worst = worst.max((fd - sum).abs());
        taken += 1;
    }
    worst / scale
}
