//! The C² cut-off profile `H` and node radii.

use super::WeylError;
use std::f64::consts::PI;

/// Quintic smoothstep `6x⁵ − 15x⁴ + 10x³` and its first two derivatives.
fn smoothstep(x: f64) -> (f64, f64, f64) {
    let x2 = x * x;
    let v = x2 * x * (10.0 + x * (-15.0 + 6.0 * x));
    let d1 = 30.0 * x2 * (x - 1.0) * (x - 1.0);
    let d2 = 60.0 * x * (2.0 * x - 1.0) * (x - 1.0);
    (v, d1, d2)
}

/// `H(t)`: 1 on `[−1/2, 1/2]`, 0 outside `(−1, 1)`, smoothstep in between.
/// Returns `(H, H′, H″)`.
#[allow(non_snake_case)]
pub fn cutoff_H(t: f64) -> (f64, f64, f64) {
    let a = t.abs();
    if a <= 0.5 {
        return (1.0, 0.0, 0.0);
    }
    if a >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let (v, d1, d2) = smoothstep(2.0 * (1.0 - a));
    let sign = t.signum();
    (v, -2.0 * sign * d1, 4.0 * d2)
}

/// `β = sqrt(λ − (n−1)²c²/4)`.
pub fn beta_of(lambda: f64, n: usize, c: f64) -> Result<f64, WeylError> {
    let bottom = bottom_of(n, c);
    if !(lambda >= bottom) {
        return Err(WeylError::BelowBottom { lambda, bottom });
    }
    Ok((lambda - bottom).sqrt())
}

/// `(n−1)²c²/4`.
pub fn bottom_of(n: usize, c: f64) -> f64 {
    let nm1 = (n - 1) as f64;
    nm1 * nm1 * c * c / 4.0
}

/// `r_k = (2k+1)π/(2β)`, the k-th positive zero of `cos(β r)`.
pub fn node_radius(k: usize, beta: f64) -> Result<f64, WeylError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(WeylError::ZeroBeta(beta));
    }
    Ok((2 * k + 1) as f64 * PI / (2.0 * beta))
}
