//! Second-order forward-mode automatic differentiation in two variables.
//!
//! A [`HyperDual`] carries a value together with its first and second
//! partial derivatives with respect to `r` and `s`. Every operation applies
//! the product / chain rule exactly, so evaluating an expression on lifted
//! inputs yields the exact symbolic derivatives up to rounding.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HyperDual {
    pub value: f64,
    pub d_r: f64,
    pub d_s: f64,
    pub d_rr: f64,
    pub d_rs: f64,
    pub d_ss: f64,
}

impl HyperDual {
    pub const fn new(value: f64, d_r: f64, d_s: f64, d_rr: f64, d_rs: f64, d_ss: f64) -> Self {
        Self {
            value,
            d_r,
            d_s,
            d_rr,
            d_rs,
            d_ss,
        }
    }

    /// A constant: all derivative slots are zero.
    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// The independent variable `r` evaluated at `value`.
    pub const fn var_r(value: f64) -> Self {
        Self::new(value, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// The independent variable `s` evaluated at `value`.
    pub const fn var_s(value: f64) -> Self {
        Self::new(value, 0.0, 1.0, 0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    pub fn components(&self) -> [f64; 6] {
        [self.value, self.d_r, self.d_s, self.d_rr, self.d_rs, self.d_ss]
    }

    pub fn from_components(c: [f64; 6]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }

    pub fn scale(self, k: f64) -> Self {
        Self::from_components(self.components().map(|c| c * k))
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    pub fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            value: f,
            d_r: df * self.d_r,
            d_s: df * self.d_s,
            d_rr: d2f * self.d_r * self.d_r + df * self.d_rr,
            d_rs: d2f * self.d_r * self.d_s + df * self.d_rs,
            d_ss: d2f * self.d_s * self.d_s + df * self.d_ss,
        }
    }

    pub fn recip(self) -> Self {
        let x = self.value;
        let inv = 1.0 / x;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.value;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sqrt(self) -> Self {
        let q = self.value.sqrt();
        self.chain(q, 0.5 / q, -0.25 / (q * self.value))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(self) -> Self {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn sinh(self) -> Self {
        let (sh, ch) = (self.value.sinh(), self.value.cosh());
        self.chain(sh, ch, sh)
    }

    pub fn cosh(self) -> Self {
        let (sh, ch) = (self.value.sinh(), self.value.cosh());
        self.chain(ch, sh, ch)
    }

    pub fn tanh(self) -> Self {
        let t = self.value.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    /// `|x|`; the derivative at zero is taken from the positive branch.
    pub fn abs(self) -> Self {
        if self.value < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn powi(self, n: i32) -> Self {
        let x = self.value;
        let nf = f64::from(n);
        match n {
            0 => Self::constant(1.0),
            1 => self,
            _ => self.chain(
                x.powi(n),
                nf * x.powi(n - 1),
                nf * (nf - 1.0) * x.powi(n - 2),
            ),
        }
    }

    pub fn powf(self, p: f64) -> Self {
        let x = self.value;
        self.chain(
            x.powf(p),
            p * x.powf(p - 1.0),
            p * (p - 1.0) * x.powf(p - 2.0),
        )
    }

    /// `x^y` for a non-constant exponent, as `exp(y ln x)`.
    pub fn pow(self, y: Self) -> Self {
        (y * self.ln()).exp()
    }
}

impl fmt::Display for HyperDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [r: {}, s: {}, rr: {}, rs: {}, ss: {}]",
            self.value, self.d_r, self.d_s, self.d_rr, self.d_rs, self.d_ss
        )
    }
}

impl From<f64> for HyperDual {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.value + o.value,
            self.d_r + o.d_r,
            self.d_s + o.d_s,
            self.d_rr + o.d_rr,
            self.d_rs + o.d_rs,
            self.d_ss + o.d_ss,
        )
    }
}

impl Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for HyperDual {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self {
            value: a.value * b.value,
            d_r: a.d_r * b.value + a.value * b.d_r,
            d_s: a.d_s * b.value + a.value * b.d_s,
            d_rr: a.d_rr * b.value + 2.0 * a.d_r * b.d_r + a.value * b.d_rr,
            d_rs: a.d_rs * b.value + a.d_r * b.d_s + a.d_s * b.d_r + a.value * b.d_rs,
            d_ss: a.d_ss * b.value + 2.0 * a.d_s * b.d_s + a.value * b.d_ss,
        }
    }
}

impl Div for HyperDual {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Mul<f64> for HyperDual {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl Add<f64> for HyperDual {
    type Output = Self;
    fn add(self, k: f64) -> Self {
        Self {
            value: self.value + k,
            ..self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifting() {
        let c = HyperDual::constant(3.0);
        assert_eq!(c.components(), [3.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let r = HyperDual::var_r(2.0);
        assert_eq!(r.components(), [2.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn product_rule() {
        let r = HyperDual::var_r(2.0);
        let s = HyperDual::var_s(3.0);
        // r^2 s: d_r = 2rs, d_s = r^2, d_rr = 2s, d_rs = 2r, d_ss = 0
        let x = r * r * s;
        assert_eq!(x.components(), [12.0, 12.0, 4.0, 6.0, 4.0, 0.0]);
    }

    #[test]
    fn quotient_and_exp() {
        let r = HyperDual::var_r(0.7);
        let y = r.exp() / r;
        let e = 0.7f64.exp();
        assert!((y.value - e / 0.7).abs() < 1e-14);
        // d/dr e^r/r = e^r (r-1)/r^2
        assert!((y.d_r - e * (0.7 - 1.0) / 0.49).abs() < 1e-13);
        // d2 = e^r (r^2 - 2r + 2)/r^3
        assert!((y.d_rr - e * (0.49 - 1.4 + 2.0) / 0.343).abs() < 1e-12);
    }

    #[test]
    fn powi_negative_base() {
        let r = HyperDual::var_r(-1.5);
        let y = r.powi(3);
        assert!((y.value + 3.375).abs() < 1e-14);
        assert!((y.d_r - 6.75).abs() < 1e-14);
        assert!((y.d_rr + 9.0).abs() < 1e-14);
    }
}
