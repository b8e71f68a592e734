//! Hyper-dual numbers with a binary exponent carried outside the mantissa.
//!
//! Warp factors such as `e^r` or `r e^{r^2 g + r}` leave the `f64` range long
//! before the radii the Weyl construction needs. A [`ScaledDual`] stores
//! `mantissa * 2^exp2`, with all six hyper-dual components sharing one
//! exponent, so products, quotients, logarithms and exponentials stay exact
//! in the exponent and only the mantissa rounds.

use super::hyperdual::HyperDual;
use std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDual {
    pub mant: HyperDual,
    pub exp2: i64,
}

/// `x * 2^e` without overflowing the intermediate power.
pub fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if !x.is_finite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl ScaledDual {
    pub fn from_plain(x: HyperDual) -> Self {
        Self { mant: x, exp2: 0 }.normalized()
    }

    pub fn constant(v: f64) -> Self {
        Self::from_plain(HyperDual::constant(v))
    }

    /// Rescales so the largest mantissa component lies in `[1, 2)`.
    /// Scaling by a power of two is exact.
    pub fn normalized(self) -> Self {
        let big = self
            .mant
            .components()
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        if big == 0.0 || !big.is_finite() {
            return self;
        }
        let shift = big.log2().floor() as i64;
        if shift == 0 {
            return self;
        }
        Self {
            mant: HyperDual::from_components(self.mant.components().map(|c| ldexp(c, -shift))),
            exp2: self.exp2 + shift,
        }
    }

    fn shifted(self, by: i64) -> HyperDual {
        HyperDual::from_components(self.mant.components().map(|c| ldexp(c, by)))
    }

    /// The plain hyper-dual value; components may overflow to infinity.
    pub fn to_plain(self) -> HyperDual {
        self.shifted(self.exp2)
    }

    pub fn is_finite(&self) -> bool {
        self.mant.is_finite()
    }

    pub fn value_sign(&self) -> f64 {
        if self.mant.value == 0.0 {
            0.0
        } else {
            self.mant.value.signum()
        }
    }

    /// Natural log of `|value|`.
    pub fn ln_abs(&self) -> f64 {
        self.mant.value.abs().ln() + self.exp2 as f64 * LN_2
    }

    /// First and second derivatives divided by the value (scale free).
    pub fn ratios(&self) -> [f64; 5] {
        let m = self.mant;
        [m.d_r, m.d_s, m.d_rr, m.d_rs, m.d_ss].map(|d| d / m.value)
    }

    pub fn add(self, o: Self) -> Self {
        let e = self.exp2.max(o.exp2);
        Self {
            mant: self.shifted(self.exp2 - e) + o.shifted(o.exp2 - e),
            exp2: e,
        }
        .normalized()
    }

    pub fn neg(self) -> Self {
        Self {
            mant: -self.mant,
            exp2: self.exp2,
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        Self {
            mant: self.mant * o.mant,
            exp2: self.exp2 + o.exp2,
        }
        .normalized()
    }

    pub fn div(self, o: Self) -> Self {
        Self {
            mant: self.mant / o.mant,
            exp2: self.exp2 - o.exp2,
        }
        .normalized()
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            mant: self.mant.scale(k),
            exp2: self.exp2,
        }
        .normalized()
    }

    /// `e^x`. The argument itself must fit in `f64`; the result need not.
    pub fn exp(self) -> Self {
        let x = self.to_plain();
        let q = (x.value / LN_2).round();
        let rem = x.value - q * LN_2;
        let e = rem.exp();
        Self {
            mant: x.chain(e, e, e),
            exp2: q as i64,
        }
        .normalized()
    }

    /// `ln x` for positive `x`.
    pub fn ln(self) -> Self {
        let l = self.mant.ln() + self.exp2 as f64 * LN_2;
        Self::from_plain(l)
    }

    pub fn sqrt(self) -> Self {
        let (mant, e) = if self.exp2 % 2 != 0 {
            (self.mant.scale(2.0), self.exp2 - 1)
        } else {
            (self.mant, self.exp2)
        };
        Self {
            mant: mant.sqrt(),
            exp2: e / 2,
        }
        .normalized()
    }

    pub fn powi(self, n: i32) -> Self {
        Self {
            mant: self.mant.powi(n),
            exp2: self.exp2 * i64::from(n),
        }
        .normalized()
    }

    /// `x^p` for positive `x`.
    pub fn powf(self, p: f64) -> Self {
        self.ln().scale(p).exp()
    }

    /// `x^y` for positive `x`.
    pub fn pow(self, y: Self) -> Self {
        y.mul(self.ln()).exp()
    }

    fn via_plain(self, f: impl Fn(HyperDual) -> HyperDual) -> Self {
        Self::from_plain(f(self.to_plain()))
    }

    pub fn sin(self) -> Self {
        self.via_plain(HyperDual::sin)
    }

    pub fn cos(self) -> Self {
        self.via_plain(HyperDual::cos)
    }

    pub fn tan(self) -> Self {
        self.via_plain(HyperDual::tan)
    }

    pub fn tanh(self) -> Self {
        self.via_plain(HyperDual::tanh)
    }

    pub fn abs(self) -> Self {
        if self.mant.value < 0.0 {
            self.neg()
        } else {
            self
        }
    }

    pub fn sinh(self) -> Self {
        let x = self.to_plain();
        if x.value.abs() < 20.0 {
            return Self::from_plain(x.sinh());
        }
        self.exp().sub(self.neg().exp()).scale(0.5)
    }

    pub fn cosh(self) -> Self {
        let x = self.to_plain();
        if x.value.abs() < 20.0 {
            return Self::from_plain(x.cosh());
        }
        self.exp().add(self.neg().exp()).scale(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_exponential_keeps_ratios() {
        let r = ScaledDual::from_plain(HyperDual::var_r(1800.0));
        let y = r.exp();
        assert!((y.ln_abs() - 1800.0).abs() < 1e-10);
        let [dr, ds, drr, _, _] = y.ratios();
        assert!((dr - 1.0).abs() < 1e-14);
        assert_eq!(ds, 0.0);
        assert!((drr - 1.0).abs() < 1e-14);
        assert!(y.to_plain().value.is_infinite());
    }

    #[test]
    fn product_of_huge_and_tiny() {
        let r = ScaledDual::from_plain(HyperDual::var_r(900.0));
        let big = r.exp();
        let tiny = r.neg().exp();
        let one = big.mul(tiny).to_plain();
        assert!((one.value - 1.0).abs() < 1e-12);
        assert!(one.d_r.abs() < 1e-12);
    }

    #[test]
    fn sinh_large_matches_half_exp() {
        let r = ScaledDual::from_plain(HyperDual::var_r(800.0));
        let sh = r.sinh();
        assert!((sh.ln_abs() - (800.0 - LN_2)).abs() < 1e-10);
        let [dr, _, drr, _, _] = sh.ratios();
        assert!((dr - 1.0).abs() < 1e-14);
        assert!((drr - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ldexp_extremes() {
        assert_eq!(ldexp(1.0, 3), 8.0);
        assert_eq!(ldexp(1.0, -3000), 0.0);
        assert!(ldexp(1.0, 3000).is_infinite());
        assert_eq!(ldexp(3.0, -1), 1.5);
    }
}
