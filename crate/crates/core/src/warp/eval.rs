//! Evaluation of warp expressions with hyper-dual numbers.

use super::expr::{BinOp, Func, Var, WarpExpr};
use crate::numerics::{HyperDual, ScaledDual};
use std::fmt;

/// Number types a warp expression can be evaluated over.
pub trait WarpScalar: Copy {
    fn lift(v: f64) -> Self;
    fn value(&self) -> f64;
    /// Sign of the value (0 for zero); exact even where `value` underflows.
    fn sign(&self) -> f64;
    /// True when every derivative slot is zero.
    fn is_constant(&self) -> bool;
    fn finite(&self) -> bool;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn pow(self, y: Self) -> Self;
    fn apply(self, f: Func) -> Self;
}

impl WarpScalar for HyperDual {
    fn lift(v: f64) -> Self {
        HyperDual::constant(v)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn sign(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.value.signum()
        }
    }
    fn is_constant(&self) -> bool {
        self.components()[1..].iter().all(|d| *d == 0.0)
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn powi(self, n: i32) -> Self {
        HyperDual::powi(self, n)
    }
    fn pow(self, y: Self) -> Self {
        HyperDual::pow(self, y)
    }
    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Abs => self.abs(),
        }
    }
}

impl WarpScalar for ScaledDual {
    fn lift(v: f64) -> Self {
        ScaledDual::constant(v)
    }
    fn value(&self) -> f64 {
        crate::numerics::scaled::ldexp(self.mant.value, self.exp2)
    }
    fn sign(&self) -> f64 {
        self.value_sign()
    }
    fn is_constant(&self) -> bool {
        self.mant.components()[1..].iter().all(|d| *d == 0.0)
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn add(self, o: Self) -> Self {
        ScaledDual::add(self, o)
    }
    fn sub(self, o: Self) -> Self {
        ScaledDual::sub(self, o)
    }
    fn mul(self, o: Self) -> Self {
        ScaledDual::mul(self, o)
    }
    fn div(self, o: Self) -> Self {
        ScaledDual::div(self, o)
    }
    fn neg(self) -> Self {
        ScaledDual::neg(self)
    }
    fn powi(self, n: i32) -> Self {
        ScaledDual::powi(self, n)
    }
    fn pow(self, y: Self) -> Self {
        ScaledDual::pow(self, y)
    }
    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Abs => self.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainIssue {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNegative,
    /// Non-integer power of a non-positive base.
    PowerOfNonPositive,
    NonFinite,
}

/// Evaluation failure naming the offending subexpression.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainError {
    pub issue: DomainIssue,
    pub subexpression: String,
    pub r: f64,
    pub s: f64,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.issue {
            DomainIssue::DivisionByZero => "division by zero",
            DomainIssue::LogOfNonPositive => "log of a non-positive value",
            DomainIssue::SqrtOfNegative => "sqrt of a negative value",
            DomainIssue::PowerOfNonPositive => "non-integer power of a non-positive base",
            DomainIssue::NonFinite => "non-finite value",
        };
        write!(f, "{what} in '{}' at (r={}, s={})", self.subexpression, self.r, self.s)
    }
}

impl std::error::Error for DomainError {}

struct Ctx<T> {
    r: T,
    s: T,
    at: (f64, f64),
}

impl<T> Ctx<T> {
    fn fail(&self, issue: DomainIssue, e: &WarpExpr) -> DomainError {
        DomainError {
            issue,
            subexpression: e.to_string(),
            r: self.at.0,
            s: self.at.1,
        }
    }
}

fn eval_node<T: WarpScalar>(e: &WarpExpr, cx: &Ctx<T>) -> Result<T, DomainError> {
    let out = match e {
        WarpExpr::Num(v) => T::lift(*v),
        WarpExpr::Const(c) => T::lift(c.value()),
        WarpExpr::Var(Var::R) => cx.r,
        WarpExpr::Var(Var::S) => cx.s,
        WarpExpr::Neg(x) => eval_node(x, cx)?.neg(),
        WarpExpr::Func(f, x) => {
            let v = eval_node(x, cx)?;
            match f {
                Func::Log if v.sign() <= 0.0 => {
                    return Err(cx.fail(DomainIssue::LogOfNonPositive, e))
                }
                Func::Sqrt if v.sign() < 0.0 => return Err(cx.fail(DomainIssue::SqrtOfNegative, e)),
                _ => v.apply(*f),
            }
        }
        WarpExpr::Bin(op, l, r) => {
            let a = eval_node(l, cx)?;
            let b = eval_node(r, cx)?;
            match op {
                BinOp::Add => a.add(b),
                BinOp::Sub => a.sub(b),
                BinOp::Mul => a.mul(b),
                BinOp::Div => {
                    if b.sign() == 0.0 {
                        return Err(cx.fail(DomainIssue::DivisionByZero, e));
                    }
                    a.div(b)
                }
                BinOp::Pow => {
                    let y = b.value();
                    if b.is_constant() && y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
                        if a.sign() == 0.0 && y < 0.0 {
                            return Err(cx.fail(DomainIssue::DivisionByZero, e));
                        }
                        a.powi(y as i32)
                    } else if a.sign() <= 0.0 {
                        return Err(cx.fail(DomainIssue::PowerOfNonPositive, e));
                    } else {
                        a.pow(b)
                    }
                }
            }
        }
    };
    if !out.finite() {
        return Err(cx.fail(DomainIssue::NonFinite, e));
    }
    Ok(out)
}

/// `ψ` and its first and second partials at `(r, s)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WarpJet {
    pub psi: f64,
    pub psi_r: f64,
    pub psi_s: f64,
    pub psi_rr: f64,
    pub psi_rs: f64,
    pub psi_ss: f64,
}

/// Overflow-free jet: `ln ψ` and the derivatives divided by `ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogJet {
    pub ln_psi: f64,
    pub sign: f64,
    /// `ψ_r/ψ`
    pub r: f64,
    /// `ψ_s/ψ`
    pub s: f64,
    /// `ψ_rr/ψ`
    pub rr: f64,
    /// `ψ_rs/ψ`
    pub rs: f64,
    /// `ψ_ss/ψ`
    pub ss: f64,
}

pub fn eval_generic<T: WarpScalar>(expr: &WarpExpr, r: T, s: T, at: (f64, f64)) -> Result<T, DomainError> {
    eval_node(expr, &Ctx { r, s, at })
}

pub fn eval_hyperdual(expr: &WarpExpr, r: f64, s: f64) -> Result<HyperDual, DomainError> {
    eval_generic(expr, HyperDual::var_r(r), HyperDual::var_s(s), (r, s))
}

pub fn eval_warp(expr: &WarpExpr, r: f64, s: f64) -> Result<WarpJet, DomainError> {
    let h = eval_hyperdual(expr, r, s)?;
    Ok(WarpJet {
        psi: h.value,
        psi_r: h.d_r,
        psi_s: h.d_s,
        psi_rr: h.d_rr,
        psi_rs: h.d_rs,
        psi_ss: h.d_ss,
    })
}

/// Evaluates with a shared binary exponent, so `ψ` may exceed the `f64`
/// range; only `ln ψ` and the derivative ratios are returned.
pub fn eval_warp_log(expr: &WarpExpr, r: f64, s: f64) -> Result<LogJet, DomainError> {
    let x = eval_generic(
        expr,
        ScaledDual::from_plain(HyperDual::var_r(r)),
        ScaledDual::from_plain(HyperDual::var_s(s)),
        (r, s),
    )?;
    if x.mant.value == 0.0 {
        return Err(DomainError {
            issue: DomainIssue::DivisionByZero,
            subexpression: expr.to_string(),
            r,
            s,
        });
    }
    let [dr, ds, drr, drs, dss] = x.ratios();
    Ok(LogJet {
        ln_psi: x.ln_abs(),
        sign: x.value_sign(),
        r: dr,
        s: ds,
        rr: drr,
        rs: drs,
        ss: dss,
    })
}

/// Value channel only.
pub fn eval_value(expr: &WarpExpr, r: f64, s: f64) -> Result<f64, DomainError> {
    Ok(eval_hyperdual(expr, r, s)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warp::parser::parse_warp;
    use std::f64::consts::E;

    #[test]
    fn exponential_jet() {
        let j = eval_warp(&parse_warp("exp(r)").unwrap(), 1.0, 0.0).unwrap();
        assert!((j.psi - E).abs() < 1e-15);
        assert!((j.psi_r - E).abs() < 1e-15);
        assert!((j.psi_rr - E).abs() < 1e-15);
        assert_eq!(j.psi_s, 0.0);
    }

    #[test]
    fn appendix_jet_on_the_ray() {
        let e = parse_warp("r*exp(r^2*sin(s/2)^2 + r)").unwrap();
        let j = eval_warp(&e, 2.0, 0.0).unwrap();
        assert!((j.psi - 2.0 * E * E).abs() < 1e-12);
        assert_eq!(j.psi_s, 0.0);
        for r in [1.0, 2.0, 5.0, 10.0] {
            let l = eval_warp_log(&e, r, 0.0).unwrap();
            assert!((l.rr - (1.0 + 2.0 / r)).abs() < 1e-12);
        }
    }

    #[test]
    fn log_jet_survives_overflow() {
        let e = parse_warp("exp(r)").unwrap();
        assert!(eval_warp(&e, 1000.0, 0.0).is_err());
        let l = eval_warp_log(&e, 1000.0, 0.0).unwrap();
        assert!((l.ln_psi - 1000.0).abs() < 1e-9);
        assert!((l.r - 1.0).abs() < 1e-15 && (l.rr - 1.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let e = parse_warp("r + log(s - 1)").unwrap();
        let err = eval_warp(&e, 1.0, 0.5).unwrap_err();
        assert_eq!(err.issue, DomainIssue::LogOfNonPositive);
        assert_eq!(err.subexpression, "log(s - 1)");

        let err = eval_warp(&parse_warp("1/(r-2)").unwrap(), 2.0, 0.0).unwrap_err();
        assert_eq!(err.issue, DomainIssue::DivisionByZero);
        assert_eq!(err.subexpression, "1/(r - 2)");

        let err = eval_warp(&parse_warp("(s-1)^0.5").unwrap(), 1.0, 0.0).unwrap_err();
        assert_eq!(err.issue, DomainIssue::PowerOfNonPositive);
        assert!(eval_warp(&parse_warp("sqrt(-r)").unwrap(), 1.0, 0.0).is_err());
    }

    #[test]
    fn integer_power_of_negative_base() {
        let j = eval_warp(&parse_warp("(s-1)^3").unwrap(), 0.0, 0.0).unwrap();
        assert_eq!(j.psi, -1.0);
        assert_eq!(j.psi_s, 3.0);
        assert_eq!(j.psi_ss, -6.0);
    }
}
