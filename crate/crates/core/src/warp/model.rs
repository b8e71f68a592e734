//! Manifold models: a dimension, a warp factor and the neighbourhood
//! `{ |s| < c2 e^{-a r} }` around the distinguished direction.

use super::eval::{eval_warp, eval_warp_log, DomainError, LogJet, WarpJet};
use super::expr::{BinOp, Func, WarpExpr};
use super::parser::{parse_warp, ParseError};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_R_MIN: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("warp expression: {0}")]
    Parse(#[from] ParseError),
    #[error("warp evaluation: {0}")]
    Domain(#[from] DomainError),
    #[error("warp is not positive at (r={r}, s={s})")]
    NonPositiveWarp { r: f64, s: f64 },
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("unknown builtin model '{0}'")]
    UnknownBuiltin(String),
    #[error("exp-model requires c > a (got c={c}, a={a})")]
    RequiresCGreaterThanA { c: f64, a: f64 },
    #[error("model document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldModel {
    pub n: usize,
    pub warp: WarpExpr,
    pub a: f64,
    pub c2: f64,
    pub r_min: f64,
    pub label: String,
}

/// On-disk form; the warp is stored as text.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    n: usize,
    warp: String,
    a: f64,
    c2: f64,
    #[serde(default = "default_r_min")]
    r_min: f64,
    #[serde(default)]
    label: String,
}

fn default_r_min() -> f64 {
    DEFAULT_R_MIN
}

// Radii offsets at which positivity of the warp is sampled.
const PROBE_OFFSETS: [f64; 11] = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0];

impl ManifoldModel {
    pub fn new(
        n: usize,
        warp: WarpExpr,
        a: f64,
        c2: f64,
        r_min: f64,
        label: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let model = Self {
            n,
            warp,
            a,
            c2,
            r_min,
            label: label.into(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n < 2 {
            return Err(ModelError::Invalid(format!("dimension n={} must be at least 2", self.n)));
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(ModelError::Invalid(format!("a={} must be finite and non-negative", self.a)));
        }
        if !(self.c2 > 0.0 && self.c2 <= PI) {
            return Err(ModelError::Invalid(format!("c2={} must lie in (0, pi]", self.c2)));
        }
        if !(self.r_min > 0.0 && self.r_min.is_finite()) {
            return Err(ModelError::Invalid(format!("r_min={} must be positive", self.r_min)));
        }
        for dr in PROBE_OFFSETS {
            let r = self.r_min + dr;
            let width = self.s_radius(r);
            for frac in [0.0, 0.5, 0.999] {
                let s = frac * width;
                let j = eval_warp_log(&self.warp, r, s)?;
                if j.sign <= 0.0 {
                    return Err(ModelError::NonPositiveWarp { r, s });
                }
            }
        }
        Ok(())
    }

    /// Half-width of the neighbourhood at radius `r`.
    pub fn s_radius(&self, r: f64) -> f64 {
        self.c2 * (-self.a * r).exp()
    }

    /// True when the warp does not involve `s`.
    pub fn is_radial(&self) -> bool {
        !self.warp.depends_on_s()
    }

    pub fn jet(&self, r: f64, s: f64) -> Result<WarpJet, DomainError> {
        eval_warp(&self.warp, r, s)
    }

    pub fn log_jet(&self, r: f64, s: f64) -> Result<LogJet, DomainError> {
        eval_warp_log(&self.warp, r, s)
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| ModelError::Document(e.to_string()))?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: ModelDoc) -> Result<Self, ModelError> {
        let warp = parse_warp(&doc.warp)?;
        Self::new(doc.n, warp, doc.a, doc.c2, doc.r_min, doc.label)
    }

    fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            n: self.n,
            warp: self.warp.to_string(),
            a: self.a,
            c2: self.c2,
            r_min: self.r_min,
            label: self.label.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model document serialises")
    }
}

impl Serialize for ManifoldModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ManifoldModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = ModelDoc::deserialize(deserializer)?;
        Self::from_doc(doc).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    /// `ψ = r`, neighbourhood a cone (`a = 0`).
    EuclideanCone { n: usize, c2: f64 },
    /// `ψ = sinh r`.
    Hyperbolic { n: usize },
    /// `ψ = e^{c r}`, requires `c > a`.
    ExpModel { n: usize, c: f64, a: f64, c2: f64 },
    /// `n = 2`, `ψ = r e^{r² sin²(θ/2) + r}`, `|θ| ≤ e^{-a r}`.
    AppendixSurface { a: f64 },
}

pub const APPENDIX_WARP: &str = "r*exp(r^2*sin(s/2)^2 + r)";

fn fmt_num(v: f64) -> String {
    WarpExpr::Num(v).to_string()
}

impl Builtin {
    pub fn model(&self) -> Result<ManifoldModel, ModelError> {
        match *self {
            Builtin::EuclideanCone { n, c2 } => ManifoldModel::new(
                n,
                WarpExpr::r(),
                0.0,
                c2,
                DEFAULT_R_MIN,
                format!("euclidean-cone(n={n}, c2={})", fmt_num(c2)),
            ),
            Builtin::Hyperbolic { n } => ManifoldModel::new(
                n,
                WarpExpr::func(Func::Sinh, WarpExpr::r()),
                0.0,
                1.0,
                DEFAULT_R_MIN,
                format!("hyperbolic(n={n})"),
            ),
            Builtin::ExpModel { n, c, a, c2 } => {
                if !(c > a) {
                    return Err(ModelError::RequiresCGreaterThanA { c, a });
                }
                let arg = if c == 1.0 {
                    WarpExpr::r()
                } else {
                    WarpExpr::bin(BinOp::Mul, WarpExpr::num(c), WarpExpr::r())
                };
                ManifoldModel::new(
                    n,
                    WarpExpr::func(Func::Exp, arg),
                    a,
                    c2,
                    DEFAULT_R_MIN,
                    format!(
                        "exp-model(n={n}, c={}, a={}, c2={})",
                        fmt_num(c),
                        fmt_num(a),
                        fmt_num(c2)
                    ),
                )
            }
            Builtin::AppendixSurface { a } => ManifoldModel::new(
                2,
                parse_warp(APPENDIX_WARP)?,
                a,
                1.0,
                DEFAULT_R_MIN,
                format!("appendix-surface(a={})", fmt_num(a)),
            ),
        }
    }

    /// Parses `name(arg, ...)`; arguments are positional or `key=value`.
    pub fn parse(text: &str) -> Result<Builtin, ModelError> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            Some(i) => {
                let inner = text[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| ModelError::UnknownBuiltin(text.to_string()))?;
                (text[..i].trim(), inner)
            }
            None => (text, ""),
        };
        let keys: &[&str] = match name {
            "euclidean-cone" => &["n", "c2"],
            "hyperbolic" => &["n"],
            "exp-model" => &["n", "c", "a", "c2"],
            "appendix-surface" => &["a"],
            _ => return Err(ModelError::UnknownBuiltin(text.to_string())),
        };
        let mut vals: Vec<Option<f64>> = vec![None; keys.len()];
        let pieces: Vec<&str> = args.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        if pieces.len() > keys.len() {
            return Err(ModelError::Invalid(format!("{name} takes at most {} arguments", keys.len())));
        }
        for (i, piece) in pieces.iter().enumerate() {
            let (slot, raw) = match piece.split_once('=') {
                Some((k, v)) => {
                    let k = k.trim();
                    let slot = keys
                        .iter()
                        .position(|x| *x == k)
                        .ok_or_else(|| ModelError::Invalid(format!("{name} has no parameter '{k}'")))?;
                    (slot, v.trim())
                }
                None => (i, *piece),
            };
            let v: f64 = raw
                .parse()
                .map_err(|_| ModelError::Invalid(format!("bad number '{raw}' for {}", keys[slot])))?;
            vals[slot] = Some(v);
        }
        let get = |k: &str, default: Option<f64>| -> Result<f64, ModelError> {
            let i = keys.iter().position(|x| *x == k).expect("known key");
            vals[i]
                .or(default)
                .ok_or_else(|| ModelError::Invalid(format!("{name} needs parameter '{k}'")))
        };
        let dim = |v: f64| -> Result<usize, ModelError> {
            if v.fract() != 0.0 || v < 2.0 {
                return Err(ModelError::Invalid(format!("dimension {v} must be an integer ≥ 2")));
            }
            Ok(v as usize)
        };
        Ok(match name {
            "euclidean-cone" => Builtin::EuclideanCone {
                n: dim(get("n", None)?)?,
                c2: get("c2", Some(1.0))?,
            },
            "hyperbolic" => Builtin::Hyperbolic {
                n: dim(get("n", Some(2.0))?)?,
            },
            "exp-model" => Builtin::ExpModel {
                n: dim(get("n", None)?)?,
                c: get("c", None)?,
                a: get("a", None)?,
                c2: get("c2", Some(1.0))?,
            },
            _ => Builtin::AppendixSurface { a: get("a", Some(1.0))? },
        })
    }
}

pub fn builtin_model(name: &str) -> Result<ManifoldModel, ModelError> {
    Builtin::parse(name)?.model()
}
