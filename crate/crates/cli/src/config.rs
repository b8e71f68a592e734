//! Run configuration documents.

use serde::Deserialize;
use serde_json::Value;
use weylspec_core::geometry::{CheckTolerances, HoroballParams, SRange};
use weylspec_core::numerics::{LeftBoundary, QuadratureSpec};
use weylspec_core::warp::{builtin_model, Builtin, ManifoldModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Hypotheses,
    Weyl,
    WeylZero,
    Eigen,
    Appendix,
    Horoball,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Hypotheses => "hypotheses",
            Command::Weyl => "weyl",
            Command::WeylZero => "weyl-zero",
            Command::Eigen => "eigen",
            Command::Appendix => "appendix",
            Command::Horoball => "horoball",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; when present it must name the command being run.
    #[serde(default)]
    pub command: Option<String>,
    /// A builtin name such as `"exp-model(2, 1, 0.5)"` or an inline model document.
    #[serde(default)]
    pub model: Option<Value>,
    /// Output directory; `--out` takes precedence.
    #[serde(default)]
    pub out: Option<std::path::PathBuf>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub tolerances: CheckTolerances,
    #[serde(default)]
    pub hypotheses: HypothesesBlock,
    #[serde(default)]
    pub weyl: WeylBlock,
    #[serde(default, rename = "weyl-zero")]
    pub weyl_zero: WeylZeroBlock,
    #[serde(default)]
    pub eigen: EigenBlock,
    #[serde(default)]
    pub appendix: AppendixBlock,
    #[serde(default)]
    pub horoball: HoroballBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    #[default]
    Auto,
    Thm1,
    Thm2,
    Kumura,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypothesesBlock {
    pub theorem: Theorem,
    pub c: Option<f64>,
    pub c1: f64,
    pub gamma: f64,
    pub radii: Option<Vec<f64>>,
    pub r_start: f64,
    pub r_end: f64,
    pub count: usize,
    pub s_points: usize,
    pub s_range: SRange,
}

impl Default for HypothesesBlock {
    fn default() -> Self {
        Self {
            theorem: Theorem::Auto,
            c: None,
            c1: 1.0,
            gamma: 1.2,
            radii: None,
            r_start: 1.0,
            r_end: 2000.0,
            count: 40,
            s_points: 33,
            s_range: SRange::Neighbourhood,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeylBlock {
    pub lambdas: Vec<f64>,
    pub ks: Vec<usize>,
    pub m: usize,
    pub c: Option<f64>,
    pub epsilon: f64,
}

impl Default for WeylBlock {
    fn default() -> Self {
        Self {
            lambdas: vec![0.3, 0.5, 1.0],
            ks: vec![8, 16, 32, 64],
            m: 4,
            c: None,
            epsilon: 0.05,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeylZeroBlock {
    pub lambdas: Vec<f64>,
    pub ks: Vec<usize>,
    pub m: usize,
    pub alpha: f64,
    pub epsilon: f64,
}

impl Default for WeylZeroBlock {
    fn default() -> Self {
        Self {
            lambdas: vec![0.5, 1.0],
            ks: vec![8, 16, 32, 64],
            m: 4,
            alpha: 0.05,
            epsilon: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    #[default]
    Radial,
    Surface,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenBlock {
    pub solver: Solver,
    pub r0: f64,
    pub radii: Vec<f64>,
    /// Radial mesh size.
    pub h: f64,
    pub count: usize,
    pub left: LeftBoundary,
    /// Surface: cells in r and θ.
    pub n_r: usize,
    pub n_theta: usize,
    /// Surface: fixed half-width, or `e^{-window_a R}` when absent.
    pub theta_max: Option<f64>,
    pub window_a: Option<f64>,
    /// Growth rate for the predicted bottom; estimated when absent.
    pub c: Option<f64>,
}

impl Default for EigenBlock {
    fn default() -> Self {
        Self {
            solver: Solver::Radial,
            r0: 0.0,
            radii: vec![10.0, 20.0, 40.0],
            h: 0.01,
            count: 6,
            left: LeftBoundary::Dirichlet,
            n_r: 160,
            n_theta: 80,
            theta_max: None,
            window_a: None,
            c: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AppendixBlock {
    /// Neighbourhood exponent for the curvature table and hypothesis check.
    pub a: f64,
    /// Neighbourhood exponent for the residual sweep.
    pub weyl_a: f64,
    pub radii: Vec<f64>,
    pub thetas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub ks: Vec<usize>,
    pub m: usize,
    pub epsilon: f64,
    pub eigen_r0: f64,
    pub eigen_radii: Vec<f64>,
    pub eigen_n_r: usize,
    pub eigen_n_theta: usize,
}

impl Default for AppendixBlock {
    fn default() -> Self {
        Self {
            a: 1.0,
            weyl_a: 0.25,
            radii: vec![1.0, 2.0, 4.0, 5.0, 8.0, 10.0, 16.0],
            thetas: vec![0.0, 0.5, 1.0],
            lambdas: vec![0.3, 0.5, 1.0],
            ks: vec![8, 16, 32, 64],
            m: 4,
            epsilon: 0.1,
            eigen_r0: 0.5,
            eigen_radii: vec![4.0, 8.0, 16.0],
            eigen_n_r: 120,
            eigen_n_theta: 60,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HoroballBlock {
    pub r_max: f64,
    pub steps: usize,
    pub c: f64,
    pub b: f64,
}

impl Default for HoroballBlock {
    fn default() -> Self {
        let p = HoroballParams::default();
        Self {
            r_max: 50.0,
            steps: 400,
            c: p.c,
            b: p.b,
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, String> {
    serde_json::from_str(text).map_err(|e| format!("config: {e}"))
}

impl RunConfig {
    pub fn check_command(&self, cmd: Command) -> Result<(), String> {
        match &self.command {
            Some(name) if name != cmd.name() => {
                Err(format!("config is for command '{name}' but '{}' was requested", cmd.name()))
            }
            _ => Ok(()),
        }
    }

    /// The configured model and, for builtins, the known growth rate `c`.
    pub fn model(&self) -> Result<(ManifoldModel, Option<f64>), String> {
        match &self.model {
            None => Err("config: missing 'model'".into()),
            Some(Value::String(name)) => {
                let b = Builtin::parse(name).map_err(|e| format!("model '{name}': {e}"))?;
                let c = match b {
                    Builtin::EuclideanCone { .. } => Some(0.0),
                    Builtin::Hyperbolic { .. } | Builtin::AppendixSurface { .. } => Some(1.0),
                    Builtin::ExpModel { c, .. } => Some(c),
                };
                Ok((builtin_model(name).map_err(|e| format!("model '{name}': {e}"))?, c))
            }
            Some(doc @ Value::Object(_)) => {
                let m = ManifoldModel::from_json(&doc.to_string()).map_err(|e| format!("model: {e}"))?;
                Ok((m, None))
            }
            Some(other) => Err(format!("model: expected a name or a document, got {other}")),
        }
    }
}
