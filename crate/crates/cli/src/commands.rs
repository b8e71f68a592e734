//! One runner per command. Each writes its artifacts as soon as they exist.

use crate::config::{Command, RunConfig, Solver, Theorem};
use serde::Serialize;
use std::path::{Path, PathBuf};
use weylspec_core::eigen::{bottom_trend, radial_trend, surface_eigs, BottomTrend, EigenReport};
use weylspec_core::geometry::{
    check_kumura_with, check_thm1_with, check_thm2_with, curvature_at, horoball_margin_with, HoroballParams,
    HypothesisReport, SampleGrid, Verdict,
};
use weylspec_core::report::{eigen_csv, svg_line_chart, sweep_csv, to_json, Series};
use weylspec_core::warp::{Builtin, ManifoldModel};
use weylspec_core::weyl::{residual_sweep, SweepPath, SweepTable};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

pub struct Output {
    dir: PathBuf,
    plots: bool,
    pub written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path, plots: bool) -> Result<Self, String> {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            plots,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), String> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), String> {
        let text = to_json(value).map_err(|e| format!("{name}: {e}"))?;
        self.write(name, &(text + "\n"))
    }

    fn plot(&mut self, name: &str, svg: impl FnOnce() -> String) -> Result<(), String> {
        if self.plots {
            let text = svg();
            self.write(name, &text)?;
        }
        Ok(())
    }
}

pub fn run(cmd: Command, cfg: &RunConfig, out: &mut Output) -> Result<Status, String> {
    cfg.check_command(cmd)?;
    match cmd {
        Command::Hypotheses => hypotheses(cfg, out),
        Command::Weyl => weyl(cfg, out, false),
        Command::WeylZero => weyl(cfg, out, true),
        Command::Eigen => eigen(cfg, out),
        Command::Appendix => appendix(cfg, out),
        Command::Horoball => horoball(cfg, out),
    }
}

fn verdict_status(v: Verdict, what: &str) -> Status {
    match v {
        Verdict::Pass => Status::Pass,
        Verdict::Inconclusive => {
            eprintln!("note: {what} verdict is inconclusive");
            Status::Pass
        }
        Verdict::Fail => Status::Fail,
    }
}

fn hypothesis_report(cfg: &RunConfig, model: &ManifoldModel, builtin_c: Option<f64>) -> Result<HypothesisReport, String> {
    let b = &cfg.hypotheses;
    let grid = match &b.radii {
        Some(r) => SampleGrid::new(r.clone(), b.s_points),
        None => SampleGrid::geometric(b.r_start.max(model.r_min), b.r_end, b.count).map(|mut g| {
            g.s_points = b.s_points;
            g
        }),
    }
    .map_err(|e| e.to_string())?;
    let theorem = match b.theorem {
        Theorem::Auto if model.a == 0.0 => Theorem::Thm2,
        Theorem::Auto => Theorem::Thm1,
        t => t,
    };
    let need_c = || b.c.or(builtin_c).ok_or_else(|| "hypotheses: 'c' is required for this model".to_string());
    let rep = match theorem {
        Theorem::Thm1 => check_thm1_with(model, need_c()?, b.c1, &grid, &cfg.tolerances),
        Theorem::Thm2 => check_thm2_with(model, b.c1, b.gamma, &grid, &cfg.tolerances),
        Theorem::Kumura => check_kumura_with(model, need_c()?, &grid.radii, b.s_range, grid.s_points, &cfg.tolerances),
        Theorem::Auto => unreachable!(),
    };
    rep.map_err(|e| e.to_string())
}

fn hypothesis_plot(rep: &HypothesisReport) -> String {
    let series: Vec<Series> = rep
        .subchecks
        .iter()
        .map(|s| Series {
            name: s.condition.clone(),
            points: s.trend.clone(),
        })
        .collect();
    svg_line_chart(&rep.condition, "r", "slice sup", &series, true)
}

fn hypotheses(cfg: &RunConfig, out: &mut Output) -> Result<Status, String> {
    let (model, c) = cfg.model()?;
    let rep = hypothesis_report(cfg, &model, c)?;
    out.write("hypotheses.csv", &rep.to_csv())?;
    out.json("hypotheses.json", &rep)?;
    out.plot("hypotheses.svg", || hypothesis_plot(&rep))?;
    println!("{}: {}", rep.condition, rep.verdict.as_str());
    Ok(verdict_status(rep.verdict, &rep.condition))
}

fn sweep_status(table: &SweepTable) -> Status {
    let ok = table
        .summaries
        .iter()
        .all(|s| s.strictly_decreasing && s.first_k_below.is_some());
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn sweep_plot(table: &SweepTable) -> String {
    let series: Vec<Series> = table
        .summaries
        .iter()
        .map(|s| Series {
            name: format!("lambda={}", s.lambda),
            points: table
                .rows
                .iter()
                .filter(|r| r.lambda == s.lambda)
                .map(|r| (r.k as f64, r.ratio))
                .collect(),
        })
        .collect();
    svg_line_chart("residual ratio", "k", "ratio", &series, true)
}

fn print_sweep(table: &SweepTable) {
    for s in &table.summaries {
        let below = s.first_k_below.map_or("none".to_string(), |k| k.to_string());
        println!(
            "lambda={}: best ratio {:.4e}, decreasing={}, first k with ratio<={}: {}",
            s.lambda, s.best_ratio, s.strictly_decreasing, table.epsilon, below
        );
    }
}

fn weyl(cfg: &RunConfig, out: &mut Output, zero: bool) -> Result<Status, String> {
    let (model, builtin_c) = cfg.model()?;
    let (lambdas, ks, m, path, eps, stem) = if zero {
        let b = &cfg.weyl_zero;
        (&b.lambdas, &b.ks, b.m, SweepPath::Zero { alpha: b.alpha }, b.epsilon, "weyl-zero")
    } else {
        let b = &cfg.weyl;
        let c = b.c.or(builtin_c).ok_or("weyl: 'c' is required for this model")?;
        (&b.lambdas, &b.ks, b.m, SweepPath::Standard { c }, b.epsilon, "weyl")
    };
    let table = residual_sweep(&model, lambdas, ks, m, path, eps, &cfg.quadrature).map_err(|e| e.to_string())?;
    out.write(&format!("{stem}.csv"), &sweep_csv(&table).map_err(|e| e.to_string())?)?;
    out.json(&format!("{stem}.json"), &table)?;
    out.plot(&format!("{stem}.svg"), || sweep_plot(&table))?;
    print_sweep(&table);
    Ok(sweep_status(&table))
}

#[derive(Serialize)]
struct EigenDoc {
    reports: Vec<EigenReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trend: Option<BottomTrend>,
}

fn eigen_plot(reports: &[EigenReport]) -> String {
    let points = reports.iter().filter_map(|r| r.lowest().map(|l| (r.r_end, l))).collect();
    let bottom = reports
        .iter()
        .map(|r| (r.r_end, r.predicted_bottom))
        .collect();
    svg_line_chart(
        "lowest eigenvalue",
        "R",
        "lambda_1",
        &[
            Series { name: "lambda_1(R)".into(), points },
            Series { name: "predicted bottom".into(), points: bottom },
        ],
        false,
    )
}

fn surface_trend(
    model: &ManifoldModel,
    r0: f64,
    radii: &[f64],
    n_r: usize,
    n_theta: usize,
    width: impl Fn(f64) -> f64 + Sync,
    count: usize,
) -> Result<Vec<EigenReport>, String> {
    radii
        .par_iter()
        .map(|&r| {
            let tm = width(r);
            surface_eigs(model, r0, r, (r - r0) / n_r as f64, 2.0 * tm / n_theta as f64, tm, count)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())
}

fn eigen(cfg: &RunConfig, out: &mut Output) -> Result<Status, String> {
    let (model, builtin_c) = cfg.model()?;
    let b = &cfg.eigen;
    let mut reports = match b.solver {
        Solver::Radial => radial_trend(&model, b.r0, &b.radii, b.h, b.count, b.left).map_err(|e| e.to_string())?,
        Solver::Surface => {
            let width = |r: f64| match (b.theta_max, b.window_a) {
                (Some(t), _) => t,
                (None, Some(a)) => (-a * r).exp(),
                (None, None) => model.s_radius(r),
            };
            surface_trend(&model, b.r0, &b.radii, b.n_r, b.n_theta, width, b.count)?
        }
    };
    if let Some(c) = b.c.or(builtin_c) {
        reports = reports.into_iter().map(|r| r.with_growth_rate(c)).collect();
    }
    let trend = if reports.len() >= 3 {
        Some(bottom_trend(&reports).map_err(|e| e.to_string())?)
    } else {
        None
    };
    out.write("eigen.csv", &eigen_csv(&reports).map_err(|e| e.to_string())?)?;
    let doc = EigenDoc { reports, trend };
    out.json("eigen.json", &doc)?;
    out.plot("eigen.svg", || eigen_plot(&doc.reports))?;
    for r in &doc.reports {
        println!("R={}: lambda_1={:.6} (predicted bottom {:.6})", r.r_end, r.lowest().unwrap_or(f64::NAN), r.predicted_bottom);
    }
    match doc.trend {
        Some(t) => {
            println!("trend estimate {:.6}, monotone={}", t.estimate, t.monotone);
            Ok(if t.monotone { Status::Pass } else { Status::Fail })
        }
        None => Ok(Status::Pass),
    }
}

#[derive(Serialize)]
struct CurvatureRow {
    r: f64,
    theta: f64,
    k_ad: f64,
    k_closed_form: f64,
    abs_diff: f64,
    psi_theta_over_psi: f64,
    r2_gprime: f64,
    r3_gprime: f64,
}

#[derive(Serialize)]
struct AppendixDoc {
    curvature: Vec<CurvatureRow>,
    max_curvature_mismatch: f64,
    hypotheses: HypothesisReport,
    sweep: SweepTable,
    eigen: EigenDoc,
    notes: Vec<String>,
}

fn appendix(cfg: &RunConfig, out: &mut Output) -> Result<Status, String> {
    let b = &cfg.appendix;
    let model = Builtin::AppendixSurface { a: b.a }.model().map_err(|e| e.to_string())?;

    let mut curvature = Vec::new();
    for &r in &b.radii {
        for &t in &b.thetas {
            let sample = curvature_at(&model, r, t).map_err(|e| e.to_string())?;
            let jet = model.log_jet(r, t).map_err(|e| e.to_string())?;
            let g = (0.5 * t).sin().powi(2);
            let gp = 0.5 * t.sin();
            let closed = -6.0 * g - 2.0 / r - (2.0 * r * g + 1.0).powi(2);
            curvature.push(CurvatureRow {
                r,
                theta: t,
                k_ad: sample.radial_k,
                k_closed_form: closed,
                abs_diff: (sample.radial_k - closed).abs(),
                psi_theta_over_psi: jet.s,
                r2_gprime: r * r * gp,
                r3_gprime: r * r * r * gp,
            });
        }
    }
    let mismatch = curvature.iter().map(|c| c.abs_diff / c.k_closed_form.abs().max(1.0)).fold(0.0, f64::max);
    let mut csv = String::from("r,theta,K_ad,K_closed_form,psi_theta_over_psi,r2_gprime,r3_gprime\n");
    for c in &curvature {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.r, c.theta, c.k_ad, c.k_closed_form, c.psi_theta_over_psi, c.r2_gprime, c.r3_gprime
        ));
    }
    out.write("appendix_curvature.csv", &csv)?;

    let hyp_cfg = RunConfig {
        hypotheses: crate::config::HypothesesBlock {
            theorem: Theorem::Thm1,
            c: Some(1.0),
            ..cfg.hypotheses.clone()
        },
        ..cfg.clone()
    };
    let hyp = hypothesis_report(&hyp_cfg, &model, Some(1.0))?;
    out.write("appendix_hypotheses.csv", &hyp.to_csv())?;

    let weyl_model = Builtin::AppendixSurface { a: b.weyl_a }.model().map_err(|e| e.to_string())?;
    let sweep = residual_sweep(&weyl_model, &b.lambdas, &b.ks, b.m, SweepPath::Standard { c: 1.0 }, b.epsilon, &cfg.quadrature)
        .map_err(|e| e.to_string())?;
    out.write("appendix_weyl.csv", &sweep_csv(&sweep).map_err(|e| e.to_string())?)?;

    let width = |r: f64| (-b.weyl_a * r).exp();
    let reports = surface_trend(&weyl_model, b.eigen_r0, &b.eigen_radii, b.eigen_n_r, b.eigen_n_theta, width, 3)?
        .into_iter()
        .map(|r| r.with_growth_rate(1.0))
        .collect::<Vec<_>>();
    let trend = if reports.len() >= 3 {
        Some(bottom_trend(&reports).map_err(|e| e.to_string())?)
    } else {
        None
    };
    out.write("appendix_eigen.csv", &eigen_csv(&reports).map_err(|e| e.to_string())?)?;

    let r2_err = curvature
        .iter()
        .map(|c| (c.psi_theta_over_psi - c.r2_gprime).abs())
        .fold(0.0, f64::max);
    let notes = vec![
        format!("psi_theta/psi by automatic differentiation matches r^2 g'(theta) to {r2_err:.1e}; the r^3 g'(theta) form does not"),
        format!("residual sweep uses neighbourhood exponent a={} (c=1 must exceed a)", b.weyl_a),
    ];
    let doc = AppendixDoc {
        curvature,
        max_curvature_mismatch: mismatch,
        hypotheses: hyp,
        sweep,
        eigen: EigenDoc { reports, trend },
        notes,
    };
    out.json("appendix.json", &doc)?;
    out.plot("appendix_weyl.svg", || sweep_plot(&doc.sweep))?;
    out.plot("appendix_eigen.svg", || eigen_plot(&doc.eigen.reports))?;

    println!("curvature: max relative mismatch {:.2e}", doc.max_curvature_mismatch);
    println!("{}: {}", doc.hypotheses.condition, doc.hypotheses.verdict.as_str());
    print_sweep(&doc.sweep);
    if let Some(t) = doc.eigen.trend {
        println!("surface trend estimate {:.6} (monotone={}) vs 1/4", t.estimate, t.monotone);
    }
    let ok = doc.max_curvature_mismatch <= 1e-10
        && verdict_status(doc.hypotheses.verdict, &doc.hypotheses.condition) == Status::Pass
        && doc.sweep.summaries.iter().all(|s| s.first_k_below.is_some())
        && doc.eigen.trend.is_none_or(|t| t.monotone);
    Ok(if ok { Status::Pass } else { Status::Fail })
}

#[derive(Serialize)]
struct HoroballDoc {
    r_max: f64,
    steps: usize,
    params: HoroballParams,
    inside: bool,
    min_margin: f64,
    argmin: (f64, f64),
}

fn horoball(cfg: &RunConfig, out: &mut Output) -> Result<Status, String> {
    let b = &cfg.horoball;
    let params = HoroballParams { c: b.c, b: b.b };
    let res = horoball_margin_with(b.r_max, b.steps, params).map_err(|e| e.to_string())?;
    let doc = HoroballDoc {
        r_max: b.r_max,
        steps: b.steps,
        params,
        inside: res.inside,
        min_margin: res.min_margin,
        argmin: res.argmin,
    };
    out.json("horoball.json", &doc)?;
    println!("horoball: inside={} min margin {:.6e} at r={}, s={}", res.inside, res.min_margin, res.argmin.0, res.argmin.1);
    Ok(if res.inside { Status::Pass } else { Status::Fail })
}
