//! CSV, JSON and SVG emitters shared by the front ends.

use crate::eigen::EigenReport;
use crate::weyl::{SweepTable, TERM_NAMES};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    #[error("non-finite value in report at {0}")]
    NonFinite(String),
    #[error("serialisation failed: {0}")]
    Serialize(String),
}

/// Pretty JSON. Optional fields are omitted when absent, so any `null` in
/// the output can only come from a NaN or infinity; those are rejected.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, ReportError> {
    let v = serde_json::to_value(value).map_err(|e| ReportError::Serialize(e.to_string()))?;
    find_null(&v, "$")?;
    serde_json::to_string_pretty(&v).map_err(|e| ReportError::Serialize(e.to_string()))
}

fn find_null(v: &serde_json::Value, path: &str) -> Result<(), ReportError> {
    use serde_json::Value;
    match v {
        Value::Null => Err(ReportError::NonFinite(path.to_string())),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| find_null(x, &format!("{path}[{i}]"))),
        Value::Object(map) => map.iter().try_for_each(|(k, x)| find_null(x, &format!("{path}.{k}"))),
        _ => Ok(()),
    }
}

fn check(x: f64, what: &str) -> Result<f64, ReportError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ReportError::NonFinite(what.to_string()))
    }
}

/// `lambda,k,p,ratio,<term norms / norm_u>`.
pub fn sweep_csv(table: &SweepTable) -> Result<String, ReportError> {
    let mut out = String::from("lambda,k,p,ratio");
    for name in TERM_NAMES {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    for row in &table.rows {
        let _ = write!(out, "{},{},{},{}", row.lambda, row.k, row.p, check(row.ratio, "ratio")?);
        for t in &row.terms {
            let _ = write!(out, ",{}", check(t.norm / row.norm_u, &t.name)?);
        }
        out.push('\n');
    }
    Ok(out)
}

/// `R,h,lambda_1..lambda_count`; short rows are padded with empty cells.
pub fn eigen_csv(reports: &[EigenReport]) -> Result<String, ReportError> {
    let count = reports.iter().map(|r| r.eigenvalues.len()).max().unwrap_or(0);
    let mut out = EigenReport::csv_header(count);
    out.push('\n');
    for rep in reports {
        for (j, v) in rep.eigenvalues.iter().enumerate() {
            check(*v, &format!("lambda_{} at R={}", j + 1, rep.r_end))?;
        }
        out.push_str(&rep.csv_row());
        for _ in rep.eigenvalues.len()..count {
            out.push(',');
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// A static SVG line chart. With `log_y`, non-positive values are dropped.
pub fn svg_line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series], log_y: bool) -> String {
    let (w, h, ml, mr, mt, mb) = (640.0, 420.0, 70.0, 150.0, 40.0, 50.0);
    let ty = |y: f64| if log_y { y.log10() } else { y };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite() && (!log_y || p.1 > 0.0))
                .map(|&(x, y)| (x, ty(y)))
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pw = w - ml - mr;
    let ph = h - mt - mb;
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| mt + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, ml + pw / 2.0, escape(title));
    let _ = writeln!(s, r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let ylab = if log_y { format!("1e{fy:.1}") } else { format!("{fy:.3}") };
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{fx:.3}</text>"#, sx(fx), mt + ph + 16.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{ylab}</text>"#, ml - 6.0, sy(fy) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, ml + pw / 2.0, h - 10.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0,
        escape(y_label)
    );
    for (i, (ser, p)) in series.iter().zip(&pts).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, path.join(" "));
        for &(x, y) in p {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = mt + 16.0 * (i as f64 + 1.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{}</text>"#, w - mr + 10.0, escape(&ser.name));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
