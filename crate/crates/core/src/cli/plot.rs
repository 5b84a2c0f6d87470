//! Self-contained SVG plots of report series.

use std::fmt::Write as _;

use thiserror::Error;

use super::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    /// Component count against `q_k`, log-log.
    CountVsScale,
    /// Upper and lower dimension estimates against depth.
    BracketVsJ,
    /// Squares of the hyperbolic cover.
    CoverOverlay,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlotError {
    #[error("report has no {task} results; rerun with --task {task}")]
    MissingSeries { task: &'static str },
    #[error("report has {task} results but no {what} to plot")]
    EmptySeries { task: &'static str, what: &'static str },
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

struct Series {
    name: &'static str,
    color: &'static str,
    points: Vec<(f64, f64)>,
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series], hline: Option<(f64, &str)>) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter().copied());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts.chain(hline.map(|(y, _)| (f64::NAN, y))) {
        if x.is_finite() {
            x0 = x0.min(x);
            x1 = x1.max(x);
        }
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 <= x0 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if y1 <= y0 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let pad = (y1 - y0) * 0.05;
    let (y0, y1) = (y0 - pad, y1 + pad);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
    let mut out = String::new();
    header(&mut out, title);
    let _ = writeln!(
        out,
        r#"<g stroke="black" fill="none"><line x1="{m}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{m}" y1="{b}" x2="{m}" y2="{m}"/></g>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    for (i, v) in [(0, x0), (1, x1)] {
        let anchor = if i == 0 { "start" } else { "end" };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{}</text>"#,
            sx(v),
            H - MARGIN + 16.0,
            fmt_tick(v)
        );
    }
    for v in [y0, y1] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            MARGIN - 4.0,
            sy(v) + 4.0,
            fmt_tick(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        W / 2.0,
        H - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    if let Some((y, label)) = hline {
        let _ = writeln!(
            out,
            r#"<line x1="{m}" y1="{y:.2}" x2="{r}" y2="{y:.2}" stroke="gray" stroke-dasharray="4 4"/><text x="{r}" y="{t:.2}" text-anchor="end" font-family="sans-serif" font-size="11" fill="gray">{}</text>"#,
            escape(label),
            m = MARGIN,
            r = W - MARGIN,
            y = sy(y),
            t = sy(y) - 4.0
        );
    }
    for (i, s) in series.iter().enumerate() {
        let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            path.join(" "),
            s.color
        );
        for &(x, y) in &s.points {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#, sx(x), sy(y), s.color);
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            W - MARGIN - 120.0,
            MARGIN + 16.0 * i as f64,
            s.color,
            escape(s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn log2_of_decimal(s: &str) -> f64 {
    // enough precision for plotting numbers of any size
    let digits = s.len();
    let head: f64 = s[..digits.min(15)].parse().unwrap_or(1.0);
    head.log2() + (digits.saturating_sub(15)) as f64 * 10f64.log2()
}

fn count_vs_scale(report: &Report) -> Result<String, PlotError> {
    let e = report.enumerate.as_ref().ok_or(PlotError::MissingSeries { task: "enumerate" })?;
    if e.levels.is_empty() {
        return Err(PlotError::EmptySeries { task: "enumerate", what: "levels" });
    }
    let points = e
        .levels
        .iter()
        .map(|l| ((l.log2_q.lo + l.log2_q.hi) / 2.0, log2_of_decimal(&l.count_max)))
        .collect();
    Ok(line_chart(
        "Component count against scale",
        "log2 q_k",
        "log2 count",
        &[Series { name: "count", color: "steelblue", points }],
        None,
    ))
}

fn bracket_vs_j(report: &Report) -> Result<String, PlotError> {
    let d = report.dimension.as_ref().ok_or(PlotError::MissingSeries { task: "dimension" })?;
    if d.upper.is_empty() {
        return Err(PlotError::EmptySeries { task: "dimension", what: "estimates" });
    }
    let upper = Series {
        name: "cover estimate",
        color: "firebrick",
        points: d.upper.iter().map(|r| (r.depth as f64, r.dim_hi)).collect(),
    };
    let lower = Series {
        name: "Cantor estimate",
        color: "seagreen",
        points: d.lower.iter().map(|r| (r.depth as f64, r.dim_lo)).collect(),
    };
    let target = d.theoretical.map(|t| ((t.lo + t.hi) / 2.0, "formula"));
    Ok(line_chart("Dimension estimates against depth", "J", "dimension", &[upper, lower], target))
}

fn cover_overlay(report: &Report) -> Result<String, PlotError> {
    let m = report
        .multiplicative
        .as_ref()
        .ok_or(PlotError::MissingSeries { task: "multiplicative" })?;
    let squares = m.squares.as_ref().ok_or(PlotError::EmptySeries {
        task: "multiplicative",
        what: "square list (cover too large)",
    })?;
    let side = W.min(H) - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + x * side;
    let sy = |y: f64| MARGIN + (1.0 - y) * side;
    let mut out = String::new();
    header(&mut out, &format!("Cover of x*y <= 2^-{}", m.gamma_exponent));
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="black"/>"#
    );
    out.push_str(r#"<g fill="steelblue" fill-opacity="0.25" stroke="steelblue" stroke-width="0.5">"#);
    out.push('\n');
    for sq in squares {
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            sx(sq.x),
            sy(sq.y + sq.side),
            sq.side * side,
            sq.side * side
        );
    }
    out.push_str("</g>\n");
    // the boundary x*y = gamma
    let g = (-(m.gamma_exponent as f64)).exp2();
    let curve: Vec<String> = (0..=200)
        .map(|i| g + (1.0 - g) * i as f64 / 200.0)
        .map(|x| format!("{:.2},{:.2}", sx(x), sy((g / x).min(1.0))))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="firebrick" stroke-width="1.5"/>"#,
        curve.join(" ")
    );
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render(report: &Report, kind: PlotKind) -> Result<String, PlotError> {
    match kind {
        PlotKind::CountVsScale => count_vs_scale(report),
        PlotKind::BracketVsJ => bracket_vs_j(report),
        PlotKind::CoverOverlay => cover_overlay(report),
    }
}
