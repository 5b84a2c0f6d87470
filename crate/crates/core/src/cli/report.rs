//! Serializable run reports and their CSV views.
//!
//! Every numeric result is an interval `{lo, hi}` of `f64` values rounded
//! outward, or an exact integer or rational written as a string.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::numerics::{ratio_to_f64_down, ratio_to_f64_up, Enclosure, Rational};

/// Outward-rounded `f64` bounds. Values beyond the `f64` range saturate at
/// `±f64::MAX`, which keeps the bounds valid and the JSON finite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn finite(x: f64) -> f64 {
    x.clamp(-f64::MAX, f64::MAX)
}

impl Interval {
    pub fn of(e: &Enclosure) -> Self {
        Self {
            lo: finite(e.lo_f64()),
            hi: finite(e.hi_f64()),
        }
    }

    pub fn of_ratio(r: &Rational) -> Self {
        Self {
            lo: finite(ratio_to_f64_down(r)),
            hi: finite(ratio_to_f64_up(r)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub sequence: String,
    pub tau: String,
    pub theta: Vec<String>,
    pub d: u32,
    pub depth: usize,
    pub precision: u32,
    pub seed: u64,
    pub tasks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    /// Decimal terms `q_1 .. q_J`.
    pub terms: Vec<String>,
    /// `log2 q_j`, for plotting.
    pub log2_terms: Vec<Interval>,
    pub h: Vec<Interval>,
    pub alpha: Vec<Interval>,
    pub h_prefix: Option<Interval>,
    pub alpha_last: Option<Interval>,
    /// `pass`, `fail at j = ..` or `indeterminate at j = ..`.
    pub regime: String,
    pub theoretical_dimension: Option<Interval>,
    pub theoretical_clamped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: usize,
    pub log2_q: Interval,
    pub count_min: String,
    pub count_max: String,
    pub max_len: Interval,
    pub min_gap: Option<Interval>,
    pub outer_length: Interval,
    pub indeterminate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub levels: Vec<LevelRow>,
    /// False when the component budget stopped the enumeration early.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverRow {
    #[serde(rename = "J")]
    pub depth: usize,
    #[serde(rename = "N_min")]
    pub n_min: String,
    #[serde(rename = "N_max")]
    pub n_max: String,
    pub side_lo: f64,
    pub side_hi: f64,
    pub dim_lo: f64,
    pub dim_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorRow {
    #[serde(rename = "J")]
    pub depth: usize,
    #[serde(rename = "M")]
    pub m: String,
    pub dim_lo: f64,
    pub dim_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub upper: Vec<CoverRow>,
    /// Rows stop at the first level without Cantor children.
    pub lower: Vec<CantorRow>,
    pub theoretical: Option<Interval>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallEcho {
    pub center: Vec<String>,
    pub radius: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub s: String,
    pub n: usize,
    pub seed: u64,
    /// Upper bound on the largest sampled `mu(B) / r^s`.
    pub max_ratio: f64,
    pub worst_ball: BallEcho,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorReport {
    #[serde(rename = "J")]
    pub depth: usize,
    pub leaves: String,
    pub stored_depth: usize,
    /// Smallest sampled gap between neighbouring leaves.
    pub leaf_separation: Option<Interval>,
    pub certificate: CertificateReport,
    /// Reference constant `16^d`.
    pub reference_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareRow {
    pub x: f64,
    pub y: f64,
    pub side: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativeReport {
    pub lower: Interval,
    pub upper: Interval,
    pub clamped: bool,
    pub gamma_exponent: u32,
    pub s: String,
    pub square_count: u64,
    pub s_cost: Interval,
    /// `d - s - tau (s - d + 1)`.
    pub cost_exponent: String,
    /// Present when the cover has at most [`MAX_LISTED_SQUARES`] squares.
    pub squares: Option<Vec<SquareRow>>,
}

pub const MAX_LISTED_SQUARES: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub analyze: Option<AnalyzeReport>,
    pub enumerate: Option<EnumerateReport>,
    pub dimension: Option<DimensionReport>,
    pub cantor: Option<CantorReport>,
    pub multiplicative: Option<MultiplicativeReport>,
    pub warnings: Vec<String>,
    /// Wall-clock milliseconds per task; omitted in canonical mode.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn num(x: f64) -> String {
    if x != 0.0 && !(1e-4..1e15).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_levels_csv<W: Write>(out: W, levels: &[LevelRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["level", "count_min", "count_max", "max_len", "min_gap"])?;
    for l in levels {
        w.write_record([
            l.level.to_string(),
            l.count_min.clone(),
            l.count_max.clone(),
            num(l.max_len.hi),
            opt(l.min_gap.map(|g| g.lo)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_dimension_csv<W: Write>(out: W, dim: &DimensionReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["J", "N_min", "N_max", "side_lo", "side_hi", "dim_lo", "dim_hi", "M", "lower_lo", "lower_hi"])?;
    for u in &dim.upper {
        let low = dim.lower.iter().find(|l| l.depth == u.depth);
        w.write_record([
            u.depth.to_string(),
            u.n_min.clone(),
            u.n_max.clone(),
            num(u.side_lo),
            num(u.side_hi),
            num(u.dim_lo),
            num(u.dim_hi),
            low.map(|l| l.m.clone()).unwrap_or_default(),
            opt(low.map(|l| l.dim_lo)),
            opt(low.map(|l| l.dim_hi)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_squares_csv<W: Write>(out: W, squares: &[SquareRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "side"])?;
    for s in squares {
        w.write_record([num(s.x), num(s.y), num(s.side)])?;
    }
    w.flush()?;
    Ok(())
}
