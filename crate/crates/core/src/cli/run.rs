use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use super::config::{ExperimentConfig, Format, Task};
use super::report::*;
use crate::cantor_measure::{CantorError, CantorTree};
use crate::dimension_bounds::{lower_cantor_count, theoretical_dimension, upper_cover_count, BoundsError};
use crate::level_sets::{prefix_intersection, LevelParams, LevelSetError, LevelStats};
use crate::multiplicative::{hyperbolic_cover, mult_bounds, mult_cost_exponent, MultiplicativeError};
use crate::numerics::{format_rational, log2_enclosure, Enclosure, NumericsError};
use crate::sequences::{exponent_stats, generate, ExponentStats, QSequence, RegimeCheck, SequenceError, SequenceSpec};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    LevelSet(#[from] LevelSetError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error(transparent)]
    Multiplicative(#[from] MultiplicativeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

pub struct RunOutcome {
    pub report: Report,
    /// Some task stopped at a budget; the report holds what was completed.
    pub budget_exhausted: bool,
}

pub fn describe_sequence(spec: &SequenceSpec) -> String {
    match spec {
        SequenceSpec::Explicit(t) => {
            let terms: Vec<String> = t.iter().map(|q| q.to_string()).collect();
            format!("explicit([{}])", terms.join(", "))
        }
        SequenceSpec::Power { q1, c } => format!("power(q1={q1}, c={})", format_rational(c)),
        SequenceSpec::Contractive { q1, tau } => format!("contractive(q1={q1}, tau={})", format_rational(tau)),
        SequenceSpec::Alternating { q1, tau, eta } => format!(
            "alternating(q1={q1}, tau={}, eta={})",
            format_rational(tau),
            format_rational(eta)
        ),
    }
}

fn regime_text(r: &RegimeCheck) -> String {
    match r {
        RegimeCheck::Pass => "pass".into(),
        RegimeCheck::Fail { index } => format!("fail at j = {index}"),
        RegimeCheck::Indeterminate { index } => format!("indeterminate at j = {index}"),
    }
}

fn level_row(s: &LevelStats, qs: &QSequence, prec: u32) -> Result<LevelRow, RunError> {
    Ok(LevelRow {
        level: s.level,
        log2_q: Interval::of(&log2_enclosure(qs.q(s.level), prec)?),
        count_min: s.count.min.to_string(),
        count_max: s.count.max.to_string(),
        max_len: Interval::of_ratio(&s.max_len),
        min_gap: s.min_gap.as_ref().map(Interval::of_ratio),
        outer_length: Interval::of_ratio(&s.outer_length),
        indeterminate: s.indeterminate,
    })
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    qs: QSequence,
    params: LevelParams,
    stats: ExponentStats,
    report: Report,
    exhausted: bool,
}

impl Context<'_> {
    fn alpha(&self) -> Enclosure {
        self.stats
            .alpha_last
            .clone()
            .unwrap_or_else(|| Enclosure::from_int(0, self.cfg.precision))
    }

    fn analyze(&mut self) -> Result<(), RunError> {
        let prec = self.cfg.precision;
        let regime = crate::sequences::validate_regime(&self.qs, &self.cfg.tau, prec)?;
        let theo = self
            .stats
            .alpha_last
            .as_ref()
            .map(|a| theoretical_dimension(&self.cfg.tau, a, self.cfg.d));
        self.report.analyze = Some(AnalyzeReport {
            terms: self.qs.terms().iter().map(|q| q.to_string()).collect(),
            log2_terms: self
                .qs
                .terms()
                .iter()
                .map(|q| log2_enclosure(q, prec).map(|e| Interval::of(&e)))
                .collect::<Result<_, _>>()?,
            h: self.stats.h_list.iter().map(Interval::of).collect(),
            alpha: self.stats.alpha_list.iter().map(Interval::of).collect(),
            h_prefix: self.stats.h_prefix.as_ref().map(Interval::of),
            alpha_last: self.stats.alpha_last.as_ref().map(Interval::of),
            regime: regime_text(&regime),
            theoretical_dimension: theo.as_ref().map(|t| Interval::of(&t.value)),
            theoretical_clamped: theo.as_ref().is_some_and(|t| t.clamped),
        });
        Ok(())
    }

    fn enumerate(&mut self) -> Result<(), RunError> {
        let cfg = self.cfg;
        let (stats, complete) = match prefix_intersection(&self.qs, &self.params, cfg.depth, cfg.precision, cfg.component_budget) {
            Ok(p) => (p.levels, true),
            Err(LevelSetError::BudgetExceeded { level, budget, completed }) => {
                self.report
                    .warnings
                    .push(format!("enumerate: component budget {budget} exceeded at level {level}"));
                self.exhausted = true;
                (completed, false)
            }
            Err(e) => return Err(e.into()),
        };
        let levels = stats
            .iter()
            .map(|s| level_row(s, &self.qs, cfg.precision))
            .collect::<Result<_, _>>()?;
        self.report.enumerate = Some(EnumerateReport { levels, complete });
        Ok(())
    }

    fn dimension(&mut self) -> Result<(), RunError> {
        let cfg = self.cfg;
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut lower_done = false;
        for j in 1..=cfg.depth {
            let cover = upper_cover_count(&self.qs, &cfg.tau, cfg.d, j, cfg.precision)?;
            upper.push(CoverRow {
                depth: j,
                n_min: cover.n_min.to_string(),
                n_max: cover.n_max.to_string(),
                side_lo: Interval::of(&cover.side).lo,
                side_hi: Interval::of(&cover.side).hi,
                dim_lo: Interval::of(&cover.dim_estimate).lo,
                dim_hi: Interval::of(&cover.dim_estimate).hi,
            });
            if j == cfg.depth && !cover.regime.is_pass() {
                self.report
                    .warnings
                    .push(format!("dimension: regime h_j > tau + 1 {}", regime_text(&cover.regime)));
            }
            if lower_done {
                continue;
            }
            match lower_cantor_count(&self.qs, &cfg.tau, cfg.d, j, cfg.precision) {
                Ok(c) => lower.push(CantorRow {
                    depth: j,
                    m: c.m.to_string(),
                    dim_lo: Interval::of(&c.estimate).lo,
                    dim_hi: Interval::of(&c.estimate).hi,
                }),
                Err(e @ BoundsError::RegimeViolation { .. }) => {
                    self.report.warnings.push(format!("dimension: {e}"));
                    lower_done = true;
                }
                Err(e) => return Err(e.into()),
            }
        }
        let theoretical = self
            .stats
            .alpha_last
            .as_ref()
            .map(|a| Interval::of(&theoretical_dimension(&cfg.tau, a, cfg.d).value));
        self.report.dimension = Some(DimensionReport { upper, lower, theoretical });
        Ok(())
    }

    fn cantor(&mut self) -> Result<(), RunError> {
        let cfg = self.cfg;
        let s = cfg.cantor_s.clone().expect("checked by config");
        let built = CantorTree::build(&self.qs, &self.params, cfg.depth, cfg.node_budget, cfg.precision)
            .and_then(|tree| {
                let cert = tree.holder_certificate(&s, cfg.cantor_samples, cfg.seed)?;
                let sep = tree.sampled_separation(cfg.depth, 64, cfg.seed)?;
                Ok((tree, cert, sep))
            });
        let (tree, cert, sep) = match built {
            Ok(v) => v,
            Err(e @ CantorError::BudgetExceeded { .. }) => {
                self.report.warnings.push(format!("cantor: {e}"));
                self.exhausted = true;
                return Ok(());
            }
            Err(e @ (CantorError::RegimeViolation { .. } | CantorError::Bounds(_) | CantorError::Overlapping)) => {
                self.report.warnings.push(format!("cantor: {e}"));
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        self.report.cantor = Some(CantorReport {
            depth: cfg.depth,
            leaves: tree.node_count(cfg.depth).to_string(),
            stored_depth: tree.stored_depth(),
            leaf_separation: sep.as_ref().map(Interval::of_ratio),
            certificate: CertificateReport {
                s: format_rational(&cert.s),
                n: cert.n,
                seed: cert.seed,
                max_ratio: Interval::of_ratio(&cert.max_ratio).hi,
                worst_ball: BallEcho {
                    center: cert.worst_ball.center.iter().map(format_rational).collect(),
                    radius: format_rational(&cert.worst_ball.radius),
                },
            },
            reference_bound: 16f64.powi(cfg.d as i32),
        });
        Ok(())
    }

    fn multiplicative(&mut self) -> Result<(), RunError> {
        let cfg = self.cfg;
        let s = cfg.mult_s.clone().expect("checked by config");
        if self.stats.alpha_last.is_none() {
            self.report
                .warnings
                .push("multiplicative: depth 1 gives no alpha estimate; using alpha = 0".into());
        }
        let bounds = mult_bounds(&cfg.tau, &self.alpha(), cfg.d);
        let (cover, cost) = hyperbolic_cover(cfg.gamma_exponent, &s, cfg.precision)?;
        let squares = (cover.len() <= MAX_LISTED_SQUARES).then(|| {
            cover
                .squares()
                .map(|q| SquareRow { x: q.x, y: q.y, side: q.side })
                .collect()
        });
        self.report.multiplicative = Some(MultiplicativeReport {
            lower: Interval::of(&bounds.lower),
            upper: Interval::of(&bounds.upper),
            clamped: bounds.clamped,
            gamma_exponent: cfg.gamma_exponent,
            s: format_rational(&s),
            square_count: cover.len(),
            s_cost: Interval::of(&cost),
            cost_exponent: format_rational(&mult_cost_exponent(cfg.d, &cfg.tau, &s)),
            squares,
        });
        Ok(())
    }
}

/// Runs the configured tasks in the order analyze, enumerate, dimension,
/// cantor, multiplicative.
pub fn run(cfg: &ExperimentConfig, canonical: bool) -> Result<RunOutcome, RunError> {
    let qs = generate(&cfg.sequence, cfg.depth)?;
    let params = LevelParams::new(cfg.theta.clone(), cfg.tau.clone())?;
    let stats = exponent_stats(&qs, cfg.precision)?;
    let report = Report {
        config: ConfigEcho {
            sequence: describe_sequence(&cfg.sequence),
            tau: format_rational(&cfg.tau),
            theta: cfg.theta.iter().map(format_rational).collect(),
            d: cfg.d,
            depth: cfg.depth,
            precision: cfg.precision,
            seed: cfg.seed,
            tasks: cfg.tasks.iter().map(|t| t.name().to_string()).collect(),
        },
        analyze: None,
        enumerate: None,
        dimension: None,
        cantor: None,
        multiplicative: None,
        warnings: Vec::new(),
        timing_ms: None,
    };
    let mut ctx = Context {
        cfg,
        qs,
        params,
        stats,
        report,
        exhausted: false,
    };
    let mut timing = BTreeMap::new();
    for task in &cfg.tasks {
        let start = Instant::now();
        match task {
            Task::Analyze => ctx.analyze()?,
            Task::Enumerate => ctx.enumerate()?,
            Task::Dimension => ctx.dimension()?,
            Task::Cantor => ctx.cantor()?,
            Task::Multiplicative => ctx.multiplicative()?,
        }
        timing.insert(task.name().to_string(), start.elapsed().as_millis() as u64);
    }
    if !canonical {
        ctx.report.timing_ms = Some(timing);
    }
    Ok(RunOutcome {
        report: ctx.report,
        budget_exhausted: ctx.exhausted,
    })
}

fn create(path: PathBuf) -> Result<(BufWriter<File>, PathBuf), RunError> {
    match File::create(&path) {
        Ok(f) => Ok((BufWriter::new(f), path)),
        Err(source) => Err(RunError::Io { path, source }),
    }
}

/// Writes `report.json` and/or the CSV tables into the output directory.
pub fn write_outputs(report: &Report, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.clone(), source })?;
    let mut written = Vec::new();
    let csv_err = |path: &PathBuf| {
        let path = path.clone();
        move |source| RunError::Csv { path, source }
    };
    for format in &cfg.formats {
        match format {
            Format::Json => {
                let path = dir.join("report.json");
                std::fs::write(&path, report.to_json()).map_err(|source| RunError::Io {
                    path: path.clone(),
                    source,
                })?;
                written.push(path);
            }
            Format::Csv => {
                if let Some(e) = &report.enumerate {
                    let (w, path) = create(dir.join("levels.csv"))?;
                    write_levels_csv(w, &e.levels).map_err(csv_err(&path))?;
                    written.push(path);
                }
                if let Some(d) = &report.dimension {
                    let (w, path) = create(dir.join("dimension.csv"))?;
                    write_dimension_csv(w, d).map_err(csv_err(&path))?;
                    written.push(path);
                }
                if let Some(sq) = report.multiplicative.as_ref().and_then(|m| m.squares.as_ref()) {
                    let (w, path) = create(dir.join("cover_squares.csv"))?;
                    write_squares_csv(w, sq).map_err(csv_err(&path))?;
                    written.push(path);
                }
            }
        }
    }
    Ok(written)
}
