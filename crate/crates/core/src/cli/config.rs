//! Experiment configuration files (TOML).
//!
//! Rationals are strings in the forms accepted by [`parse_rational`]:
//! `"p/q"`, `"n"` or `"m*2^e"`. Decimal numbers are rejected.
//!
//! ```toml
//! tau = "1"
//! d = 1
//! theta = ["0"]
//! depth = 6
//! tasks = ["analyze", "dimension"]
//!
//! [sequence]
//! kind = "power"
//! q1 = 4
//! c = "4"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cantor_measure::DEFAULT_NODE_BUDGET;
use crate::level_sets::DEFAULT_COMPONENT_BUDGET;
use crate::multiplicative::MAX_GAMMA_EXPONENT;
use crate::numerics::{format_rational, parse_rational, Rational, DEFAULT_PREC, MIN_PREC};
use crate::sequences::SequenceSpec;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Syntax(String),
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Analyze,
    Enumerate,
    Dimension,
    Cantor,
    Multiplicative,
}

impl Task {
    pub const ALL: [Task; 5] = [
        Task::Analyze,
        Task::Enumerate,
        Task::Dimension,
        Task::Cantor,
        Task::Multiplicative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Analyze => "analyze",
            Task::Enumerate => "enumerate",
            Task::Dimension => "dimension",
            Task::Cantor => "cantor",
            Task::Multiplicative => "multiplicative",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BigTerm {
    Int(u64),
    Str(String),
}

impl BigTerm {
    fn parse(&self, field: &str) -> Result<BigUint, ConfigError> {
        match self {
            BigTerm::Int(n) => Ok(BigUint::from(*n)),
            BigTerm::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| invalid(field, format!("`{s}` is not a non-negative integer"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    kind: String,
    q1: Option<BigTerm>,
    c: Option<String>,
    tau: Option<String>,
    eta: Option<String>,
    terms: Option<Vec<BigTerm>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawBudgets {
    components: Option<usize>,
    nodes: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    formats: Option<Vec<Format>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawCantor {
    s: Option<String>,
    samples: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawMultiplicative {
    gamma_exponent: Option<u32>,
    s: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    tau: String,
    d: Option<u32>,
    theta: Option<Vec<String>>,
    depth: Option<usize>,
    precision: Option<u32>,
    seed: Option<u64>,
    tasks: Option<Vec<Task>>,
    sequence: RawSequence,
    #[serde(default)]
    budgets: RawBudgets,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    cantor: RawCantor,
    #[serde(default)]
    multiplicative: RawMultiplicative,
}

/// A validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub sequence: SequenceSpec,
    pub tau: Rational,
    pub theta: Vec<Rational>,
    pub d: u32,
    pub depth: usize,
    pub precision: u32,
    pub seed: u64,
    /// Requested tasks in execution order, without duplicates.
    pub tasks: Vec<Task>,
    pub component_budget: usize,
    pub node_budget: usize,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub cantor_s: Option<Rational>,
    pub cantor_samples: usize,
    pub gamma_exponent: u32,
    pub mult_s: Option<Rational>,
}

fn rational(field: &str, s: &str) -> Result<Rational, ConfigError> {
    parse_rational(s).map_err(|e| invalid(field, e.to_string()))
}

fn required<T>(field: &str, v: Option<T>) -> Result<T, ConfigError> {
    v.ok_or_else(|| invalid(field, "missing"))
}

fn positive(field: &str, s: &str) -> Result<Rational, ConfigError> {
    let r = rational(field, s)?;
    if !r.is_positive() {
        return Err(invalid(field, format!("{field} must be positive")));
    }
    Ok(r)
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        Self::validate(raw)
    }

    fn validate(raw: RawConfig) -> Result<Self, ConfigError> {
        let tau = positive("tau", &raw.tau)?;
        let seq = &raw.sequence;
        let q1 = || -> Result<BigUint, ConfigError> {
            let q = required("sequence.q1", seq.q1.as_ref())?.parse("sequence.q1")?;
            if q < BigUint::from(2u32) {
                return Err(invalid("sequence.q1", "must be at least 2"));
            }
            Ok(q)
        };
        let seq_tau = || match &seq.tau {
            Some(s) => positive("sequence.tau", s),
            None => Ok(tau.clone()),
        };
        let sequence = match seq.kind.as_str() {
            "explicit" => {
                let terms = required("sequence.terms", seq.terms.as_ref())?
                    .iter()
                    .map(|t| t.parse("sequence.terms"))
                    .collect::<Result<Vec<_>, _>>()?;
                SequenceSpec::Explicit(terms)
            }
            "power" => {
                let c = rational("sequence.c", required("sequence.c", seq.c.as_deref())?)?;
                if c <= Rational::one() {
                    return Err(invalid("sequence.c", "must exceed 1"));
                }
                SequenceSpec::Power { q1: q1()?, c }
            }
            "contractive" => SequenceSpec::Contractive { q1: q1()?, tau: seq_tau()? },
            "alternating" => {
                let eta = positive("sequence.eta", required("sequence.eta", seq.eta.as_deref())?)?;
                SequenceSpec::Alternating { q1: q1()?, tau: seq_tau()?, eta }
            }
            other => {
                return Err(invalid(
                    "sequence.kind",
                    format!("unknown kind `{other}`; expected explicit, power, contractive or alternating"),
                ))
            }
        };
        let d = raw.d.unwrap_or_else(|| raw.theta.as_ref().map_or(1, |t| t.len() as u32));
        if d == 0 {
            return Err(invalid("d", "must be at least 1"));
        }
        let theta = match &raw.theta {
            Some(list) => list
                .iter()
                .map(|s| rational("theta", s))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Rational::zero(); d as usize],
        };
        if theta.len() != d as usize {
            return Err(invalid("theta", format!("has {} entries but d = {d}", theta.len())));
        }
        if let Some(t) = theta.iter().find(|t| t.is_negative() || **t >= Rational::one()) {
            return Err(invalid("theta", format!("{} is outside [0, 1)", format_rational(t))));
        }
        let depth = match (raw.depth, &sequence) {
            (Some(j), _) => j,
            (None, SequenceSpec::Explicit(t)) => t.len(),
            (None, _) => return Err(invalid("depth", "missing")),
        };
        if depth == 0 {
            return Err(invalid("depth", "must be at least 1"));
        }
        let precision = raw.precision.unwrap_or(DEFAULT_PREC);
        if precision < MIN_PREC {
            return Err(invalid("precision", format!("must be at least {MIN_PREC}")));
        }
        let mut tasks = raw.tasks.unwrap_or_else(|| vec![Task::Analyze, Task::Dimension]);
        tasks.sort();
        tasks.dedup();
        let cantor_s = raw.cantor.s.as_deref().map(|s| positive("cantor.s", s)).transpose()?;
        let mult_s = raw.multiplicative.s.as_deref().map(|s| positive("multiplicative.s", s)).transpose()?;
        let gamma_exponent = raw.multiplicative.gamma_exponent.unwrap_or(6);
        if gamma_exponent > MAX_GAMMA_EXPONENT {
            return Err(invalid("multiplicative.gamma_exponent", format!("must be at most {MAX_GAMMA_EXPONENT}")));
        }
        let cfg = Self {
            sequence,
            tau,
            theta,
            d,
            depth,
            precision,
            seed: raw.seed.unwrap_or(0),
            tasks,
            component_budget: raw.budgets.components.unwrap_or(DEFAULT_COMPONENT_BUDGET),
            node_budget: raw.budgets.nodes.unwrap_or(DEFAULT_NODE_BUDGET),
            out_dir: raw.output.dir.unwrap_or_else(|| PathBuf::from("out")),
            formats: raw.output.formats.unwrap_or_else(|| vec![Format::Json]),
            cantor_s,
            cantor_samples: raw.cantor.samples.unwrap_or(1000),
            gamma_exponent,
            mult_s,
        };
        cfg.check_tasks()?;
        Ok(cfg)
    }

    /// Task-specific requirements; re-run after command-line overrides.
    pub fn check_tasks(&self) -> Result<(), ConfigError> {
        if self.tasks.contains(&Task::Cantor) {
            let s = self.cantor_s.as_ref().ok_or_else(|| invalid("cantor.s", "required by the cantor task"))?;
            if s >= &Rational::from_integer(self.d.into()) {
                return Err(invalid("cantor.s", "must be below d"));
            }
            if self.cantor_samples == 0 {
                return Err(invalid("cantor.samples", "must be at least 1"));
            }
        }
        if self.tasks.contains(&Task::Multiplicative) {
            let s = self
                .mult_s
                .as_ref()
                .ok_or_else(|| invalid("multiplicative.s", "required by the multiplicative task"))?;
            if s <= &Rational::one() || s > &Rational::from_integer(2.into()) {
                return Err(invalid("multiplicative.s", "must lie in (1, 2]"));
            }
        }
        if self.depth == 0 {
            return Err(invalid("depth", "must be at least 1"));
        }
        if self.precision < MIN_PREC {
            return Err(invalid("precision", format!("must be at least {MIN_PREC}")));
        }
        Ok(())
    }
}
