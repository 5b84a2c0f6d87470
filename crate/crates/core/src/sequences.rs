//! Integer sequences `q_1 < q_2 < ...` and their exponent statistics.
//!
//! The growth exponent `h` (liminf of `log q_{j+1} / log q_j`) and the
//! cumulative exponent `alpha` (liminf of `(log q_1 + ... + log q_{j-1}) / log q_j`)
//! are liminfs and cannot be read off a finite prefix. [`exponent_stats`]
//! therefore reports every prefix term as a certified enclosure, with the
//! running minimum of `h` and the last `alpha` term as estimators. For the
//! built-in families both converge monotonically.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::numerics::{
    self, dir_pow, log_ratio, ratio, resolve_ceil, Enclosure, NumericsError, Rational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("q_{index} = {value} is below 2")]
    TermBelowTwo { index: usize, value: BigUint },
    #[error("sequence is not strictly increasing at q_{index}")]
    NotIncreasing { index: usize },
    #[error("no integer q_{index} satisfies the defining window")]
    WindowUnsatisfiable { index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("depth {requested} exceeds the {available} available terms")]
    TooShort { requested: usize, available: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A finite, strictly increasing prefix of integers, all at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSequence(Vec<BigUint>);

impl QSequence {
    pub fn new(terms: Vec<BigUint>) -> Result<Self, SequenceError> {
        let two = BigUint::from(2u32);
        for (i, q) in terms.iter().enumerate() {
            if q < &two {
                return Err(SequenceError::TermBelowTwo {
                    index: i + 1,
                    value: q.clone(),
                });
            }
            if i > 0 && q <= &terms[i - 1] {
                return Err(SequenceError::NotIncreasing { index: i + 1 });
            }
        }
        Ok(Self(terms))
    }

    pub fn from_u64(terms: &[u64]) -> Result<Self, SequenceError> {
        Self::new(terms.iter().map(|&q| BigUint::from(q)).collect())
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `q_j` with 1-based `j`, as in the usual notation.
    pub fn q(&self, j: usize) -> &BigUint {
        &self.0[j - 1]
    }

    pub fn last(&self) -> &BigUint {
        self.0.last().expect("non-empty sequence")
    }

    /// The first `depth` terms.
    pub fn prefix(&self, depth: usize) -> Result<Self, SequenceError> {
        if depth > self.len() {
            return Err(SequenceError::TooShort {
                requested: depth,
                available: self.len(),
            });
        }
        Ok(Self(self.0[..depth].to_vec()))
    }
}

impl fmt::Display for QSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("]")
    }
}

/// How a sequence prefix is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    /// A literal list of terms.
    Explicit(Vec<BigUint>),
    /// `q_{j+1} = ceil(q_j^c)`.
    Power { q1: BigUint, c: Rational },
    /// `q_{j+1} = ceil(q_j^(1+tau) / 8)`, kept inside the window
    /// `[q_j^(1+tau)/8, q_j^(1+tau)/4]`.
    Contractive { q1: BigUint, tau: Rational },
    /// Odd `j`: `q_{j+1} = ceil(q_j^eta)`. Even `j`: `q_{j+1} = q_j * ceil(q_j^tau / 8)`,
    /// a multiple of `q_j` inside the contractive window.
    Alternating {
        q1: BigUint,
        tau: Rational,
        eta: Rational,
    },
}

/// Starting precision for the exact ceilings taken during generation.
fn ceil_prec(q: &BigUint, e: &Rational) -> u32 {
    let mag = (Rational::from_integer(BigInt::from(q.bits())) * e.abs()).ceil();
    mag.to_integer().to_u32().unwrap_or(u32::MAX / 4).saturating_add(64)
}

fn ceil_pow(q: &BigUint, e: &Rational) -> Result<BigUint, SequenceError> {
    let c = resolve_ceil(|p| dir_pow(q, e, p), ceil_prec(q, e))?;
    Ok(c.to_biguint().expect("positive power"))
}

/// One step inside the window `[q^(1+tau)/8, q^(1+tau)/4]`: either
/// `ceil(q^(1+tau)/8)` or, when `multiple_of_q`, `q * ceil(q^tau/8)`.
fn windowed_step(
    q: &BigUint,
    tau: &Rational,
    multiple_of_q: bool,
    index: usize,
) -> Result<BigUint, SequenceError> {
    let full = tau + Rational::one();
    let (ceil_exp, factor) = if multiple_of_q {
        (tau.clone(), q.clone())
    } else {
        (full.clone(), BigUint::one())
    };
    let eighth = ratio(1, 8);
    let m = resolve_ceil(
        |p| Ok(dir_pow(q, &ceil_exp, p)?.scale(&eighth)),
        ceil_prec(q, &ceil_exp),
    )?;
    let next = factor * m.to_biguint().expect("positive");
    let next_r = Rational::from_integer(BigInt::from(next.clone()));
    let mut prec = ceil_prec(q, &full);
    loop {
        let quarter = dir_pow(q, &full, prec)?.scale(&ratio(1, 4));
        match quarter.compare(&next_r) {
            Some(Ordering::Greater) | Some(Ordering::Equal) => return Ok(next),
            Some(Ordering::Less) => return Err(SequenceError::WindowUnsatisfiable { index }),
            None if prec < numerics::MAX_REFINE_PREC => prec *= 2,
            None => return Err(NumericsError::Unresolved(prec).into()),
        }
    }
}

/// Generates `q_1, ..., q_depth` from `spec`. Deterministic.
pub fn generate(spec: &SequenceSpec, depth: usize) -> Result<QSequence, SequenceError> {
    if depth == 0 {
        return Err(SequenceError::InvalidParameter("depth must be at least 1".into()));
    }
    let one = Rational::one();
    let terms = match spec {
        SequenceSpec::Explicit(list) => {
            if list.len() < depth {
                return Err(SequenceError::TooShort {
                    requested: depth,
                    available: list.len(),
                });
            }
            list[..depth].to_vec()
        }
        SequenceSpec::Power { q1, c } => {
            if c <= &one {
                return Err(SequenceError::InvalidParameter("power exponent c must exceed 1".into()));
            }
            let mut terms = vec![q1.clone()];
            while terms.len() < depth {
                let next = ceil_pow(terms.last().expect("non-empty"), c)?;
                terms.push(next);
            }
            terms
        }
        SequenceSpec::Contractive { q1, tau } => {
            if !tau.is_positive() {
                return Err(SequenceError::InvalidParameter("tau must be positive".into()));
            }
            let mut terms = vec![q1.clone()];
            while terms.len() < depth {
                let q = terms.last().expect("non-empty");
                let next = windowed_step(q, tau, false, terms.len() + 1)?;
                if &next <= q {
                    return Err(SequenceError::WindowUnsatisfiable { index: terms.len() + 1 });
                }
                terms.push(next);
            }
            terms
        }
        SequenceSpec::Alternating { q1, tau, eta } => {
            if !tau.is_positive() {
                return Err(SequenceError::InvalidParameter("tau must be positive".into()));
            }
            if eta <= &(tau + &one) {
                return Err(SequenceError::InvalidParameter("eta must exceed 1 + tau".into()));
            }
            let mut terms = vec![q1.clone()];
            while terms.len() < depth {
                let j = terms.len();
                let q = terms.last().expect("non-empty");
                let next = if j % 2 == 1 {
                    ceil_pow(q, eta)?
                } else {
                    windowed_step(q, tau, true, j + 1)?
                };
                if &next <= q {
                    return Err(SequenceError::WindowUnsatisfiable { index: j + 1 });
                }
                terms.push(next);
            }
            terms
        }
    };
    QSequence::new(terms)
}

/// Prefix estimates of the exponents `h` and `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentStats {
    /// `log q_{j+1} / log q_j` for `j = 1..J-1`.
    pub h_list: Vec<Enclosure>,
    /// `(log q_1 + ... + log q_{j-1}) / log q_j` for `j = 2..J`.
    pub alpha_list: Vec<Enclosure>,
    pub h_prefix: Option<Enclosure>,
    pub alpha_last: Option<Enclosure>,
}

pub fn exponent_stats(qs: &QSequence, prec: u32) -> Result<ExponentStats, SequenceError> {
    let terms = qs.terms();
    let mut h_list = Vec::with_capacity(terms.len().saturating_sub(1));
    let mut alpha_list = Vec::with_capacity(terms.len().saturating_sub(1));
    let mut product = BigUint::one();
    for w in terms.windows(2) {
        h_list.push(log_ratio(&w[1], &w[0], prec)?);
        product *= &w[0];
        alpha_list.push(log_ratio(&product, &w[1], prec)?);
    }
    let h_prefix = h_list.iter().cloned().reduce(|a, b| a.min(&b));
    let alpha_last = alpha_list.last().cloned();
    Ok(ExponentStats {
        h_list,
        alpha_list,
        h_prefix,
        alpha_last,
    })
}

/// Outcome of checking `h_j > tau + 1` along a prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeCheck {
    Pass,
    /// `h_j <= tau + 1` at this (1-based) `j`.
    Fail { index: usize },
    /// The enclosure of `h_j` contains `tau + 1`; retry at higher precision.
    Indeterminate { index: usize },
}

impl RegimeCheck {
    pub fn is_pass(&self) -> bool {
        matches!(self, RegimeCheck::Pass)
    }
}

pub fn validate_regime(qs: &QSequence, tau: &Rational, prec: u32) -> Result<RegimeCheck, SequenceError> {
    let threshold = tau + Rational::one();
    for (i, w) in qs.terms().windows(2).enumerate() {
        let h = log_ratio(&w[1], &w[0], prec)?;
        match h.compare(&threshold) {
            Some(Ordering::Greater) => {}
            Some(_) => return Ok(RegimeCheck::Fail { index: i + 1 }),
            None => return Ok(RegimeCheck::Indeterminate { index: i + 1 }),
        }
    }
    Ok(RegimeCheck::Pass)
}

/// Keeps the even-indexed terms `q_2, q_4, ...` and maps `tau` to `tau(2 + tau)`.
pub fn reindex_even(qs: &QSequence, tau: &Rational) -> Result<(QSequence, Rational), SequenceError> {
    if qs.len() < 2 {
        return Err(SequenceError::TooShort {
            requested: 2,
            available: qs.len(),
        });
    }
    let even = qs.terms().iter().skip(1).step_by(2).cloned().collect();
    let tau_hat = tau * (Rational::from_integer(BigInt::from(2)) + tau);
    Ok((QSequence::new(even)?, tau_hat))
}
