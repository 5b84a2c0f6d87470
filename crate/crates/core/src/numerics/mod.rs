//! Certified dyadic arithmetic.
//!
//! Every irrational quantity the estimators need (powers `q^e` with rational
//! `e`, ratios of logarithms of integers) is produced as an [`Enclosure`]:
//! a down-rounded and an up-rounded dyadic bracketing the true value.

mod directed;
mod enclosure;
mod log;
mod pow;

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use directed::{ratio_to_f64, ratio_to_f64_down, ratio_to_f64_up, DirectedReal, Rounding};
pub use enclosure::{ceil_ratio, floor_ratio, Enclosure};
pub use log::{log2_bounds, log2_enclosure, log_ratio, simplest_rational_in};
pub use pow::{dir_pow, dir_pow_ratio};

/// Exact rationals over arbitrary-precision integers.
pub type Rational = BigRational;

/// Smallest accepted working precision, in bits.
pub const MIN_PREC: u32 = 8;

/// Working precision used when none is configured.
pub const DEFAULT_PREC: u32 = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("base must be a positive integer")]
    ZeroBase,
    #[error("precision {0} is below the minimum of {MIN_PREC} bits")]
    PrecisionTooLow(u32),
    #[error("exponent {0} does not fit the supported range")]
    ExponentTooLarge(String),
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("log ratio arguments must both be at least 2")]
    LogArgumentBelowTwo,
    #[error("enclosure still straddles an integer at {0} bits")]
    Unresolved(u32),
    #[error("cannot parse rational {0:?}: expected \"p/q\", an integer, or \"m*2^e\"")]
    Parse(String),
}

/// Parses an exact rational written as `"p/q"`, `"n"`, or `"m*2^e"`.
///
/// Decimal points are rejected on purpose: a decimal literal like `0.1` has no
/// exact binary meaning the user could have intended.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let err = || NumericsError::Parse(s.to_string());
    let t = s.trim();
    if let Some((m, e)) = t.split_once("*2^") {
        let m = BigInt::from_str(m.trim()).map_err(|_| err())?;
        let e: i64 = e.trim().parse().map_err(|_| err())?;
        let shift = usize::try_from(e.unsigned_abs()).map_err(|_| err())?;
        return Ok(if e >= 0 {
            Rational::from_integer(m << shift)
        } else {
            Rational::new(m, BigInt::one() << shift)
        });
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err())
}

/// Precision ceiling for adaptive refinement loops.
pub const MAX_REFINE_PREC: u32 = 1 << 20;

/// Exact `floor` of a quantity known only through enclosures, refining the
/// precision until both ends share a floor.
///
/// Terminates whenever the quantity is either exactly representable (the
/// enclosure collapses) or not an integer.
pub fn resolve_floor<F>(mut eval: F, start_prec: u32) -> Result<BigInt, NumericsError>
where
    F: FnMut(u32) -> Result<Enclosure, NumericsError>,
{
    let mut prec = start_prec.max(MIN_PREC);
    loop {
        let e = eval(prec)?;
        let (lo, hi) = e.floor_bounds();
        if lo == hi {
            return Ok(lo);
        }
        if prec >= MAX_REFINE_PREC {
            return Err(NumericsError::Unresolved(prec));
        }
        prec = prec.saturating_mul(2).min(MAX_REFINE_PREC);
    }
}

/// Exact `ceil` counterpart of [`resolve_floor`].
pub fn resolve_ceil<F>(mut eval: F, start_prec: u32) -> Result<BigInt, NumericsError>
where
    F: FnMut(u32) -> Result<Enclosure, NumericsError>,
{
    let mut prec = start_prec.max(MIN_PREC);
    loop {
        let e = eval(prec)?;
        let (lo, hi) = e.ceil_bounds();
        if lo == hi {
            return Ok(lo);
        }
        if prec >= MAX_REFINE_PREC {
            return Err(NumericsError::Unresolved(prec));
        }
        prec = prec.saturating_mul(2).min(MAX_REFINE_PREC);
    }
}

/// Formats a rational in the same syntax [`parse_rational`] accepts.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
