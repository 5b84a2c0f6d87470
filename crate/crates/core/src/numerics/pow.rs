use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::directed::{DirectedReal, Rounding};
use super::enclosure::{Enclosure, GUARD_BITS};
use super::{NumericsError, Rational, MIN_PREC};

/// Certified enclosure of `q^e` for a positive integer `q` and rational `e`.
///
/// The result is computed from exact integer roots: with `e = a/b`,
/// `floor(q^(a/b) * 2^k)` is the integer `b`-th root of a scaled power of `q`,
/// so both ends are exact floor/ceiling points of a grid that refines as
/// `prec` grows. When `q^e` is dyadic the two ends coincide.
pub fn dir_pow(q: &BigUint, e: &Rational, prec: u32) -> Result<Enclosure, NumericsError> {
    if q.is_zero() {
        return Err(NumericsError::ZeroBase);
    }
    if prec < MIN_PREC {
        return Err(NumericsError::PrecisionTooLow(prec));
    }
    let a = e
        .numer()
        .abs()
        .to_u32()
        .ok_or_else(|| NumericsError::ExponentTooLarge(e.to_string()))?;
    let b = e
        .denom()
        .to_u32()
        .ok_or_else(|| NumericsError::ExponentTooLarge(e.to_string()))?;
    if q.is_one() || a == 0 {
        return Ok(Enclosure::from_int(1, prec));
    }
    let n = q.pow(a);
    let k = u64::from(prec + GUARD_BITS);
    let (root, k, exact) = if e.is_positive() {
        let scaled = &n << (b as u64 * k);
        let r = scaled.nth_root(b);
        let exact = r.pow(b) == scaled;
        (r, k, exact)
    } else {
        // q^(-a/b) < 1: shift far enough that the root keeps prec bits and a
        // dyadic result 2^-t is caught exactly.
        let k = k + n.bits().div_ceil(b as u64);
        let num = BigUint::one() << (b as u64 * k);
        let m = &num / &n;
        let r = m.nth_root(b);
        let exact = &r.pow(b) * &n == num;
        (r, k, exact)
    };
    let exp = -(k as i64);
    let lo = DirectedReal::new(BigInt::from(root.clone()), exp, if exact { Rounding::Exact } else { Rounding::Down });
    let hi = if exact {
        lo.clone()
    } else {
        DirectedReal::new(BigInt::from(root + 1u32), exp, Rounding::Up)
    };
    Ok(Enclosure::from_parts(lo, hi, prec))
}

/// Enclosure of `x^e` for a positive rational `x`.
pub fn dir_pow_ratio(x: &Rational, e: &Rational, prec: u32) -> Result<Enclosure, NumericsError> {
    if !x.is_positive() {
        return Err(NumericsError::ZeroBase);
    }
    let num = x.numer().to_biguint().expect("positive");
    let den = x.denom().to_biguint().expect("positive");
    let top = dir_pow(&num, e, prec)?;
    if den.is_one() {
        return Ok(top);
    }
    let bottom = dir_pow(&den, e, prec)?;
    Ok(&top / &bottom)
}
