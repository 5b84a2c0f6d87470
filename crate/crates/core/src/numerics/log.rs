use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enclosure::{floor_ratio, Enclosure, GUARD_BITS};
use super::{NumericsError, Rational, MIN_PREC};

/// Bounds `lo <= log2(n) <= hi` with `hi - lo <= 2^-frac_bits`.
///
/// Uses the binary digit recurrence: for `y` in `[1, 2)`, square `y`; the next
/// bit of `log2 y` is 1 iff the square reaches 2. Lower and upper tracks are
/// rounded apart so both stay certified; if they disagree on a bit the digit
/// expansion stops early with a slightly wider (still sound) result.
pub fn log2_bounds(n: &BigUint, frac_bits: u32) -> (Rational, Rational) {
    assert!(!n.is_zero(), "log2 of zero");
    let int_part = n.bits() - 1;
    let ip = Rational::from_integer(BigInt::from(int_part));
    if n.trailing_zeros() == Some(int_part) {
        return (ip.clone(), ip);
    }
    let w = u64::from(frac_bits) + 32;
    let one = BigUint::one() << w;
    let two = &one << 1u32;
    let (mut ylo, mut yhi) = if w >= int_part {
        let y = n << (w - int_part);
        (y.clone(), y)
    } else {
        let shift = int_part - w;
        let y = n >> shift;
        let exact = (&y << shift) == *n;
        let up = if exact { y.clone() } else { &y + 1u32 };
        (y, up)
    };
    let mut digits = BigUint::zero();
    let mut taken = 0u32;
    for _ in 0..frac_bits {
        let sq_lo = (&ylo * &ylo) >> w;
        let sq_hi_full = &yhi * &yhi;
        let mut sq_hi = &sq_hi_full >> w;
        if (&sq_hi << w) != sq_hi_full {
            sq_hi += 1u32;
        }
        if sq_lo >= two {
            digits = (digits << 1u32) + 1u32;
            ylo = sq_lo >> 1u32;
            yhi = (&sq_hi + 1u32) >> 1u32;
        } else if sq_hi < two {
            digits <<= 1u32;
            ylo = sq_lo;
            yhi = sq_hi;
        } else {
            break;
        }
        taken += 1;
    }
    let scale = BigInt::one() << taken as usize;
    let digits = BigInt::from(digits);
    let lo = ip.clone() + Rational::new(digits.clone(), scale.clone());
    let hi = ip + Rational::new(digits + 1, scale);
    (lo, hi)
}

/// Certified `log2 n` at working precision `prec`.
pub fn log2_enclosure(n: &BigUint, prec: u32) -> Result<Enclosure, NumericsError> {
    if n.is_zero() {
        return Err(NumericsError::LogOfZero);
    }
    if prec < MIN_PREC {
        return Err(NumericsError::PrecisionTooLow(prec));
    }
    let frac = prec + GUARD_BITS + 8 + bit_length(n.bits());
    let (lo, hi) = log2_bounds(n, frac);
    Ok(Enclosure::from_bounds(&lo, &hi, prec))
}

fn bit_length(x: u64) -> u32 {
    64 - x.leading_zeros()
}

/// Certified `log(a) / log(b)` for integers `a, b >= 2`.
///
/// When the ratio is rational (`a = c^p`, `b = c^m` for a common base) the
/// exact value is recovered and returned: as a point if it is dyadic, or as
/// its tight rounding otherwise.
pub fn log_ratio(a: &BigUint, b: &BigUint, prec: u32) -> Result<Enclosure, NumericsError> {
    let two = BigUint::from(2u32);
    if a < &two || b < &two {
        return Err(NumericsError::LogArgumentBelowTwo);
    }
    if prec < MIN_PREC {
        return Err(NumericsError::PrecisionTooLow(prec));
    }
    let frac = prec + GUARD_BITS + 16 + bit_length(a.bits().max(b.bits()));
    let (alo, ahi) = log2_bounds(a, frac);
    let (blo, bhi) = log2_bounds(b, frac);
    let lo = &alo / &bhi;
    let hi = &ahi / &blo;
    if let Some(r) = rational_log_ratio(a, b, &lo, &hi) {
        return Ok(Enclosure::from_ratio(&r, prec));
    }
    Ok(Enclosure::from_bounds(&lo, &hi, prec))
}

/// Finds `p/m` in `[lo, hi]` with `a^m = b^p`, if one exists.
fn rational_log_ratio(a: &BigUint, b: &BigUint, lo: &Rational, hi: &Rational) -> Option<Rational> {
    let cand = simplest_rational_in(lo, hi, 4 * (a.bits() + b.bits()) as usize)?;
    let p = cand.numer().to_u64()?;
    let m = cand.denom().to_u64()?;
    // a = c^p and b = c^m force p <= log2 a and m <= log2 b.
    if p == 0 || p > a.bits() || m > b.bits() {
        return None;
    }
    let c = b.nth_root(m as u32);
    if c.pow(m as u32) != *b || c.pow(p as u32) != *a {
        return None;
    }
    Some(cand)
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]` (Stern-Brocot descent), for `0 <= lo <= hi`. Gives up after
/// `max_terms` continued-fraction steps.
pub fn simplest_rational_in(lo: &Rational, hi: &Rational, max_terms: usize) -> Option<Rational> {
    if lo.is_negative() || lo > hi {
        return None;
    }
    // Convergent recurrences: value = (h1*x + h0)/(k1*x + k0) for the tail x.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    for _ in 0..max_terms {
        let fl = floor_ratio(&lo);
        let n = if Rational::from_integer(fl.clone()) == lo {
            Some(fl.clone())
        } else {
            let c: BigInt = &fl + 1;
            (Rational::from_integer(c.clone()) <= hi).then_some(c)
        };
        if let Some(n) = n {
            let num = &h1 * &n + &h0;
            let den = &k1 * &n + &k0;
            return Some(Rational::new(num, den));
        }
        // lo and hi share the integer part fl; continue with the reciprocals
        // of the fractional parts (order swaps).
        let flr = Rational::from_integer(fl.clone());
        let new_lo = (&hi - &flr).recip();
        let new_hi = (&lo - &flr).recip();
        let h2 = &h1 * &fl + &h0;
        let k2 = &k1 * &fl + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        lo = new_lo;
        hi = new_hi;
    }
    None
}
