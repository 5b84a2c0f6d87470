use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Which side of the true quantity a [`DirectedReal`] sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rounding {
    Down,
    Up,
    Exact,
}

/// A dyadic number `mantissa * 2^exponent` tagged with the rounding that produced it.
///
/// The mantissa is kept odd (or zero with exponent zero), so two values are
/// equal exactly when their canonical fields are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedReal {
    mantissa: BigInt,
    exponent: i64,
    direction: Rounding,
}

impl DirectedReal {
    pub fn new(mantissa: BigInt, exponent: i64, direction: Rounding) -> Self {
        let (mantissa, exponent) = canonicalize(mantissa, exponent);
        Self {
            mantissa,
            exponent,
            direction,
        }
    }

    pub fn zero() -> Self {
        Self::new(BigInt::zero(), 0, Rounding::Exact)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0, Rounding::Exact)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn direction(&self) -> Rounding {
        self.direction
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Re-tag the value without changing it. Used when an exact value serves
    /// as a bound.
    pub fn with_direction(mut self, direction: Rounding) -> Self {
        self.direction = direction;
        self
    }

    /// Rounds `r` to a dyadic with at most `bits` significant bits in the
    /// requested direction. Dyadic inputs are returned exactly regardless of
    /// their length.
    pub fn from_ratio(r: &Rational, direction: Rounding, bits: u32) -> Self {
        if is_dyadic(r) {
            let shift = r.denom().trailing_zeros().unwrap_or(0) as i64;
            return Self::new(r.numer().clone(), -shift, Rounding::Exact);
        }
        let (m, e) = round_quotient(r.numer(), r.denom(), direction, bits);
        Self::new(m, e, direction)
    }

    pub fn to_ratio(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << (self.exponent as usize))
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::one() << ((-self.exponent) as usize),
            )
        }
    }

    /// Nearest `f64`; values below the subnormal range flush to zero.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.to_ratio())
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.to_ratio().cmp(&other.to_ratio())
    }
}

impl fmt::Display for DirectedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}

fn canonicalize(mantissa: BigInt, exponent: i64) -> (BigInt, i64) {
    if mantissa.is_zero() {
        return (mantissa, 0);
    }
    let tz = mantissa.trailing_zeros().unwrap_or(0);
    if tz == 0 {
        (mantissa, exponent)
    } else {
        (mantissa >> (tz as usize), exponent + tz as i64)
    }
}

pub(crate) fn is_dyadic(r: &Rational) -> bool {
    let d = r.denom();
    let tz = d.trailing_zeros().unwrap_or(0);
    (d >> (tz as usize)).is_one()
}

/// `num/den` rounded to `bits` significant bits, returned as `(m, e)` with
/// value `m * 2^e`. `den` must be positive.
pub(crate) fn round_quotient(
    num: &BigInt,
    den: &BigInt,
    direction: Rounding,
    bits: u32,
) -> (BigInt, i64) {
    debug_assert!(den.is_positive());
    if num.is_zero() {
        return (BigInt::zero(), 0);
    }
    let k = bits as i64 - (num.bits() as i64 - den.bits() as i64) + 1;
    let (n, d) = if k >= 0 {
        (num << (k as usize), den.clone())
    } else {
        (num.clone(), den << ((-k) as usize))
    };
    let m = match direction {
        Rounding::Down => n.div_floor(&d),
        Rounding::Up => n.div_ceil(&d),
        Rounding::Exact => {
            let (q, r) = n.div_rem(&d);
            assert!(r.is_zero(), "inexact quotient requested as exact");
            q
        }
    };
    (m, -k)
}

/// Nearest `f64` of a rational, robust to numerators and denominators far
/// outside the `f64` range.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let (m, e) = round_quotient(r.numer(), r.denom(), Rounding::Down, 60);
    let mf = m.to_f64().unwrap_or(f64::NAN);
    scale_pow2(mf, e)
}

fn scale_pow2(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Largest `f64` not exceeding `r`.
pub fn ratio_to_f64_down(r: &Rational) -> f64 {
    let x = ratio_to_f64(r);
    if x.is_finite() && exact_f64_ratio(x).is_some_and(|v| &v > r) {
        next_down(x)
    } else {
        x
    }
}

/// Smallest `f64` not below `r`.
pub fn ratio_to_f64_up(r: &Rational) -> f64 {
    let x = ratio_to_f64(r);
    if x.is_finite() && exact_f64_ratio(x).is_some_and(|v| &v < r) {
        next_up(x)
    } else {
        x
    }
}

fn exact_f64_ratio(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let a = DirectedReal::new(BigInt::from(12), 0, Rounding::Exact);
        assert_eq!(a.mantissa(), &BigInt::from(3));
        assert_eq!(a.exponent(), 2);
        assert_eq!(a, DirectedReal::new(BigInt::from(3), 2, Rounding::Exact));
        assert_eq!(DirectedReal::new(BigInt::zero(), 17, Rounding::Exact).exponent(), 0);
    }

    #[test]
    fn rounding_brackets_one_third() {
        let third = q(1, 3);
        let lo = DirectedReal::from_ratio(&third, Rounding::Down, 16);
        let hi = DirectedReal::from_ratio(&third, Rounding::Up, 16);
        assert!(lo.to_ratio() < third && third < hi.to_ratio());
        assert_eq!(lo.direction(), Rounding::Down);
        let neg = DirectedReal::from_ratio(&-third.clone(), Rounding::Down, 16);
        assert!(neg.to_ratio() < -third);
    }

    #[test]
    fn dyadic_inputs_stay_exact() {
        let r = DirectedReal::from_ratio(&q(5, 16), Rounding::Down, 8);
        assert_eq!(r.direction(), Rounding::Exact);
        assert_eq!(r.to_ratio(), q(5, 16));
        assert_eq!(r.to_string(), "5*2^-4");
    }

    #[test]
    fn directed_f64_conversion() {
        let third = q(1, 3);
        assert!(Rational::from_float(ratio_to_f64_down(&third)).unwrap() <= third);
        assert!(Rational::from_float(ratio_to_f64_up(&third)).unwrap() >= third);
        let tiny = Rational::new(BigInt::one(), BigInt::one() << 3000usize);
        assert_eq!(ratio_to_f64_down(&tiny), 0.0);
        assert!(ratio_to_f64_up(&tiny) > 0.0);
    }
}
