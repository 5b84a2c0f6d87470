use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::directed::{ratio_to_f64, ratio_to_f64_down, ratio_to_f64_up, DirectedReal, Rounding};
use super::Rational;

/// Extra bits carried past the nominal precision so that two outward
/// roundings still fit inside the advertised width.
pub(crate) const GUARD_BITS: u32 = 2;

/// A certified interval `[lo, hi]` around a real quantity, with dyadic ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: DirectedReal,
    hi: DirectedReal,
    prec: u32,
}

impl Enclosure {
    /// The exact value `r` if it is dyadic, otherwise its two-sided rounding.
    pub fn from_ratio(r: &Rational, prec: u32) -> Self {
        Self::from_bounds(r, r, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Self::from_ratio(&Rational::from_integer(n.into()), prec)
    }

    /// Encloses `[lo, hi]`, rounding each end outward.
    pub fn from_bounds(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        assert!(lo <= hi, "enclosure bounds out of order");
        let bits = prec + GUARD_BITS;
        let lo = DirectedReal::from_ratio(lo, Rounding::Down, bits);
        let hi = DirectedReal::from_ratio(hi, Rounding::Up, bits);
        Self::from_parts(lo, hi, prec)
    }

    pub(crate) fn from_parts(lo: DirectedReal, hi: DirectedReal, prec: u32) -> Self {
        // An exact value used as a bound keeps its Exact tag only when the two
        // ends coincide.
        let same = lo.cmp_value(&hi) == Ordering::Equal;
        let lo = if !same && lo.direction() == Rounding::Exact {
            lo.with_direction(Rounding::Down)
        } else {
            lo
        };
        let hi = if !same && hi.direction() == Rounding::Exact {
            hi.with_direction(Rounding::Up)
        } else {
            hi
        };
        Self { lo, hi, prec }
    }

    pub fn lo(&self) -> &DirectedReal {
        &self.lo
    }

    pub fn hi(&self) -> &DirectedReal {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_ratio(&self) -> Rational {
        self.lo.to_ratio()
    }

    pub fn hi_ratio(&self) -> Rational {
        self.hi.to_ratio()
    }

    pub fn is_exact(&self) -> bool {
        self.lo.direction() == Rounding::Exact
            && self.hi.direction() == Rounding::Exact
            && self.lo == self.hi
    }

    /// The exact value, when the enclosure has collapsed to a point.
    pub fn exact_value(&self) -> Option<Rational> {
        self.is_exact().then(|| self.lo_ratio())
    }

    pub fn width(&self) -> Rational {
        self.hi_ratio() - self.lo_ratio()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo_ratio() <= r && r <= &self.hi_ratio()
    }

    /// Certified comparison against a rational; `None` when `r` lies inside
    /// the enclosure and the value is not known exactly.
    pub fn compare(&self, r: &Rational) -> Option<Ordering> {
        if &self.hi_ratio() < r {
            Some(Ordering::Less)
        } else if &self.lo_ratio() > r {
            Some(Ordering::Greater)
        } else {
            self.exact_value().map(|v| v.cmp(r))
        }
    }

    /// Certified comparison of two enclosed quantities.
    pub fn compare_with(&self, other: &Self) -> Option<Ordering> {
        if self.hi_ratio() < other.lo_ratio() {
            Some(Ordering::Less)
        } else if self.lo_ratio() > other.hi_ratio() {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() {
            Some(self.lo_ratio().cmp(&other.lo_ratio()))
        } else {
            None
        }
    }

    pub fn lo_f64(&self) -> f64 {
        ratio_to_f64_down(&self.lo_ratio())
    }

    pub fn hi_f64(&self) -> f64 {
        ratio_to_f64_up(&self.hi_ratio())
    }

    pub fn mid_f64(&self) -> f64 {
        ratio_to_f64(&((self.lo_ratio() + self.hi_ratio()) / Rational::from_integer(2.into())))
    }

    /// `(floor(lo), floor(hi))`; the floor of the true value lies between.
    pub fn floor_bounds(&self) -> (BigInt, BigInt) {
        (self.lo_ratio().floor().to_integer(), self.hi_ratio().floor().to_integer())
    }

    pub fn ceil_bounds(&self) -> (BigInt, BigInt) {
        (self.lo_ratio().ceil().to_integer(), self.hi_ratio().ceil().to_integer())
    }

    /// Enclosure of `min(self, other)`.
    pub fn min(&self, other: &Self) -> Self {
        let lo = if self.lo.cmp_value(&other.lo) == Ordering::Greater { &other.lo } else { &self.lo };
        let hi = if self.hi.cmp_value(&other.hi) == Ordering::Greater { &other.hi } else { &self.hi };
        Self::from_parts(lo.clone(), hi.clone(), self.prec.max(other.prec))
    }

    pub fn max(&self, other: &Self) -> Self {
        let lo = if self.lo.cmp_value(&other.lo) == Ordering::Less { &other.lo } else { &self.lo };
        let hi = if self.hi.cmp_value(&other.hi) == Ordering::Less { &other.hi } else { &self.hi };
        Self::from_parts(lo.clone(), hi.clone(), self.prec.max(other.prec))
    }

    /// Clamps both ends from below at `floor`.
    pub fn clamp_below(&self, floor: &Rational) -> Self {
        let lo = self.lo_ratio().max(floor.clone());
        let hi = self.hi_ratio().max(floor.clone());
        Self::from_bounds(&lo, &hi, self.prec)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self * &Enclosure::from_ratio(r, self.prec)
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut acc = Enclosure::from_int(1, self.prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn recip(&self) -> Self {
        &Enclosure::from_int(1, self.prec) / self
    }

    fn straddles_zero(&self) -> bool {
        !self.lo_ratio().is_positive() && !self.hi_ratio().is_negative()
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

fn hull(values: [Rational; 4], prec: u32) -> Enclosure {
    let lo = values.iter().min().cloned().unwrap_or_else(Rational::zero);
    let hi = values.iter().max().cloned().unwrap_or_else(Rational::zero);
    Enclosure::from_bounds(&lo, &hi, prec)
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure::from_bounds(
            &(self.lo_ratio() + rhs.lo_ratio()),
            &(self.hi_ratio() + rhs.hi_ratio()),
            self.prec.max(rhs.prec),
        )
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure::from_bounds(
            &(self.lo_ratio() - rhs.hi_ratio()),
            &(self.hi_ratio() - rhs.lo_ratio()),
            self.prec.max(rhs.prec),
        )
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &Enclosure) -> Enclosure {
        let (a, b) = (self.lo_ratio(), self.hi_ratio());
        let (c, d) = (rhs.lo_ratio(), rhs.hi_ratio());
        hull([&a * &c, &a * &d, &b * &c, &b * &d], self.prec.max(rhs.prec))
    }
}

impl Div for &Enclosure {
    type Output = Enclosure;
    /// Panics when the divisor's enclosure contains zero.
    fn div(self, rhs: &Enclosure) -> Enclosure {
        assert!(!rhs.straddles_zero(), "division by an enclosure containing zero");
        let (a, b) = (self.lo_ratio(), self.hi_ratio());
        let (c, d) = (rhs.lo_ratio(), rhs.hi_ratio());
        hull([&a / &c, &a / &d, &b / &c, &b / &d], self.prec.max(rhs.prec))
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure::from_bounds(&-self.hi_ratio(), &-self.lo_ratio(), self.prec)
    }
}

/// Exact `floor(r)` as an integer.
pub fn floor_ratio(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Exact `ceil(r)` as an integer.
pub fn ceil_ratio(r: &Rational) -> BigInt {
    r.numer().div_ceil(r.denom())
}
