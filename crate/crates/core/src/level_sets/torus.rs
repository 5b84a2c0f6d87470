use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::numerics::{ceil_ratio, floor_ratio, Rational};

/// An open interval `(lo, hi)` of the unit segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo < hi);
        Self { lo, hi }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A finite union of open arcs on the circle `R/Z`, stored as its lift to
/// `[0, 1)`.
///
/// Pieces are sorted, pairwise disjoint, and lie in `[0, 1]`. An arc through
/// the origin is split into a piece starting at 0 and a piece ending at 1;
/// `contains_zero` records that the origin itself belongs to the set, which is
/// what glues those two pieces into one component. Touching pieces are kept
/// apart: their shared endpoint is not in the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusUnion {
    pieces: Vec<OpenInterval>,
    contains_zero: bool,
}

/// Raised when a refinement would produce more pieces than allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetExceeded;

impl TorusUnion {
    pub fn empty() -> Self {
        Self {
            pieces: Vec::new(),
            contains_zero: false,
        }
    }

    pub fn full() -> Self {
        Self {
            pieces: vec![OpenInterval::new(Rational::zero(), Rational::one())],
            contains_zero: true,
        }
    }

    /// Builds a canonical union from open arcs `(lo, hi)` of the real line,
    /// read modulo 1. Arcs of length above 1 cover the circle.
    pub fn from_arcs<I>(arcs: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let one = Rational::one();
        let mut pieces = Vec::new();
        let mut contains_zero = false;
        for (lo, hi) in arcs {
            if lo >= hi {
                continue;
            }
            if &hi - &lo > one {
                return Self::full();
            }
            let shift = Rational::from_integer(floor_ratio(&lo));
            let a = &lo - &shift;
            let b = &hi - &shift;
            if b <= one {
                pieces.push(OpenInterval::new(a, b));
            } else {
                let wrap = &b - &one;
                pieces.push(OpenInterval::new(a, one.clone()));
                if wrap > Rational::zero() {
                    pieces.push(OpenInterval::new(Rational::zero(), wrap));
                }
                contains_zero = true;
            }
        }
        pieces.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
        let mut merged: Vec<OpenInterval> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match merged.last_mut() {
                Some(last) if p.lo < last.hi || p.lo == last.lo => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => merged.push(p),
            }
        }
        let contains_zero = contains_zero && merged.first().is_some_and(|p| p.lo.is_zero());
        Self {
            pieces: merged,
            contains_zero,
        }
    }

    pub fn pieces(&self) -> &[OpenInterval] {
        &self.pieces
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_zero
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.contains_zero
            && self.pieces.len() == 1
            && self.pieces[0].lo.is_zero()
            && self.pieces[0].hi.is_one()
    }

    fn glued(&self) -> bool {
        self.contains_zero && self.pieces.len() >= 2 && self.pieces.last().is_some_and(|p| p.hi.is_one())
    }

    /// Number of connected components on the circle.
    pub fn component_count(&self) -> usize {
        self.pieces.len() - usize::from(self.glued())
    }

    pub fn component_lengths(&self) -> Vec<Rational> {
        let mut lens: Vec<Rational> = self.pieces.iter().map(OpenInterval::length).collect();
        if self.glued() {
            let last = lens.pop().expect("glued implies two pieces");
            lens[0] += last;
        }
        lens
    }

    pub fn max_component_length(&self) -> Option<Rational> {
        self.component_lengths().into_iter().max()
    }

    pub fn total_length(&self) -> Rational {
        self.pieces.iter().map(OpenInterval::length).fold(Rational::zero(), |a, b| a + b)
    }

    /// Smallest distance between consecutive components around the circle.
    pub fn min_gap(&self) -> Option<Rational> {
        if self.is_empty() || self.is_full() {
            return None;
        }
        let n = self.pieces.len();
        let mut gaps: Vec<Rational> = (1..n)
            .map(|i| &self.pieces[i].lo - &self.pieces[i - 1].hi)
            .collect();
        if !self.glued() {
            let wrap = (Rational::one() - &self.pieces[n - 1].hi) + &self.pieces[0].lo;
            gaps.push(wrap);
        }
        gaps.into_iter().min()
    }

    /// Membership of a point of `[0, 1)`.
    pub fn contains(&self, x: &Rational) -> bool {
        if x.is_zero() {
            return self.contains_zero;
        }
        let idx = self.pieces.partition_point(|p| &p.hi <= x);
        self.pieces.get(idx).is_some_and(|p| &p.lo < x && x < &p.hi)
    }

    /// Set intersection by a linear merge of the two sorted piece lists.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() && j < other.pieces.len() {
            let a = &self.pieces[i];
            let b = &other.pieces[j];
            let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
            let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
            if lo < hi {
                out.push(OpenInterval::new(lo.clone(), hi.clone()));
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        let contains_zero = self.contains_zero && other.contains_zero;
        Self {
            pieces: out,
            contains_zero,
        }
    }

    /// Intersects with the level set `{x : |q x - p - theta| < q r for some p}`,
    /// i.e. the `q` arcs of radius `r` centred at `(p + theta)/q`.
    ///
    /// Only arcs meeting an existing piece are generated, so the cost is
    /// proportional to the output. Fails when more than `budget` pieces would
    /// be produced.
    pub fn refine(
        &self,
        q: &BigUint,
        theta: &Rational,
        r: &Rational,
        budget: usize,
    ) -> Result<Self, BudgetExceeded> {
        let qr = Rational::from_integer(BigInt::from(q.clone()));
        let q_times_r = &qr * r;
        let overlapping = &q_times_r * Rational::from_integer(BigInt::from(2)) > Rational::one();
        let center = |p: &BigInt| (Rational::from_integer(p.clone()) + theta) / &qr;
        let mut out: Vec<OpenInterval> = Vec::new();
        for piece in &self.pieces {
            // arcs meeting (a, b) have centres in (a - r, b + r)
            let p_lo = floor_ratio(&(&qr * (&piece.lo - r) - theta)) + 1;
            let p_hi = ceil_ratio(&(&qr * (&piece.hi + r) - theta)) - 1;
            if p_lo > p_hi {
                continue;
            }
            if overlapping {
                let lo = (center(&p_lo) - r).max(piece.lo.clone());
                let hi = (center(&p_hi) + r).min(piece.hi.clone());
                if lo < hi {
                    if out.len() + 1 > budget {
                        return Err(BudgetExceeded);
                    }
                    out.push(OpenInterval::new(lo, hi));
                }
                continue;
            }
            let count = (&p_hi - &p_lo + 1u32).to_usize().unwrap_or(usize::MAX);
            if out.len().saturating_add(count) > budget {
                return Err(BudgetExceeded);
            }
            let mut p = p_lo;
            while p <= p_hi {
                let c = center(&p);
                let lo = (&c - r).max(piece.lo.clone());
                let hi = (&c + r).min(piece.hi.clone());
                if lo < hi {
                    out.push(OpenInterval::new(lo, hi));
                }
                p += 1u32;
            }
        }
        let zero_in_level = theta < &q_times_r || (Rational::one() - theta) < q_times_r;
        let contains_zero = self.contains_zero && zero_in_level;
        Ok(Self {
            pieces: out,
            contains_zero,
        })
    }
}
