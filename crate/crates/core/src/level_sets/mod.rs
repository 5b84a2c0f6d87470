//! Level sets `E_j = {x : ||q_j x_i - theta_i|| < q_j^-tau for all i}` on the
//! torus and their finite intersections.
//!
//! Each `E_j` is a coordinate product of one-dimensional unions of `q_j` open
//! arcs of radius `q_j^(-1-tau)` centred at `(p + theta_i)/q_j`. Only the
//! one-dimensional factors are ever built; `d`-dimensional counts are products.
//! Irrational radii are handled by carrying two unions per factor: `inner`,
//! built with the down-rounded radius, and `outer`, built with the up-rounded
//! one, so that `inner ⊆ E ⊆ outer`.

mod torus;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numerics::{ceil_ratio, dir_pow, floor_ratio, Enclosure, NumericsError, Rational};
use crate::sequences::QSequence;

pub use torus::{BudgetExceeded, OpenInterval, TorusUnion};

/// Default cap on the number of pieces a single factor may hold.
pub const DEFAULT_COMPONENT_BUDGET: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LevelSetError {
    #[error("component budget of {budget} exceeded at level {level}")]
    BudgetExceeded {
        level: usize,
        budget: usize,
        /// Statistics of the levels completed before the budget ran out.
        completed: Vec<LevelStats>,
    },
    #[error("theta_{index} = {value} is outside [0, 1)")]
    ThetaOutOfRange { index: usize, value: Rational },
    #[error("tau must be positive")]
    NonPositiveTau,
    #[error("radius at q = {q} is not positive")]
    NonPositiveRadius { q: BigUint },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("depth {requested} exceeds the {available} available terms")]
    DepthTooLarge { requested: usize, available: usize },
    #[error("interval ({}, {}) is not a subinterval of [0, 1]", .0.0, .0.1)]
    BadInterval(Box<(Rational, Rational)>),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Radius function `psi`: maps `q` to an enclosure of the arc radius.
pub type RadiusFn = dyn Fn(&BigUint, u32) -> Result<Enclosure, NumericsError> + Send + Sync;

#[derive(Clone)]
pub enum RadiusSpec {
    /// `q^(-1-tau)`.
    Power,
    General(Arc<RadiusFn>),
}

impl fmt::Debug for RadiusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusSpec::Power => f.write_str("Power"),
            RadiusSpec::General(_) => f.write_str("General(..)"),
        }
    }
}

/// Shifts, exponent and radius rule shared by all levels.
#[derive(Clone, Debug)]
pub struct LevelParams {
    pub theta: Vec<Rational>,
    pub tau: Rational,
    pub radius: RadiusSpec,
}

impl LevelParams {
    pub fn new(theta: Vec<Rational>, tau: Rational) -> Result<Self, LevelSetError> {
        if theta.is_empty() {
            return Err(LevelSetError::ZeroDimension);
        }
        if !tau.is_positive() {
            return Err(LevelSetError::NonPositiveTau);
        }
        for (i, t) in theta.iter().enumerate() {
            if t.is_negative() || t >= &Rational::one() {
                return Err(LevelSetError::ThetaOutOfRange {
                    index: i + 1,
                    value: t.clone(),
                });
            }
        }
        Ok(Self {
            theta,
            tau,
            radius: RadiusSpec::Power,
        })
    }

    /// Homogeneous parameters: `theta = 0` in each of `d` coordinates.
    pub fn homogeneous(d: usize, tau: Rational) -> Result<Self, LevelSetError> {
        Self::new(vec![Rational::zero(); d], tau)
    }

    pub fn with_radius(mut self, radius: Arc<RadiusFn>) -> Self {
        self.radius = RadiusSpec::General(radius);
        self
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Bounds on the arc radius at `q`. For the power rule the radius is the
    /// exact rational `1/q^(1+tau)` whenever `q^(1+tau)` is an integer.
    pub fn radius_at(&self, q: &BigUint, prec: u32) -> Result<RadiusBounds, LevelSetError> {
        let bounds = match &self.radius {
            RadiusSpec::Power => {
                let e = &self.tau + Rational::one();
                match dir_pow(q, &e, prec)?.exact_value() {
                    Some(n) => RadiusBounds::exact(n.recip()),
                    None => RadiusBounds::from(&dir_pow(q, &-e, prec)?),
                }
            }
            RadiusSpec::General(f) => RadiusBounds::from(&f(q, prec)?),
        };
        if !bounds.lo.is_positive() {
            return Err(LevelSetError::NonPositiveRadius { q: q.clone() });
        }
        Ok(bounds)
    }
}

/// `lo <= radius <= hi`, with `lo == hi` when the radius is known exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusBounds {
    pub lo: Rational,
    pub hi: Rational,
}

impl RadiusBounds {
    pub fn exact(r: Rational) -> Self {
        Self { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl From<&Enclosure> for RadiusBounds {
    fn from(e: &Enclosure) -> Self {
        Self {
            lo: e.lo_ratio(),
            hi: e.hi_ratio(),
        }
    }
}

/// Certified sandwich `inner ⊆ E ⊆ outer` of one coordinate factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusIntervalSet {
    pub inner: TorusUnion,
    pub outer: TorusUnion,
}

impl TorusIntervalSet {
    pub fn full() -> Self {
        Self {
            inner: TorusUnion::full(),
            outer: TorusUnion::full(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.intersect(&other.inner),
            outer: self.outer.intersect(&other.outer),
        }
    }

    pub fn component_count(&self) -> CertifiedCount {
        CertifiedCount::spanning(
            BigUint::from(self.inner.component_count()),
            BigUint::from(self.outer.component_count()),
        )
    }

    fn refine(
        &self,
        q: &BigUint,
        theta: &Rational,
        radius: &RadiusBounds,
        budget: usize,
    ) -> Result<Self, BudgetExceeded> {
        let inner = self.inner.refine(q, theta, &radius.lo, budget)?;
        let outer = if radius.is_exact() {
            inner.clone()
        } else {
            self.outer.refine(q, theta, &radius.hi, budget)?
        };
        Ok(Self { inner, outer })
    }
}

/// An integer known to lie in `[min, max]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedCount {
    pub min: BigUint,
    pub max: BigUint,
}

impl CertifiedCount {
    pub fn exact(n: BigUint) -> Self {
        Self { min: n.clone(), max: n }
    }

    fn spanning(a: BigUint, b: BigUint) -> Self {
        if a <= b {
            Self { min: a, max: b }
        } else {
            Self { min: b, max: a }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.min == self.max
    }

    /// Endpoint-wise product; valid because all counts are non-negative.
    pub fn product(&self, other: &Self) -> Self {
        Self {
            min: &self.min * &other.min,
            max: &self.max * &other.max,
        }
    }
}

impl fmt::Display for CertifiedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.min)
        } else {
            write!(f, "[{}, {}]", self.min, self.max)
        }
    }
}

/// Per-level summary of `E_1 ∩ ... ∩ E_level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    /// Number of boxes (the product of the per-coordinate component counts).
    pub count: CertifiedCount,
    /// Upper bound on the largest component side, taken from the outer sets.
    pub max_len: Rational,
    /// Lower bound on the smallest gap between components, from the outer sets.
    pub min_gap: Option<Rational>,
    /// Total outer length of the first factor.
    pub outer_length: Rational,
    /// Set when inner and outer component counts disagree: the true count is
    /// inside `count` but more precision would pin it down.
    pub indeterminate: bool,
}

/// Result of intersecting the first `depth` levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixIntersection {
    /// One sandwich per coordinate.
    pub factors: Vec<TorusIntervalSet>,
    pub levels: Vec<LevelStats>,
}

/// Builds the single level at `q` for coordinate `coord`.
pub fn build_level(
    q: &BigUint,
    params: &LevelParams,
    coord: usize,
    prec: u32,
    budget: usize,
) -> Result<TorusIntervalSet, LevelSetError> {
    let radius = params.radius_at(q, prec)?;
    TorusIntervalSet::full()
        .refine(q, &params.theta[coord], &radius, budget)
        .map_err(|_| LevelSetError::BudgetExceeded {
            level: 1,
            budget,
            completed: Vec::new(),
        })
}

/// Intersects the sandwiches of two factors.
pub fn intersect(a: &TorusIntervalSet, b: &TorusIntervalSet) -> TorusIntervalSet {
    a.intersect(b)
}

fn level_stats(level: usize, factors: &[TorusIntervalSet]) -> LevelStats {
    let mut count = CertifiedCount::exact(BigUint::one());
    let mut max_len = Rational::zero();
    let mut min_gap: Option<Rational> = None;
    let mut indeterminate = false;
    for f in factors {
        let c = f.component_count();
        indeterminate |= !c.is_exact();
        count = count.product(&c);
        if let Some(m) = f.outer.max_component_length() {
            max_len = max_len.max(m);
        }
        if let Some(g) = f.outer.min_gap() {
            min_gap = Some(match min_gap {
                Some(cur) => cur.min(g),
                None => g,
            });
        }
    }
    LevelStats {
        level,
        count,
        max_len,
        min_gap,
        outer_length: factors[0].outer.total_length(),
        indeterminate,
    }
}

/// `E_1 ∩ ... ∩ E_depth`, factor by factor, with per-level statistics.
///
/// Coordinates sharing the same shift share one computation. Aborts with
/// [`LevelSetError::BudgetExceeded`] (carrying the completed levels) when a
/// factor would hold more than `budget` pieces.
pub fn prefix_intersection(
    qs: &QSequence,
    params: &LevelParams,
    depth: usize,
    prec: u32,
    budget: usize,
) -> Result<PrefixIntersection, LevelSetError> {
    if depth > qs.len() {
        return Err(LevelSetError::DepthTooLarge {
            requested: depth,
            available: qs.len(),
        });
    }
    // distinct shifts, and the factor index each coordinate maps to
    let mut distinct: Vec<&Rational> = Vec::new();
    let mut slot = Vec::with_capacity(params.dim());
    for t in &params.theta {
        match distinct.iter().position(|d| *d == t) {
            Some(i) => slot.push(i),
            None => {
                distinct.push(t);
                slot.push(distinct.len() - 1);
            }
        }
    }
    let mut current = vec![TorusIntervalSet::full(); distinct.len()];
    let mut levels = Vec::with_capacity(depth);
    for (j, q) in qs.terms().iter().take(depth).enumerate() {
        let radius = params.radius_at(q, prec)?;
        let mut next = Vec::with_capacity(current.len());
        for (set, theta) in current.iter().zip(&distinct) {
            match set.refine(q, theta, &radius, budget) {
                Ok(s) => next.push(s),
                Err(BudgetExceeded) => {
                    return Err(LevelSetError::BudgetExceeded {
                        level: j + 1,
                        budget,
                        completed: levels,
                    })
                }
            }
        }
        current = next;
        let per_coord: Vec<TorusIntervalSet> = slot.iter().map(|&i| current[i].clone()).collect();
        levels.push(level_stats(j + 1, &per_coord));
    }
    let factors = slot.iter().map(|&i| current[i].clone()).collect();
    Ok(PrefixIntersection { factors, levels })
}

/// Exact number of `p ∈ {0, ..., q-1}` with `(p + theta)/q ∈ (a, b)`.
///
/// Always within `[(b-a)q - 2, (b-a)q + 2]`.
pub fn count_shifted_rationals(
    a: &Rational,
    b: &Rational,
    theta: &Rational,
    q: &BigUint,
) -> Result<BigUint, LevelSetError> {
    if a.is_negative() || a >= b || b > &Rational::one() {
        return Err(LevelSetError::BadInterval(Box::new((a.clone(), b.clone()))));
    }
    let qr = Rational::from_integer(BigInt::from(q.clone()));
    // q a - theta < p < q b - theta
    let lo: BigInt = floor_ratio(&(&qr * a - theta)) + 1;
    let lo = lo.max(BigInt::zero());
    let hi: BigInt = ceil_ratio(&(&qr * b - theta)) - 1;
    let hi = hi.min(BigInt::from(q.clone()) - 1);
    if hi < lo {
        return Ok(BigUint::zero());
    }
    let n: BigInt = hi - lo + 1;
    Ok(n.to_biguint().expect("non-negative"))
}
