//! The nested Cantor subtree `F_1 ⊇ F_2 ⊇ …` of the level sets and its uniform
//! mass distribution.
//!
//! The tree is a product of one-dimensional trees, one per coordinate. A
//! one-dimensional node at level `k` is the arc of radius `r_k` centred at
//! `(p + theta)/q_k`, identified by its residue `p`; its children are the
//! `b_{k+1}` smallest residues whose arcs lie inside it. Siblings are
//! consecutive residues, so every node is reachable by index arithmetic and
//! only the shallow levels are stored.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dimension_bounds::{branching_numbers, BoundsError};
use crate::level_sets::{LevelParams, LevelSetError, RadiusBounds, RadiusSpec};
use crate::numerics::{
    ceil_ratio, dir_pow_ratio, floor_ratio, log2_enclosure, ratio_to_f64_up, NumericsError,
    Rational,
};
use crate::sequences::QSequence;

/// Default cap on the number of stored one-dimensional nodes per coordinate.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 20;

/// Partial children visited per level of a ball query before giving up.
const PARTIAL_LIMIT: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CantorError {
    #[error("fewer than b_{level} children fit inside some level-{} node", level - 1)]
    RegimeViolation { level: usize },
    #[error("level {level} holds {count} nodes per coordinate, above the node budget {budget}")]
    BudgetExceeded { level: usize, count: BigUint, budget: usize },
    #[error("level {level} is outside 0..={depth}")]
    NoSuchLevel { level: usize, depth: usize },
    #[error("node index out of range at level {level}")]
    NoSuchNode { level: usize },
    #[error("ball radius must be positive")]
    NonPositiveRadius,
    #[error("ball center has {got} coordinates, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("s must lie in (0, d)")]
    BadExponent,
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("ball query touches more than {PARTIAL_LIMIT} partially covered nodes; arcs overlap")]
    Overlapping,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    LevelSet(#[from] LevelSetError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl From<crate::sequences::SequenceError> for CantorError {
    fn from(e: crate::sequences::SequenceError) -> Self {
        CantorError::Bounds(e.into())
    }
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, Debug)]
struct AxisLevel {
    q: Rational,
    r: RadiusBounds,
    b: BigUint,
    /// One-dimensional mass of a node at this level.
    mass: Rational,
}

#[derive(Clone, Debug)]
struct Axis {
    theta: Rational,
    levels: Vec<AxisLevel>,
    /// Residues of the stored levels, in increasing order.
    stored: Vec<Vec<BigInt>>,
}

impl Axis {
    fn level(&self, k: usize) -> &AxisLevel {
        &self.levels[k - 1]
    }

    fn center(&self, k: usize, p: &BigInt) -> Rational {
        (int(p.clone()) + &self.theta) / &self.level(k).q
    }

    /// Smallest residue of the children of node `p` at level `k`.
    fn first_child(&self, k: usize, p: &BigInt) -> Result<BigInt, CantorError> {
        let parent = self.level(k);
        let child = self.level(k + 1);
        let c = self.center(k, p);
        let lo = ceil_ratio(&(&child.q * (&c - &parent.r.lo + &child.r.hi) - &self.theta));
        let hi = floor_ratio(&(&child.q * (&c + &parent.r.lo - &child.r.hi) - &self.theta));
        let room = &hi - &lo + 1;
        if room < BigInt::from(child.b.clone()) {
            return Err(CantorError::RegimeViolation { level: k + 1 });
        }
        Ok(lo)
    }

    /// Residue of the node with lexicographic index `index` at level `k`.
    fn node_at(&self, k: usize, index: &BigUint) -> Result<BigInt, CantorError> {
        let mut digits = Vec::with_capacity(k);
        let mut rest = index.clone();
        for j in (1..=k).rev() {
            let (q, r) = rest.div_rem(&self.level(j).b);
            digits.push(r);
            rest = q;
        }
        if !rest.is_zero() {
            return Err(CantorError::NoSuchNode { level: k });
        }
        digits.reverse();
        let mut p = BigInt::from(digits[0].clone());
        for (j, digit) in digits.iter().enumerate().skip(1) {
            p = self.first_child(j, &p)? + BigInt::from(digit.clone());
        }
        Ok(p)
    }

    fn count(&self, k: usize) -> BigUint {
        self.levels[..k].iter().map(|l| &l.b).product()
    }

    /// Lower and upper mass of the open interval `(a, b)` of the lifted line.
    fn interval_mass(&self, a: &Rational, b: &Rational) -> Result<(Rational, Rational), CantorError> {
        let b1 = BigInt::from(self.level(1).b.clone());
        self.range_mass(1, &BigInt::zero(), &b1, a, b)
    }

    /// Mass of `(a, b)` carried by the level-`k` siblings `start .. start + n`.
    fn range_mass(
        &self,
        k: usize,
        start: &BigInt,
        n: &BigInt,
        a: &Rational,
        b: &Rational,
    ) -> Result<(Rational, Rational), CantorError> {
        let lvl = self.level(k);
        let r = &lvl.r.hi;
        let last: BigInt = start + n - 1;
        let clip = |lo: BigInt, hi: BigInt| (lo.max(start.clone()), hi.min(last.clone()));
        // (c - r, c + r) ⊆ (a, b)
        let (in_lo, in_hi) = clip(
            ceil_ratio(&(&lvl.q * (a + r) - &self.theta)),
            floor_ratio(&(&lvl.q * (b - r) - &self.theta)),
        );
        // (c - r, c + r) meets (a, b)
        let (hit_lo, hit_hi) = clip(
            floor_ratio(&(&lvl.q * (a - r) - &self.theta)) + 1,
            ceil_ratio(&(&lvl.q * (b + r) - &self.theta)) - 1,
        );
        let mut lower = Rational::zero();
        let mut upper = Rational::zero();
        if hit_lo > hit_hi {
            return Ok((lower, upper));
        }
        let partial: Vec<(BigInt, BigInt)> = if in_lo > in_hi {
            vec![(hit_lo, hit_hi)]
        } else {
            let full = int(&in_hi - &in_lo + 1) * &lvl.mass;
            lower += &full;
            upper += &full;
            vec![(hit_lo, &in_lo - 1), (&in_hi + 1, hit_hi)]
        };
        let mut visited = 0usize;
        for (lo, hi) in partial {
            let mut p = lo;
            while p <= hi {
                visited += 1;
                if visited > PARTIAL_LIMIT {
                    return Err(CantorError::Overlapping);
                }
                if k == self.levels.len() {
                    upper += &lvl.mass;
                } else {
                    let first = self.first_child(k, &p)?;
                    let nb = BigInt::from(self.level(k + 1).b.clone());
                    let (l, u) = self.range_mass(k + 1, &first, &nb, a, b)?;
                    lower += l;
                    upper += u;
                }
                p += 1;
            }
        }
        Ok((lower, upper))
    }
}

/// A sup-norm ball on the torus with an exact center and radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Vec<Rational>,
    pub radius: Rational,
}

/// `lower <= mu(B) <= upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassBounds {
    pub lower: Rational,
    pub upper: Rational,
}

/// Largest sampled ratio `mu(B) / r^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolderCertificate {
    pub s: Rational,
    pub n: usize,
    pub seed: u64,
    /// Upper bound on the ratio of the worst ball.
    pub max_ratio: Rational,
    pub worst_ball: Ball,
}

impl HolderCertificate {
    pub fn max_ratio_f64(&self) -> f64 {
        ratio_to_f64_up(&self.max_ratio)
    }
}

#[derive(Clone, Debug)]
pub struct CantorTree {
    depth: usize,
    dim: usize,
    prec: u32,
    axes: Vec<Axis>,
    budget: usize,
}

impl CantorTree {
    /// Builds the tree to `depth`, storing every level whose per-coordinate
    /// node count fits in `node_budget`.
    pub fn build(
        qs: &QSequence,
        params: &LevelParams,
        depth: usize,
        node_budget: usize,
        prec: u32,
    ) -> Result<Self, CantorError> {
        if depth == 0 || depth > qs.len() {
            return Err(LevelSetError::DepthTooLarge {
                requested: depth,
                available: qs.len(),
            }
            .into());
        }
        let radii = (1..=depth)
            .map(|k| params.radius_at(qs.q(k), prec))
            .collect::<Result<Vec<_>, _>>()?;
        let branching = match params.radius {
            RadiusSpec::Power => branching_numbers(qs, &params.tau, depth, prec)?,
            RadiusSpec::General(_) => {
                let mut out = vec![qs.q(1).clone()];
                for k in 2..=depth {
                    let b = floor_ratio(&(int(qs.q(k).clone()) * &radii[k - 2].lo));
                    if !b.is_positive() {
                        return Err(CantorError::RegimeViolation { level: k });
                    }
                    out.push(b.to_biguint().expect("positive"));
                }
                out
            }
        };
        let mut levels = Vec::with_capacity(depth);
        let mut mass = Rational::one();
        for k in 1..=depth {
            let b = branching[k - 1].clone();
            mass /= int(b.clone());
            levels.push(AxisLevel {
                q: int(qs.q(k).clone()),
                r: radii[k - 1].clone(),
                b,
                mass: mass.clone(),
            });
        }
        let mut axes: Vec<Axis> = Vec::with_capacity(params.dim());
        for theta in &params.theta {
            if let Some(i) = axes.iter().position(|a| &a.theta == theta) {
                let same = axes[i].clone();
                axes.push(same);
                continue;
            }
            let mut axis = Axis {
                theta: theta.clone(),
                levels: levels.clone(),
                stored: Vec::new(),
            };
            build_axis(&mut axis, node_budget)?;
            axes.push(axis);
        }
        Ok(Self {
            depth,
            dim: params.dim(),
            prec,
            axes,
            budget: node_budget,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Deepest level whose nodes are stored explicitly.
    pub fn stored_depth(&self) -> usize {
        self.axes.iter().map(|a| a.stored.len()).min().unwrap_or(0)
    }

    /// Per-level branching `b_k^d`.
    pub fn branching(&self, k: usize) -> BigUint {
        self.axes[0].level(k).b.pow(self.dim as u32)
    }

    /// Number of level-`k` nodes, `prod_{i<=k} b_i^d`.
    pub fn node_count(&self, k: usize) -> BigUint {
        self.axes[0].count(k).pow(self.dim as u32)
    }

    /// Mass of every level-`k` node; the root (`k = 0`) has mass 1.
    pub fn node_measure(&self, k: usize) -> Result<Rational, CantorError> {
        self.check_level(k)?;
        if k == 0 {
            return Ok(Rational::one());
        }
        Ok(self.axes[0].level(k).mass.pow(self.dim as i32))
    }

    fn check_level(&self, k: usize) -> Result<(), CantorError> {
        if k > self.depth {
            return Err(CantorError::NoSuchLevel {
                level: k,
                depth: self.depth,
            });
        }
        Ok(())
    }

    /// Residues of the level-`k` node with per-coordinate indices `index`.
    pub fn node(&self, k: usize, index: &[BigUint]) -> Result<Vec<BigInt>, CantorError> {
        if k == 0 || k > self.depth {
            return Err(CantorError::NoSuchLevel {
                level: k,
                depth: self.depth,
            });
        }
        self.axes
            .iter()
            .zip(index)
            .map(|(axis, i)| match axis.stored.get(k - 1) {
                Some(nodes) => i
                    .to_usize()
                    .and_then(|i| nodes.get(i).cloned())
                    .ok_or(CantorError::NoSuchNode { level: k }),
                None => axis.node_at(k, i),
            })
            .collect()
    }

    /// Center of a level-`k` node given by its residues.
    pub fn node_center(&self, k: usize, residues: &[BigInt]) -> Vec<Rational> {
        self.axes
            .iter()
            .zip(residues)
            .map(|(axis, p)| axis.center(k, p))
            .collect()
    }

    /// Upper bound on the box radius at level `k`.
    pub fn node_radius(&self, k: usize) -> Rational {
        self.axes[0].level(k).r.hi.clone()
    }

    /// Residues of the children of a level-`k` node, per coordinate.
    pub fn children(&self, k: usize, residues: &[BigInt]) -> Result<Vec<Vec<BigInt>>, CantorError> {
        if k == 0 || k >= self.depth {
            return Err(CantorError::NoSuchLevel {
                level: k + 1,
                depth: self.depth,
            });
        }
        self.axes
            .iter()
            .zip(residues)
            .map(|(axis, p)| {
                let first = axis.first_child(k, p)?;
                let n = axis.level(k + 1).b.to_usize().ok_or(CantorError::BudgetExceeded {
                    level: k + 1,
                    count: axis.level(k + 1).b.clone(),
                    budget: self.budget,
                })?;
                if n > self.budget {
                    return Err(CantorError::BudgetExceeded {
                        level: k + 1,
                        count: axis.level(k + 1).b.clone(),
                        budget: self.budget,
                    });
                }
                Ok((0..n).map(|i| &first + i).collect())
            })
            .collect()
    }

    /// Number of children of a level-`k` node, after checking that they all
    /// fit inside it.
    pub fn child_count(&self, k: usize, residues: &[BigInt]) -> Result<BigUint, CantorError> {
        if k == 0 || k >= self.depth {
            return Err(CantorError::NoSuchLevel {
                level: k + 1,
                depth: self.depth,
            });
        }
        let mut n = BigUint::one();
        for (axis, p) in self.axes.iter().zip(residues) {
            axis.first_child(k, p)?;
            n *= &axis.level(k + 1).b;
        }
        Ok(n)
    }

    /// Smallest sup-distance between distinct level-`k` boxes on the torus,
    /// computed over every stored node.
    pub fn min_separation(&self, k: usize) -> Result<Option<Rational>, CantorError> {
        self.check_level(k)?;
        let mut best: Option<Rational> = None;
        for axis in &self.axes {
            let nodes = axis.stored.get(k.wrapping_sub(1)).ok_or(CantorError::BudgetExceeded {
                level: k,
                count: axis.count(k),
                budget: self.budget,
            })?;
            if nodes.len() < 2 {
                continue;
            }
            let lvl = axis.level(k);
            let width = int(2) * &lvl.r.hi;
            for i in 0..nodes.len() {
                let next = nodes.get(i + 1);
                let gap = match next {
                    Some(p) => axis.center(k, p) - axis.center(k, &nodes[i]),
                    None => axis.center(k, &nodes[0]) + Rational::one() - axis.center(k, &nodes[i]),
                } - &width;
                if best.as_ref().is_none_or(|b| &gap < b) {
                    best = Some(gap);
                }
            }
        }
        Ok(best)
    }

    /// Gaps between `n` random level-`k` nodes and their successors, reached
    /// by index arithmetic. Works at every level.
    pub fn sampled_separation(&self, k: usize, n: usize, seed: u64) -> Result<Option<Rational>, CantorError> {
        if k == 0 || k > self.depth {
            return Err(CantorError::NoSuchLevel {
                level: k,
                depth: self.depth,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<Rational> = None;
        for _ in 0..n {
            for axis in &self.axes {
                let count = axis.count(k);
                if count < BigUint::from(2u32) {
                    continue;
                }
                let i = rng.gen_biguint_below(&count);
                let j = (&i + 1u32) % &count;
                let ci = axis.center(k, &axis.node_at(k, &i)?);
                let mut cj = axis.center(k, &axis.node_at(k, &j)?);
                if j.is_zero() {
                    cj += Rational::one();
                }
                let gap = cj - ci - int(2) * &axis.level(k).r.hi;
                if best.as_ref().is_none_or(|b| &gap < b) {
                    best = Some(gap);
                }
            }
        }
        Ok(best)
    }

    /// Certified bounds on the mass of a sup-norm ball, counting leaves fully
    /// inside the ball (lower) and leaves meeting it (upper).
    pub fn ball_measure(&self, ball: &Ball) -> Result<MassBounds, CantorError> {
        if ball.center.len() != self.dim {
            return Err(CantorError::DimensionMismatch {
                got: ball.center.len(),
                expected: self.dim,
            });
        }
        if !ball.radius.is_positive() {
            return Err(CantorError::NonPositiveRadius);
        }
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut lower = Rational::one();
        let mut upper = Rational::one();
        for (axis, x) in self.axes.iter().zip(&ball.center) {
            if ball.radius >= half {
                continue;
            }
            let x = x - int(floor_ratio(x));
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for shift in [-1i32, 0, 1] {
                let m = int(shift);
                let (l, u) = axis.interval_mass(&(&x - &ball.radius + &m), &(&x + &ball.radius + &m))?;
                lo += l;
                hi += u;
            }
            lower *= lo;
            upper *= hi.min(Rational::one());
        }
        Ok(MassBounds { lower, upper })
    }

    /// Samples `n` balls centred at random leaves (half of them perturbed
    /// inside the leaf) with radii log-uniform between `1/(8 q_J)` and 1, and
    /// returns the largest certified upper bound on `mu(B) / r^s`.
    pub fn holder_certificate(&self, s: &Rational, n: usize, seed: u64) -> Result<HolderCertificate, CantorError> {
        if !s.is_positive() || s >= &int(self.dim as u64) {
            return Err(CantorError::BadExponent);
        }
        if n == 0 {
            return Err(CantorError::NoSamples);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let leaf = self.axes[0].level(self.depth);
        let q_last = leaf.q.to_integer().to_biguint().expect("positive");
        let span = log2_enclosure(&q_last, 64)?.hi_f64() + 3.0;
        let mut worst: Option<(Rational, Ball)> = None;
        for _ in 0..n {
            let mut center = Vec::with_capacity(self.dim);
            let perturb = rng.gen_bool(0.5);
            for axis in &self.axes {
                let mut p = rng.gen_biguint_below(&axis.level(1).b).into();
                for k in 1..self.depth {
                    let idx = rng.gen_biguint_below(&axis.level(k + 1).b);
                    p = axis.first_child(k, &p)? + BigInt::from(idx);
                }
                let mut c = axis.center(self.depth, &p);
                if perturb {
                    let u = Rational::new(BigInt::from(rng.gen::<u32>()), BigInt::one() << 31usize) - Rational::one();
                    c += u * &axis.level(self.depth).r.lo;
                }
                c -= int(floor_ratio(&c));
                center.push(c);
            }
            let t: f64 = rng.gen_range(0.0..span);
            let whole = t.floor();
            let frac = Rational::from_float((-(t - whole)).exp2()).expect("finite");
            let radius = frac / int(BigInt::one() << whole as usize);
            let ball = Ball { center, radius };
            let ratio = self.upper_ratio(&ball, s)?;
            if worst.as_ref().is_none_or(|(w, _)| ratio.cmp(w) == Ordering::Greater) {
                worst = Some((ratio, ball));
            }
        }
        let (max_ratio, worst_ball) = worst.expect("n >= 1");
        Ok(HolderCertificate {
            s: s.clone(),
            n,
            seed,
            max_ratio,
            worst_ball,
        })
    }

    /// Upper bound on `mu(B) / r^s` for one ball.
    pub fn upper_ratio(&self, ball: &Ball, s: &Rational) -> Result<Rational, CantorError> {
        let mass = self.ball_measure(ball)?;
        let rs = dir_pow_ratio(&ball.radius, s, self.prec)?;
        Ok(mass.upper / rs.lo_ratio())
    }
}

fn build_axis(axis: &mut Axis, budget: usize) -> Result<(), CantorError> {
    let depth = axis.levels.len();
    let b1 = axis.level(1).b.clone();
    if b1 <= BigUint::from(budget) {
        let n = b1.to_usize().expect("within budget");
        axis.stored.push((0..n).map(BigInt::from).collect());
    }
    for k in 1..depth {
        let parent = axis.level(k);
        let child = axis.level(k + 1);
        // every parent has room when q' (2 R_lo - 2 r'_hi) >= b'
        let room = floor_ratio(&(&child.q * int(2) * (&parent.r.lo - &child.r.hi)));
        let uniform = room >= BigInt::from(child.b.clone());
        let fits = axis.count(k + 1) <= BigUint::from(budget);
        if axis.stored.len() == k && fits {
            let b = child.b.to_usize().expect("within budget");
            let mut next = Vec::with_capacity(axis.stored[k - 1].len() * b);
            for p in &axis.stored[k - 1] {
                let first = axis.first_child(k, p)?;
                next.extend((0..b).map(|i| &first + i));
            }
            axis.stored.push(next);
        } else if !uniform {
            return Err(CantorError::RegimeViolation { level: k + 1 });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;
    use crate::sequences::{generate, SequenceSpec};

    fn small(d: usize) -> CantorTree {
        let qs = QSequence::from_u64(&[4, 256]).unwrap();
        let params = LevelParams::homogeneous(d, ratio(1, 1)).unwrap();
        CantorTree::build(&qs, &params, 2, DEFAULT_NODE_BUDGET, 64).unwrap()
    }

    fn power(depth: usize) -> CantorTree {
        let qs = generate(&SequenceSpec::Power { q1: BigUint::from(4u32), c: ratio(4, 1) }, depth).unwrap();
        let params = LevelParams::homogeneous(1, ratio(1, 1)).unwrap();
        CantorTree::build(&qs, &params, depth, DEFAULT_NODE_BUDGET, 64).unwrap()
    }

    #[test]
    fn shape_and_measures() {
        let t = small(1);
        assert_eq!(t.node_count(1), BigUint::from(4u32));
        assert_eq!(t.branching(2), BigUint::from(16u32));
        assert_eq!(t.node_count(2), BigUint::from(64u32));
        assert_eq!(t.node_measure(0).unwrap(), ratio(1, 1));
        assert_eq!(t.node_measure(1).unwrap(), ratio(1, 4));
        assert_eq!(t.node_measure(2).unwrap(), ratio(1, 64));
        let t2 = small(2);
        assert_eq!(t2.node_count(1), BigUint::from(16u32));
        assert_eq!(t2.branching(2), BigUint::from(256u32));
    }

    #[test]
    fn regime_violation() {
        let qs = QSequence::from_u64(&[4, 8]).unwrap();
        let params = LevelParams::homogeneous(1, ratio(1, 1)).unwrap();
        let err = CantorTree::build(&qs, &params, 2, DEFAULT_NODE_BUDGET, 64).unwrap_err();
        assert!(matches!(
            err,
            CantorError::Bounds(BoundsError::RegimeViolation { level: 2 })
        ));
    }

    #[test]
    fn children_nest_inside_parent() {
        let t = small(1);
        for i in 0..4u32 {
            let p = t.node(1, &[BigUint::from(i)]).unwrap();
            let c = t.node_center(1, &p)[0].clone();
            let kids = t.children(1, &p).unwrap();
            assert_eq!(kids[0].len(), 16);
            for k in &kids[0] {
                let ck = t.node_center(2, std::slice::from_ref(k))[0].clone();
                assert!(&ck - t.node_radius(2) >= &c - t.node_radius(1));
                assert!(&ck + t.node_radius(2) <= &c + t.node_radius(1));
            }
        }
    }

    #[test]
    fn separation_matches_spacing() {
        let t = small(1);
        let sep = t.min_separation(2).unwrap().unwrap();
        assert!(sep >= ratio(1, 512));
        assert!(t.sampled_separation(2, 50, 7).unwrap().unwrap() >= sep);
        assert!(t.min_separation(1).unwrap().unwrap() >= ratio(1, 8));
    }

    #[test]
    fn ball_examples() {
        let t = small(1);
        let whole = t
            .ball_measure(&Ball { center: vec![ratio(1, 3)], radius: ratio(1, 1) })
            .unwrap();
        assert_eq!(whole, MassBounds { lower: ratio(1, 1), upper: ratio(1, 1) });
        let p = t.node(2, &[BigUint::from(5u32)]).unwrap();
        let c = t.node_center(2, &p);
        let leaf = Ball { center: c.clone(), radius: ratio(1, 65536) };
        let m = t.ball_measure(&leaf).unwrap();
        assert_eq!(m, MassBounds { lower: ratio(1, 64), upper: ratio(1, 64) });
        let mid = Ball { center: c, radius: ratio(1, 1024) };
        assert!(t.ball_measure(&mid).unwrap().upper <= ratio(1, 16));
    }

    #[test]
    fn leaf_ball_ratio() {
        let t = small(1);
        let p = t.node(2, &[BigUint::from(5u32)]).unwrap();
        let ball = Ball { center: t.node_center(2, &p), radius: ratio(1, 65536) };
        let r = t.upper_ratio(&ball, &ratio(3, 10)).unwrap();
        let expected = 2f64.powf(-1.2);
        assert!((crate::numerics::ratio_to_f64(&r) - expected).abs() < 1e-12);
    }

    #[test]
    fn wrap_around_ball_counts_both_sides() {
        let t = small(1);
        let m = t.ball_measure(&Ball { center: vec![ratio(0, 1)], radius: ratio(1, 8) }).unwrap();
        let right = t.ball_measure(&Ball { center: vec![ratio(1, 16)], radius: ratio(1, 16) }).unwrap();
        assert!(m.upper >= right.upper);
        assert!(m.lower.is_positive());
    }

    #[test]
    fn holder_power_family() {
        let t = power(4);
        assert!(t.stored_depth() < 4);
        let cert = t.holder_certificate(&ratio(3, 10), 300, 11).unwrap();
        assert!(cert.max_ratio <= ratio(16, 1), "{}", cert.max_ratio_f64());
        let again = t.holder_certificate(&ratio(3, 10), 300, 11).unwrap();
        assert_eq!(cert, again);
    }

    #[test]
    fn holder_negative_control_grows() {
        let a = power(3).holder_certificate(&ratio(1, 2), 300, 5).unwrap();
        let b = power(5).holder_certificate(&ratio(1, 2), 300, 5).unwrap();
        assert!(b.max_ratio > a.max_ratio);
    }
}
