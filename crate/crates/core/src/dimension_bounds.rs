//! Finite-depth dimension estimators for `∩_j E_j`.
//!
//! Two estimators converge to `d(1 - tau*alpha)/(tau + 1)`:
//!
//! * the cover estimator: the first `J` levels are covered by
//!   `N_J = q_1^d * prod_{k=2..J} floor(4 q_{k-1}^(-1-tau) q_k + 2)^d` cubes of side
//!   `2 q_J^(-1-tau)`, so `s_J = log N_J / -log(side)` bounds the dimension from
//!   above in the limit;
//! * the Cantor estimator: keeping `b_k = floor(q_k / q_{k-1}^(1+tau))^d` children
//!   per box gives `M_J = prod b_k` boxes and `ŝ_J = log M_J / ((1+tau) log q_J)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numerics::{
    dir_pow, log2_enclosure, log_ratio, resolve_floor, Enclosure, NumericsError, Rational,
};
use crate::sequences::{validate_regime, QSequence, RegimeCheck, SequenceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("Cantor construction has no children at level {level}: floor(q_k / q_(k-1)^(1+tau)) = 0")]
    RegimeViolation { level: usize },
    #[error("depth {requested} exceeds the {available} available terms")]
    DepthTooLarge { requested: usize, available: usize },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("tau must be positive")]
    NonPositiveTau,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

fn check_args(qs: &QSequence, tau: &Rational, d: u32, depth: usize) -> Result<(), BoundsError> {
    if depth == 0 {
        return Err(BoundsError::ZeroDepth);
    }
    if depth > qs.len() {
        return Err(BoundsError::DepthTooLarge {
            requested: depth,
            available: qs.len(),
        });
    }
    if !tau.is_positive() {
        return Err(BoundsError::NonPositiveTau);
    }
    if d == 0 {
        return Err(BoundsError::ZeroDimension);
    }
    Ok(())
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn start_prec(q: &BigUint, e: &Rational, prec: u32) -> u32 {
    let mag = (int(q.bits()) * e.abs()).ceil().to_integer();
    prec.max(mag.to_u32().unwrap_or(u32::MAX / 4).saturating_add(64))
}

/// Result of [`theoretical_dimension`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoreticalDimension {
    pub value: Enclosure,
    /// `tau * alpha > 1` was possible: the raw formula went negative and was
    /// clamped at 0. This is outside the regime `h > tau + 1`.
    pub clamped: bool,
}

/// `d (1 - tau alpha) / (tau + 1)`, clamped below at 0.
pub fn theoretical_dimension(tau: &Rational, alpha: &Enclosure, d: u32) -> TheoreticalDimension {
    let prec = alpha.prec();
    let one = Enclosure::from_int(1, prec);
    let raw = (&one - &alpha.scale(tau)).scale(&(int(d) / (tau + Rational::one())));
    let clamped = raw.lo_ratio().is_negative();
    let value = if clamped { raw.clamp_below(&Rational::zero()) } else { raw };
    TheoreticalDimension { value, clamped }
}

/// Cover of the first `depth` levels by cubes of side `2 q_depth^(-1-tau)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub depth: usize,
    pub d: u32,
    pub tau: Rational,
    pub q_last: BigUint,
    pub n_min: BigUint,
    pub n_max: BigUint,
    pub side: Enclosure,
    /// `log N / -log(side)`.
    pub dim_estimate: Enclosure,
    /// `h > tau + 1` along the prefix; the report is computed regardless.
    pub regime: RegimeCheck,
}

impl CoverReport {
    /// `N * side^s`, the `s`-dimensional cost of the cover.
    pub fn s_cost(&self, s: &Rational) -> Result<Enclosure, NumericsError> {
        let prec = self.side.prec();
        // side^s = 2^s * q^(-(1+tau) s)
        let two_s = dir_pow(&BigUint::from(2u32), s, prec)?;
        let q_part = dir_pow(&self.q_last, &-((&self.tau + Rational::one()) * s), prec)?;
        let side_s = &two_s * &q_part;
        let n = Enclosure::from_bounds(&int(self.n_min.clone()), &int(self.n_max.clone()), prec);
        Ok(&n * &side_s)
    }
}

/// `q^e` when it is an integer.
fn integer_power(q: &BigUint, e: &Rational, prec: u32) -> Result<Option<BigUint>, NumericsError> {
    Ok(dir_pow(q, e, prec)?
        .exact_value()
        .filter(|v| v.is_integer())
        .map(|v| v.to_integer().to_biguint().expect("positive power")))
}

/// Integer count bounds `floor(4 q_{k-1}^(-1-tau) q_k + 2)` for `k = 2..depth`.
fn cover_factors(qs: &QSequence, tau: &Rational, depth: usize, prec: u32) -> Result<Vec<BigUint>, BoundsError> {
    let e = -(tau + Rational::one());
    let mut out = Vec::with_capacity(depth.saturating_sub(1));
    for k in 2..=depth {
        let prev = qs.q(k - 1);
        if let Some(p) = integer_power(prev, &-e.clone(), prec)? {
            out.push(BigUint::from(4u32) * qs.q(k) / p + 2u32);
            continue;
        }
        let q = int(qs.q(k).clone());
        let f = resolve_floor(
            |p| {
                let r = dir_pow(prev, &e, p)?;
                Ok(&r.scale(&(int(4) * &q)) + &Enclosure::from_int(2, p))
            },
            start_prec(prev, &e, prec),
        )?;
        out.push(f.to_biguint().expect("positive factor"));
    }
    Ok(out)
}

pub fn upper_cover_count(
    qs: &QSequence,
    tau: &Rational,
    d: u32,
    depth: usize,
    prec: u32,
) -> Result<CoverReport, BoundsError> {
    check_args(qs, tau, d, depth)?;
    let mut per_axis = qs.q(1).clone();
    for f in cover_factors(qs, tau, depth, prec)? {
        per_axis *= f;
    }
    let n = per_axis.pow(d);
    let q_last = qs.q(depth).clone();
    let e = -(tau + Rational::one());
    let side = dir_pow(&q_last, &e, prec)?.scale(&int(2));
    // -log2(side) = (1 + tau) log2 q - 1
    let log_q = log2_enclosure(&q_last, prec)?;
    let denom = &log_q.scale(&(tau + Rational::one())) - &Enclosure::from_int(1, prec);
    let dim_estimate = &log2_enclosure(&n, prec)? / &denom;
    let regime = validate_regime(&qs.prefix(depth)?, tau, prec)?;
    Ok(CoverReport {
        depth,
        d,
        tau: tau.clone(),
        q_last,
        n_min: n.clone(),
        n_max: n,
        side,
        dim_estimate,
        regime,
    })
}

/// The cover estimator `s_J` alone.
pub fn upper_dim_estimate(
    qs: &QSequence,
    tau: &Rational,
    d: u32,
    depth: usize,
    prec: u32,
) -> Result<Enclosure, BoundsError> {
    Ok(upper_cover_count(qs, tau, d, depth, prec)?.dim_estimate)
}

/// One-dimensional branching numbers `b_1 = q_1`, `b_k = floor(q_k / q_{k-1}^(1+tau))`.
pub fn branching_numbers(
    qs: &QSequence,
    tau: &Rational,
    depth: usize,
    prec: u32,
) -> Result<Vec<BigUint>, BoundsError> {
    let e = tau + Rational::one();
    let mut out = vec![qs.q(1).clone()];
    for k in 2..=depth {
        let prev = qs.q(k - 1);
        let b = if let Some(p) = integer_power(prev, &e, prec)? {
            BigInt::from(qs.q(k) / p)
        } else {
            let q = int(qs.q(k).clone());
            let neg = -e.clone();
            resolve_floor(
            |p| Ok(dir_pow(prev, &neg, p)?.scale(&q)),
                start_prec(prev, &e, prec),
            )?
        };
        if b.is_zero() {
            return Err(BoundsError::RegimeViolation { level: k });
        }
        out.push(b.to_biguint().expect("positive"));
    }
    Ok(out)
}

/// Box count and estimate of the Cantor construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorCount {
    pub depth: usize,
    /// `M_J = prod_k b_k^d`.
    pub m: BigUint,
    /// One-dimensional branching numbers `b_1 .. b_J`.
    pub branching: Vec<BigUint>,
    /// `ŝ_J = log M_J / ((1 + tau) log q_J)`.
    pub estimate: Enclosure,
}

pub fn lower_cantor_count(
    qs: &QSequence,
    tau: &Rational,
    d: u32,
    depth: usize,
    prec: u32,
) -> Result<CantorCount, BoundsError> {
    check_args(qs, tau, d, depth)?;
    let branching = branching_numbers(qs, tau, depth, prec)?;
    let per_axis = branching.iter().fold(BigUint::one(), |acc, b| acc * b);
    let m = per_axis.pow(d);
    let ratio = log_ratio(&m, qs.q(depth), prec)?;
    let estimate = ratio.scale(&(tau + Rational::one()).recip());
    Ok(CantorCount {
        depth,
        m,
        branching,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;
    use crate::sequences::{generate, SequenceSpec};

    fn power44(depth: usize) -> QSequence {
        generate(&SequenceSpec::Power { q1: BigUint::from(4u32), c: ratio(4, 1) }, depth).unwrap()
    }

    #[test]
    fn theoretical_examples() {
        let t = theoretical_dimension(&ratio(1, 1), &Enclosure::from_ratio(&ratio(1, 3), 64), 1);
        assert!(t.value.contains(&ratio(1, 3)) && !t.clamped);
        let t = theoretical_dimension(&ratio(2, 1), &Enclosure::from_int(0, 64), 3);
        assert_eq!(t.value.exact_value(), Some(ratio(1, 1)));
        let t = theoretical_dimension(&ratio(1, 1), &Enclosure::from_ratio(&ratio(1, 2), 64), 2);
        assert_eq!(t.value.exact_value(), Some(ratio(1, 2)));
        let t = theoretical_dimension(&ratio(1, 1), &Enclosure::from_int(2, 64), 1);
        assert!(t.clamped);
        assert_eq!(t.value.exact_value(), Some(ratio(0, 1)));
    }

    #[test]
    fn cover_count_examples() {
        let qs = QSequence::from_u64(&[4, 256]).unwrap();
        let r = upper_cover_count(&qs, &ratio(1, 1), 1, 2, 64).unwrap();
        assert_eq!(r.n_min, BigUint::from(264u32));
        assert_eq!(r.n_max, BigUint::from(264u32));
        assert_eq!(r.side.exact_value(), Some(ratio(2, 65536)));
        let r1 = upper_cover_count(&qs, &ratio(1, 1), 1, 1, 64).unwrap();
        assert_eq!(r1.n_min, BigUint::from(4u32));
        let r2 = upper_cover_count(&qs, &ratio(1, 1), 2, 2, 64).unwrap();
        assert_eq!(r2.n_min, BigUint::from(69696u32));
    }

    #[test]
    fn cover_estimate_is_linear_in_d() {
        let qs = power44(3);
        let one = upper_dim_estimate(&qs, &ratio(1, 1), 1, 3, 96).unwrap();
        let two = upper_dim_estimate(&qs, &ratio(1, 1), 2, 3, 96).unwrap();
        let doubled = one.scale(&ratio(2, 1));
        assert!((&two - &doubled).lo_f64().abs() < 1e-20 && (&two - &doubled).hi_f64().abs() < 1e-20);
    }

    #[test]
    fn s_cost_decreases_in_s() {
        let qs = power44(3);
        let r = upper_cover_count(&qs, &ratio(1, 1), 1, 3, 64).unwrap();
        let a = r.s_cost(&ratio(3, 10)).unwrap();
        let b = r.s_cost(&ratio(4, 10)).unwrap();
        let c = r.s_cost(&ratio(1, 2)).unwrap();
        assert!(b.hi_ratio() < a.lo_ratio());
        assert!(c.hi_ratio() < b.lo_ratio());
    }

    #[test]
    fn cantor_examples() {
        let qs = QSequence::from_u64(&[4, 256]).unwrap();
        let c = lower_cantor_count(&qs, &ratio(1, 1), 1, 2, 64).unwrap();
        assert_eq!(c.m, BigUint::from(64u32));
        assert_eq!(c.estimate.exact_value(), Some(ratio(3, 8)));
        let c = lower_cantor_count(&power44(6), &ratio(1, 1), 1, 6, 128).unwrap();
        assert_eq!(c.estimate.exact_value(), Some(ratio(683, 2048)));
        let bad = QSequence::from_u64(&[4, 8]).unwrap();
        assert_eq!(
            lower_cantor_count(&bad, &ratio(1, 1), 1, 2, 64),
            Err(BoundsError::RegimeViolation { level: 2 })
        );
    }

    #[test]
    fn estimates_approach_one_third_for_power_family() {
        let qs = power44(6);
        let third = ratio(1, 3);
        let mut prev_width = None;
        for j in 2..=6 {
            let up = upper_dim_estimate(&qs, &ratio(1, 1), 1, j, 128).unwrap();
            let low = lower_cantor_count(&qs, &ratio(1, 1), 1, j, 128).unwrap().estimate;
            assert!(low.hi_ratio() < up.lo_ratio() && third <= up.lo_ratio(), "J = {j}");
            let width = (up.hi_ratio() - &third).max(low.hi_ratio() - &third);
            if let Some(w) = prev_width {
                assert!(width < w);
            }
            prev_width = Some(width);
        }
    }
}
