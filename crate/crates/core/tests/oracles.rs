//! Derived values checked against independent computations.

mod common;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

use liminf::dimension_bounds::{lower_cantor_count, upper_cover_count, upper_dim_estimate};
use liminf::level_sets::{prefix_intersection, LevelParams, DEFAULT_COMPONENT_BUDGET};
use liminf::numerics::{log_ratio, ratio, Rational};
use liminf::sequences::{generate, QSequence, SequenceSpec};

/// `atanh(1/n)` summed to `terms` terms as an exact rational.
fn atanh_inv(n: i64, terms: u32) -> Rational {
    let mut sum = Rational::from_integer(BigInt::from(0));
    for k in 0..terms {
        let e = 2 * k + 1;
        let den = BigInt::from(n).pow(e) * BigInt::from(e);
        sum += Rational::new(BigInt::one(), den);
    }
    sum
}

fn f(x: &Rational) -> f64 {
    liminf::numerics::ratio_to_f64(x)
}

#[test]
fn log_ratio_against_series() {
    // ln 2 = 2 atanh(1/3), ln(3/2) = 2 atanh(1/5), ln(5/4) = 2 atanh(1/9)
    let two = Rational::from_integer(BigInt::from(2));
    let ln2 = &two * atanh_inv(3, 40);
    let ln3 = &ln2 + &two * atanh_inv(5, 40);
    let ln10 = &two * atanh_inv(9, 40) + Rational::from_integer(BigInt::from(3)) * &ln2;
    let expected = f(&(&two * ln10 / ln3));
    let got = log_ratio(&BigUint::from(100u32), &BigUint::from(3u32), 53).unwrap();
    assert!(got.lo_f64() <= expected + 1e-14 && expected - 1e-14 <= got.hi_f64(), "{got:?} vs {expected}");
    assert!(got.hi_f64() - got.lo_f64() < 1e-12);
    assert!((expected - 4.191806548578769).abs() < 1e-12);
}

#[test]
fn exact_log_ratios() {
    let e = log_ratio(&BigUint::from(256u32), &BigUint::from(16u32), 64).unwrap();
    assert_eq!(e.exact_value(), Some(ratio(2, 1)));
    let e = log_ratio(&BigUint::from(8u32), &BigUint::from(32u32), 64).unwrap();
    assert!(e.contains(&ratio(3, 5)));
    assert!(e.hi_f64() - e.lo_f64() < 1e-15);
}

/// `ŝ_J = (1 + 2(4^(J-1) - 1)/3) / (2 * 4^(J-1))` for `q_{j+1} = q_j^4`, `q_1 = 4`.
#[test]
fn cantor_estimate_closed_form() {
    let qs = generate(&SequenceSpec::Power { q1: BigUint::from(4u32), c: ratio(4, 1) }, 6).unwrap();
    for j in 1..=6u32 {
        let p = Rational::from_integer(BigInt::from(4).pow(j - 1));
        let closed = (Rational::one() + ratio(2, 3) * (&p - Rational::one())) / (ratio(2, 1) * &p);
        let got = lower_cantor_count(&qs, &ratio(1, 1), 1, j as usize, 128).unwrap();
        assert_eq!(got.estimate.exact_value(), Some(closed), "J = {j}");
    }
}

/// Cover count recomputed with plain integers:
/// `N_J = 4 * prod (4 q_k / q_{k-1}^2 + 2)` and `s_J = ln N / (2 ln q_J - ln 2)`.
#[test]
fn cover_estimate_closed_form() {
    let qs = generate(&SequenceSpec::Power { q1: BigUint::from(4u32), c: ratio(4, 1) }, 5).unwrap();
    let mut n = BigUint::from(4u32);
    for j in 2..=5usize {
        let prev = qs.q(j - 1);
        n *= BigUint::from(4u32) * qs.q(j) / (prev * prev) + BigUint::from(2u32);
        let report = upper_cover_count(&qs, &ratio(1, 1), 1, j, 128).unwrap();
        assert_eq!(report.n_min, n, "J = {j}");
        let log2n = n.bits() as f64 - 1.0 + {
            let shift = n.bits().saturating_sub(53);
            let top: BigUint = &n >> shift;
            (top.to_string().parse::<f64>().unwrap() / 2f64.powi((n.bits() - shift - 1) as i32)).log2()
        };
        let expected = log2n / (2.0 * (qs.q(j).bits() - 1) as f64 - 1.0);
        let got = upper_dim_estimate(&qs, &ratio(1, 1), 1, j, 128).unwrap();
        assert!((got.mid_f64() - expected).abs() < 1e-9, "J = {j}: {} vs {expected}", got.mid_f64());
    }
}

#[test]
fn upper_estimate_two_levels() {
    let qs = QSequence::from_u64(&[4, 256]).unwrap();
    let got = upper_dim_estimate(&qs, &ratio(1, 1), 1, 2, 128).unwrap();
    let expected = 264f64.ln() / (2.0 * 256f64.ln() - 2f64.ln());
    assert!((got.mid_f64() - expected).abs() < 1e-12);
}

#[test]
fn enumeration_matches_brute_force_with_shift() {
    // theta = 1/3 on the grid with unit 1/(3 * 6561)
    let m = 3 * 6561;
    let qs = QSequence::from_u64(&[3, 81]).unwrap();
    let params = LevelParams::new(vec![ratio(1, 3)], ratio(1, 1)).unwrap();
    let p = prefix_intersection(&qs, &params, 2, 64, DEFAULT_COMPONENT_BUDGET).unwrap();
    let l1 = common::level_arcs(3, 1, 3, m / 9, m);
    let l2 = common::level_arcs(81, 1, 3, 3, m);
    let brute = common::brute_components(&[l1, l2], 1, m);
    assert_eq!(p.levels[1].count.min, BigUint::from(brute));
    assert!(p.levels[1].count.is_exact());
}

#[test]
fn count_between_cantor_and_cover_bounds() {
    let qs = QSequence::from_u64(&[3, 81]).unwrap();
    let params = LevelParams::homogeneous(1, ratio(1, 1)).unwrap();
    let p = prefix_intersection(&qs, &params, 2, 64, DEFAULT_COMPONENT_BUDGET).unwrap();
    let lower = lower_cantor_count(&qs, &ratio(1, 1), 1, 2, 64).unwrap().m;
    let upper = upper_cover_count(&qs, &ratio(1, 1), 1, 2, 64).unwrap().n_max;
    assert!(lower <= p.levels[1].count.min && p.levels[1].count.max <= upper);
    assert!(BigUint::from(48u32) <= p.levels[1].count.min && p.levels[1].count.max <= BigUint::from(66u32));
}
