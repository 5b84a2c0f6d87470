//! Acceptance suite. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liminf::cantor_measure::{CantorTree, DEFAULT_NODE_BUDGET};
use liminf::cli::{run, write_outputs, ExperimentConfig};
use liminf::dimension_bounds::{lower_cantor_count, upper_dim_estimate};
use liminf::level_sets::{count_shifted_rationals, prefix_intersection, LevelParams, DEFAULT_COMPONENT_BUDGET};
use liminf::multiplicative::{hyperbolic_cover, mult_bounds, mult_cost_exponent};
use liminf::numerics::{ratio, Enclosure, Rational};
use liminf::sequences::{generate, reindex_even, validate_regime, QSequence, RegimeCheck, SequenceSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn power_family(depth: usize) -> QSequence {
    generate(&SequenceSpec::Power { q1: BigUint::from(4u32), c: ratio(4, 1) }, depth).unwrap()
}

fn r(x: &Rational) -> f64 {
    liminf::numerics::ratio_to_f64(x)
}

fn bracket_power_family() -> Outcome {
    let start = Instant::now();
    let qs = power_family(6);
    let tau = ratio(1, 1);
    let third = ratio(1, 3);
    let upper = upper_dim_estimate(&qs, &tau, 1, 6, 128).map_err(|e| e.to_string())?;
    let lower = lower_cantor_count(&qs, &tau, 1, 6, 128).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(upper.lo_ratio() >= third, "upper estimate {} is below 1/3", upper.lo_f64());
    ensure!(upper.hi_ratio() - &third <= ratio(1, 100), "upper estimate {} is not within 0.01 of 1/3", upper.hi_f64());
    ensure!(
        lower.estimate.exact_value() == Some(ratio(683, 2048)),
        "lower estimate {:?} differs from 683/2048",
        lower.estimate
    );
    let gap = ratio(683, 2048) - &third;
    ensure!(gap.clone() * gap.clone() <= ratio(4, 100_000_000), "|683/2048 - 1/3| exceeds 0.0002");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "s_6 in [{:.6}, {:.6}], lower = 683/2048 (1/3 + {:.6}), {elapsed:?}",
        upper.lo_f64(),
        upper.hi_f64(),
        r(&gap)
    ))
}

/// Grid with unit `1/6561` for `qs = [3, 81]`, `tau = 1`.
fn brute_3_81(d: usize) -> usize {
    let m = 6561;
    let l1 = common::level_arcs(3, 0, 1, m / 9, m);
    let l2 = common::level_arcs(81, 0, 1, 1, m);
    common::brute_components(&[l1, l2], d, m)
}

fn enumeration_oracle() -> Outcome {
    let start = Instant::now();
    let qs = QSequence::from_u64(&[3, 81]).unwrap();
    let params = LevelParams::homogeneous(1, ratio(1, 1)).unwrap();
    let p = prefix_intersection(&qs, &params, 2, 64, DEFAULT_COMPONENT_BUDGET).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let count = &p.levels[1].count;
    let brute = brute_3_81(1);
    ensure!(count.is_exact(), "count not pinned down: {count}");
    ensure!(count.min == BigUint::from(brute), "library {count} vs brute force {brute}");
    ensure!((48..=60).contains(&brute), "count {brute} outside [48, 60]");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("count = {brute} (brute force agrees), {elapsed:?}"))
}

fn fact_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFAC7);
    for case in 0..1000 {
        let q: u64 = rng.gen_range(1..=10_000);
        let den: i64 = rng.gen_range(1..=1000);
        let x: i64 = rng.gen_range(0..=den);
        let y: i64 = rng.gen_range(0..=den);
        if x == y {
            continue;
        }
        let (a, b) = (ratio(x.min(y), den), ratio(x.max(y), den));
        let tden: i64 = rng.gen_range(1..=1000);
        let theta = ratio(rng.gen_range(0..tden), tden);
        let got = count_shifted_rationals(&a, &b, &theta, &BigUint::from(q)).map_err(|e| e.to_string())?;
        let qr = Rational::from_integer(BigInt::from(q));
        let direct = (0..q)
            .filter(|&p| {
                let c = (Rational::from_integer(BigInt::from(p)) + &theta) / &qr;
                a < c && c < b
            })
            .count();
        ensure!(got == BigUint::from(direct), "case {case}: {got} vs direct {direct}");
        let expected = (&b - &a) * &qr;
        let n = Rational::from_integer(BigInt::from(direct));
        ensure!(
            &expected - ratio(2, 1) <= n && n <= &expected + ratio(2, 1),
            "case {case}: {direct} outside (b-a)q +- 2"
        );
    }
    Ok("1000 random cases match enumeration and the +-2 window".into())
}

fn contractive_collapse() -> Outcome {
    let qs = generate(&SequenceSpec::Contractive { q1: BigUint::from(64u32), tau: ratio(1, 1) }, 3)
        .map_err(|e| e.to_string())?;
    let params = LevelParams::homogeneous(1, ratio(1, 1)).unwrap();
    let p = prefix_intersection(&qs, &params, 3, 64, DEFAULT_COMPONENT_BUDGET).map_err(|e| e.to_string())?;
    for l in &p.levels {
        ensure!(l.count.max <= BigUint::from(64u32), "level {} has {} components", l.level, l.count);
    }
    let q = Rational::from_integer(BigInt::from(qs.q(3).clone()));
    let bound = ratio(128, 1) / (&q * &q);
    let length = &p.levels[2].outer_length;
    ensure!(length <= &bound, "outer length {} above 128/q_3^2 = {}", r(length), r(&bound));
    Ok(format!(
        "qs = {qs}, counts {:?}, length {:.3e} <= {:.3e}",
        p.levels.iter().map(|l| l.count.max.to_string()).collect::<Vec<_>>(),
        r(length),
        r(&bound)
    ))
}

fn reindex() -> Outcome {
    let tau = ratio(1, 1);
    let qs = generate(
        &SequenceSpec::Alternating { q1: BigUint::from(2u32), tau: tau.clone(), eta: ratio(5, 1) },
        6,
    )
    .map_err(|e| e.to_string())?;
    let (even, tau_hat) = reindex_even(&qs, &tau).map_err(|e| e.to_string())?;
    ensure!(tau_hat == ratio(3, 1), "tau_hat = {tau_hat}");
    let check = validate_regime(&even, &tau_hat, 128).map_err(|e| e.to_string())?;
    ensure!(check == RegimeCheck::Pass, "regime {check:?} for {even}");
    Ok(format!("tau_hat = 3, {} reindexed terms pass", even.len()))
}

fn factorization() -> Outcome {
    let qs = QSequence::from_u64(&[3, 81]).unwrap();
    let one = prefix_intersection(&qs, &LevelParams::homogeneous(1, ratio(1, 1)).unwrap(), 2, 64, DEFAULT_COMPONENT_BUDGET)
        .map_err(|e| e.to_string())?;
    let two = prefix_intersection(&qs, &LevelParams::homogeneous(2, ratio(1, 1)).unwrap(), 2, 64, DEFAULT_COMPONENT_BUDGET)
        .map_err(|e| e.to_string())?;
    for (a, b) in one.levels.iter().zip(&two.levels) {
        ensure!(b.count.min == &a.count.min * &a.count.min, "level {}: min {} vs {}^2", a.level, b.count.min, a.count.min);
        ensure!(b.count.max == &a.count.max * &a.count.max, "level {}: max {} vs {}^2", a.level, b.count.max, a.count.max);
    }
    let brute = brute_3_81(2);
    ensure!(two.levels[1].count.min == BigUint::from(brute), "2-D brute force gives {brute}");
    Ok(format!("2-D count {} = {}^2 (brute force agrees)", two.levels[1].count, one.levels[1].count))
}

fn mass_distribution() -> Outcome {
    let qs = power_family(4);
    let params = LevelParams::homogeneous(1, ratio(1, 1)).unwrap();
    let tree = CantorTree::build(&qs, &params, 4, DEFAULT_NODE_BUDGET, 64).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mu = |k| tree.node_measure(k).unwrap();
    ensure!(mu(0) == Rational::one(), "root mass {}", mu(0));
    ensure!(Rational::from_integer(tree.node_count(1).into()) * mu(1) == mu(0), "root children do not sum to 1");
    let mut checked = 0usize;
    for k in 1..4 {
        let count = tree.node_count(k);
        let exhaustive = k <= 2;
        let indices: Vec<BigUint> = if exhaustive {
            (0..count.to_string().parse::<u64>().unwrap()).map(BigUint::from).collect()
        } else {
            (0..200).map(|_| num_bigint::RandBigInt::gen_biguint_below(&mut rng, &count)).collect()
        };
        for i in indices {
            let node = tree.node(k, &[i]).map_err(|e| e.to_string())?;
            let kids = tree.child_count(k, &node).map_err(|e| e.to_string())?;
            ensure!(Rational::from_integer(kids.into()) * mu(k + 1) == mu(k), "level {k} additivity fails");
            checked += 1;
        }
    }
    let mut seps = Vec::new();
    for k in 1..=4 {
        let q = Rational::from_integer(BigInt::from(qs.q(k).clone()));
        let need = (ratio(2, 1) * &q).recip();
        let sep = if k <= 2 {
            tree.min_separation(k)
        } else {
            tree.sampled_separation(k, 500, 9)
        }
        .map_err(|e| e.to_string())?
        .ok_or("no separation computed")?;
        ensure!(sep >= need, "level {k}: separation {} < 1/(2 q_k)", r(&sep));
        seps.push(r(&(sep * ratio(2, 1) * q)));
    }
    let cert = tree.holder_certificate(&ratio(3, 10), 1000, 2024).map_err(|e| e.to_string())?;
    ensure!(cert.max_ratio <= ratio(16, 1), "max ratio {} > 16", cert.max_ratio_f64());
    Ok(format!(
        "{checked} nodes additive, separation / (1/(2q_k)) = {seps:.3?}, max ratio {:.4}",
        cert.max_ratio_f64()
    ))
}

fn multiplicative_cover() -> Outcome {
    let b = mult_bounds(&ratio(1, 1), &Enclosure::from_ratio(&ratio(1, 3), 128), 2);
    ensure!(b.lower.contains(&ratio(4, 3)) && b.lower.width() < ratio(1, 1 << 40), "lower {:?}", b.lower);
    ensure!(b.upper.exact_value() == Some(ratio(3, 2)), "upper {:?}", b.upper);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let d: u32 = rng.gen_range(1..=6);
        let tau = ratio(rng.gen_range(1..=50), rng.gen_range(1..=20));
        let s = Rational::from_integer(BigInt::from(d - 1)) + (&tau + Rational::one()).recip();
        ensure!(mult_cost_exponent(d, &tau, &s).is_zero(), "nonzero exponent at d = {d}, tau = {tau}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let s = ratio(8, 5);
    let mut normalized = Vec::new();
    for k in 4..=12u32 {
        let (cover, cost) = hyperbolic_cover(k, &s, 64).map_err(|e| e.to_string())?;
        let g = cover.gamma();
        let mut hits = 0;
        while hits < 10_000 {
            // half the points near the axes, where the region is thin
            let x: f64 = if hits % 2 == 0 { rng.gen() } else { rng.gen::<f64>() * g * 4.0 };
            let y: f64 = rng.gen();
            let (x, y) = if rng.gen_bool(0.5) { (x, y) } else { (y, x) };
            if x * y <= g {
                hits += 1;
                ensure!(cover.covers(x, y), "gamma = 2^-{k}: ({x}, {y}) uncovered");
            }
        }
        normalized.push(cost.mid_f64() * g.powf(-0.6));
    }
    let lo = normalized.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = normalized.iter().cloned().fold(0.0, f64::max);
    ensure!(hi / lo <= 16.0, "scaling band {lo:.3}..{hi:.3} wider than 16");
    Ok(format!("bounds (4/3, 3/2), 20 critical exponents vanish, band {lo:.3}..{hi:.3}"))
}

fn reproducibility() -> Outcome {
    let text = r#"
tau = "1"
d = 1
depth = 4
seed = 5
tasks = ["analyze", "enumerate", "dimension", "cantor", "multiplicative"]
[sequence]
kind = "power"
q1 = 4
c = "4"
[budgets]
components = 1000
[cantor]
s = "3/10"
samples = 100
[multiplicative]
s = "3/2"
"#;
    let mut bytes = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut cfg = ExperimentConfig::from_toml(text).map_err(|e| e.to_string())?;
        cfg.out_dir = dir.path().to_path_buf();
        let outcome = run(&cfg, true).map_err(|e| e.to_string())?;
        let paths = write_outputs(&outcome.report, &cfg).map_err(|e| e.to_string())?;
        bytes.push(std::fs::read(&paths[0]).map_err(|e| e.to_string())?);
    }
    ensure!(bytes[0] == bytes[1], "reports differ");
    Ok(format!("{} identical bytes", bytes[0].len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("bracket for the power family at J = 6", bracket_power_family),
        ("enumeration oracle for [3, 81]", enumeration_oracle),
        ("shifted-rational fact suite", fact_suite),
        ("contractive collapse", contractive_collapse),
        ("even reindexing", reindex),
        ("2-D factorization", factorization),
        ("mass distribution at J = 4", mass_distribution),
        ("multiplicative bounds and cover", multiplicative_cover),
        ("canonical reproducibility", reproducibility),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {}. {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
