use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsenum_core::arithmetic::PrimeSet;
use sparsenum_core::bounds::{
    audit_base_gap, audit_zeck_gap, gamma_pow, height, lambda_base, lambda_base_exact,
    lambda_zeck, matveev_lower_bound, IntervalReal, MatveevInstance, QuadraticNumber,
    DEFAULT_PRECISION_CAP,
};
use sparsenum_core::numeration::{fib, zeckendorf_encode, DigitString};
use sparsenum_core::BigNat;

const CAP: u32 = DEFAULT_PRECISION_CAP;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadraticNumber {
    QuadraticNumber::new(rat(a.0, a.1), rat(b.0, b.1), d)
}

fn quad() -> impl Strategy<Value = QuadraticNumber> {
    (
        -50i64..=50,
        1i64..=12,
        -50i64..=50,
        1i64..=12,
        prop::sample::select(vec![2i64, 3, 5, 7, 13]),
    )
        .prop_map(|(a, ad, b, bd, d)| q((a, ad), (b, bd), d))
}

fn same_field(d: i64) -> impl Strategy<Value = (QuadraticNumber, QuadraticNumber)> {
    let part = (-40i64..=40, 1i64..=9);
    (part.clone(), part.clone(), part.clone(), part)
        .prop_map(move |(a, b, c, e)| (q(a, b, d), q(c, e, d)))
}

proptest! {
    #[test]
    fn norm_and_conjugate_are_multiplicative((x, y) in same_field(5)) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!((&x * &y).conj(), x.conj() * y.conj());
        prop_assert_eq!((&x + &y).trace(), x.trace() + y.trace());
    }

    #[test]
    fn reciprocal_inverts(x in quad()) {
        prop_assume!(!x.is_zero());
        let d = x.radicand();
        prop_assert_eq!(&x * &x.recip(), QuadraticNumber::one(d));
        prop_assert_eq!(x.powi(-3) * x.pow(3), QuadraticNumber::one(d));
    }

    #[test]
    fn exact_sign_matches_float(x in quad()) {
        let v = x.to_f64();
        prop_assume!(v.abs() > 1e-9);
        prop_assert_eq!(x.signum(), if v > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn enclosure_contains_value(x in quad(), prec in 64u32..512) {
        let iv = sparsenum_core::bounds::quadratic_enclosure(&x, prec);
        let v = x.to_f64();
        let lo = iv.lower().to_f64().unwrap();
        let hi = iv.upper().to_f64().unwrap();
        prop_assert!(lo <= v + 1e-12 * v.abs().max(1.0) && v - 1e-12 * v.abs().max(1.0) <= hi);
        prop_assert!(iv.width() < 1e-15 * v.abs().max(1.0));
    }

    #[test]
    fn interval_arithmetic_encloses_rationals(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, e in 1i64..1000) {
        let (x, y) = (rat(a, b), rat(c, e));
        let (ix, iy) = (IntervalReal::from_rational(&x, 96), IntervalReal::from_rational(&y, 96));
        for (iv, exact) in [(ix.add(&iy), &x + &y), (ix.sub(&iy), &x - &y), (ix.mul(&iy), &x * &y)] {
            prop_assert!(iv.lower() <= exact && exact <= iv.upper());
        }
        if !y.is_zero() {
            let iv = ix.div(&iy).unwrap();
            let exact = &x / &y;
            prop_assert!(iv.lower() <= exact && exact <= iv.upper());
        }
    }
}

#[test]
fn binet_is_exact() {
    let root5 = QuadraticNumber::sqrt_d(5);
    let inv = root5.recip();
    for m in 0..=300u32 {
        let g = gamma_pow(m);
        let f = (&g - &g.conj()) * &inv;
        assert!(f.is_rational(), "m={m}");
        assert_eq!(f.rational_part(), &BigRational::from_integer(BigInt::from(fib(m as usize))));
    }
}

#[test]
fn height_of_golden_ratio() {
    let h = height(&QuadraticNumber::golden()).unwrap();
    let want = ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2.0;
    assert!((h - want).abs() < 1e-12, "{h} vs {want}");
}

#[test]
fn height_of_integers() {
    for n in 2..=100i64 {
        let h = height(&QuadraticNumber::from_integer(n, 5)).unwrap();
        assert_eq!(h, (n as f64).ln(), "n={n}");
    }
    assert!(height(&QuadraticNumber::zero(5)).is_err());
}

#[test]
fn height_identities() {
    let units = [
        QuadraticNumber::golden(),
        q((1, 1), (1, 1), 2),
        q((2, 1), (1, 1), 3),
        q((5, 1), (2, 1), 6),
        q((-3, 1), (1, 1), 10),
    ];
    let others = [q((3, 2), (1, 2), 5), q((1, 1), (1, 1), 3), q((7, 3), (-2, 5), 7)];
    for x in units.iter().chain(&others) {
        let h = height(x).unwrap();
        let hr = height(&x.recip()).unwrap();
        assert!((h - hr).abs() < 1e-10 * h.max(1.0), "h(1/x) for {x:?}");
        for m in 1..=20u32 {
            let hm = height(&x.pow(m)).unwrap();
            assert!((hm - m as f64 * h).abs() < 1e-10 * hm.max(1.0), "m={m} {x:?}");
        }
    }
    for u in &units {
        // norm +-1: h = log max(|u|, |u'|) / 2
        assert_eq!(u.norm().abs(), BigRational::one());
        let big = u.to_f64().abs().max(u.conj().to_f64().abs());
        let h = height(u).unwrap();
        assert!((h - big.ln() / 2.0).abs() < 1e-12, "{u:?}");
    }
}

/// `ln` of a positive big integer through its leading 64 bits.
fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_abs(x: &BigRational) -> f64 {
    ln_big(x.numer().magnitude()) - ln_big(x.denom().magnitude())
}

/// Matveev's bound over Q written out directly.
fn matveev_oracle(log_a: &[f64], b: &[i64]) -> f64 {
    let n = log_a.len() as f64;
    let last = log_a[log_a.len() - 1];
    let b_prime = b
        .iter()
        .zip(log_a)
        .map(|(&bj, &aj)| bj.unsigned_abs() as f64 * aj / last)
        .fold(1.0, f64::max);
    let prod: f64 = log_a.iter().product();
    -2.0 * 30f64.powf(n + 3.0) * n.powf(4.5) * prod * (1.0 + b_prime.ln())
}

#[test]
fn matveev_smoke_instance() {
    let log_a = vec![2f64.ln(), 3f64.ln()];
    let inst = MatveevInstance::new(1, log_a.clone(), vec![3, -2]).unwrap();
    assert_eq!(inst.b_prime(), 2.0);
    let product = inst.factors().product();
    let oracle = -matveev_oracle(&log_a, &[3, -2]);
    assert!(((product - oracle) / oracle).abs() < 1e-12);
    let bound = matveev_lower_bound(&inst);
    assert!((bound / -1.4178e9 - 1.0).abs() < 1e-3, "{bound}");
    let lambda = (rat(8, 9) - BigRational::one()).abs();
    let log_lambda = ln_abs(&lambda);
    assert!((log_lambda + 9f64.ln()).abs() < 1e-15);
    assert!(bound <= log_lambda);
}

#[test]
fn matveev_random_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(2..=4usize);
        let alphas: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.gen_range(1..=40), rng.gen_range(1..=40)))
            .collect();
        let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-15..=15)).collect();
        let value = alphas
            .iter()
            .zip(&b)
            .fold(BigRational::one(), |acc, (&(p, q), &e)| acc * rat(p, q).pow(e as i32));
        let lambda = (value - BigRational::one()).abs();
        if lambda.is_zero() {
            continue;
        }
        let log_a: Vec<f64> = alphas
            .iter()
            .map(|&(p, q)| {
                let r = rat(p, q);
                let h = ln_big(r.numer().magnitude().max(r.denom().magnitude()));
                h.max((p as f64 / q as f64).ln().abs()).max(0.16)
            })
            .collect();
        let inst = MatveevInstance::new(1, log_a.clone(), b.clone()).unwrap();
        let bound = matveev_lower_bound(&inst);
        let oracle = matveev_oracle(&log_a, &b);
        assert!(((bound - oracle) / oracle).abs() < 1e-12);
        let log_lambda = ln_abs(&lambda);
        assert!(bound <= log_lambda, "{alphas:?}^{b:?}: {bound} > {log_lambda}");
        done += 1;
    }
}

fn random_sparse(rng: &mut ChaCha8Rng, b: u32, span: u32) -> Vec<(u32, u32)> {
    let k = rng.gen_range(2..=6);
    let mut pos: Vec<u32> = vec![0];
    while pos.len() < k {
        let p = rng.gen_range(1..=span);
        if !pos.contains(&p) {
            pos.push(p);
        }
    }
    pos.sort_unstable();
    pos.into_iter().map(|p| (p, rng.gen_range(1..b))).collect()
}

#[test]
fn base_gap_family() {
    let set = PrimeSet::new(vec![2, 3, 5, 7]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (b, span) in [(10u32, 80u32), (2, 300)] {
        for _ in 0..1000 {
            let pairs = random_sparse(&mut rng, b, span);
            let ds = DigitString::from_pairs(b, pairs.clone()).unwrap();
            let big_b = BigInt::from(b);
            let n: BigInt = pairs.iter().map(|&(p, d)| BigInt::from(d) * big_b.pow(p)).sum();
            let k = pairs.len();
            for j in 2..=k {
                let tail: BigInt = pairs[j - 1..]
                    .iter()
                    .map(|&(p, d)| BigInt::from(d) * big_b.pow(p))
                    .sum();
                let exact = (BigRational::new(n.clone(), tail) - BigRational::one()).abs();
                assert_eq!(lambda_base_exact(&ds, &set, j).unwrap(), exact);
                let iv = lambda_base(&ds, &set, j, CAP).unwrap();
                assert!(!iv.contains_zero());
                assert!(iv.lower() <= exact && exact <= iv.upper());
                let audit = audit_base_gap(&ds, &set, j, CAP).unwrap();
                let gap = i64::from(pairs[k - 1].0) - i64::from(pairs[j - 2].0) - 1;
                assert_eq!(audit.gap, gap);
                assert!(audit.holds, "b={b} {pairs:?} j={j}");
            }
        }
    }
}

#[test]
fn zeck_gap_up_to_ten_thousand() {
    let gamma = (1.0 + 5f64.sqrt()) / 2.0;
    for n in 1..=10_000u64 {
        let big = BigNat::from(n);
        let z = zeckendorf_encode(&big).unwrap();
        let audit = audit_zeck_gap(&big, &z, CAP).unwrap();
        assert!(audit.holds, "N={n}");
        assert!(audit.lambda.midpoint_f64() < gamma.powi(1 - z.leading_index() as i32));
        for j in 1..=z.digit_count() {
            let iv = lambda_zeck(&big, &z, j, CAP).unwrap();
            assert!(!iv.contains_zero(), "N={n} j={j}");
            // floating cross-check where cancellation is mild
            let denom: f64 = z.indices()[..=z.digit_count() - j]
                .iter()
                .map(|&m| gamma.powi(m as i32))
                .sum();
            let approx = (5f64.sqrt() * n as f64 / denom - 1.0).abs();
            if approx > 1e-6 {
                assert!((iv.midpoint_f64() / approx - 1.0).abs() < 1e-6, "N={n} j={j}");
            }
        }
    }
}
