use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use sparsenum_core::numeration::zeckendorf_indices_u64;
use sparsenum_core::ostrowski::{
    convergents, ls_recurrence_residual, ostrowski_decode, ostrowski_encode, surd_cf_expand,
    ContinuedFraction, OstrowskiRepr, QuadraticSurd,
};
use sparsenum_core::BigNat;

/// Partial quotient `a_i` of `[0; (period)*]`, `i >= 1`.
fn quotient(period: &[u64], i: usize) -> u64 {
    period[(i - 1) % period.len()]
}

/// Denominators q_0 = 1, q_1 = a_1, q_{i+1} = a_{i+1} q_i + q_{i-1}, up to the first above `bound`.
fn denominators(period: &[u64], bound: u64) -> Vec<u64> {
    let mut q = vec![1u64, quotient(period, 1)];
    while *q.last().unwrap() <= bound {
        let i = q.len();
        q.push(quotient(period, i) * q[i - 1] + q[i - 2]);
    }
    q
}

/// All admissible digit vectors with value at most `limit`, keyed by value.
fn admissible(period: &[u64], limit: u64) -> HashMap<u64, Vec<Vec<u64>>> {
    let q = denominators(period, limit);
    let mut out: HashMap<u64, Vec<Vec<u64>>> = HashMap::new();
    let mut digits = Vec::new();
    fn walk(
        period: &[u64],
        q: &[u64],
        limit: u64,
        digits: &mut Vec<u64>,
        sum: u64,
        out: &mut HashMap<u64, Vec<Vec<u64>>>,
    ) {
        let i = digits.len();
        if i == q.len() {
            if sum > 0 {
                let mut v = digits.clone();
                while v.last() == Some(&0) {
                    v.pop();
                }
                out.entry(sum).or_default().push(v);
            }
            return;
        }
        let cap = if i == 0 {
            quotient(period, 1) - 1
        } else {
            quotient(period, i + 1)
        };
        for d in 0..=cap {
            if i > 0 && d == quotient(period, i + 1) && digits[i - 1] != 0 {
                continue;
            }
            let s = sum + d * q[i];
            if s > limit {
                break;
            }
            digits.push(d);
            walk(period, q, limit, digits, s, out);
            digits.pop();
        }
    }
    walk(period, &q, limit, &mut digits, 0, &mut out);
    out
}

fn check_exhaustive(period: &[u64], cf: &ContinuedFraction, limit: u64) {
    let all = admissible(period, limit);
    assert_eq!(all.len() as u64, limit, "every value reached");
    for n in 1..=limit {
        let reps = &all[&n];
        assert_eq!(reps.len(), 1, "N={n} has {} representations", reps.len());
        let enc = ostrowski_encode(&BigNat::from(n), cf).unwrap();
        assert_eq!(enc.digits(), &reps[0][..], "N={n}");
        assert_eq!(ostrowski_decode(&enc), BigNat::from(n));
        OstrowskiRepr::new(enc.digits().to_vec(), cf.clone()).unwrap();
    }
}

#[test]
fn golden_ratio_exhaustive() {
    check_exhaustive(&[1], &ContinuedFraction::golden_ratio(), 10_000);
}

#[test]
fn silver_period_exhaustive() {
    let cf = ContinuedFraction::purely_periodic(vec![2]).unwrap();
    check_exhaustive(&[2], &cf, 10_000);
}

#[test]
fn longer_periods_exhaustive() {
    for period in [vec![1u64, 2], vec![3, 1, 4], vec![2, 2, 1]] {
        let cf = ContinuedFraction::purely_periodic(period.iter().map(|&a| a as i64).collect())
            .unwrap();
        check_exhaustive(&period, &cf, 3000);
    }
}

#[test]
fn golden_digits_are_zeckendorf_shifted() {
    let cf = ContinuedFraction::golden_ratio();
    for n in 1..=10_000u64 {
        let enc = ostrowski_encode(&BigNat::from(n), &cf).unwrap();
        let shifted: Vec<usize> = enc.support().into_iter().map(|i| i + 1).collect();
        assert_eq!(shifted, zeckendorf_indices_u64(n), "N={n}");
        assert!(enc.digits().iter().all(|&d| d <= 1));
    }
}

/// All tuples with entries in 1..=max and length 1..=len.
fn periods(len: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..len {
        layer = layer
            .into_iter()
            .flat_map(|p| {
                (1..=max).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn lenstra_shallit_recurrence() {
    let ps = periods(3, 4);
    assert_eq!(ps.len(), 4 + 16 + 64);
    for period in ps {
        let cf = ContinuedFraction::purely_periodic(period.clone()).unwrap();
        for n in 1..=50 {
            assert!(
                ls_recurrence_residual(&cf, n).unwrap().is_zero(),
                "period {period:?} n={n}"
            );
        }
    }
}

#[test]
fn residual_needs_pure_period() {
    let cf = ContinuedFraction::new(vec![1], vec![2]).unwrap();
    assert!(ls_recurrence_residual(&cf, 3).is_err());
}

/// Continued fraction of `(p + sqrt d) / q` from floating point, as a cross-check on the exact expansion.
fn float_terms(p: i64, d: i64, q: i64, count: usize) -> Vec<i64> {
    let mut x = (p as f64 + (d as f64).sqrt()) / q as f64;
    let mut out = Vec::new();
    for _ in 0..count {
        let a = x.floor();
        out.push(a as i64);
        x = 1.0 / (x - a);
    }
    out
}

#[test]
fn surd_expansions_agree_with_floats() {
    for (p, d, q) in [(0, 2, 1), (1, 5, 2), (0, 7, 1), (3, 13, 2), (-1, 3, 1), (0, 19, 3), (5, 11, 7)] {
        let cf = surd_cf_expand(&QuadraticSurd::new(p, d, q).unwrap()).unwrap();
        let want = float_terms(p, d, q, 8);
        let got: Vec<i64> = (0..8).map(|i| cf.term(i)).collect();
        assert_eq!(got, want, "({p} + sqrt {d}) / {q}");
    }
}

#[test]
fn fixed_point_recovers_surd() {
    for (p, d, q) in [(0, 2, 1), (1, 5, 2), (0, 7, 1), (3, 13, 2), (5, 11, 7)] {
        let s = QuadraticSurd::new(p, d, q).unwrap();
        let cf = surd_cf_expand(&s).unwrap();
        let back = cf.to_quadratic(d).unwrap();
        assert_eq!(back, s.to_quadratic(), "({p} + sqrt {d}) / {q}");
    }
}

#[test]
fn convergents_bracket_the_value() {
    let s = QuadraticSurd::new(0, 2, 1).unwrap();
    let cf = surd_cf_expand(&s).unwrap();
    let conv = convergents(&cf, 30);
    for w in conv.windows(2) {
        // p_{n+1} q_n - p_n q_{n+1} = (-1)^n
        let det = &w[1].p * BigInt::from(w[0].q.clone()) - &w[0].p * BigInt::from(w[1].q.clone());
        let sign = if w[0].index % 2 == 0 { 1 } else { -1 };
        assert_eq!(det, BigInt::from(sign));
    }
    let last = conv.last().unwrap();
    let approx = last.p.to_f64().unwrap() / last.q.to_f64().unwrap();
    assert!((approx - 2f64.sqrt()).abs() < 1e-15);
}
