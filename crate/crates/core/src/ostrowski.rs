//! Continued fractions of quadratic irrationals and Ostrowski numeration.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bounds::QuadraticNumber;
use crate::{BigNat, Error, Result};

/// The real number `(p + sqrt(d)) / q` with `q | d - p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: i64,
    d: i64,
    q: i64,
}

impl QuadraticSurd {
    /// Builds `(p + sqrt(d)) / q`, rescaling numerator and denominator by `|q|`
    /// when `q` does not divide `d - p^2`.
    pub fn new(p: i64, d: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSurd("zero denominator".into()));
        }
        if d < 2 {
            return Err(Error::InvalidSurd(format!("radicand {d} is below 2")));
        }
        let r = d.sqrt();
        if r * r == d {
            return Err(Error::RationalSurd(d));
        }
        let overflow = || Error::InvalidSurd("coefficients overflow i64".into());
        if (d - p * p) % q == 0 {
            return Ok(Self { p, d, q });
        }
        let scale = q.abs();
        Ok(Self {
            p: p.checked_mul(scale).ok_or_else(overflow)?,
            d: d.checked_mul(scale * scale).ok_or_else(overflow)?,
            q: q.checked_mul(scale).ok_or_else(overflow)?,
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Exact value in `Q(sqrt(d))`.
    pub fn to_quadratic(&self) -> QuadraticNumber {
        QuadraticNumber::new(
            BigRational::new(self.p.into(), self.q.into()),
            BigRational::new(1.into(), self.q.into()),
            self.d,
        )
    }

    /// Integer part and the next state `1 / (x - a)`.
    fn step(&self, isqrt_d: i64) -> (i64, QuadraticSurd) {
        let a = if self.q > 0 {
            Integer::div_floor(&(self.p + isqrt_d), &self.q)
        } else {
            Integer::div_floor(&(self.p + isqrt_d + 1), &self.q)
        };
        let p = a * self.q - self.p;
        let q = (self.d - p * p) / self.q;
        (a, QuadraticSurd { p, d: self.d, q })
    }
}

/// Eventually periodic continued fraction `[a_0; a_1, ..., a_m, (period)*]`.
/// The preperiod always holds at least `a_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

impl ContinuedFraction {
    pub fn new(preperiod: Vec<i64>, period: Vec<i64>) -> Result<Self> {
        if preperiod.is_empty() {
            return Err(Error::InvalidSurd("preperiod must contain a_0".into()));
        }
        if period.is_empty() {
            return Err(Error::InvalidSurd("empty period".into()));
        }
        if preperiod[1..].iter().chain(&period).any(|&a| a < 1) {
            return Err(Error::InvalidSurd(
                "partial quotients after a_0 must be positive".into(),
            ));
        }
        Ok(Self { preperiod, period })
    }

    /// `[0; (period)*]`.
    pub fn purely_periodic(period: Vec<i64>) -> Result<Self> {
        Self::new(vec![0], period)
    }

    /// `[1; 1, 1, ...]`, the expansion of the golden ratio.
    pub fn golden_ratio() -> Self {
        Self {
            preperiod: vec![1],
            period: vec![1],
        }
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    /// Whether this has the shape `[0; (b_1, ..., b_s)*]`.
    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod == [0]
    }

    /// Partial quotient `a_i`.
    pub fn term(&self, i: usize) -> i64 {
        let m = self.preperiod.len();
        if i < m {
            self.preperiod[i]
        } else {
            self.period[(i - m) % self.period.len()]
        }
    }

    /// Exact value in `Q(sqrt(d))`, or `None` when the value does not lie in that field.
    pub fn to_quadratic(&self, d: i64) -> Option<QuadraticNumber> {
        // Tail y = [b_1; ..., b_s, y] solves Q_s y^2 + (Q_{s-1} - P_s) y - P_{s-1} = 0.
        let tail = ContinuedFraction {
            preperiod: vec![self.period[0]],
            period: self.period[1..]
                .iter()
                .copied()
                .chain(std::iter::once(self.period[0]))
                .collect(),
        };
        let s = self.period.len();
        let conv = convergents(&tail, s);
        let (p_s, q_s) = (&conv[s - 1].p, BigInt::from(conv[s - 1].q.clone()));
        let (p_prev, q_prev) = if s >= 2 {
            (conv[s - 2].p.clone(), BigInt::from(conv[s - 2].q.clone()))
        } else {
            (BigInt::one(), BigInt::zero())
        };
        let lin = &q_prev - p_s;
        let disc = &lin * &lin + BigInt::from(4) * &q_s * &p_prev;
        let d_big = BigInt::from(d);
        if !(&disc % &d_big).is_zero() {
            return None;
        }
        let r2 = &disc / &d_big;
        let r = r2.sqrt();
        if &r * &r != r2 {
            return None;
        }
        let two_q = BigInt::from(2) * &q_s;
        let mut x = QuadraticNumber::new(
            BigRational::new(-lin, two_q.clone()),
            BigRational::new(r, two_q),
            d,
        );
        for &a in self.preperiod.iter().rev() {
            x = QuadraticNumber::from_rational(BigRational::from_integer(a.into()), d)
                + x.recip();
        }
        Some(x)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[{}", self.preperiod[0])?;
        if self.preperiod.len() > 1 {
            write!(f, "; {}", join(&self.preperiod[1..]))?;
            write!(f, ", ({})*]", join(&self.period))
        } else {
            write!(f, "; ({})*]", join(&self.period))
        }
    }
}

/// Expands a quadratic surd, detecting the period by the first repeated `(p, q)` state.
pub fn surd_cf_expand(x: &QuadraticSurd) -> Result<ContinuedFraction> {
    let isqrt_d = x.d.sqrt();
    if isqrt_d * isqrt_d == x.d {
        return Err(Error::RationalSurd(x.d));
    }
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut terms = Vec::new();
    let mut state = *x;
    loop {
        if let Some(&start) = seen.get(&(state.p, state.q)) {
            let period = terms.split_off(start);
            let mut preperiod = terms;
            let mut period = period;
            if preperiod.is_empty() {
                preperiod.push(period[0]);
                period.rotate_left(1);
            }
            return ContinuedFraction::new(preperiod, period);
        }
        seen.insert((state.p, state.q), terms.len());
        let (a, next) = state.step(isqrt_d);
        terms.push(a);
        state = next;
    }
}

/// Convergent `p_n / q_n` of a continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentPair {
    pub index: usize,
    pub p: BigInt,
    pub q: BigNat,
}

/// Convergents with indices `0..=n`.
pub fn convergents(cf: &ContinuedFraction, n: usize) -> Vec<ConvergentPair> {
    let mut out = Vec::with_capacity(n + 1);
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    for i in 0..=n {
        let a = BigInt::from(cf.term(i));
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        out.push(ConvergentPair {
            index: i,
            p: p.clone(),
            q: q.to_biguint().expect("denominators are non-negative"),
        });
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

/// Denominators `q_0, q_1, ...` up to and including the first one above `bound`.
fn denominators_past(cf: &ContinuedFraction, bound: &BigNat) -> Vec<BigNat> {
    let mut qs = vec![BigNat::one()];
    let mut prev = BigNat::zero();
    let mut i = 1;
    while qs.last().unwrap() <= bound || qs.len() < 2 {
        let a = BigNat::from(cf.term(i) as u64);
        let next = &a * qs.last().unwrap() + &prev;
        prev = qs.last().unwrap().clone();
        qs.push(next);
        i += 1;
    }
    qs
}

/// Digits `d_0..d_l` of a positive integer over the denominators `q_i` of a
/// continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OstrowskiRepr {
    digits: Vec<u64>,
    cf: ContinuedFraction,
}

impl OstrowskiRepr {
    /// Validates the digit conditions:
    /// `0 <= d_0 < a_1`, `0 <= d_i <= a_{i+1}`, `d_i = a_{i+1}` forces `d_{i-1} = 0`,
    /// and a nonzero leading digit.
    pub fn new(digits: Vec<u64>, cf: ContinuedFraction) -> Result<Self> {
        let Some(&last) = digits.last() else {
            return Err(Error::InvalidOstrowski("no digits".into()));
        };
        if last == 0 {
            return Err(Error::InvalidOstrowski("leading digit is zero".into()));
        }
        if digits[0] >= cf.term(1) as u64 {
            return Err(Error::InvalidOstrowski(format!(
                "d_0 = {} is not below a_1 = {}",
                digits[0],
                cf.term(1)
            )));
        }
        for i in 1..digits.len() {
            let cap = cf.term(i + 1) as u64;
            if digits[i] > cap {
                return Err(Error::InvalidOstrowski(format!(
                    "d_{i} = {} exceeds a_{} = {cap}",
                    digits[i],
                    i + 1
                )));
            }
            if digits[i] == cap && digits[i - 1] != 0 {
                return Err(Error::InvalidOstrowski(format!(
                    "d_{i} = a_{} but d_{} = {} is nonzero",
                    i + 1,
                    i - 1,
                    digits[i - 1]
                )));
            }
        }
        Ok(Self { digits, cf })
    }

    /// `d_0, ..., d_l`.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    /// Indices `i` with `d_i != 0`, largest first.
    pub fn support(&self) -> Vec<usize> {
        (0..self.digits.len())
            .rev()
            .filter(|&i| self.digits[i] != 0)
            .collect()
    }
}

/// Greedy Ostrowski digits of `n >= 1`.
pub fn ostrowski_encode(n: &BigNat, cf: &ContinuedFraction) -> Result<OstrowskiRepr> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let qs = denominators_past(cf, n);
    let top = qs.iter().rposition(|q| q <= n).expect("q_0 = 1 <= n");
    let mut digits = vec![0u64; top + 1];
    let mut rest = n.clone();
    for i in (0..=top).rev() {
        let (d, r) = rest.div_rem(&qs[i]);
        digits[i] = u64::try_from(d).expect("digit bounded by a partial quotient");
        rest = r;
    }
    Ok(OstrowskiRepr {
        digits,
        cf: cf.clone(),
    })
}

pub fn ostrowski_decode(r: &OstrowskiRepr) -> BigNat {
    r.digits
        .iter()
        .zip(denominators(&r.cf, r.digits.len()))
        .map(|(&d, q)| BigNat::from(d) * q)
        .sum()
}

/// `q_{n+2s} - t q_{n+s} + (-1)^s q_n` with `t = p_{s-1} + q_s`, for a purely
/// periodic `[0; (b_1, ..., b_s)*]`. Zero for every `n >= 1`.
pub fn ls_recurrence_residual(cf: &ContinuedFraction, n: usize) -> Result<BigInt> {
    if !cf.is_purely_periodic() {
        return Err(Error::NotPurelyPeriodic);
    }
    let s = cf.period().len();
    let conv = convergents(cf, n + 2 * s);
    let q = |i: usize| BigInt::from(conv[i].q.clone());
    let t = &conv[s - 1].p + q(s);
    let sign = if s.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    Ok(q(n + 2 * s) - &t * q(n + s) + sign * q(n))
}

/// Denominators `q_0, ..., q_{count-1}`.
pub fn denominators(cf: &ContinuedFraction, count: usize) -> Vec<BigUint> {
    if count == 0 {
        return Vec::new();
    }
    convergents(cf, count - 1).into_iter().map(|c| c.q).collect()
}
