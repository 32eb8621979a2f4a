//! Outward-rounded interval arithmetic over dyadic rationals `m * 2^e`.
//!
//! Every operation rounds the lower endpoint toward minus infinity and the
//! upper endpoint toward plus infinity, keeping at most `precision` bits of
//! mantissa, so the exact result of the real operation always lies inside.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Initial working precision in bits.
pub const START_PRECISION: u32 = 128;
/// Default precision cap in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 16384;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Dyadic {
    mant: BigInt,
    exp: i64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

fn shr_round(m: &BigInt, shift: u64, dir: Round) -> BigInt {
    let q = m >> shift;
    // `>>` on BigInt floors; bump for ceiling when bits were dropped.
    if dir == Round::Up && &(&q << shift) != m {
        q + 1
    } else {
        q
    }
}

impl Dyadic {
    fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    fn from_int(n: BigInt) -> Self {
        Self { mant: n, exp: 0 }
    }

    fn round(self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= u64::from(prec) {
            return self;
        }
        let shift = bits - u64::from(prec);
        Self {
            mant: shr_round(&self.mant, shift, dir),
            exp: self.exp + shift as i64,
        }
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let exp = self.exp.min(other.exp);
        (
            &self.mant << (self.exp - exp) as u64,
            &other.mant << (other.exp - exp) as u64,
            exp,
        )
    }

    fn add(&self, other: &Self) -> Self {
        let (a, b, exp) = self.align(other);
        Self { mant: a + b, exp }
    }

    fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    /// `self / other` rounded in direction `dir` to about `prec` bits.
    fn div(&self, other: &Self, prec: u32, dir: Round) -> Self {
        assert!(!other.mant.is_zero());
        let shift = i64::from(prec) + other.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let shift = shift.max(0) as u64;
        let num = &self.mant << shift;
        let (q, r) = num.div_mod_floor(&other.mant);
        let mant = if dir == Round::Up && !r.is_zero() { q + 1 } else { q };
        Self {
            mant,
            exp: self.exp - other.exp - shift as i64,
        }
        .round(prec, dir)
    }

    fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// `ln |self|`, finite for any exponent range.
    fn ln_abs(&self) -> f64 {
        let m = self.mant.magnitude();
        super::height::ln_biguint(m) + self.exp as f64 * std::f64::consts::LN_2
    }

    fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let l = self.ln_abs();
        f64::from(self.signum()) * l.exp()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints and a working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    precision: u32,
}

impl IntervalReal {
    fn new(lo: Dyadic, hi: Dyadic, precision: u32) -> Self {
        debug_assert!(lo <= hi);
        Self {
            lo: lo.round(precision, Round::Down),
            hi: hi.round(precision, Round::Up),
            precision,
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn from_integer(n: impl Into<BigInt>, precision: u32) -> Self {
        let d = Dyadic::from_int(n.into());
        Self::new(d.clone(), d, precision)
    }

    pub fn zero(precision: u32) -> Self {
        Self::new(Dyadic::zero(), Dyadic::zero(), precision)
    }

    pub fn one(precision: u32) -> Self {
        Self::from_integer(1, precision)
    }

    pub fn from_rational(r: &BigRational, precision: u32) -> Self {
        let num = Dyadic::from_int(r.numer().clone());
        let den = Dyadic::from_int(r.denom().clone());
        Self {
            lo: num.div(&den, precision, Round::Down),
            hi: num.div(&den, precision, Round::Up),
            precision,
        }
    }

    /// Enclosure of `sqrt(n)`.
    pub fn sqrt_of(n: &BigUint, precision: u32) -> Self {
        // floor(sqrt(n * 4^k)) / 2^k <= sqrt(n) <= that + 2^-k
        let k = u64::from(precision) + 2;
        let scaled = n << (2 * k);
        let s = scaled.sqrt();
        let exact = &s * &s == scaled;
        let lo = Dyadic {
            mant: BigInt::from(s.clone()),
            exp: -(k as i64),
        };
        let hi = Dyadic {
            mant: BigInt::from(if exact { s } else { s + 1u32 }),
            exp: -(k as i64),
        };
        Self::new(lo, hi, precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision.max(other.precision);
        Self::new(self.lo.add(&other.lo), self.hi.add(&other.hi), p)
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision.max(other.precision);
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Self::new(lo, hi, p)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::IntervalDivByZero);
        }
        let one = Dyadic::from_int(BigInt::one());
        Ok(Self {
            lo: one.div(&self.hi, self.precision, Round::Down),
            hi: one.div(&self.lo, self.precision, Round::Up),
            precision: self.precision,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let hi = if self.hi > self.lo.neg() {
                self.hi.clone()
            } else {
                self.lo.neg()
            };
            Self::new(Dyadic::zero(), hi, self.precision)
        }
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.precision);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// `Some(sign)` when the interval excludes zero.
    pub fn certified_sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else {
            None
        }
    }

    /// Every point of `self` lies strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    /// Every point of `self` is at most every point of `other`.
    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    pub fn lower(&self) -> BigRational {
        self.lo.to_rational()
    }

    pub fn upper(&self) -> BigRational {
        self.hi.to_rational()
    }

    /// `hi - lo` as a float.
    pub fn width(&self) -> f64 {
        self.hi.add(&self.lo.neg()).to_f64()
    }

    pub fn midpoint_f64(&self) -> f64 {
        let sum = self.hi.add(&self.lo);
        sum.to_f64() / 2.0
    }

    /// `ln` of the midpoint for an interval of positive numbers; finite even
    /// when the value is far outside the `f64` range.
    pub fn ln_midpoint(&self) -> f64 {
        let sum = self.hi.add(&self.lo);
        sum.ln_abs() - std::f64::consts::LN_2
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e}, {:e}]@{}",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.precision
        )
    }
}

/// Runs `attempt` at 128, 256, ... bits up to `cap` until it returns `Some`.
pub fn with_escalation<T>(cap: u32, mut attempt: impl FnMut(u32) -> Option<T>) -> Result<T> {
    let mut bits = START_PRECISION.min(cap);
    loop {
        if let Some(v) = attempt(bits) {
            return Ok(v);
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = (bits * 2).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_enclosure() {
        let x = IntervalReal::from_rational(&rat(1, 3), 64);
        assert!(x.lower() < rat(1, 3) && rat(1, 3) < x.upper());
        assert!(x.width() < 1e-18);
        let y = IntervalReal::from_rational(&rat(-7, 4), 64);
        assert_eq!(y.lower(), rat(-7, 4));
        assert_eq!(y.upper(), rat(-7, 4));
    }

    #[test]
    fn sqrt_enclosure() {
        let s = IntervalReal::sqrt_of(&BigUint::from(5u32), 128);
        let sq = s.mul(&s);
        let five = rat(5, 1);
        assert!(sq.lower() <= five && five <= sq.upper());
        assert!(s.width() < 1e-35);
        let four = IntervalReal::sqrt_of(&BigUint::from(4u32), 64);
        assert_eq!(four.lower(), rat(2, 1));
        assert_eq!(four.upper(), rat(2, 1));
    }

    #[test]
    fn arithmetic_contains_exact() {
        let p = 96;
        let a = IntervalReal::from_rational(&rat(2, 7), p);
        let b = IntervalReal::from_rational(&rat(-5, 11), p);
        let checks = [
            (a.add(&b), rat(2, 7) + rat(-5, 11)),
            (a.sub(&b), rat(2, 7) - rat(-5, 11)),
            (a.mul(&b), rat(2, 7) * rat(-5, 11)),
            (a.div(&b).unwrap(), rat(2, 7) / rat(-5, 11)),
            (b.abs(), rat(5, 11)),
            (a.powu(5), rat(32, 16807)),
        ];
        for (iv, exact) in checks {
            assert!(iv.lower() <= exact && exact <= iv.upper(), "{iv} misses {exact}");
        }
    }

    #[test]
    fn sign_and_comparison() {
        let p = 64;
        let a = IntervalReal::from_rational(&rat(1, 3), p);
        let b = IntervalReal::from_rational(&rat(1, 2), p);
        assert!(a.certainly_lt(&b));
        assert!(!b.certainly_lt(&a));
        assert_eq!(a.sub(&b).certified_sign(), Some(-1));
        let z = a.sub(&a);
        assert!(z.contains_zero());
        assert_eq!(z.certified_sign(), None);
        assert_eq!(z.recip(), Err(Error::IntervalDivByZero));
    }

    #[test]
    fn tiny_values_keep_their_logarithm() {
        let tiny = IntervalReal::from_integer(2, 64).powu(4000).recip().unwrap();
        assert!((tiny.ln_midpoint() + 4000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn escalation_stops_at_cap() {
        let mut seen = Vec::new();
        let r: Result<()> = with_escalation(1024, |bits| {
            seen.push(bits);
            None
        });
        assert_eq!(r, Err(Error::PrecisionExhausted { bits: 1024 }));
        assert_eq!(seen, vec![128, 256, 512, 1024]);
        assert_eq!(with_escalation(1024, |b| (b >= 512).then_some(b)), Ok(512));
    }
}
