use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact element `a + b sqrt(d)` of the real quadratic field `Q(sqrt(d))`.
///
/// Binary operations require both operands to share `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl QuadraticNumber {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Self {
        assert!(d >= 2, "radicand must be at least 2");
        Self { a, b, d }
    }

    pub fn from_rational(a: BigRational, d: i64) -> Self {
        Self::new(a, BigRational::zero(), d)
    }

    pub fn from_integer(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()), d)
    }

    pub fn zero(d: i64) -> Self {
        Self::from_integer(0, d)
    }

    pub fn one(d: i64) -> Self {
        Self::from_integer(1, d)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_d(d: i64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    /// The golden ratio `(1 + sqrt(5)) / 2`.
    pub fn golden() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        Self::new(half.clone(), half, 5)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b sqrt(d)`.
    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.d)
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }

    /// `a + b sqrt(d) + a - b sqrt(d)`.
    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero");
        Self::new(&self.a / &n, -&self.b / &n, self.d)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.d);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self^e` for any integer exponent; panics on `0^e` with `e < 0`.
    pub fn powi(&self, e: i64) -> Self {
        let m = u32::try_from(e.unsigned_abs()).expect("exponent too large");
        if e >= 0 {
            self.pow(m)
        } else {
            self.recip().pow(m)
        }
    }

    /// Sign of the real value, decided exactly.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // Opposite signs: compare a^2 with d b^2.
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * BigRational::from_integer(self.d.into());
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Floating-point approximation; may lose relative accuracy under cancellation.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "operands live in different quadratic fields");
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_field(rhs);
        QuadraticNumber::new(&self.a + &rhs.a, &self.b + &rhs.b, self.d)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_field(rhs);
        QuadraticNumber::new(&self.a - &rhs.a, &self.b - &rhs.b, self.d)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_field(rhs);
        let d = BigRational::from_integer(BigInt::from(self.d));
        QuadraticNumber::new(
            &self.a * &rhs.a + &self.b * &rhs.b * d,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.d,
        )
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-&self.a, -&self.b, self.d)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

/// `gamma^m` for the golden ratio `gamma`.
pub fn gamma_pow(m: u32) -> QuadraticNumber {
    QuadraticNumber::golden().pow(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gamma_pow_examples() {
        assert_eq!(gamma_pow(0), QuadraticNumber::one(5));
        assert_eq!(gamma_pow(1), QuadraticNumber::new(rat(1, 2), rat(1, 2), 5));
        assert_eq!(gamma_pow(10), QuadraticNumber::new(rat(123, 2), rat(55, 2), 5));
    }

    #[test]
    fn field_operations() {
        let g = QuadraticNumber::golden();
        // gamma^2 = gamma + 1
        assert_eq!(&g * &g, &g + &QuadraticNumber::one(5));
        assert_eq!(g.norm(), rat(-1, 1));
        assert_eq!(g.trace(), rat(1, 1));
        assert_eq!(&g * &g.recip(), QuadraticNumber::one(5));
        assert_eq!(g.powi(-3), g.pow(3).recip());
        assert_eq!(g.conj().signum(), -1);
        assert_eq!(g.signum(), 1);
        assert_eq!(QuadraticNumber::zero(5).signum(), 0);
        let x = QuadraticNumber::new(rat(3, 1), rat(-2, 1), 2);
        // 3 - 2 sqrt(2) > 0
        assert_eq!(x.signum(), 1);
        assert_eq!((-&x).abs(), x);
        assert!((x.to_f64() - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "different quadratic fields")]
    fn mixed_fields_panic() {
        let _ = QuadraticNumber::sqrt_d(2) + QuadraticNumber::sqrt_d(3);
    }
}
