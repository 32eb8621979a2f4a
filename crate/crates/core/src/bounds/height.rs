//! Absolute logarithmic Weil height of rationals and quadratic numbers,
//! computed from the primitive integer minimal polynomial.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::QuadraticNumber;
use crate::{Error, Result};

/// Natural logarithm of a positive big integer, accurate for any size.
pub fn ln_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "logarithm of zero");
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |x|` for a nonzero rational.
pub fn ln_abs_rational(x: &BigRational) -> f64 {
    assert!(!x.is_zero(), "logarithm of zero");
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

/// `h(p/q) = log max(|p|, |q|)` for the reduced fraction.
pub fn rational_height(x: &BigRational) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::ZeroHeight);
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    Ok(ln_biguint(num.max(den)))
}

/// Weil height of `a + b sqrt(d)`.
///
/// For `b != 0` the minimal polynomial is `x^2 - 2a x + (a^2 - d b^2)`; after
/// clearing denominators it is `c (x - x1)(x - x2)` and
/// `h = (log c + log max(1, |x1|) + log max(1, |x2|)) / 2`.
pub fn height(x: &QuadraticNumber) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::ZeroHeight);
    }
    if x.is_rational() {
        return rational_height(x.rational_part());
    }
    let trace = x.trace();
    let norm = x.norm();
    let lcm = trace.denom().lcm(norm.denom());
    let lead = primitive_leading(&lcm, &trace, &norm);

    // The root of larger modulus is |a| + |b| sqrt(d); the other follows from the norm.
    let ln_big = ln_larger_root(x);
    let ln_small = ln_abs_rational(&norm) - ln_big;
    Ok((ln_biguint(&lead) + ln_big.max(0.0) + ln_small.max(0.0)) / 2.0)
}

/// `ln(|a| + |b| sqrt(d))` without forming the sum in floating point.
fn ln_larger_root(x: &QuadraticNumber) -> f64 {
    let a = x.rational_part().abs();
    let b = x.irrational_part().abs();
    let ln_sqrt_d = 0.5 * (x.radicand() as f64).ln();
    if a.is_zero() {
        return ln_abs_rational(&b) + ln_sqrt_d;
    }
    let ratio = (&b / &a).to_f64().unwrap() * (x.radicand() as f64).sqrt();
    if ratio <= 1.0 {
        ln_abs_rational(&a) + ratio.ln_1p()
    } else {
        ln_abs_rational(&b) + ln_sqrt_d + ratio.recip().ln_1p()
    }
}

/// Leading coefficient of the primitive integer polynomial `L x^2 - L t x + L n`, divided by its content.
fn primitive_leading(lcm: &BigInt, trace: &BigRational, norm: &BigRational) -> BigUint {
    let c1 = (trace * BigRational::from_integer(lcm.clone())).to_integer();
    let c0 = (norm * BigRational::from_integer(lcm.clone())).to_integer();
    let content = lcm.gcd(&c1).gcd(&c0);
    (lcm / content).magnitude().clone()
}
