//! Certified evaluation of the linear forms attached to sparse base-b and
//! Zeckendorf expansions.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::{with_escalation, IntervalReal};
use super::quadratic::{gamma_pow, QuadraticNumber};
use crate::arithmetic::{s_part, PrimeSet};
use crate::numeration::{zeckendorf_decode, DigitString, ZeckendorfRepr};
use crate::{BigNat, Error, Result};

/// Interval enclosure of an element of `Q(sqrt(d))`.
pub fn quadratic_enclosure(x: &QuadraticNumber, precision: u32) -> IntervalReal {
    let a = IntervalReal::from_rational(x.rational_part(), precision);
    if x.is_rational() {
        return a;
    }
    let b = IntervalReal::from_rational(x.irrational_part(), precision);
    let root = IntervalReal::sqrt_of(&BigUint::from(x.radicand() as u64), precision);
    a.add(&b.mul(&root))
}

/// `N` rebuilt as `A * q_1^{r_1} ... q_s^{r_s}`.
fn rebuild(n: &BigNat, set: &PrimeSet) -> BigInt {
    let sp = s_part(n, set);
    BigInt::from(sp.cofactor * sp.part)
}

struct BaseForm {
    numerator: BigInt,
    /// `b^{n_j} (d_k b^{n_k - n_j} + ... + d_j)`
    denominator: BigInt,
}

fn base_form(ds: &DigitString, set: &PrimeSet, j: usize) -> Result<BaseForm> {
    let digits = ds.nonzero();
    let k = digits.len();
    if digits[0].0 != 0 {
        return Err(Error::InvalidLinearForm(format!(
            "units digit is zero, so the base {} divides N",
            ds.base()
        )));
    }
    if k < 2 {
        return Err(Error::InvalidLinearForm(
            "a single nonzero digit defines no linear form".into(),
        ));
    }
    if !(2..=k).contains(&j) {
        return Err(Error::InvalidLinearForm(format!("j = {j} outside 2..={k}")));
    }
    let b = BigInt::from(ds.base());
    let denominator: BigInt = digits[j - 1..]
        .iter()
        .map(|&(pos, d)| BigInt::from(d) * b.pow(pos))
        .sum();
    Ok(BaseForm {
        numerator: rebuild(&ds.decode(), set),
        denominator,
    })
}

/// Exact value of `|N b^{-n_j} (d_k b^{n_k - n_j} + ... + d_j)^{-1} - 1|`.
///
/// Digits are numbered `1..=k` from the units digit upward; `j` ranges over `2..=k`.
pub fn lambda_base_exact(ds: &DigitString, set: &PrimeSet, j: usize) -> Result<BigRational> {
    let f = base_form(ds, set, j)?;
    let ratio = BigRational::new(f.numerator, f.denominator);
    let one = BigRational::one();
    Ok(if ratio > one { ratio - one } else { one - ratio })
}

/// Certified enclosure of the base-b linear form `Lambda_j`; the returned
/// interval excludes zero.
pub fn lambda_base(ds: &DigitString, set: &PrimeSet, j: usize, cap: u32) -> Result<IntervalReal> {
    let f = base_form(ds, set, j)?;
    with_escalation(cap, |p| {
        let num = IntervalReal::from_integer(f.numerator.clone(), p);
        let den = IntervalReal::from_integer(f.denominator.clone(), p);
        let lambda = num.div(&den).ok()?.sub(&IntervalReal::one(p)).abs();
        (lambda.certified_sign() == Some(1)).then_some(lambda)
    })
}

/// Outcome of checking `Lambda_j < b^{-(n_k - n_{j-1} - 1)}`.
#[derive(Debug, Clone)]
pub struct BaseGapAudit {
    pub lambda: IntervalReal,
    /// `n_k - n_{j-1} - 1`
    pub gap: i64,
    pub holds: bool,
}

/// Decides `log Lambda_j <= -(n_k - n_{j-1} - 1) log b` with certified intervals.
pub fn audit_base_gap(ds: &DigitString, set: &PrimeSet, j: usize, cap: u32) -> Result<BaseGapAudit> {
    let lambda = lambda_base(ds, set, j, cap)?;
    let digits = ds.nonzero();
    let top = i64::from(digits[digits.len() - 1].0);
    let below = i64::from(digits[j - 2].0);
    let gap = top - below - 1;
    let f = base_form(ds, set, j)?;
    let b = BigInt::from(ds.base());
    let holds = with_escalation(cap, |p| {
        let lam = IntervalReal::from_integer(f.numerator.clone(), p)
            .div(&IntervalReal::from_integer(f.denominator.clone(), p))
            .ok()?
            .sub(&IntervalReal::one(p))
            .abs();
        let power = IntervalReal::from_integer(b.pow(gap.unsigned_abs() as u32), p);
        let bound = if gap >= 0 { power.recip().ok()? } else { power };
        if lam.certainly_lt(&bound) {
            Some(true)
        } else if bound.certainly_lt(&lam) {
            Some(false)
        } else {
            None
        }
    })?;
    Ok(BaseGapAudit { lambda, gap, holds })
}

/// `sqrt(5) N / (gamma^{m_j} + ... + gamma^{m_k})` in `Q(sqrt(5))`.
fn zeck_ratio(n: &BigNat, z: &ZeckendorfRepr, j: usize) -> Result<QuadraticNumber> {
    if &zeckendorf_decode(z) != n {
        return Err(Error::InvalidLinearForm(format!(
            "Zeckendorf digits {z} do not decode to {n}"
        )));
    }
    let k = z.digit_count();
    if !(1..=k).contains(&j) {
        return Err(Error::InvalidLinearForm(format!("j = {j} outside 1..={k}")));
    }
    // indices are stored largest first, so the suffix m_j..m_k is a prefix
    let sum = z.indices()[..=k - j]
        .iter()
        .fold(QuadraticNumber::zero(5), |acc, &m| acc + gamma_pow(m as u32));
    let root5_n = QuadraticNumber::new(
        BigRational::zero(),
        BigRational::from_integer(BigInt::from(n.clone())),
        5,
    );
    Ok(root5_n * sum.recip())
}

/// Exact `sqrt(5) N / (gamma^{m_j} + ... + gamma^{m_k}) - 1`.
pub fn lambda_zeck_exact(n: &BigNat, z: &ZeckendorfRepr, j: usize) -> Result<QuadraticNumber> {
    Ok(zeck_ratio(n, z, j)? - QuadraticNumber::one(5))
}

/// Certified enclosure of `|sqrt(5) N / (gamma^{m_j} + ... + gamma^{m_k}) - 1|`;
/// `j = 1` is the full form. The returned interval excludes zero.
pub fn lambda_zeck(n: &BigNat, z: &ZeckendorfRepr, j: usize, cap: u32) -> Result<IntervalReal> {
    let form = lambda_zeck_exact(n, z, j)?;
    with_escalation(cap, |p| {
        let lambda = quadratic_enclosure(&form, p).abs();
        (lambda.certified_sign() == Some(1)).then_some(lambda)
    })
}

/// Outcome of checking `Lambda < gamma^{-m_k + 1}` for the full Zeckendorf form.
#[derive(Debug, Clone)]
pub struct ZeckGapAudit {
    pub lambda: IntervalReal,
    /// `m_k`, the largest index.
    pub top_index: usize,
    pub holds: bool,
}

pub fn audit_zeck_gap(n: &BigNat, z: &ZeckendorfRepr, cap: u32) -> Result<ZeckGapAudit> {
    let lambda = lambda_zeck(n, z, 1, cap)?;
    let form = lambda_zeck_exact(n, z, 1)?;
    let top = z.leading_index();
    let bound = QuadraticNumber::golden().recip().pow(top as u32 - 1);
    let holds = with_escalation(cap, |p| {
        let lam = quadratic_enclosure(&form, p).abs();
        let b = quadratic_enclosure(&bound, p);
        if lam.certainly_lt(&b) {
            Some(true)
        } else if b.certainly_lt(&lam) {
            Some(false)
        } else {
            None
        }
    })?;
    Ok(ZeckGapAudit {
        lambda,
        top_index: top,
        holds,
    })
}
