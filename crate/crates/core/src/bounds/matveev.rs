//! Explicit lower bound for linear forms in logarithms and the digit-gap
//! bounds derived from it.

use crate::arithmetic::PrimeSet;
use crate::{BigNat, Error, Result};

use super::height::ln_biguint;

/// Data for the lower bound on `log |a_1^{b_1} ... a_n^{b_n} - 1|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatveevInstance {
    degree: u32,
    log_a: Vec<f64>,
    exponents: Vec<i64>,
}

/// The separate factors of the bound, kept apart so they can be audited one by one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatveevFactors {
    /// `2 * 30^(n+3)`
    pub leading: f64,
    /// `n^4.5`
    pub n_power: f64,
    /// `D^(n+2)`
    pub degree_power: f64,
    /// `log(e D)`
    pub log_e_degree: f64,
    /// `log A_1 * ... * log A_n`
    pub log_a_product: f64,
    /// `log(e B')`
    pub log_e_b_prime: f64,
}

impl MatveevFactors {
    pub fn product(&self) -> f64 {
        self.leading
            * self.n_power
            * self.degree_power
            * self.log_e_degree
            * self.log_a_product
            * self.log_e_b_prime
    }
}

impl MatveevInstance {
    /// `log_a[j]` must be positive and should already dominate
    /// `max{h(a_j), |log a_j| / D, 0.16 / D}` (see [`log_a_floor`]).
    pub fn new(degree: u32, log_a: Vec<f64>, exponents: Vec<i64>) -> Result<Self> {
        let n = log_a.len();
        if n < 2 {
            return Err(Error::InvalidBoundInput(format!(
                "need at least two logarithms, got {n}"
            )));
        }
        if exponents.len() != n {
            return Err(Error::InvalidBoundInput(format!(
                "{} exponents for {n} logarithms",
                exponents.len()
            )));
        }
        if degree == 0 {
            return Err(Error::InvalidBoundInput("field degree must be positive".into()));
        }
        if let Some(bad) = log_a.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidBoundInput(format!("log A = {bad} is not positive")));
        }
        if exponents.iter().all(|&b| b == 0) {
            return Err(Error::InvalidBoundInput("all exponents are zero".into()));
        }
        Ok(Self {
            degree,
            log_a,
            exponents,
        })
    }

    pub fn len(&self) -> usize {
        self.log_a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn log_a(&self) -> &[f64] {
        &self.log_a
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// `B' = max{1, max_j |b_j| log A_j / log A_n}`.
    pub fn b_prime(&self) -> f64 {
        let last = *self.log_a.last().unwrap();
        self.exponents
            .iter()
            .zip(&self.log_a)
            .map(|(&b, &la)| b.unsigned_abs() as f64 * la / last)
            .fold(1.0, f64::max)
    }

    pub fn factors(&self) -> MatveevFactors {
        let n = self.len() as i32;
        let d = f64::from(self.degree);
        MatveevFactors {
            leading: 2.0 * 30f64.powi(n + 3),
            n_power: f64::from(n).powf(4.5),
            degree_power: d.powi(n + 2),
            log_e_degree: 1.0 + d.ln(),
            log_a_product: self.log_a.iter().product(),
            log_e_b_prime: 1.0 + self.b_prime().ln(),
        }
    }
}

/// Smallest admissible `log A_j`: `max{h, |log a| / D, 0.16 / D}`.
pub fn log_a_floor(height: f64, log_abs_alpha: f64, degree: u32) -> f64 {
    let d = f64::from(degree);
    height.max(log_abs_alpha.abs() / d).max(0.16 / d)
}

/// `-2 * 30^(n+3) * n^4.5 * D^(n+2) * log(e D) * log A_1 ... log A_n * log(e B')`.
pub fn matveev_lower_bound(inst: &MatveevInstance) -> f64 {
    -inst.factors().product()
}

fn check_lemma_inputs(k: u32, min_k: u32, c: f64, big_c: f64) -> Result<()> {
    if k < min_k {
        return Err(Error::InvalidBoundInput(format!("k = {k} is below {min_k}")));
    }
    if !(c > 0.0 && big_c > 0.0) {
        return Err(Error::InvalidBoundInput(
            "constants c and C must be positive".into(),
        ));
    }
    Ok(())
}

/// `c C^s k (prod log q_i) log(k log q_s)`, the common base of both digit bounds.
fn lemma_base(k: u32, set: &PrimeSet, c: f64, big_c: f64) -> f64 {
    let k = f64::from(k);
    let s = set.len() as i32;
    let log_qs = (set.largest() as f64).ln();
    c * big_c.powi(s) * k * set.log_product() * (k * log_qs).ln()
}

fn log_a_factor(a: &BigNat) -> f64 {
    ln_biguint(a).max(1.0)
}

/// Upper bound for the top exponent `n_k` of a k-digit base-b integer with
/// cofactor `A`: `(c C^s k (prod log q_i) log(k log q_s))^(k-1) max{1, log A}`.
///
/// `c` and `C` stand for unspecified effective constants.
pub fn lemma32_rhs(k: u32, set: &PrimeSet, a: &BigNat, c: f64, big_c: f64) -> Result<f64> {
    check_lemma_inputs(k, 2, c, big_c)?;
    Ok(lemma_base(k, set, c, big_c).powi(k as i32 - 1) * log_a_factor(a))
}

/// Zeckendorf analogue of [`lemma32_rhs`] with outer exponent `k`.
pub fn lemma33_rhs(k: u32, set: &PrimeSet, a: &BigNat, c: f64, big_c: f64) -> Result<f64> {
    check_lemma_inputs(k, 1, c, big_c)?;
    Ok(lemma_base(k, set, c, big_c).powi(k as i32) * log_a_factor(a))
}
