//! Iterated natural logarithms with an explicit domain guard.
//!
//! A logarithm is only taken of an argument strictly greater than `e`; any
//! step that would fall outside that domain makes the whole quantity
//! undefined (`None`) instead of producing a negative value or NaN.

use std::f64::consts::E;

use sparsenum_core::bounds::ln_biguint;
use sparsenum_core::BigNat;

/// `log^(times) n`, guarded. `times` must be at least 1.
pub fn iterated_ln(n: &BigNat, times: u32) -> Option<f64> {
    assert!(times >= 1);
    if *n <= BigNat::from(2u32) {
        return None;
    }
    let mut v = ln_biguint(n);
    for _ in 1..times {
        v = guarded_ln(v)?;
    }
    Some(v)
}

/// `ln x` for `x > e`.
pub fn guarded_ln(x: f64) -> Option<f64> {
    (x > E).then(|| x.ln())
}

/// `log n, log log n, ..., log^(5) n`; entry `i` is `log^(i+1) n`.
pub fn ln_tower(n: &BigNat) -> [Option<f64>; 5] {
    let mut out = [None; 5];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = iterated_ln(n, i as u32 + 1);
    }
    out
}
