//! Numeration systems and smoothness analysis for sparse-digit integers.
//!
//! The crate covers three positional systems (Zeckendorf, base-b, Ostrowski over
//! a quadratic irrational), increasing-order enumerators for integers with few
//! nonzero digits, exact S-part and greatest-prime-factor arithmetic, and the
//! explicit lower bounds for linear forms in logarithms together with certified
//! interval evaluation of the forms themselves.

pub mod arithmetic;
pub mod bounds;
pub mod error;
pub mod numeration;
pub mod ostrowski;
pub mod sparse_enum;

pub use error::{Error, Result};

/// Arbitrary-precision non-negative integer used for every exact quantity.
pub type BigNat = num_bigint::BigUint;
