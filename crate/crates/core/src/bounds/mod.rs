//! Real quadratic arithmetic, Weil heights, explicit linear-form bounds and
//! certified interval evaluation.

pub mod height;
pub mod interval;
pub mod lambda;
pub mod matveev;
pub mod quadratic;

pub use height::{height, ln_abs_rational, ln_biguint, rational_height};
pub use interval::{with_escalation, IntervalReal, DEFAULT_PRECISION_CAP, START_PRECISION};
pub use lambda::{
    audit_base_gap, audit_zeck_gap, lambda_base, lambda_base_exact, lambda_zeck,
    lambda_zeck_exact, quadratic_enclosure, BaseGapAudit, ZeckGapAudit,
};
pub use matveev::{
    lemma32_rhs, lemma33_rhs, log_a_floor, matveev_lower_bound, MatveevFactors, MatveevInstance,
};
pub use quadratic::{gamma_pow, QuadraticNumber};
