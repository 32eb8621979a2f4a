//! One runner per experiment. Every runner is deterministic for a given
//! configuration: rows are produced in sequence order regardless of the
//! worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sparsenum_core::arithmetic::{greatest_prime_factor, s_part, s_unit_stream, PrimeSet};
use sparsenum_core::bounds::{
    audit_base_gap, audit_zeck_gap, lambda_zeck, ln_abs_rational, ln_biguint, log_a_floor,
    matveev_lower_bound, rational_height, MatveevInstance,
};
use sparsenum_core::numeration::{base_digits, zeckendorf_encode, DigitString};
use sparsenum_core::sparse_enum::{
    base_sparse_stream, fib_sparse_stream, SparseBaseSpec, SparseFibSpec,
};
use sparsenum_core::{BigNat, Error as CoreError};

use crate::config::{ExperimentConfig, ExperimentId};
use crate::error::HarnessError;
use crate::logs::ln_tower;
use crate::report::{push_distribution, Cell, Report};

/// Maps `f` over `items` on `workers` threads, keeping input order.
fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> Result<Vec<R>, HarnessError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers <= 1 {
        return Ok(items.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    match cfg.id {
        ExperimentId::Thm11 => run_thm11(cfg),
        ExperimentId::Thm12 => run_thm12(cfg),
        ExperimentId::Thm13 => run_thm13(cfg),
        ExperimentId::Thm14 => run_thm14(cfg),
        ExperimentId::Thm15 => run_thm15(cfg),
        ExperimentId::MatveevAudit => run_matveev_audit(cfg),
    }
}

fn ln_nat(n: &BigNat) -> f64 {
    ln_biguint(n)
}

/// `log [n]_S / log n`, zero when the S-part is 1.
fn s_ratio(n: &BigNat, part: &BigNat) -> f64 {
    if part.is_one() {
        0.0
    } else {
        ln_nat(part) / ln_nat(n)
    }
}

/// `c * log2 n * log3 n / log4 n` when every iterated log is defined.
fn gpf_lower_curve(n: &BigNat, c: f64) -> Option<f64> {
    let t = ln_tower(n);
    Some(c * t[1]? * t[2]? / t[3]?)
}

fn zeck_text(n: &BigNat) -> String {
    zeckendorf_encode(n).map(|z| z.to_string()).unwrap_or_default()
}

fn base_text(n: &BigNat, b: u32) -> String {
    if b <= 36 {
        return n.to_str_radix(b);
    }
    match base_digits(n, b) {
        Ok(ds) => ds
            .nonzero()
            .iter()
            .rev()
            .map(|(p, d)| format!("{d}@{p}"))
            .collect::<Vec<_>>()
            .join("+"),
        Err(_) => String::new(),
    }
}

fn gpf_cell(p: &Result<BigNat, CoreError>) -> Cell {
    match p {
        Ok(v) => Cell::Int(v.clone()),
        Err(_) => Cell::Text("budget-exhausted".into()),
    }
}

/// Summary entries for the S-part ratio: overall max and max over the upper half of the index range.
fn push_ratio_summary(report: &mut Report, indexed: &[(usize, f64)]) {
    let max = indexed.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let last_j = indexed.last().map_or(0, |r| r.0);
    let tail_start = last_j / 2 + 1;
    let tail_max = indexed
        .iter()
        .filter(|r| r.0 >= tail_start)
        .map(|r| r.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let finite = |x: f64| if x.is_finite() { Cell::Float(x) } else { Cell::Undefined };
    report.push_summary("max_ratio", finite(max));
    report.push_summary("tail_start_j", Cell::int(tail_start as u64));
    report.push_summary("tail_max_ratio", finite(tail_max));
}

/// S-parts of the terms of `F_j^(k)` and their size relative to the term.
pub fn run_thm11(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let spec = SparseFibSpec::new(cfg.k)?;
    let set = cfg.prime_set()?;
    let terms: Vec<(usize, BigNat)> = fib_sparse_stream(spec, &cfg.limit)
        .enumerate()
        .map(|(i, v)| (i + 1, v))
        .filter(|(_, v)| !v.is_one())
        .collect();
    let computed = par_map(cfg.workers, &terms, |(j, f)| {
        let sp = s_part(f, &set);
        let ratio = s_ratio(f, &sp.part);
        (*j, f.clone(), zeck_text(f), sp.part, ratio)
    })?;

    let mut report = Report::new(
        "thm11",
        vec!["j", "value", "zeckendorf", "s_part", "ratio"],
    );
    let mut indexed = Vec::with_capacity(computed.len());
    for (j, f, z, part, ratio) in computed {
        indexed.push((j, ratio));
        report.rows.push(vec![
            Cell::int(j as u64),
            Cell::Int(f),
            Cell::Text(z),
            Cell::Int(part),
            Cell::Float(ratio),
        ]);
    }
    report.push_summary("k", Cell::int(cfg.k as u64));
    report.push_summary("primes", Cell::Text(set.to_string()));
    report.push_summary("rows", Cell::int(report.rows.len() as u64));
    push_ratio_summary(&mut report, &indexed);
    Ok(report)
}

/// `j exp(log j / (104 log log j))`.
fn stewart_curve(j: usize) -> Option<f64> {
    let t = ln_tower(&BigNat::from(j as u64));
    Some(j as f64 * (t[0]? / (104.0 * t[1]?)).exp())
}

/// Greatest prime factors of `F_j^(k)` against the iterated-log lower curve.
pub fn run_thm12(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let spec = SparseFibSpec::new(cfg.k)?;
    let coeff = 1.0 / cfg.k as f64 - cfg.epsilon;
    let terms: Vec<(usize, BigNat)> = fib_sparse_stream(spec, &cfg.limit)
        .enumerate()
        .map(|(i, v)| (i + 1, v))
        .collect();
    let k1 = cfg.k == 1;
    let computed = par_map(cfg.workers, &terms, |(j, f)| {
        let p = greatest_prime_factor(f);
        let rhs = gpf_lower_curve(f, coeff);
        let stewart = if k1 { stewart_curve(*j) } else { None };
        (*j, f.clone(), p, rhs, stewart)
    })?;

    let mut report = Report::new(
        "thm12",
        vec!["j", "value", "zeckendorf", "gpf", "rhs", "holds", "stewart_ref"],
    );
    let mut slacks = Vec::new();
    let mut failures = 0u64;
    for (j, f, p, rhs, stewart) in computed {
        if p.is_err() {
            failures += 1;
        }
        let holds = match (&p, rhs) {
            (Ok(p), Some(r)) => {
                let pv = ln_nat(p).exp();
                slacks.push(pv - r);
                Some(pv > r)
            }
            _ => None,
        };
        report.rows.push(vec![
            Cell::int(j as u64),
            Cell::Int(f.clone()),
            Cell::Text(zeck_text(&f)),
            gpf_cell(&p),
            Cell::opt_float(rhs),
            Cell::opt_bool(holds),
            Cell::opt_float(stewart),
        ]);
    }
    report.push_summary("k", Cell::int(cfg.k as u64));
    report.push_summary("epsilon", Cell::Float(cfg.epsilon));
    report.push_summary("rows", Cell::int(report.rows.len() as u64));
    report.push_summary("defined_rows", Cell::int(slacks.len() as u64));
    report.push_summary("budget_failures", Cell::int(failures));
    push_distribution(&mut report, "slack", &slacks);
    Ok(report)
}

/// Threshold and required digit count for each variant, from the iterated logs of `n`.
fn thm13_pair(variant: u8, n: &BigNat) -> (Option<f64>, Option<f64>) {
    let t = ln_tower(n);
    let (l2, l3, l4, l5) = (t[1], t[2], t[3], t[4]);
    match variant {
        1 => (
            l2.zip(l4).map(|(a, b)| a / (2.0 * b)),
            l3,
        ),
        2 => {
            let inner = l2.zip(l3).zip(l4).map(|((a, b), c)| (a * b / c).sqrt());
            (inner, inner.map(|v| v / 3.0))
        }
        _ => (
            l3.zip(l4).zip(l5).map(|((a, b), c)| 0.5 * a * b / c),
            l2.zip(l3).map(|(a, b)| a / (2.0 * b)),
        ),
    }
}

/// Smoothness thresholds against Zeckendorf digit counts for every `2 <= n <= limit`.
pub fn run_thm13(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let limit = u64::try_from(&cfg.limit).expect("validated");
    let ns: Vec<u64> = (2..=limit).collect();
    let variant = cfg.variant;
    let computed = par_map(cfg.workers, &ns, |&n| {
        let big = BigNat::from(n);
        let (threshold, required) = thm13_pair(variant, &big);
        let digits = sparsenum_core::numeration::zeckendorf_digit_count_u64(n);
        let smooth = threshold.map(|t| {
            greatest_prime_factor(&big).map(|p| ln_nat(&p).exp() <= t)
        });
        (n, threshold, smooth, digits, required)
    })?;

    let mut report = Report::new(
        "thm13",
        vec![
            "n",
            "threshold",
            "is_smooth",
            "zeck_digits",
            "required_digits",
            "smooth_and_short",
        ],
    );
    let mut defined = 0u64;
    let mut flagged = 0u64;
    for (n, threshold, smooth, digits, required) in computed {
        let smooth = match smooth {
            Some(Ok(s)) => Some(s),
            Some(Err(e)) => return Err(HarnessError::Budget(e.to_string())),
            None => None,
        };
        if threshold.is_some() {
            defined += 1;
        }
        let short = match (smooth, required) {
            (Some(s), Some(r)) => Some(s && (digits as f64) < r),
            _ => None,
        };
        if short == Some(true) {
            flagged += 1;
        }
        report.rows.push(vec![
            Cell::int(n),
            Cell::opt_float(threshold),
            Cell::opt_bool(smooth),
            Cell::int(digits as u64),
            Cell::opt_float(required),
            Cell::opt_bool(short),
        ]);
    }
    report.push_summary("variant", Cell::int(u64::from(variant)));
    report.push_summary("rows", Cell::int(report.rows.len() as u64));
    report.push_summary("defined_rows", Cell::int(defined));
    report.push_summary("smooth_and_short_rows", Cell::int(flagged));
    let vacuous = defined == 0;
    report.push_summary("vacuous", Cell::Bool(vacuous));
    if vacuous {
        report.push_summary(
            "notice",
            Cell::Text(
                "smoothness threshold undefined for every n in range; iterated logarithms leave their domain"
                    .into(),
            ),
        );
    }
    Ok(report)
}

fn exponent_text(set: &PrimeSet, exps: &[u32]) -> String {
    let parts: Vec<String> = set
        .primes()
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(q, e)| format!("{q}^{e}"))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Zeckendorf digit counts of integral S-units against `(1 - eps) log2 n / log3 n`.
pub fn run_thm14(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let set = cfg.prime_set()?;
    let units: Vec<BigNat> = s_unit_stream(&set, &cfg.limit).collect();
    let coeff = 1.0 - cfg.epsilon;
    let computed = par_map(cfg.workers, &units, |n| {
        let z = zeckendorf_encode(n).expect("S-units are positive");
        let t = ln_tower(n);
        let rhs = t[1].zip(t[2]).map(|(a, b)| coeff * a / b);
        let exps = s_part(n, &set).exponents;
        (n.clone(), exps, z, rhs)
    })?;

    let mut report = Report::new(
        "thm14",
        vec!["n", "factorization", "zeckendorf", "zeck_digits", "rhs", "slack"],
    );
    let mut slacks = Vec::new();
    for (n, exps, z, rhs) in computed {
        let digits = z.digit_count();
        let slack = rhs.map(|r| digits as f64 - r);
        if let Some(s) = slack {
            slacks.push(s);
        }
        report.rows.push(vec![
            Cell::Int(n),
            Cell::Text(exponent_text(&set, &exps)),
            Cell::Text(z.to_string()),
            Cell::int(digits as u64),
            Cell::opt_float(rhs),
            Cell::opt_float(slack),
        ]);
    }
    report.push_summary("primes", Cell::Text(set.to_string()));
    report.push_summary("epsilon", Cell::Float(cfg.epsilon));
    report.push_summary("rows", Cell::int(report.rows.len() as u64));
    report.push_summary("defined_rows", Cell::int(slacks.len() as u64));
    push_distribution(&mut report, "slack", &slacks);
    Ok(report)
}

/// S-parts and greatest prime factors of `u_j^(k)`.
pub fn run_thm15(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let spec = SparseBaseSpec::new(cfg.b, cfg.k)?;
    let set = cfg.prime_set()?;
    let coeff = 1.0 / (cfg.k as f64 - 1.0) - cfg.epsilon;
    let terms: Vec<(usize, BigNat)> = base_sparse_stream(spec, &cfg.limit)
        .enumerate()
        .map(|(i, v)| (i + 1, v))
        .filter(|(_, v)| !v.is_one())
        .collect();
    let b = cfg.b;
    let computed = par_map(cfg.workers, &terms, |(j, u)| {
        let sp = s_part(u, &set);
        let ratio = s_ratio(u, &sp.part);
        let p = greatest_prime_factor(u);
        let rhs = gpf_lower_curve(u, coeff);
        (*j, u.clone(), base_text(u, b), sp.part, ratio, p, rhs)
    })?;

    let mut report = Report::new(
        "thm15",
        vec!["j", "value", "digits", "s_part", "ratio", "gpf", "rhs", "holds"],
    );
    let mut indexed = Vec::with_capacity(computed.len());
    let mut slacks = Vec::new();
    let mut failures = 0u64;
    for (j, u, digits, part, ratio, p, rhs) in computed {
        indexed.push((j, ratio));
        if p.is_err() {
            failures += 1;
        }
        let holds = match (&p, rhs) {
            (Ok(p), Some(r)) => {
                let pv = ln_nat(p).exp();
                slacks.push(pv - r);
                Some(pv > r)
            }
            _ => None,
        };
        report.rows.push(vec![
            Cell::int(j as u64),
            Cell::Int(u),
            Cell::Text(digits),
            Cell::Int(part),
            Cell::Float(ratio),
            gpf_cell(&p),
            Cell::opt_float(rhs),
            Cell::opt_bool(holds),
        ]);
    }
    report.push_summary("b", Cell::int(u64::from(cfg.b)));
    report.push_summary("k", Cell::int(cfg.k as u64));
    report.push_summary("primes", Cell::Text(set.to_string()));
    report.push_summary("epsilon", Cell::Float(cfg.epsilon));
    report.push_summary("rows", Cell::int(report.rows.len() as u64));
    push_ratio_summary(&mut report, &indexed);
    report.push_summary("defined_rows", Cell::int(slacks.len() as u64));
    report.push_summary("budget_failures", Cell::int(failures));
    push_distribution(&mut report, "slack", &slacks);
    Ok(report)
}

/// One row of the bound audit.
#[derive(Debug, Clone)]
enum AuditTask {
    /// `|prod alpha_j^{b_j} - 1|` for rational `alpha_j`.
    Matveev {
        alphas: Vec<BigRational>,
        exponents: Vec<i64>,
    },
    /// Base-b form `Lambda_j` against `b^{-(n_k - n_{j-1} - 1)}`.
    BaseGap { digits: DigitString, j: usize },
    /// Full Zeckendorf form against `gamma^{-m_k + 1}`, plus nonvanishing of every suffix.
    ZeckGap { n: BigNat },
}

struct AuditRow {
    kind: &'static str,
    instance: String,
    bound: f64,
    log_lambda: f64,
    slack: f64,
    holds: bool,
}

fn rational_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

/// Exact `|prod alpha_j^{b_j} - 1|`.
pub fn exact_lambda(alphas: &[BigRational], exponents: &[i64]) -> BigRational {
    let prod = alphas
        .iter()
        .zip(exponents)
        .fold(BigRational::one(), |acc, (a, &e)| {
            acc * a.pow(i32::try_from(e).expect("small exponent"))
        });
    (prod - BigRational::one()).abs()
}

/// The Matveev instance for rational bases in `Q` (degree 1).
pub fn rational_instance(
    alphas: &[BigRational],
    exponents: &[i64],
) -> Result<MatveevInstance, CoreError> {
    let log_a: Vec<f64> = alphas
        .iter()
        .map(|a| {
            let h = rational_height(a)?;
            Ok(log_a_floor(h, ln_abs_rational(a), 1))
        })
        .collect::<Result<_, CoreError>>()?;
    MatveevInstance::new(1, log_a, exponents.to_vec())
}

fn eval_task(task: &AuditTask, set: &PrimeSet, cap: u32) -> AuditRow {
    match task {
        AuditTask::Matveev { alphas, exponents } => {
            let instance = alphas
                .iter()
                .zip(exponents)
                .map(|(a, e)| format!("{}^{e}", rational_text(a)))
                .collect::<Vec<_>>()
                .join("*");
            let lambda = exact_lambda(alphas, exponents);
            match rational_instance(alphas, exponents) {
                Ok(inst) => {
                    let bound = matveev_lower_bound(&inst);
                    let log_lambda = ln_abs_rational(&lambda);
                    AuditRow {
                        kind: "matveev",
                        instance,
                        bound,
                        log_lambda,
                        slack: log_lambda - bound,
                        holds: log_lambda >= bound,
                    }
                }
                Err(e) => failed_row("matveev", format!("{instance}: {e}")),
            }
        }
        AuditTask::BaseGap { digits, j } => {
            let n = digits.decode();
            let instance = format!("N={n} b={} j={j}", digits.base());
            match audit_base_gap(digits, set, *j, cap) {
                Ok(a) => {
                    let bound = -(a.gap as f64) * f64::from(digits.base()).ln();
                    let log_lambda = a.lambda.ln_midpoint();
                    AuditRow {
                        kind: "base-gap",
                        instance,
                        bound,
                        log_lambda,
                        slack: bound - log_lambda,
                        holds: a.holds,
                    }
                }
                Err(e) => failed_row("base-gap", format!("{instance}: {e}")),
            }
        }
        AuditTask::ZeckGap { n } => {
            let z = zeckendorf_encode(n).expect("positive");
            let instance = format!("N={n} ({z})");
            let suffixes_ok =
                (1..=z.digit_count()).all(|j| lambda_zeck(n, &z, j, cap).is_ok());
            match audit_zeck_gap(n, &z, cap) {
                Ok(a) => {
                    let golden_ln = ((1.0 + 5f64.sqrt()) / 2.0).ln();
                    let bound = -((a.top_index as f64) - 1.0) * golden_ln;
                    let log_lambda = a.lambda.ln_midpoint();
                    AuditRow {
                        kind: "zeck-gap",
                        instance,
                        bound,
                        log_lambda,
                        slack: bound - log_lambda,
                        holds: a.holds && suffixes_ok,
                    }
                }
                Err(e) => failed_row("zeck-gap", format!("{instance}: {e}")),
            }
        }
    }
}

fn failed_row(kind: &'static str, instance: String) -> AuditRow {
    AuditRow {
        kind,
        instance,
        bound: f64::NAN,
        log_lambda: f64::NAN,
        slack: f64::NAN,
        holds: false,
    }
}

fn random_matveev(rng: &mut ChaCha8Rng) -> AuditTask {
    loop {
        let n = rng.gen_range(2..=3);
        let alphas: Vec<BigRational> = (0..n)
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.gen_range(1..=30)),
                    BigInt::from(rng.gen_range(1..=30)),
                )
            })
            .collect();
        let exponents: Vec<i64> = (0..n).map(|_| rng.gen_range(-12..=12)).collect();
        if alphas.iter().any(|a| a.is_one()) || exponents.iter().all(|&e| e == 0) {
            continue;
        }
        if exact_lambda(&alphas, &exponents).is_zero() {
            continue;
        }
        return AuditTask::Matveev { alphas, exponents };
    }
}

fn random_sparse(rng: &mut ChaCha8Rng, b: u32, max_pos: usize) -> DigitString {
    let k = rng.gen_range(2..=5);
    let mut pairs = vec![(0u32, rng.gen_range(1..b))];
    for pos in sample(rng, max_pos, k - 1) {
        pairs.push((pos as u32 + 1, rng.gen_range(1..b)));
    }
    DigitString::from_pairs(b, pairs).expect("valid digits")
}

/// Deterministic audit of the explicit bound and the digit-gap inequalities.
pub fn run_matveev_audit(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let set = cfg.prime_set()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rat = |n: i64| BigRational::from_integer(BigInt::from(n));

    let mut tasks = vec![
        AuditTask::Matveev {
            alphas: vec![rat(2), rat(3)],
            exponents: vec![3, -2],
        },
        AuditTask::ZeckGap {
            n: BigNat::from(55u32),
        },
    ];
    for _ in 0..cfg.count {
        tasks.push(random_matveev(&mut rng));
    }
    for (b, max_pos) in [(10u32, 60usize), (2, 200)] {
        for _ in 0..cfg.count {
            let digits = random_sparse(&mut rng, b, max_pos);
            for j in 2..=digits.nonzero_count() {
                tasks.push(AuditTask::BaseGap {
                    digits: digits.clone(),
                    j,
                });
            }
        }
    }
    for _ in 0..cfg.count {
        let n: u64 = rng.gen_range(1..=1_000_000_000_000_000);
        tasks.push(AuditTask::ZeckGap {
            n: BigNat::from(n),
        });
    }

    let cap = cfg.precision_cap;
    let rows = par_map(cfg.workers, &tasks, |t| eval_task(t, &set, cap))?;

    let mut report = Report::new(
        "matveev-audit",
        vec!["kind", "instance", "bound", "log_lambda", "slack", "holds"],
    );
    let mut violations = 0u64;
    let mut matveev_slacks = Vec::new();
    for row in rows {
        if !row.holds {
            violations += 1;
        }
        if row.kind == "matveev" {
            matveev_slacks.push(row.slack);
        }
        report.rows.push(vec![
            Cell::Text(row.kind.into()),
            Cell::Text(row.instance),
            Cell::Float(row.bound),
            Cell::Float(row.log_lambda),
            Cell::Float(row.slack),
            Cell::Bool(row.holds),
        ]);
    }
    report.push_summary("seed", Cell::int(cfg.seed));
    report.push_summary("rows", Cell::int(report.rows.len() as u64));
    report.push_summary("violations", Cell::int(violations));
    push_distribution(&mut report, "matveev_slack", &matveev_slacks);
    Ok(report)
}

/// Number of audit rows whose inequality failed, read back from a report.
pub fn audit_violations(report: &Report) -> u64 {
    match report.summary_value("violations") {
        Some(Cell::Int(v)) => u64::try_from(v).unwrap_or(u64::MAX),
        _ => 0,
    }
}
