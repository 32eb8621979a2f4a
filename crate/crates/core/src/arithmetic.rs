//! Factorization-based analytics: S-parts, greatest prime factors, smoothness
//! and increasing streams of integral S-units.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::ops::Range;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{BigNat, Error, Result};

/// Default trial-division bound before switching to Pollard-Brent rho.
pub const DEFAULT_TRIAL_BOUND: u32 = 1_000_000;

/// Miller-Rabin bases; deterministic for every n < 3.3 * 10^24.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
/// Extra bases used above the deterministic range.
const MR_EXTRA_BASES: [u64; 12] = [43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(DEFAULT_TRIAL_BOUND))
}

/// Consecutive runs of trial primes whose product fits in a `u64`.
fn prime_groups() -> &'static [(u64, Range<usize>)] {
    static GROUPS: OnceLock<Vec<(u64, Range<usize>)>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        let primes = small_primes();
        let mut out = Vec::new();
        let (mut start, mut prod) = (0, 1u64);
        for (i, &p) in primes.iter().enumerate() {
            match prod.checked_mul(u64::from(p)) {
                Some(v) => prod = v,
                None => {
                    out.push((prod, start..i));
                    start = i;
                    prod = u64::from(p);
                }
            }
        }
        out.push((prod, start..primes.len()));
        out
    })
}

/// Divides out every prime up to `bound`. Big values are reduced modulo a
/// group product first so one multi-limb division screens several primes;
/// once the remainder fits a machine word the rest runs in `u64`.
fn trial_divide(rest: &mut BigNat, bound: u32, out: &mut Factorization) {
    let primes = small_primes();
    for (m, range) in prime_groups() {
        if primes[range.start] > bound || rest.is_one() {
            return;
        }
        if let Some(mut r) = rest.to_u64() {
            for &p in primes[range.start..].iter().take_while(|&&p| p <= bound) {
                let p = u64::from(p);
                if p * p > r {
                    break;
                }
                let mut e = 0;
                while r % p == 0 {
                    r /= p;
                    e += 1;
                }
                if e > 0 {
                    out.add(BigNat::from(p), e);
                }
            }
            *rest = BigNat::from(r);
            return;
        }
        let residue = (&*rest % *m).to_u64().expect("below the modulus");
        for &p in primes[range.clone()].iter().take_while(|&&p| p <= bound) {
            if !residue.is_multiple_of(u64::from(p)) {
                continue;
            }
            let mut e = 0;
            while (&*rest % p).is_zero() {
                *rest /= p;
                e += 1;
            }
            out.add(BigNat::from(p), e);
        }
    }
}

/// Primes up to and including `bound`.
pub fn sieve(bound: u32) -> Vec<u32> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, base: u64) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = BigUint::from(base).modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test: deterministic below 3.3 * 10^24, a 25-base strong
/// probable-prime test above.
pub fn is_prime(n: &BigNat) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in MR_BASES.iter().chain(&MR_EXTRA_BASES) {
        if (n % p).is_zero() {
            return false;
        }
    }
    MR_BASES
        .iter()
        .chain(&MR_EXTRA_BASES)
        .all(|&a| strong_probable_prime(n, a))
}

/// Strictly increasing, nonempty set of distinct primes `q_1 < ... < q_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    /// Accepts the primes in any order; duplicates and composites are rejected.
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::InvalidPrimeSet("empty".into()));
        }
        primes.sort_unstable();
        if let Some(w) = primes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPrimeSet(format!("{} listed twice", w[0])));
        }
        if let Some(&c) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(Error::InvalidPrimeSet(format!("{c} is not prime")));
        }
        Ok(Self { primes })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest prime `q_s`.
    pub fn largest(&self) -> u64 {
        *self.primes.last().unwrap()
    }

    /// Product `log q_1 * ... * log q_s`.
    pub fn log_product(&self) -> f64 {
        self.primes.iter().map(|&q| (q as f64).ln()).product()
    }

    /// Product of the primes.
    pub fn radical(&self) -> BigNat {
        self.primes.iter().map(|&q| BigNat::from(q)).product()
    }
}

impl std::fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Prime-exponent map plus the unfactored cofactor.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub factors: BTreeMap<BigNat, u32>,
    pub cofactor: BigNat,
}

impl Factorization {
    pub fn product(&self) -> BigNat {
        self.factors
            .iter()
            .map(|(p, &e)| p.pow(e))
            .fold(self.cofactor.clone(), |acc, x| acc * x)
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    fn add(&mut self, p: BigNat, e: u32) {
        *self.factors.entry(p).or_insert(0) += e;
    }
}

/// Effort limits for [`factorize_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division covers every prime up to this bound (capped at 10^6).
    pub trial_bound: u32,
    /// Total rho iterations allowed across all seeds for one call.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: 20_000_000,
        }
    }
}

/// Complete factorization of `n >= 1` with the default budget.
pub fn factorize(n: &BigNat) -> Result<Factorization> {
    factorize_with(n, &FactorBudget::default())
}

pub fn factorize_with(n: &BigNat, budget: &FactorBudget) -> Result<Factorization> {
    assert!(!n.is_zero(), "factorize requires n >= 1");
    let mut out = Factorization {
        factors: BTreeMap::new(),
        cofactor: BigNat::one(),
    };
    let mut rest = n.clone();
    let bound = budget.trial_bound.min(DEFAULT_TRIAL_BOUND);
    trial_divide(&mut rest, bound, &mut out);
    if rest.is_one() {
        return Ok(out);
    }
    let mut remaining = budget.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        // Everything below bound^2 with no factor up to bound is prime.
        let bound_sq = u64::from(bound) * u64::from(bound);
        if m.to_u64().is_some_and(|v| v < bound_sq) || is_prime(&m) {
            out.add(m, 1);
            continue;
        }
        match pollard_brent(&m, &mut remaining) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => {
                let mut left = m;
                for x in stack {
                    left *= x;
                }
                return Err(Error::FactorBudgetExhausted {
                    cofactor: left.to_string(),
                });
            }
        }
    }
    Ok(out)
}

/// Pollard-Brent rho with deterministic seeds `c = 1, 2, ...`. Returns a
/// nontrivial divisor of the composite `n` or `None` once the budget runs out.
fn pollard_brent(n: &BigUint, remaining: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        return pollard_brent_u64(small, remaining).map(BigUint::from);
    }
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let mut seed = 1u64;
    while *remaining > 0 {
        let c = BigUint::from(seed);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                *remaining = remaining.saturating_sub(steps);
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
            if *remaining == 0 && g.is_one() {
                return None;
            }
        }
        if &g == n {
            // Batch overshot; redo the last block one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
        seed += 1;
    }
    None
}

/// Same walk as [`pollard_brent`] in machine arithmetic, for odd `n < 2^64`.
fn pollard_brent_u64(n: u64, remaining: &mut u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let mulmod = |a: u64, b: u64| (u128::from(a) * u128::from(b) % u128::from(n)) as u64;
    let mut seed = 1u64;
    while *remaining > 0 {
        let c = seed % n;
        let f = |x: u64| ((u128::from(x) * u128::from(x) + u128::from(c)) % u128::from(n)) as u64;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let (mut g, mut q, mut r) = (1u64, 1u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y));
                }
                *remaining = remaining.saturating_sub(steps);
                g = q.gcd(&n);
                k += steps;
            }
            r *= 2;
            if *remaining == 0 && g == 1 {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
        seed += 1;
    }
    None
}

/// `n = part * cofactor` with `part` the S-part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPart {
    /// `[n]_S`.
    pub part: BigNat,
    /// `A`, coprime to every prime of S.
    pub cofactor: BigNat,
    /// `r_i`, aligned with `S.primes()`.
    pub exponents: Vec<u32>,
}

/// S-part of `n >= 1` by repeated exact division.
pub fn s_part(n: &BigNat, set: &PrimeSet) -> SPart {
    assert!(!n.is_zero(), "s_part requires n >= 1");
    let mut rest = n.clone();
    let mut part = BigNat::one();
    let mut exponents = Vec::with_capacity(set.len());
    for &q in set.primes() {
        let q = BigNat::from(q);
        let mut e = 0;
        loop {
            let (quot, rem) = rest.div_rem(&q);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            part *= &q;
            e += 1;
        }
        exponents.push(e);
    }
    SPart {
        part,
        cofactor: rest,
        exponents,
    }
}

/// `P[n]`, with `P[1] = 1`.
pub fn greatest_prime_factor(n: &BigNat) -> Result<BigNat> {
    let f = factorize(n)?;
    Ok(f.factors.keys().next_back().cloned().unwrap_or_else(BigNat::one))
}

/// Whether `P[n] <= bound`.
pub fn is_smooth(n: &BigNat, bound: f64) -> Result<bool> {
    let p = greatest_prime_factor(n)?;
    Ok(match p.to_f64() {
        Some(v) => v <= bound,
        None => false,
    })
}

/// Integral S-units up to a limit in strictly increasing order, starting at 1.
///
/// Each value `x` carries the index of its largest prime; it is only extended
/// by primes at or above that index, so every S-unit is produced exactly once.
pub struct SUnitStream {
    heap: BinaryHeap<Reverse<(BigNat, usize)>>,
    primes: Vec<BigNat>,
    limit: BigNat,
}

impl Iterator for SUnitStream {
    type Item = BigNat;

    fn next(&mut self) -> Option<BigNat> {
        let Reverse((x, from)) = self.heap.pop()?;
        for (i, q) in self.primes.iter().enumerate().skip(from) {
            let next = &x * q;
            if next <= self.limit {
                self.heap.push(Reverse((next, i)));
            }
        }
        Some(x)
    }
}

pub fn s_unit_stream(set: &PrimeSet, limit: &BigNat) -> SUnitStream {
    let mut heap = BinaryHeap::new();
    if !limit.is_zero() {
        heap.push(Reverse((BigNat::one(), 0)));
    }
    SUnitStream {
        heap,
        primes: set.primes().iter().map(|&q| BigNat::from(q)).collect(),
        limit: limit.clone(),
    }
}
