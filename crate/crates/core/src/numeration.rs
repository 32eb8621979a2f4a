//! Fibonacci numbers, Zeckendorf codecs and base-b digit strings.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{BigNat, Error, Result};

/// Largest `n` with `F_n < 2^64`.
pub const MAX_FIB_U64_INDEX: usize = 93;

fn fib_cache() -> &'static RwLock<Vec<BigNat>> {
    static CACHE: OnceLock<RwLock<Vec<BigNat>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![BigNat::zero(), BigNat::one()]))
}

fn extend_cache_to(n: usize) {
    let mut table = fib_cache().write().expect("fib cache poisoned");
    while table.len() <= n {
        let len = table.len();
        let next = &table[len - 1] + &table[len - 2];
        table.push(next);
    }
}

/// `F_n` with `F_0 = 0`, `F_1 = 1`, `F_{n+2} = F_{n+1} + F_n`.
pub fn fib(n: usize) -> BigNat {
    {
        let table = fib_cache().read().expect("fib cache poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    extend_cache_to(n);
    fib_cache().read().expect("fib cache poisoned")[n].clone()
}

/// Fibonacci numbers `F_0..=F_93`, the full range that fits in a `u64`.
pub fn fib_table_u64() -> &'static [u64; MAX_FIB_U64_INDEX + 1] {
    static TABLE: OnceLock<[u64; MAX_FIB_U64_INDEX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u64; MAX_FIB_U64_INDEX + 1];
        t[1] = 1;
        for i in 2..=MAX_FIB_U64_INDEX {
            t[i] = t[i - 1] + t[i - 2];
        }
        t
    })
}

/// Smallest index `i` with `F_i > n`, growing the cache as needed.
fn first_fib_index_above(n: &BigNat) -> usize {
    loop {
        {
            let table = fib_cache().read().expect("fib cache poisoned");
            if table.last().is_some_and(|last| last > n) {
                return table.partition_point(|f| f <= n);
            }
        }
        let len = fib_cache().read().expect("fib cache poisoned").len();
        extend_cache_to(len * 2);
    }
}

/// Zeckendorf representation: a strictly decreasing list of Fibonacci indices,
/// each at least 2, with consecutive entries differing by at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeckendorfRepr {
    indices: Vec<usize>,
}

impl ZeckendorfRepr {
    /// Validates and wraps an index list given largest first.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidZeckendorf("empty index list".into()));
        }
        for w in indices.windows(2) {
            if w[0] < w[1] + 2 {
                return Err(Error::InvalidZeckendorf(format!(
                    "indices {} and {} are not separated by at least 2",
                    w[0], w[1]
                )));
            }
        }
        let smallest = *indices.last().unwrap();
        if smallest < 2 {
            return Err(Error::InvalidZeckendorf(format!(
                "index {smallest} is below 2"
            )));
        }
        Ok(Self { indices })
    }

    /// Indices, largest first.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn digit_count(&self) -> usize {
        self.indices.len()
    }

    /// Largest index, `m_k`.
    pub fn leading_index(&self) -> usize {
        self.indices[0]
    }
}

impl fmt::Display for ZeckendorfRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| format!("F{i}")).collect();
        f.write_str(&parts.join("+"))
    }
}

/// Greedy Zeckendorf decomposition of `n >= 1`.
pub fn zeckendorf_encode(n: &BigNat) -> Result<ZeckendorfRepr> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if let Some(small) = n.to_u64() {
        return Ok(ZeckendorfRepr {
            indices: zeckendorf_indices_u64(small),
        });
    }
    let top = first_fib_index_above(n) - 1;
    let table = fib_cache().read().expect("fib cache poisoned");
    let mut rest = n.clone();
    let mut indices = Vec::new();
    let mut i = top;
    while !rest.is_zero() {
        if table[i] <= rest {
            rest -= &table[i];
            indices.push(i);
            // the next index is never usable
            i -= 1;
        }
        i -= 1;
    }
    Ok(ZeckendorfRepr { indices })
}

/// Zeckendorf indices of a machine-word integer, largest first; empty for 0.
pub fn zeckendorf_indices_u64(mut n: u64) -> Vec<usize> {
    let table = fib_table_u64();
    let mut indices = Vec::new();
    let mut i = table.partition_point(|&f| f <= n);
    while n > 0 {
        i -= 1;
        if table[i] <= n {
            n -= table[i];
            indices.push(i);
            i -= 1;
        }
    }
    indices
}

/// Number of Zeckendorf digits of a machine-word integer; 0 for 0.
pub fn zeckendorf_digit_count_u64(n: u64) -> usize {
    zeckendorf_indices_u64(n).len()
}

pub fn zeckendorf_decode(r: &ZeckendorfRepr) -> BigNat {
    r.indices.iter().map(|&i| fib(i)).sum()
}

pub fn zeckendorf_digit_count(n: &BigNat) -> Result<usize> {
    Ok(zeckendorf_encode(n)?.digit_count())
}

/// Base-b expansion stored sparsely as `(position, digit)` pairs with nonzero
/// digits, in increasing position order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    base: u32,
    digits: Vec<(u32, u32)>,
}

impl DigitString {
    /// Builds a digit string from `(position, digit)` pairs in any order.
    /// Zero digits are dropped; repeated positions and out-of-range digits are rejected.
    pub fn from_pairs(base: u32, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDigits(format!("base {base} is below 2")));
        }
        let mut digits: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, d)| d != 0).collect();
        digits.sort_unstable();
        for w in digits.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidDigits(format!("position {} repeated", w[0].0)));
            }
        }
        if let Some(&(pos, d)) = digits.iter().find(|&&(_, d)| d >= base) {
            return Err(Error::InvalidDigits(format!(
                "digit {d} at position {pos} is not below base {base}"
            )));
        }
        if digits.is_empty() {
            return Err(Error::InvalidDigits("no nonzero digit".into()));
        }
        Ok(Self { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Nonzero `(position, digit)` pairs, lowest position first.
    pub fn nonzero(&self) -> &[(u32, u32)] {
        &self.digits
    }

    pub fn nonzero_count(&self) -> usize {
        self.digits.len()
    }

    /// Digit at `position`, zero when absent.
    pub fn digit(&self, position: u32) -> u32 {
        self.digits
            .binary_search_by_key(&position, |&(p, _)| p)
            .map(|i| self.digits[i].1)
            .unwrap_or(0)
    }

    pub fn highest_position(&self) -> u32 {
        self.digits.last().unwrap().0
    }

    pub fn decode(&self) -> BigNat {
        let base = BigNat::from(self.base);
        self.digits
            .iter()
            .map(|&(p, d)| BigNat::from(d) * base.pow(p))
            .sum()
    }
}

/// Standard base-b expansion of `n >= 1`.
pub fn base_digits(n: &BigNat, base: u32) -> Result<DigitString> {
    if base < 2 {
        return Err(Error::InvalidDigits(format!("base {base} is below 2")));
    }
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let b = BigUint::from(base);
    let mut rest = n.clone();
    let mut digits = Vec::new();
    let mut pos = 0u32;
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&b);
        let d = r.to_u32().expect("remainder below base");
        if d != 0 {
            digits.push((pos, d));
        }
        rest = q;
        pos += 1;
    }
    Ok(DigitString { base, digits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> BigNat {
        BigNat::from(v)
    }

    #[test]
    fn fib_small_values() {
        assert_eq!(fib(0), nat(0));
        assert_eq!(fib(1), nat(1));
        assert_eq!(fib(11), nat(89));
        assert_eq!(fib(93), nat(fib_table_u64()[93]));
    }

    #[test]
    fn encode_examples() {
        assert_eq!(zeckendorf_encode(&nat(1)).unwrap().indices(), &[2]);
        assert_eq!(zeckendorf_encode(&nat(89)).unwrap().indices(), &[11]);
        assert_eq!(zeckendorf_encode(&nat(100)).unwrap().indices(), &[11, 6, 4]);
        assert_eq!(zeckendorf_encode(&nat(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn encode_beyond_u64() {
        let n = fib(200) + fib(150) + fib(3);
        let r = zeckendorf_encode(&n).unwrap();
        assert_eq!(r.indices(), &[200, 150, 3]);
        assert_eq!(zeckendorf_decode(&r), n);
        let m = fib(120) - 1u32;
        let r = zeckendorf_encode(&m).unwrap();
        assert_eq!(zeckendorf_decode(&r), m);
        assert_eq!(r.digit_count(), 59);
    }

    #[test]
    fn decode_examples_and_rejections() {
        let r = ZeckendorfRepr::new(vec![2]).unwrap();
        assert_eq!(zeckendorf_decode(&r), nat(1));
        let r = ZeckendorfRepr::new(vec![11, 6, 4]).unwrap();
        assert_eq!(zeckendorf_decode(&r), nat(100));
        let r = ZeckendorfRepr::new(vec![10]).unwrap();
        assert_eq!(zeckendorf_decode(&r), nat(55));

        assert!(ZeckendorfRepr::new(vec![5, 4]).is_err());
        assert!(ZeckendorfRepr::new(vec![4, 1]).is_err());
        assert!(ZeckendorfRepr::new(vec![]).is_err());
        assert!(ZeckendorfRepr::new(vec![4, 6]).is_err());
    }

    #[test]
    fn digit_counts() {
        assert_eq!(zeckendorf_digit_count(&fib(12)).unwrap(), 1);
        assert_eq!(zeckendorf_digit_count(&nat(100)).unwrap(), 3);
        assert_eq!(zeckendorf_digit_count(&nat(4)).unwrap(), 2);
        assert_eq!(zeckendorf_digit_count_u64(0), 0);
    }

    #[test]
    fn base_digit_examples() {
        let d = base_digits(&nat(9), 10).unwrap();
        assert_eq!(d.nonzero(), &[(0, 9)]);
        let d = base_digits(&nat(1001), 10).unwrap();
        assert_eq!(d.nonzero(), &[(0, 1), (3, 1)]);
        assert_eq!(d.nonzero_count(), 2);
        assert_eq!(d.digit(3), 1);
        assert_eq!(d.digit(1), 0);
        let d = base_digits(&nat(255), 2).unwrap();
        assert_eq!(d.nonzero_count(), 8);
        assert!(d.nonzero().iter().enumerate().all(|(i, &(p, v))| p == i as u32 && v == 1));
        assert!(base_digits(&nat(0), 10).is_err());
        assert!(base_digits(&nat(5), 1).is_err());
    }

    #[test]
    fn digit_string_validation() {
        assert!(DigitString::from_pairs(10, [(0, 10)]).is_err());
        assert!(DigitString::from_pairs(10, [(1, 3), (1, 4)]).is_err());
        assert!(DigitString::from_pairs(10, [(2, 0)]).is_err());
        let d = DigitString::from_pairs(10, [(1, 9), (0, 6), (5, 0)]).unwrap();
        assert_eq!(d.decode(), nat(96));
        assert_eq!(d.highest_position(), 1);
    }
}
