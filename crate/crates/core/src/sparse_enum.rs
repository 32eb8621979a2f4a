//! Increasing-order enumeration of integers with few Zeckendorf digits or few
//! nonzero base-b digits.
//!
//! Both enumerators walk a tree over digit patterns in which every child is
//! strictly larger than its parent and every pattern has exactly one parent.
//! Popping the smallest pending pattern from a min-heap and pushing its
//! children therefore yields every value once, in increasing order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{One, Zero};

use crate::numeration::fib;
use crate::{BigNat, Error, Result};

/// Integers with at most `k` Zeckendorf digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseFibSpec {
    k: usize,
}

impl SparseFibSpec {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDigits("k must be at least 1".into()));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Integers not divisible by `b` with at most `k` nonzero base-b digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseBaseSpec {
    b: u32,
    k: usize,
}

impl SparseBaseSpec {
    pub fn new(b: u32, k: usize) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidDigits(format!("base {b} is below 2")));
        }
        if k < 2 {
            return Err(Error::InvalidDigits("k must be at least 2".into()));
        }
        Ok(Self { b, k })
    }

    pub fn base(&self) -> u32 {
        self.b
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Zeckendorf index set, smallest index first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct FibPattern(Vec<usize>);

/// Stream of `F_j^(k)` values in increasing order.
///
/// Pattern tree rooted at `{2}`: a child either raises the smallest index by
/// one (keeping a gap of two to the next index) or, when the smallest index
/// is at least 4 and fewer than `k` digits are used, inserts index 2.
pub struct FibSparseStream {
    k: usize,
    limit: Option<BigNat>,
    heap: BinaryHeap<Reverse<(BigNat, FibPattern)>>,
}

impl FibSparseStream {
    fn new(spec: SparseFibSpec, limit: Option<BigNat>) -> Self {
        let mut s = Self {
            k: spec.k,
            limit,
            heap: BinaryHeap::new(),
        };
        s.offer(BigNat::one(), FibPattern(vec![2]));
        s
    }

    fn offer(&mut self, value: BigNat, pattern: FibPattern) {
        if self.limit.as_ref().is_none_or(|l| &value <= l) {
            self.heap.push(Reverse((value, pattern)));
        }
    }
}

impl Iterator for FibSparseStream {
    type Item = BigNat;

    fn next(&mut self) -> Option<BigNat> {
        let Reverse((value, FibPattern(idx))) = self.heap.pop()?;
        let lowest = idx[0];
        if idx.len() == 1 || lowest + 3 <= idx[1] {
            let mut raised = idx.clone();
            raised[0] += 1;
            // F_{i+1} - F_i = F_{i-1}
            let v = &value + fib(lowest - 1);
            self.offer(v, FibPattern(raised));
        }
        if lowest >= 4 && idx.len() < self.k {
            let mut extended = Vec::with_capacity(idx.len() + 1);
            extended.push(2);
            extended.extend_from_slice(&idx);
            self.offer(&value + 1u32, FibPattern(extended));
        }
        Some(value)
    }
}

/// Every `N <= limit` with at most `k` Zeckendorf digits, increasing.
pub fn fib_sparse_stream(spec: SparseFibSpec, limit: &BigNat) -> FibSparseStream {
    FibSparseStream::new(spec, Some(limit.clone()))
}

/// The first `count` terms `F_1^(k), ..., F_count^(k)`.
pub fn fib_sparse_terms(spec: SparseFibSpec, count: usize) -> Vec<BigNat> {
    FibSparseStream::new(spec, None).take(count).collect()
}

/// Nonzero base-b digits `(position, digit)`, units digit first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct BasePattern(Vec<(u32, u32)>);

/// Stream of `u_j^(k)` values in increasing order.
///
/// Pattern tree rooted at `1`. A single units digit `d < b - 1` has child
/// `d + 1`. Any pattern may gain a new top digit 1 one position above its
/// current top (if fewer than `k` digits are used). A pattern with at least
/// two digits may also raise its top digit by one, or, when the top digit is
/// 1, move it up one position.
pub struct BaseSparseStream {
    b: u32,
    k: usize,
    base: BigNat,
    limit: Option<BigNat>,
    heap: BinaryHeap<Reverse<(BigNat, BasePattern)>>,
}

impl BaseSparseStream {
    fn new(spec: SparseBaseSpec, limit: Option<BigNat>) -> Self {
        let mut s = Self {
            b: spec.b,
            k: spec.k,
            base: BigNat::from(spec.b),
            limit,
            heap: BinaryHeap::new(),
        };
        s.offer(BigNat::one(), BasePattern(vec![(0, 1)]));
        s
    }

    fn offer(&mut self, value: BigNat, pattern: BasePattern) {
        if self.limit.as_ref().is_none_or(|l| &value <= l) {
            self.heap.push(Reverse((value, pattern)));
        }
    }

    fn power(&self, pos: u32) -> BigNat {
        self.base.pow(pos)
    }
}

impl Iterator for BaseSparseStream {
    type Item = BigNat;

    fn next(&mut self) -> Option<BigNat> {
        let Reverse((value, BasePattern(digits))) = self.heap.pop()?;
        let h = digits.len();
        let (top_pos, top_digit) = digits[h - 1];
        if h == 1 && top_digit < self.b - 1 {
            self.offer(&value + 1u32, BasePattern(vec![(0, top_digit + 1)]));
        }
        if h >= 2 && top_digit < self.b - 1 {
            let mut d = digits.clone();
            d[h - 1].1 += 1;
            let v = &value + self.power(top_pos);
            self.offer(v, BasePattern(d));
        }
        if h >= 2 && top_digit == 1 {
            let mut d = digits.clone();
            d[h - 1].0 += 1;
            let v = &value + self.power(top_pos + 1) - self.power(top_pos);
            self.offer(v, BasePattern(d));
        }
        if h < self.k {
            let mut d = digits.clone();
            d.push((top_pos + 1, 1));
            let v = &value + self.power(top_pos + 1);
            self.offer(v, BasePattern(d));
        }
        Some(value)
    }
}

/// Every `N <= limit` with `b` not dividing `N` and at most `k` nonzero digits, increasing.
pub fn base_sparse_stream(spec: SparseBaseSpec, limit: &BigNat) -> BaseSparseStream {
    BaseSparseStream::new(spec, Some(limit.clone()))
}

/// The first `count` terms `u_1^(k), ..., u_count^(k)`.
pub fn base_sparse_terms(spec: SparseBaseSpec, count: usize) -> Vec<BigNat> {
    BaseSparseStream::new(spec, None).take(count).collect()
}

/// Whether `n` belongs to the `u^(k)` sequence for base `b`.
pub fn is_base_sparse(n: &BigNat, spec: SparseBaseSpec) -> bool {
    if n.is_zero() {
        return false;
    }
    match crate::numeration::base_digits(n, spec.b) {
        Ok(ds) => ds.digit(0) != 0 && ds.nonzero_count() <= spec.k,
        Err(_) => false,
    }
}
