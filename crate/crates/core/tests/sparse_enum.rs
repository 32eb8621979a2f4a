use num_traits::ToPrimitive;
use sparsenum_core::numeration::fib;
use sparsenum_core::sparse_enum::{
    base_sparse_stream, base_sparse_terms, fib_sparse_stream, fib_sparse_terms, is_base_sparse,
    SparseBaseSpec, SparseFibSpec,
};
use sparsenum_core::BigNat;

fn u64s(v: impl Iterator<Item = BigNat>) -> Vec<u64> {
    v.map(|x| x.to_u64().unwrap()).collect()
}

/// Zeckendorf digit counts of 0..=limit by the recursion z(n) = 1 + z(n - F),
/// F the largest Fibonacci number not above n.
fn zeck_counts(limit: usize) -> Vec<u8> {
    let mut fibs = vec![1usize, 2];
    while *fibs.last().unwrap() <= limit {
        let l = fibs.len();
        fibs.push(fibs[l - 1] + fibs[l - 2]);
    }
    let mut z = vec![0u8; limit + 1];
    let mut top = 0;
    for n in 1..=limit {
        while fibs[top + 1] <= n {
            top += 1;
        }
        z[n] = 1 + z[n - fibs[top]];
    }
    z
}

fn base_count(mut n: u64, b: u64) -> usize {
    let mut c = 0;
    while n > 0 {
        c += usize::from(!n.is_multiple_of(b));
        n /= b;
    }
    c
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn k1_is_fibonacci() {
    let terms = fib_sparse_terms(SparseFibSpec::new(1).unwrap(), 79);
    for (j, t) in terms.iter().enumerate() {
        // F_j^(1) = F_{j+1}, j = 1, 2, ...
        assert_eq!(t, &fib(j + 2), "j={}", j + 1);
    }
}

#[test]
fn fib_streams_match_filter() {
    let limit = 1_000_000usize;
    let z = zeck_counts(limit);
    for k in 1..=4 {
        let spec = SparseFibSpec::new(k).unwrap();
        let got = u64s(fib_sparse_stream(spec, &BigNat::from(limit as u64)));
        let want: Vec<u64> = (1..=limit).filter(|&n| z[n] as usize <= k).map(|n| n as u64).collect();
        assert_eq!(got, want, "k={k}");
    }
}

#[test]
fn base_streams_match_filter() {
    let limit = 1_000_000u64;
    for b in [2u32, 3, 10] {
        for k in 2..=4 {
            let spec = SparseBaseSpec::new(b, k).unwrap();
            let got = u64s(base_sparse_stream(spec, &BigNat::from(limit)));
            let want: Vec<u64> = (1..=limit)
                .filter(|&n| n % b as u64 != 0 && base_count(n, b as u64) <= k)
                .collect();
            assert_eq!(got, want, "b={b} k={k}");
            assert!(got.iter().all(|&n| is_base_sparse(&BigNat::from(n), spec)));
        }
    }
}

#[test]
fn fib_counts_below_fibonacci() {
    // values below F_m use index sets inside {2..m-1}: C(m-1-t, t) sets of size t
    for m in 5..=60u64 {
        let bound = fib(m as usize) - 1u32;
        for k in 1..=5usize {
            let spec = SparseFibSpec::new(k).unwrap();
            let count = fib_sparse_stream(spec, &bound).count() as u64;
            let want: u64 = (1..=k as u64)
                .filter(|&t| t < m)
                .map(|t| binom(m - 1 - t, t))
                .sum();
            assert_eq!(count, want, "m={m} k={k}");
        }
    }
}

#[test]
fn base_counts_below_power() {
    // units digit nonzero, at most k-1 further nonzero digits among L-1 positions
    for b in [2u64, 7, 10] {
        for l in 1..=18u32 {
            let bound = BigNat::from(b).pow(l) - 1u32;
            for k in 2..=4usize {
                let spec = SparseBaseSpec::new(b as u32, k).unwrap();
                let count = base_sparse_stream(spec, &bound).count() as u64;
                let want: u64 = (0..k as u64)
                    .map(|t| (b - 1) * binom(u64::from(l) - 1, t) * (b - 1).pow(t as u32))
                    .sum();
                assert_eq!(count, want, "b={b} L={l} k={k}");
            }
        }
    }
}

#[test]
fn sequences_nest_in_k() {
    let limit = BigNat::from(200_000u32);
    for k in 1..=5 {
        let small: Vec<_> = fib_sparse_stream(SparseFibSpec::new(k).unwrap(), &limit).collect();
        let big: std::collections::BTreeSet<_> =
            fib_sparse_stream(SparseFibSpec::new(k + 1).unwrap(), &limit).collect();
        assert!(small.iter().all(|v| big.contains(v)));
    }
    let limit = BigNat::from(10_000_000u32);
    for k in 2..=5 {
        let small: Vec<_> =
            base_sparse_stream(SparseBaseSpec::new(10, k).unwrap(), &limit).collect();
        let big: std::collections::BTreeSet<_> =
            base_sparse_stream(SparseBaseSpec::new(10, k + 1).unwrap(), &limit).collect();
        assert!(small.iter().all(|v| big.contains(v)));
    }
}

#[test]
fn strictly_increasing_far_out() {
    let terms = fib_sparse_terms(SparseFibSpec::new(3).unwrap(), 50_000);
    assert!(terms.windows(2).all(|w| w[0] < w[1]));
    let terms = base_sparse_terms(SparseBaseSpec::new(2, 3).unwrap(), 50_000);
    assert!(terms.windows(2).all(|w| w[0] < w[1]));
}
