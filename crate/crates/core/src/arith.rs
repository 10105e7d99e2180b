//! Sieves and multiplicative functions.
//!
//! [`SpfTable`] stores the smallest prime factor of every integer up to a
//! limit; τ, σ, P⁻, P⁺ and sorted divisor lists are read off it by repeated
//! division. [`PrimeList`] is a plain ascending list of primes used for the
//! products and sums over `p ≤ y`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Above this many entries the smallest-prime-factor table is built segment
/// by segment instead of with the linear sieve.
pub const LINEAR_SIEVE_MAX: u64 = 1 << 27;

/// Default ceiling on table entries (4 bytes each).
pub const DEFAULT_ENTRY_BUDGET: u64 = 1 << 29;

const SEGMENT_LEN: usize = 1 << 18;

#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

/// Build a smallest-prime-factor table for `2..=limit` with the default budget.
pub fn build_spf_table(limit: u64) -> Result<SpfTable> {
    SpfTable::with_budget(limit, DEFAULT_ENTRY_BUDGET)
}

impl SpfTable {
    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Range { what: "sieve limit", value: limit as f64, lo: 2.0, hi: budget as f64 });
        }
        if limit > budget || limit >= u32::MAX as u64 {
            return Err(Error::Resource { limit, budget: budget.min(u32::MAX as u64 - 1) });
        }
        let spf = if limit <= LINEAR_SIEVE_MAX {
            linear_sieve(limit as usize)
        } else {
            segmented_sieve(limit as usize, SEGMENT_LEN)
        };
        Ok(Self { limit, spf })
    }

    /// Force the segmented construction (used to cross-check both paths).
    pub fn segmented(limit: u64, segment_len: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Range { what: "sieve limit", value: limit as f64, lo: 2.0, hi: f64::INFINITY });
        }
        Ok(Self { limit, spf: segmented_sieve(limit as usize, segment_len.max(16)) })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit {
            Err(Error::Range { what: "n", value: n as f64, lo: 1.0, hi: self.limit as f64 })
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor; `None` for n = 1 (P⁻(1) = ∞).
    pub fn spf(&self, n: u64) -> Result<Option<u64>> {
        self.check(n)?;
        Ok(if n == 1 { None } else { Some(self.spf[n as usize] as u64) })
    }

    #[inline]
    pub(crate) fn spf_unchecked(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// Largest prime factor; `None` for n = 1.
    pub fn largest_prime_factor(&self, n: u64) -> Result<Option<u64>> {
        Ok(self.factorize(n)?.last().map(|&(p, _)| p))
    }

    /// Prime factorization in ascending prime order.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        self.check(n)?;
        Ok(self.factorize_unchecked(n))
    }

    pub(crate) fn factorize_unchecked(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        out
    }

    #[inline]
    pub(crate) fn tau_unchecked(&self, mut n: u64) -> u64 {
        let mut t = 1;
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut a = 1;
            n /= p;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            t *= a + 1;
        }
        t
    }

    pub fn primes(&self) -> PrimeList {
        PrimeList {
            limit: self.limit,
            primes: (2..=self.limit).filter(|&n| self.spf[n as usize] as u64 == n).collect(),
        }
    }
}

fn linear_sieve(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::with_capacity(estimate_prime_count(limit as u64));
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > limit {
                break;
            }
            spf[m] = p;
        }
    }
    spf
}

fn segmented_sieve(limit: usize, segment_len: usize) -> Vec<u32> {
    let root = isqrt(limit as u64) as usize;
    let base: Vec<usize> = sieve_primes(root as u64).into_iter().map(|p| p as usize).collect();
    let mut spf = vec![0u32; limit + 1];
    spf.par_chunks_mut(segment_len).enumerate().for_each(|(k, chunk)| {
        let lo = k * segment_len;
        let hi = lo + chunk.len();
        for &p in &base {
            if p * p >= hi {
                break;
            }
            let mut m = (p * p).max(lo.div_ceil(p) * p);
            while m < hi {
                let slot = &mut chunk[m - lo];
                if *slot == 0 {
                    *slot = p as u32;
                }
                m += p;
            }
        }
        for (i, slot) in chunk.iter_mut().enumerate() {
            if *slot == 0 && lo + i >= 2 {
                *slot = (lo + i) as u32;
            }
        }
    });
    spf
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn estimate_prime_count(n: u64) -> usize {
    if n < 17 {
        return 8;
    }
    let x = n as f64;
    (1.26 * x / x.ln()) as usize + 8
}

/// Odd-only sieve of Eratosthenes returning all primes ≤ limit.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let half = (limit as usize - 1) / 2; // index i ↔ 2i+1, i in 1..=half
    let mut composite = vec![false; half + 1];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j <= half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(estimate_prime_count(limit));
    out.push(2);
    out.extend((1..=half).filter(|&i| !composite[i]).map(|i| 2 * i as u64 + 1));
    out
}

/// Visit every prime ≤ limit in ascending order without storing them.
/// Segmented over odd numbers; memory is O(√limit + SEGMENT_LEN).
pub fn for_each_prime(limit: u64, mut f: impl FnMut(u64)) {
    if limit < 2 {
        return;
    }
    f(2);
    let base = sieve_primes(isqrt(limit));
    let seg = SEGMENT_LEN as u64;
    let mut flags = vec![false; SEGMENT_LEN];
    // Segment k covers odd numbers lo, lo+2, ..., lo + 2(seg−1).
    let mut lo = 3u64;
    while lo <= limit {
        let hi = (lo + 2 * (seg - 1)).min(limit);
        let count = ((hi - lo) / 2 + 1) as usize;
        flags[..count].fill(false);
        for &p in base.iter().skip(1) {
            if p * p > hi {
                break;
            }
            let mut m = (p * p).max(lo.div_ceil(p) * p);
            if m % 2 == 0 {
                m += p;
            }
            while m <= hi {
                flags[((m - lo) / 2) as usize] = true;
                m += 2 * p;
            }
        }
        for (i, &c) in flags[..count].iter().enumerate() {
            if !c {
                f(lo + 2 * i as u64);
            }
        }
        lo += 2 * seg;
    }
}

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone)]
pub struct PrimeList {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeList {
    pub fn new(limit: u64) -> Self {
        Self { limit, primes: sieve_primes(limit) }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// π(y) for y within the list limit.
    pub fn count_up_to(&self, y: u64) -> usize {
        self.primes.partition_point(|&p| p <= y)
    }

    /// Σ_{p≤y} log(1 − 1/p), compensated.
    pub fn log_mertens(&self, y: f64) -> Result<f64> {
        if y.is_nan() || y.floor() > self.limit as f64 {
            return Err(Error::Range { what: "y", value: y, lo: 0.0, hi: self.limit as f64 });
        }
        let cut = if y < 2.0 { 0 } else { self.count_up_to(y.floor() as u64) };
        let s: CompensatedSum = self.primes[..cut].iter().map(|&p| (-1.0 / p as f64).ln_1p()).collect();
        Ok(s.value())
    }
}

/// Π_{p≤y} (1 − 1/p); the empty product is 1.
pub fn mertens_product(y: f64, primes: &PrimeList) -> Result<f64> {
    Ok(primes.log_mertens(y)?.exp())
}

/// Π_{p≤y} (1 − 1/p)².
pub fn mertens_product_sq(y: f64, primes: &PrimeList) -> Result<f64> {
    Ok((2.0 * primes.log_mertens(y)?).exp())
}

/// Number of positive divisors.
pub fn tau(n: u64, table: &SpfTable) -> Result<u64> {
    table.check(n)?;
    Ok(table.tau_unchecked(n))
}

/// Sum of positive divisors.
pub fn sigma(n: u64, table: &SpfTable) -> Result<u64> {
    Ok(table.factorize(n)?.iter().map(|&(p, a)| (0..=a).map(|k| p.pow(k)).sum::<u64>()).product())
}

/// All divisors of n in increasing order.
pub fn divisors_sorted(n: u64, table: &SpfTable) -> Result<Vec<u64>> {
    let fac = table.factorize(n)?;
    Ok(divisors_from_factorization(&fac))
}

pub(crate) fn divisors_from_factorization(fac: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, a) in fac {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn streaming_primes_match_sieve() {
        for limit in [0u64, 1, 2, 3, 10, 97, 1000, 3 * SEGMENT_LEN as u64 + 17] {
            let mut got = Vec::new();
            for_each_prime(limit, |p| got.push(p));
            assert_eq!(got, sieve_primes(limit), "limit={limit}");
        }
    }

    #[test]
    fn spf_small_values() {
        let t = build_spf_table(10).unwrap();
        assert_eq!(t.spf(9).unwrap(), Some(3));
        assert_eq!(t.spf(7).unwrap(), Some(7));
        assert_eq!(t.spf(1).unwrap(), None);
        assert!(t.spf(11).is_err());
    }

    #[test]
    fn limit_one_rejected() {
        assert!(matches!(build_spf_table(1), Err(Error::Range { .. })));
    }

    #[test]
    fn budget_enforced() {
        assert!(matches!(SpfTable::with_budget(1000, 999), Err(Error::Resource { .. })));
    }

    #[test]
    fn prime_count_100_matches_trial_division() {
        let t = build_spf_table(100).unwrap();
        let oracle = (2..=100u64).filter(|&n| trial_division_is_prime(n)).count();
        assert_eq!(oracle, 25);
        assert_eq!((2..=100u64).filter(|&n| t.is_prime(n)).count(), oracle);
        assert_eq!(t.primes().len(), 25);
        assert_eq!(PrimeList::new(100).len(), 25);
    }

    #[test]
    fn segmented_matches_linear() {
        let a = build_spf_table(200_000).unwrap();
        let b = SpfTable::segmented(200_000, 1000).unwrap();
        assert_eq!(a.spf, b.spf);
    }

    #[test]
    fn tau_sigma_examples() {
        let t = build_spf_table(2048).unwrap();
        assert_eq!(tau(1, &t).unwrap(), 1);
        assert_eq!(tau(12, &t).unwrap(), 6);
        assert_eq!(tau(1024, &t).unwrap(), 11);
        assert_eq!(sigma(1, &t).unwrap(), 1);
        assert_eq!(sigma(7, &t).unwrap(), 8);
        assert_eq!(sigma(12, &t).unwrap(), 28);
        assert!(tau(2049, &t).is_err());
        assert!(sigma(0, &t).is_err());
    }

    #[test]
    fn divisor_examples() {
        let t = build_spf_table(100).unwrap();
        assert_eq!(divisors_sorted(1, &t).unwrap(), vec![1]);
        assert_eq!(divisors_sorted(6, &t).unwrap(), vec![1, 2, 3, 6]);
        let oracle: Vec<u64> = (1..=20).filter(|d| 20 % d == 0).collect();
        assert_eq!(divisors_sorted(20, &t).unwrap(), oracle);
    }

    #[test]
    fn tau_sigma_agree_with_divisor_lists() {
        let t = build_spf_table(100_000).unwrap();
        for n in 1..=100_000u64 {
            let d = divisors_sorted(n, &t).unwrap();
            assert_eq!(tau(n, &t).unwrap(), d.len() as u64);
            assert_eq!(sigma(n, &t).unwrap(), d.iter().sum::<u64>());
        }
    }

    #[test]
    fn mertens_examples() {
        let pl = PrimeList::new(100);
        assert_eq!(mertens_product(1.0, &pl).unwrap(), 1.0);
        assert!((mertens_product(2.0, &pl).unwrap() - 0.5).abs() < 1e-15);
        assert!((mertens_product(10.0, &pl).unwrap() - 8.0 / 35.0).abs() < 1e-15);
        assert!((mertens_product_sq(10.0, &pl).unwrap() - 64.0 / 1225.0).abs() < 1e-15);
        assert!(mertens_product(101.0, &pl).is_err());
    }

    #[test]
    fn mertens_formula_envelope() {
        let pl = PrimeList::new(100_000);
        let eg = crate::numeric::exp_neg_gamma();
        for y in [1e3, 1e4, 1e5] {
            let v = mertens_product(y, &pl).unwrap() * y.ln();
            let slack = 3.0 / y.ln();
            assert!(v >= eg * (1.0 - slack) && v <= eg * (1.0 + slack), "y={y}: {v}");
        }
    }

    #[test]
    fn mertens_product_matches_rational_product_at_small_y() {
        // Exact rational product for p ≤ 50 evaluated in u128.
        let pl = PrimeList::new(50);
        let (mut num, mut den) = (1u128, 1u128);
        for &p in pl.as_slice() {
            num *= (p - 1) as u128;
            den *= p as u128;
        }
        let exact = num as f64 / den as f64;
        let got = mertens_product(50.0, &pl).unwrap();
        assert!((got / exact - 1.0).abs() < 1e-14);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(10_000))]
            #[test]
            fn tau_is_multiplicative(m in 1u64..1000, n in 1u64..1000) {
                let mut n = n;
                while gcd(m, n) > 1 {
                    n /= gcd(m, n);
                }
                let t = table();
                prop_assert_eq!(tau(m * n, t).unwrap(), tau(m, t).unwrap() * tau(n, t).unwrap());
            }
        }

        fn table() -> &'static SpfTable {
            static T: std::sync::OnceLock<SpfTable> = std::sync::OnceLock::new();
            T.get_or_init(|| build_spf_table(1_000_000).unwrap())
        }

        proptest! {
            #[test]
            fn spf_divides_and_is_minimal(n in 2u64..1_000_000) {
                let p = table().spf(n).unwrap().unwrap();
                prop_assert_eq!(n % p, 0);
                prop_assert!((2..p).all(|d| n % d != 0));
            }
        }
    }
}
