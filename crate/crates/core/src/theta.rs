//! θ-chain sets and exact divisor statistics.
//!
//! For an admissible θ (θ(1) ≥ 2, θ(n) ≥ P⁺(n)) the set B_θ contains 1 and
//! every n = p₁^a₁ ⋯ p_k^a_k (p₁ < … < p_k) with p_i ≤ θ(p₁^a₁ ⋯ p_{i−1}^a_{i−1}).
//! θ(n) = n·t gives the t-dense integers, θ(n) = σ(n) + 1 the practical
//! numbers. Members are generated depth first by appending prime powers
//! p^a with P⁺(n) < p ≤ θ(n), so cost is proportional to |B(x)|.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{sieve_primes, SpfTable};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Largest n accepted by the subset-sum practicality oracle.
pub const SUBSET_SUM_MAX: u64 = 1_000_000;

/// A positive rational t = num/den, kept exact so that p ≤ n·t is decided
/// without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Config(format!("ratio {num}/{den} must be positive")));
        }
        let g = gcd(num, den);
        Ok(Self { num: num / g, den: den / g })
    }

    /// The exact dyadic value of a finite positive double.
    pub fn from_f64(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0 && t < (1u64 << 40) as f64) {
            return Err(Error::Config(format!("t = {t} is not a usable ratio")));
        }
        let bits = t.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        if e >= 0 {
            Ratio::new(mant << e, 1)
        } else {
            let shift = (-e) as u32;
            let tz = mant.trailing_zeros().min(shift);
            let (m, s) = (mant >> tz, shift - tz);
            if s > 62 {
                return Err(Error::Config(format!("t = {t} has too fine a binary expansion")));
            }
            Ratio::new(m, 1u64 << s)
        }
    }

    /// Parse a decimal literal such as `2.5` exactly.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse ratio {s:?}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            return Ratio::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: u64 = digits.parse().map_err(|_| bad())?;
        Ratio::new(num, 10u64.pow(frac.len() as u32))
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// ⌊n·t⌋, saturating.
    #[inline]
    pub fn floor_mul(&self, n: u64) -> u64 {
        let v = n as u128 * self.num as u128 / self.den as u128;
        v.min(u64::MAX as u128) as u64
    }

    /// a ≤ b·t, exactly.
    #[inline]
    pub fn le_scaled(&self, a: u64, b: u64) -> bool {
        a as u128 * self.den as u128 <= b as u128 * self.num as u128
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}", self.as_f64())
        }
    }
}

/// An admissible θ.
#[derive(Debug, Clone)]
pub enum ThetaRule {
    /// θ(n) = n·t (t-dense integers).
    Dense(Ratio),
    /// θ(n) = σ(n) + 1 (practical numbers).
    Practical,
    /// θ(n) = values[n − 1] for 1 ≤ n ≤ values.len(); `f64::INFINITY` is allowed.
    Custom(Arc<[f64]>),
}

impl ThetaRule {
    pub fn dense(t: f64) -> Result<Self> {
        Self::dense_ratio(Ratio::from_f64(t)?)
    }

    pub fn dense_ratio(t: Ratio) -> Result<Self> {
        if !t.le_scaled(2, 1) {
            return Err(Error::Config(format!("dense rule needs t ≥ 2, got {t}")));
        }
        Ok(ThetaRule::Dense(t))
    }

    pub fn practical() -> Self {
        ThetaRule::Practical
    }

    /// Tabulated θ, validated against θ(1) ≥ 2 and θ(n) ≥ P⁺(n).
    pub fn custom(values: Vec<f64>, table: &SpfTable) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("custom θ table is empty".into()));
        }
        if values.len() as u64 > table.limit() {
            return Err(Error::Config("custom θ table longer than the sieve".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Config("custom θ contains NaN".into()));
        }
        if values[0] < 2.0 {
            return Err(Error::Config(format!("θ(1) = {} < 2", values[0])));
        }
        for (i, &v) in values.iter().enumerate().skip(1) {
            let n = i as u64 + 1;
            let big = table.largest_prime_factor(n)?.unwrap_or(1);
            if v < big as f64 {
                return Err(Error::Config(format!("θ({n}) = {v} < P⁺({n}) = {big}")));
            }
        }
        Ok(ThetaRule::Custom(values.into()))
    }

    pub fn tag(&self) -> String {
        match self {
            ThetaRule::Dense(t) => format!("dense({t})"),
            ThetaRule::Practical => "practical".into(),
            ThetaRule::Custom(_) => "custom".into(),
        }
    }

    /// ⌊θ(n)⌋ saturated to `u64::MAX` (which also encodes θ = ∞), given σ(n).
    /// `None` when n lies outside a custom table.
    #[inline]
    pub fn bound(&self, n: u64, sigma_n: u64) -> Option<u64> {
        match self {
            ThetaRule::Dense(t) => Some(t.floor_mul(n)),
            ThetaRule::Practical => Some(sigma_n.saturating_add(1)),
            ThetaRule::Custom(v) => {
                let x = *v.get((n as usize).checked_sub(1)?)?;
                Some(if x >= u64::MAX as f64 { u64::MAX } else { x.floor() as u64 })
            }
        }
    }

    fn bound_or_err(&self, n: u64, sigma_n: u64) -> Result<u64> {
        self.bound(n, sigma_n).ok_or(Error::Range {
            what: "custom θ argument",
            value: n as f64,
            lo: 1.0,
            hi: match self {
                ThetaRule::Custom(v) => v.len() as f64,
                _ => f64::INFINITY,
            },
        })
    }

    /// Largest prime that can ever be appended while enumerating B(x).
    fn prime_ceiling(&self, x: u64) -> u64 {
        let c = match self {
            ThetaRule::Dense(t) => (x as f64 * t.as_f64()).sqrt().ceil() as u64 + 2,
            // σ(n) + 1 ≤ n(2 + log n), so min(θ(n), x/n) ≤ √(x(2 + log x)).
            ThetaRule::Practical => (x as f64 * (2.0 + (x as f64).ln())).sqrt().ceil() as u64 + 2,
            ThetaRule::Custom(_) => x,
        };
        c.min(x).max(2)
    }
}

fn sigma_prime_power(p: u64, a: u32) -> u64 {
    let (mut pk, mut s) = (1u64, 1u64);
    for _ in 0..a {
        pk *= p;
        s += pk;
    }
    s
}

/// Walk the ascending prime-power chain of n; returns the admissible prefix.
fn chain_prefix(fac: &[(u64, u32)], rule: &ThetaRule) -> Result<(u64, usize)> {
    let (mut prefix, mut sig) = (1u64, 1u64);
    for (i, &(p, a)) in fac.iter().enumerate() {
        if p > rule.bound_or_err(prefix, sig)? {
            return Ok((prefix, i));
        }
        prefix *= p.pow(a);
        sig *= sigma_prime_power(p, a);
    }
    Ok((prefix, fac.len()))
}

/// n ∈ B_θ by the chain condition.
pub fn is_in_b(n: u64, rule: &ThetaRule, table: &SpfTable) -> Result<bool> {
    let fac = table.factorize(n)?;
    Ok(chain_prefix(&fac, rule)?.1 == fac.len())
}

/// Unique m = n·r with n ∈ B_θ and r = 1 or P⁻(r) > θ(n).
pub fn factor_nr(m: u64, rule: &ThetaRule, table: &SpfTable) -> Result<(u64, u64)> {
    let fac = table.factorize(m)?;
    let (n, _) = chain_prefix(&fac, rule)?;
    Ok((n, m / n))
}

/// Consecutive divisors of n have ratio ≤ t.
pub fn is_t_dense_by_divisors(n: u64, t: Ratio, table: &SpfTable) -> Result<bool> {
    let d = crate::arith::divisors_sorted(n, table)?;
    Ok(d.windows(2).all(|w| t.le_scaled(w[1], w[0])))
}

/// Every m ≤ n is a sum of distinct divisors of n (bitset subset-sum DP).
pub fn is_practical_by_subset_sum(n: u64, table: &SpfTable) -> Result<bool> {
    if n > SUBSET_SUM_MAX {
        return Err(Error::Scale { n, max: SUBSET_SUM_MAX });
    }
    let divs = crate::arith::divisors_sorted(n, table)?;
    let bits = n as usize + 1;
    let words = bits.div_ceil(64);
    let mut reach = vec![0u64; words];
    reach[0] = 1;
    for &d in &divs {
        let (ws, bs) = ((d / 64) as usize, (d % 64) as u32);
        for i in (ws..words).rev() {
            let src = i - ws;
            let mut v = reach[src] << bs;
            if bs > 0 && src > 0 {
                v |= reach[src - 1] >> (64 - bs);
            }
            reach[i] |= v;
        }
    }
    let tail = bits % 64;
    if tail != 0 {
        reach[words - 1] &= (1u64 << tail) - 1;
    }
    let full = reach.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    Ok(full == bits)
}

/// One member of B(x) together with the data its children need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BNode {
    pub n: u64,
    pub tau: u64,
    pub sigma: u64,
    /// ⌊θ(n)⌋ (saturated).
    pub theta: u64,
}

/// Depth-first generator of B_θ(x).
#[derive(Debug, Clone)]
pub struct BEnumerator {
    rule: ThetaRule,
    x: u64,
    primes: Arc<Vec<u64>>,
}

impl BEnumerator {
    pub fn new(rule: &ThetaRule, x: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::Range { what: "x", value: 0.0, lo: 1.0, hi: f64::INFINITY });
        }
        Ok(Self { rule: rule.clone(), x, primes: Arc::new(sieve_primes(rule.prime_ceiling(x))) })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn rule(&self) -> &ThetaRule {
        &self.rule
    }

    fn root(&self) -> Result<BNode> {
        Ok(BNode { n: 1, tau: 1, sigma: 1, theta: self.rule.bound_or_err(1, 1)? })
    }

    /// Children of `node` whose new prime has index ≥ `from`, in ascending
    /// (prime, exponent) order, with the index after their prime.
    fn children(&self, node: &BNode, from: usize, mut visit: impl FnMut(BNode, usize) -> Result<()>) -> Result<()> {
        let lim = node.theta.min(self.x / node.n);
        for (idx, &p) in self.primes.iter().enumerate().skip(from) {
            if p > lim {
                break;
            }
            let (mut pk, mut sp, mut a) = (p, 1 + p, 1u64);
            loop {
                let n = node.n * pk;
                let sigma = node.sigma * sp;
                let child = BNode { n, tau: node.tau * (a + 1), sigma, theta: self.rule.bound_or_err(n, sigma)? };
                visit(child, idx + 1)?;
                if pk > self.x / node.n / p {
                    break;
                }
                pk *= p;
                sp += pk;
                a += 1;
            }
        }
        Ok(())
    }

    fn dfs(&self, node: BNode, from: usize, f: &mut impl FnMut(&BNode)) -> Result<()> {
        f(&node);
        self.children(&node, from, |c, next| self.dfs(c, next, f))
    }

    /// Visit every member of B(x) once, sequentially, in depth-first order.
    pub fn for_each(&self, mut f: impl FnMut(&BNode)) -> Result<()> {
        self.dfs(self.root()?, 0, &mut f)
    }

    /// Fold over B(x) with one accumulator for n = 1 followed by one per
    /// first-level subtree, returned in a fixed order so that reductions are
    /// identical for every thread count.
    pub fn par_fold<A, I, F>(&self, init: I, fold: F) -> Result<Vec<A>>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &BNode) + Sync,
    {
        let root = self.root()?;
        let mut firsts = Vec::new();
        self.children(&root, 0, |c, next| {
            firsts.push((c, next));
            Ok(())
        })?;
        let mut head = init();
        fold(&mut head, &root);
        let rest: Result<Vec<A>> = firsts
            .into_par_iter()
            .map(|(c, next)| {
                let mut acc = init();
                self.dfs(c, next, &mut |n| fold(&mut acc, n))?;
                Ok(acc)
            })
            .collect();
        let mut out = vec![head];
        out.extend(rest?);
        Ok(out)
    }

    /// All members, ascending.
    pub fn collect_sorted(&self) -> Result<Vec<u64>> {
        let parts = self.par_fold(Vec::new, |v: &mut Vec<u64>, n| v.push(n.n))?;
        let mut all: Vec<u64> = parts.into_iter().flatten().collect();
        all.sort_unstable();
        Ok(all)
    }

    /// All nodes, sorted by n.
    pub fn collect_nodes(&self) -> Result<Vec<BNode>> {
        let parts = self.par_fold(Vec::new, |v: &mut Vec<BNode>, n| v.push(*n))?;
        let mut all: Vec<BNode> = parts.into_iter().flatten().collect();
        all.sort_unstable_by_key(|b| b.n);
        Ok(all)
    }

    /// Stream members as decimal lines (depth-first order).
    pub fn write_members<W: Write>(&self, out: &mut W) -> Result<()> {
        let mut err = None;
        self.for_each(|b| {
            if err.is_none() {
                if let Err(e) = writeln!(out, "{}", b.n) {
                    err = Some(e);
                }
            }
        })?;
        match err {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    }
}

/// Elements of B_θ(x), in unspecified order.
pub fn generate_b(rule: &ThetaRule, x: u64) -> Result<Vec<u64>> {
    let mut v = Vec::new();
    BEnumerator::new(rule, x)?.for_each(|b| v.push(b.n))?;
    Ok(v)
}

/// Exact statistics of a sequence truncated at x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeqStats {
    pub x: u64,
    /// Φ(x, y), D(x, t) or B(x).
    pub count: u64,
    /// S(x, y), T(x, t) or T(x).
    pub tau_sum: u128,
    /// Σ 1/n over the members.
    pub harmonic: f64,
}

#[derive(Default)]
struct StatsAcc {
    count: u64,
    tau: u128,
    harm: CompensatedSum,
}

fn merge(x: u64, parts: Vec<StatsAcc>) -> SeqStats {
    let mut harm = CompensatedSum::new();
    let (mut count, mut tau) = (0, 0);
    for p in parts {
        count += p.count;
        tau += p.tau;
        harm.add(p.harm.value());
    }
    SeqStats { x, count, tau_sum: tau, harmonic: harm.value() }
}

/// Exact count, τ-sum and harmonic sum of B_θ(x).
pub fn theta_stats(rule: &ThetaRule, x: u64) -> Result<SeqStats> {
    let parts = BEnumerator::new(rule, x)?.par_fold(StatsAcc::default, |a, b| {
        a.count += 1;
        a.tau += b.tau as u128;
        a.harm.add(1.0 / b.n as f64);
    })?;
    Ok(merge(x, parts))
}

/// D(x, t) and T(x, t).
pub fn dense_stats(x: u64, t: Ratio) -> Result<SeqStats> {
    theta_stats(&ThetaRule::dense_ratio(t)?, x)
}

/// B(x) and T(x) for practical numbers.
pub fn practical_stats(x: u64) -> Result<SeqStats> {
    theta_stats(&ThetaRule::Practical, x)
}

const ROUGH_CHUNK: u64 = 1 << 16;

/// Φ(x, y), S(x, y) and Σ 1/n over n ≤ x with P⁻(n) > y (n = 1 included),
/// using a caller-provided table.
pub fn rough_stats_with(table: &SpfTable, x: u64, y: f64) -> Result<SeqStats> {
    if x == 0 || x > table.limit() {
        return Err(Error::Range { what: "x", value: x as f64, lo: 1.0, hi: table.limit() as f64 });
    }
    if !(y >= 2.0) {
        return Err(Error::Range { what: "y", value: y, lo: 2.0, hi: f64::INFINITY });
    }
    let yf = if y >= u64::MAX as f64 { u64::MAX } else { y.floor() as u64 };
    let chunks = (x - 1).div_ceil(ROUGH_CHUNK);
    let parts: Vec<StatsAcc> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut acc = StatsAcc::default();
            let lo = 2 + k * ROUGH_CHUNK;
            for n in lo..(lo + ROUGH_CHUNK).min(x + 1) {
                if table.spf_unchecked(n) > yf {
                    acc.count += 1;
                    acc.tau += table.tau_unchecked(n) as u128;
                    acc.harm.add(1.0 / n as f64);
                }
            }
            acc
        })
        .collect();
    let mut all = vec![StatsAcc { count: 1, tau: 1, harm: [1.0].into_iter().collect() }];
    all.extend(parts);
    Ok(merge(x, all))
}

/// As [`rough_stats_with`], building its own table up to x.
pub fn rough_stats(x: u64, y: f64) -> Result<SeqStats> {
    let table = crate::arith::build_spf_table(x.max(2))?;
    rough_stats_with(&table, x, y)
}

/// y-rough integers n ≤ x, ascending.
pub fn rough_members(table: &SpfTable, x: u64, y: f64) -> Result<Vec<u64>> {
    if x == 0 || x > table.limit() {
        return Err(Error::Range { what: "x", value: x as f64, lo: 1.0, hi: table.limit() as f64 });
    }
    let yf = y.floor().max(0.0) as u64;
    Ok(std::iter::once(1).chain((2..=x).filter(|&n| table.spf_unchecked(n) > yf)).collect())
}

/// Both sides of Σ_{m≤x} f(m) = Σ_{n∈B(x)} f(n)(1 + Σ_{2≤r≤x/n, P⁻(r)>θ(n)} f(r))
/// for f = 1 and f = τ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FuncEqCheck {
    pub x: u64,
    pub lhs_count: u128,
    pub rhs_count: u128,
    pub lhs_tau: u128,
    pub rhs_tau: u128,
}

impl FuncEqCheck {
    pub fn holds(&self) -> bool {
        self.lhs_count == self.rhs_count && self.lhs_tau == self.rhs_tau
    }
}

pub fn funceq_identity(rule: &ThetaRule, x: u64, table: &SpfTable) -> Result<FuncEqCheck> {
    if x > table.limit() {
        return Err(Error::Range { what: "x", value: x as f64, lo: 1.0, hi: table.limit() as f64 });
    }
    let tau: Vec<u64> = (0..=x).map(|m| if m == 0 { 0 } else { table.tau_unchecked(m) }).collect();
    let lhs_count = x as u128;
    let lhs_tau: u128 = tau.iter().map(|&t| t as u128).sum();
    let nodes = BEnumerator::new(rule, x)?.collect_nodes()?;
    let (mut rhs_count, mut rhs_tau) = (0u128, 0u128);
    for b in &nodes {
        let (mut c, mut s) = (1u128, 1u128);
        for r in 2..=x / b.n {
            if table.spf_unchecked(r) > b.theta {
                c += 1;
                s += tau[r as usize] as u128;
            }
        }
        rhs_count += c;
        rhs_tau += b.tau as u128 * s;
    }
    Ok(FuncEqCheck { x, lhs_count, rhs_count, lhs_tau, rhs_tau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_spf_table;

    fn table() -> &'static SpfTable {
        static T: std::sync::OnceLock<SpfTable> = std::sync::OnceLock::new();
        T.get_or_init(|| build_spf_table(1_000_000).unwrap())
    }

    fn dense2() -> ThetaRule {
        ThetaRule::dense(2.0).unwrap()
    }

    /// Reachable subset sums of the divisors, by set expansion.
    fn practical_oracle(n: u64) -> bool {
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let mut sums = std::collections::BTreeSet::from([0u64]);
        for d in divs {
            let add: Vec<u64> = sums.iter().map(|s| s + d).collect();
            sums.extend(add);
        }
        (1..=n).all(|m| sums.contains(&m))
    }

    #[test]
    fn ratio_parsing_is_exact() {
        assert_eq!(Ratio::parse("2.5").unwrap(), Ratio::new(5, 2).unwrap());
        assert_eq!(Ratio::parse("10").unwrap(), Ratio::new(10, 1).unwrap());
        assert_eq!(Ratio::parse("7/3").unwrap(), Ratio::new(7, 3).unwrap());
        assert_eq!(Ratio::from_f64(2.5).unwrap(), Ratio::new(5, 2).unwrap());
        assert!(Ratio::parse("abc").is_err());
        // 2.1 as a decimal is exact; as a double it is a nearby dyadic.
        let d = Ratio::parse("2.1").unwrap();
        assert_eq!(d.floor_mul(10), 21);
    }

    #[test]
    fn dense_rule_needs_t_at_least_two() {
        assert!(ThetaRule::dense(1.5).is_err());
        assert!(ThetaRule::dense(2.0).is_ok());
    }

    #[test]
    fn membership_examples() {
        let t = table();
        assert!(is_in_b(1, &ThetaRule::Practical, t).unwrap());
        assert!(is_in_b(1, &dense2(), t).unwrap());
        assert!(!is_in_b(10, &ThetaRule::Practical, t).unwrap());
        assert!(!practical_oracle(10));
        assert!(is_in_b(6, &dense2(), t).unwrap());
    }

    #[test]
    fn dense_divisor_examples() {
        let t = table();
        let two = Ratio::new(2, 1).unwrap();
        assert!(is_t_dense_by_divisors(1, two, t).unwrap());
        assert!(!is_t_dense_by_divisors(10, two, t).unwrap());
        assert!(is_t_dense_by_divisors(18, two, t).unwrap());
    }

    #[test]
    fn subset_sum_examples() {
        let t = table();
        assert!(is_practical_by_subset_sum(1, t).unwrap());
        assert!(!is_practical_by_subset_sum(3, t).unwrap());
        assert!(is_practical_by_subset_sum(12, t).unwrap());
        assert!(matches!(is_practical_by_subset_sum(1_000_001, t), Err(Error::Scale { .. }) | Err(Error::Range { .. })));
        for n in 1..=200 {
            assert_eq!(is_practical_by_subset_sum(n, t).unwrap(), practical_oracle(n), "n={n}");
        }
    }

    #[test]
    fn generate_examples() {
        let mut p = generate_b(&ThetaRule::Practical, 30).unwrap();
        p.sort();
        let oracle: Vec<u64> = (1..=30).filter(|&n| practical_oracle(n)).collect();
        assert_eq!(oracle, vec![1, 2, 4, 6, 8, 12, 16, 18, 20, 24, 28, 30]);
        assert_eq!(p, oracle);

        let mut d = generate_b(&dense2(), 20).unwrap();
        d.sort();
        let two = Ratio::new(2, 1).unwrap();
        let oracle: Vec<u64> = (1..=20).filter(|&n| is_t_dense_by_divisors(n, two, table()).unwrap()).collect();
        assert_eq!(oracle, vec![1, 2, 4, 6, 8, 12, 16, 18, 20]);
        assert_eq!(d, oracle);

        assert_eq!(generate_b(&ThetaRule::Practical, 1).unwrap(), vec![1]);
        assert_eq!(generate_b(&dense2(), 1).unwrap(), vec![1]);
    }

    #[test]
    fn generation_matches_filter_enumeration() {
        let t = table();
        for rule in [dense2(), ThetaRule::dense(3.5).unwrap(), ThetaRule::Practical] {
            let x = 50_000;
            let g = BEnumerator::new(&rule, x).unwrap().collect_sorted().unwrap();
            let f: Vec<u64> = (1..=x).filter(|&n| is_in_b(n, &rule, t).unwrap()).collect();
            assert_eq!(g, f, "{}", rule.tag());
        }
    }

    #[test]
    fn dense_and_practical_stats() {
        let s = dense_stats(20, Ratio::new(2, 1).unwrap()).unwrap();
        assert_eq!((s.count, s.tau_sum), (9, 37));
        let s = practical_stats(30).unwrap();
        assert_eq!(s.count, 12);
        let s = dense_stats(1, Ratio::new(2, 1).unwrap()).unwrap();
        assert_eq!((s.count, s.tau_sum, s.harmonic), (1, 1, 1.0));
    }

    #[test]
    fn rough_examples() {
        let s = rough_stats(10, 2.0).unwrap();
        assert_eq!((s.count, s.tau_sum), (5, 10));
        let s = rough_stats(50, 60.0).unwrap();
        assert_eq!((s.count, s.tau_sum), (1, 1));

        // Filter oracle by trial division for x = 100, y = 7.
        let keep = |n: u64| [2, 3, 5, 7].iter().all(|p| n % p != 0);
        let divs = |n: u64| (1..=n).filter(|d| n % d == 0).count() as u128;
        let phi = (1..=100u64).filter(|&n| keep(n)).count() as u64;
        let s_oracle: u128 = (1..=100u64).filter(|&n| keep(n)).map(divs).sum();
        let h: f64 = (1..=100u64).filter(|&n| keep(n)).map(|n| 1.0 / n as f64).sum();
        let s = rough_stats(100, 7.0).unwrap();
        assert_eq!((s.count, s.tau_sum), (phi, s_oracle));
        assert!((s.harmonic - h).abs() < 1e-14);
        assert!(rough_stats(100, 1.5).is_err());
    }

    #[test]
    fn factor_nr_examples() {
        let t = table();
        assert_eq!(factor_nr(12, &dense2(), t).unwrap(), (12, 1));
        assert_eq!(factor_nr(10, &dense2(), t).unwrap(), (2, 5));
        assert_eq!(factor_nr(5, &dense2(), t).unwrap(), (1, 5));
    }

    #[test]
    fn factorization_is_a_partition() {
        let t = table();
        for rule in [dense2(), ThetaRule::Practical] {
            let mut seen = std::collections::HashSet::new();
            for m in 1..=1_000_000u64 {
                let (n, r) = factor_nr(m, &rule, t).unwrap();
                assert_eq!(n * r, m);
                assert!(is_in_b(n, &rule, t).unwrap());
                if r > 1 {
                    let sig = crate::arith::sigma(n, t).unwrap();
                    let th = rule.bound(n, sig).unwrap();
                    assert!(t.spf(r).unwrap().unwrap() > th);
                }
                assert!(seen.insert((n, r)));
            }
        }
    }

    #[test]
    fn funceq_small() {
        let t = table();
        for rule in [dense2(), ThetaRule::Practical] {
            let c = funceq_identity(&rule, 1000, t).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }

    #[test]
    fn custom_rule_validation() {
        let t = build_spf_table(100).unwrap();
        assert!(ThetaRule::custom(vec![1.0, 2.0], &t).is_err());
        // θ(6) must be ≥ 3.
        let mut v: Vec<f64> = (1..=10).map(|n| n as f64 * 2.0).collect();
        assert!(ThetaRule::custom(v.clone(), &t).is_ok());
        v[6] = 5.0; // θ(7) = 5 < 7
        assert!(ThetaRule::custom(v, &t).is_err());
        let inf = ThetaRule::custom(vec![f64::INFINITY; 20], &t).unwrap();
        assert_eq!(generate_b(&inf, 20).unwrap().len(), 20);
    }

    #[test]
    fn custom_rule_outside_table_errors() {
        let t = build_spf_table(100).unwrap();
        let r = ThetaRule::custom(vec![2.0, 4.0, 6.0], &t).unwrap();
        assert!(BEnumerator::new(&r, 100).unwrap().collect_sorted().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn custom_monotonicity(extra in proptest::collection::vec(0.0f64..40.0, 400)) {
                let t = table();
                let base: Vec<f64> = (1..=400u64)
                    .map(|n| t.largest_prime_factor(n).unwrap().unwrap_or(2).max(2) as f64)
                    .collect();
                let bigger: Vec<f64> = base.iter().zip(&extra).map(|(b, e)| b + e).collect();
                let lo = ThetaRule::custom(base, t).unwrap();
                let hi = ThetaRule::custom(bigger, t).unwrap();
                let a = BEnumerator::new(&lo, 400).unwrap().collect_sorted().unwrap();
                let b: std::collections::HashSet<u64> =
                    BEnumerator::new(&hi, 400).unwrap().collect_sorted().unwrap().into_iter().collect();
                prop_assert!(a.iter().all(|n| b.contains(n)));
            }

            #[test]
            fn stats_invariants(x in 1u64..20_000, tn in 4u64..40) {
                let s = dense_stats(x, Ratio::new(tn, 2).unwrap()).unwrap();
                prop_assert!(s.count <= x);
                prop_assert!(s.tau_sum >= s.count as u128);
            }
        }
    }
}
