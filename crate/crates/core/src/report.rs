//! Main terms of the mean-value estimates compared against exact sums, the
//! partial L and c_θ series, and figure data.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{for_each_prime, PrimeList};
use crate::constants::core_constants;
use crate::error::{Error, Result};
use crate::numeric::{exp_neg_2gamma, exp_neg_gamma, fmt_sig15, CompensatedSum};
use crate::special::{integrate_fn, lambda_fn, omega, omega_table, xi};
use crate::theta::{rough_stats, theta_stats, BEnumerator, Ratio, ThetaRule};

pub const DEFAULT_SLACK: f64 = 5.0;
/// Largest y for which Mertens products are formed from a prime list.
const MAX_Y: f64 = 4e9;
/// Largest finite θ the prime sweep will walk up to.
const MAX_THETA_SWEEP: u64 = 1 << 36;

/// One estimate-vs-exact line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub quantity: String,
    pub x: u64,
    /// "y", "t" or "theta".
    pub param_name: String,
    pub param: f64,
    /// u = log x/log y or v = log x/log t.
    pub scale: f64,
    pub exact: f64,
    pub estimate: f64,
    pub rel_err: f64,
    /// Predicted relative error scale.
    pub envelope: f64,
    pub slack: f64,
    pub acceptance: bool,
    pub pass: bool,
}

impl CompareRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        quantity: &str,
        x: u64,
        param_name: &str,
        param: f64,
        scale: f64,
        exact: f64,
        estimate: f64,
        envelope: f64,
        slack: f64,
        acceptance: bool,
    ) -> Self {
        let rel_err = (exact - estimate).abs() / exact.abs().max(1.0);
        Self {
            quantity: quantity.into(),
            x,
            param_name: param_name.into(),
            param,
            scale,
            exact,
            estimate,
            rel_err,
            envelope,
            slack,
            acceptance,
            pass: !acceptance || rel_err <= envelope * slack,
        }
    }
}

pub const CSV_HEADER: &str = "quantity,x,param_name,param,scale,exact,estimate,rel_err,envelope,slack,acceptance,pass";

pub fn write_rows_csv(out: &mut impl Write, rows: &[CompareRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.quantity,
            r.x,
            r.param_name,
            fmt_sig15(r.param),
            fmt_sig15(r.scale),
            fmt_sig15(r.exact),
            fmt_sig15(r.estimate),
            fmt_sig15(r.rel_err),
            fmt_sig15(r.envelope),
            fmt_sig15(r.slack),
            r.acceptance,
            r.pass
        )?;
    }
    Ok(())
}

pub fn write_rows_jsonl(out: &mut impl Write, rows: &[CompareRow]) -> Result<()> {
    for r in rows {
        let v = serde_json::json!({
            "quantity": r.quantity,
            "x": r.x,
            "param_name": r.param_name,
            "param": crate::numeric::round_sig15(r.param),
            "scale": crate::numeric::round_sig15(r.scale),
            "exact": crate::numeric::round_sig15(r.exact),
            "estimate": crate::numeric::round_sig15(r.estimate),
            "rel_err": crate::numeric::round_sig15(r.rel_err),
            "envelope": crate::numeric::round_sig15(r.envelope),
            "slack": r.slack,
            "acceptance": r.acceptance,
            "pass": r.pass,
        });
        writeln!(out, "{v}")?;
    }
    Ok(())
}

/// Main terms of Φ(x,y), S(x,y) and Σ 1/n over y-rough n ≤ x.
#[derive(Debug, Clone)]
pub struct RoughEstimator {
    primes: PrimeList,
}

impl RoughEstimator {
    /// Prime list up to `y_max`.
    pub fn new(y_max: f64) -> Result<Self> {
        if !(y_max >= 2.0) || y_max > MAX_Y {
            return Err(Error::Range { what: "y", value: y_max, lo: 2.0, hi: MAX_Y });
        }
        Ok(Self { primes: PrimeList::new(y_max.floor() as u64) })
    }

    fn check(&self, x: f64, y: f64) -> Result<f64> {
        if !(x >= 1.0) {
            return Err(Error::Range { what: "x", value: x, lo: 1.0, hi: f64::INFINITY });
        }
        if !(y >= 2.0) {
            return Err(Error::Range { what: "y", value: y, lo: 2.0, hi: self.primes.limit() as f64 });
        }
        Ok(x.ln() / y.ln())
    }

    pub fn phi(&self, x: f64, y: f64) -> Result<f64> {
        let u = self.check(x, y)?;
        let m = self.primes.log_mertens(y)?.exp();
        let corr = if x >= y { y / x } else { 0.0 };
        Ok(1.0 + x * m + x / y.ln() * (omega(u) - exp_neg_gamma() - corr))
    }

    pub fn s(&self, x: f64, y: f64) -> Result<f64> {
        let u = self.check(x, y)?;
        let m2 = (2.0 * self.primes.log_mertens(y)?).exp();
        let corr = if x >= y { 2.0 * y / x } else { 0.0 };
        Ok(1.0 + x * x.ln() * m2 + x / y.ln() * (xi(u) - u * exp_neg_2gamma() - corr))
    }

    pub fn harmonic(&self, x: f64, y: f64) -> Result<f64> {
        let u = self.check(x, y)?;
        let m = self.primes.log_mertens(y)?.exp();
        let int = integrate_fn(omega_table(), 0.0, u) - u * exp_neg_gamma();
        Ok(1.0 + x.ln() * m + int)
    }
}

pub fn estimate_phi(x: f64, y: f64) -> Result<f64> {
    RoughEstimator::new(y)?.phi(x, y)
}

pub fn estimate_s(x: f64, y: f64) -> Result<f64> {
    RoughEstimator::new(y)?.s(x, y)
}

pub fn estimate_harmonic(x: f64, y: f64) -> Result<f64> {
    RoughEstimator::new(y)?.harmonic(x, y)
}

/// Rows for S, Φ, the harmonic sum and S/Φ against ξ(u)/ω(u).
pub fn compare_rough(x: u64, y: f64, slack: f64) -> Result<Vec<CompareRow>> {
    let est = RoughEstimator::new(y)?;
    let st = rough_stats(x, y)?;
    let xf = x as f64;
    let ly = y.ln();
    let u = xf.ln() / ly;
    let (s, phi) = (st.tau_sum as f64, st.count as f64);
    let (s_est, phi_est) = (est.s(xf, y)?, est.phi(xf, y)?);
    let ratio_est = if xf >= 2.0 * y { xi(u) / omega(u) } else { s_est / phi_est };
    let ratio_env = if xf >= 2.0 * y {
        1.0 / xf.ln() + (-ly.sqrt()).exp()
    } else {
        1.0 / xf.ln().max(1.0) + u.max(1.0).powf(-u)
    };
    let row = |q: &str, exact: f64, estimate: f64, env: f64| {
        CompareRow::new(q, x, "y", y, u, exact, estimate, env, slack, true)
    };
    Ok(vec![
        row("S", s, s_est, xf / (ly * ly) / s.max(1.0)),
        row("Phi", phi, phi_est, xf * (-u / 3.0).exp() / (ly * ly) / phi.max(1.0)),
        row("harmonic", st.harmonic, est.harmonic(xf, y)?, 1.0 / ly / st.harmonic.max(1.0)),
        row("S/Phi", s / phi, ratio_est, ratio_env),
    ])
}

/// Rows for T(x,t) against x log t λ(v) (α_t = 1), and the order-of-magnitude
/// ratio T/(x v^δ log t) against λ₀.
pub fn compare_dense(x: u64, t: Ratio, slack: f64) -> Result<Vec<CompareRow>> {
    let c = core_constants()?;
    let st = theta_stats(&ThetaRule::dense_ratio(t)?, x)?;
    let xf = x as f64;
    let lt = t.as_f64().ln();
    let v = xf.ln() / lt;
    let lam = lambda_fn(v);
    let tt = st.tau_sum as f64;
    let env = 1.0 / lt + 1.0 / (lt * lam.max(1e-300));
    let tf = t.as_f64();
    Ok(vec![
        CompareRow::new("T", x, "t", tf, v, tt, xf * lt * lam, env, slack, true),
        CompareRow::new(
            "T/(x v^delta log t)",
            x,
            "t",
            tf,
            v,
            tt / (xf * v.powf(c.delta) * lt),
            c.lambda0,
            env + (v + 1.0).powf(-1.0 - c.delta),
            slack,
            false,
        ),
    ])
}

/// One point of the ν-fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuPoint {
    pub x: u64,
    pub tau_sum: u128,
    pub ratio: f64,
}

/// T(x)/(x (log x)^δ) for practical numbers at each cutoff, from a single
/// enumeration up to the largest one.
pub fn fit_nu_practical(xs: &[u64]) -> Result<Vec<NuPoint>> {
    let delta = core_constants()?.delta;
    let mut cut: Vec<u64> = xs.to_vec();
    cut.sort_unstable();
    cut.dedup();
    let Some(&xmax) = cut.last() else { return Ok(Vec::new()) };
    let en = BEnumerator::new(&ThetaRule::Practical, xmax)?;
    let k = cut.len();
    let parts = en.par_fold(
        || vec![0u128; k],
        |acc, b| {
            let i = cut.partition_point(|&c| c < b.n);
            acc[i] += b.tau as u128;
        },
    )?;
    let mut buckets = vec![0u128; k];
    for p in parts {
        for (b, v) in buckets.iter_mut().zip(p) {
            *b += v;
        }
    }
    let mut run = 0u128;
    let mut out = Vec::with_capacity(k);
    for (i, &x) in cut.iter().enumerate() {
        run += buckets[i];
        let xf = x as f64;
        out.push(NuPoint { x, tau_sum: run, ratio: run as f64 / (xf * xf.ln().powf(delta)) });
    }
    Ok(out)
}

/// Partial sums of the L and c_θ series at one cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub n: u64,
    pub l_partial: f64,
    pub c_partial: f64,
    /// Summands of c_θ with θ(n) ≥ n that came out negative.
    pub negative_c_terms: u64,
}

/// Σ τ(n)/n Π(1−1/p)² and the c_θ sum over B(N) for each N in `cutoffs`.
///
/// Members are visited in order of θ(n) while the primes are swept once, so
/// Σ log(1−1/p) and Σ log p/(p−1) up to θ(n) are running sums. θ = ∞ has
/// Π = 0 and contributes e^{−γ}/n to c_θ (the Mertens limit).
pub fn theta_series(rule: &ThetaRule, cutoffs: &[u64]) -> Result<Vec<SeriesPoint>> {
    let mut cut: Vec<u64> = cutoffs.to_vec();
    cut.sort_unstable();
    cut.dedup();
    let Some(&nmax) = cut.last() else { return Ok(Vec::new()) };
    let nodes = BEnumerator::new(rule, nmax)?.collect_nodes()?;
    let theta_max = nodes.iter().map(|b| b.theta).filter(|&t| t != u64::MAX).max().unwrap_or(2);
    if theta_max > MAX_THETA_SWEEP {
        return Err(Error::Config(format!("θ reaches {theta_max}, beyond the prime sweep limit {MAX_THETA_SWEEP}")));
    }
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by_key(|&i| (nodes[i].theta, nodes[i].n));

    // (log Π(1−1/p), Σ log p/(p−1)) at θ(n) for every node.
    let mut at = vec![(0.0f64, 0.0f64); nodes.len()];
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    let mut next = 0usize;
    let mut flush = |upto: u64, s1: &CompensatedSum, s2: &CompensatedSum, next: &mut usize| {
        while *next < order.len() && nodes[order[*next]].theta < upto {
            at[order[*next]] = (s1.value(), s2.value());
            *next += 1;
        }
    };
    for_each_prime(theta_max, |p| {
        flush(p, &s1, &s2, &mut next);
        let pf = p as f64;
        s1.add((-1.0 / pf).ln_1p());
        s2.add(pf.ln() / (pf - 1.0));
    });
    flush(u64::MAX, &s1, &s2, &mut next);

    let eg = exp_neg_gamma();
    let scale = 1.0 / (1.0 - eg);
    let mut l = CompensatedSum::new();
    let mut c = CompensatedSum::new();
    let mut neg = 0u64;
    let mut out = Vec::with_capacity(cut.len());
    let mut ci = 0usize;
    for (i, b) in nodes.iter().enumerate() {
        while ci < cut.len() && cut[ci] < b.n {
            out.push(SeriesPoint { n: cut[ci], l_partial: l.value(), c_partial: scale * c.value(), negative_c_terms: neg });
            ci += 1;
        }
        let nf = b.n as f64;
        if b.theta == u64::MAX {
            c.add(eg / nf);
            continue;
        }
        let (lp, sp) = at[i];
        l.add(b.tau as f64 / nf * (2.0 * lp).exp());
        let term = (sp - nf.ln()) * lp.exp() / nf;
        if term < 0.0 && b.theta >= b.n {
            neg += 1;
        }
        c.add(term);
    }
    while ci < cut.len() {
        out.push(SeriesPoint { n: cut[ci], l_partial: l.value(), c_partial: scale * c.value(), negative_c_terms: neg });
        ci += 1;
    }
    Ok(out)
}

pub fn l_partial(rule: &ThetaRule, n: u64) -> Result<f64> {
    Ok(theta_series(rule, &[n])?[0].l_partial)
}

pub fn c_theta_partial(rule: &ThetaRule, n: u64) -> Result<f64> {
    Ok(theta_series(rule, &[n])?[0].c_partial)
}

/// Admissible growth shapes f with θ(n) ≤ n f(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FSpec {
    /// f(y) = C
    Constant { c: f64 },
    /// f(y) = C (log y)^A
    LogPower { c: f64, a: f64 },
    /// f(y) = exp((log y)^a), 0 < a < 1
    ExpLogPower { a: f64 },
}

impl FSpec {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            FSpec::Constant { c } => c >= 1.0,
            FSpec::LogPower { c, a } => c >= 1.0 && a >= 0.0,
            FSpec::ExpLogPower { a } => a > 0.0 && a < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("{self:?} is not non-decreasing with log f/log x eventually decreasing")))
        }
    }

    /// log f(y) as a function of log y.
    pub fn log_f(&self, log_y: f64) -> f64 {
        match *self {
            FSpec::Constant { c } => c.ln(),
            FSpec::LogPower { c, a } => c.ln() + a * log_y.ln(),
            FSpec::ExpLogPower { a } => log_y.powf(a),
        }
    }
}

/// E(x) = ∫_x^∞ log f(y)/(y log² y) dy in closed form.
pub fn e_of_x(f: &FSpec, x: f64) -> Result<f64> {
    f.validate()?;
    if !(x > std::f64::consts::E) {
        return Err(Error::Range { what: "x", value: x, lo: std::f64::consts::E, hi: f64::INFINITY });
    }
    let l = x.ln();
    Ok(match *f {
        FSpec::Constant { c } => c.ln() / l,
        FSpec::LogPower { c, a } => c.ln() / l + a * (l.ln() + 1.0) / l,
        FSpec::ExpLogPower { a } => l.powf(a - 1.0) / (1.0 - a),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
}

impl Figure {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            _ => Err(Error::Config(format!("unknown figure '{s}' (fig1, fig2)"))),
        }
    }

    pub fn default_grid(self) -> (f64, f64, f64) {
        match self {
            Figure::Fig1 => (1.0, 10.0, 0.05),
            Figure::Fig2 => (0.0, 50.0, 0.25),
        }
    }
}

/// fig1: u, ξ, (u+2)e^{−2γ}, ξ/ω, (u+2)e^{−γ}. fig2: v, λ, λ₀(v+1)^δ + λ₁(v+1)^{−1}.
pub fn emit_figure_data(out: &mut impl Write, which: Figure, from: f64, to: f64, step: f64) -> Result<()> {
    let pts = crate::special::grid_points(from, to, step)?;
    match which {
        Figure::Fig1 => {
            writeln!(out, "u,xi,xi_asymptote,xi_over_omega,ratio_asymptote")?;
            let (e1, e2) = (exp_neg_gamma(), exp_neg_2gamma());
            let rows: Vec<String> = pts
                .par_iter()
                .map(|&u| {
                    let (x, w) = (xi(u), omega(u));
                    let ratio = if w > 0.0 { x / w } else { f64::NAN };
                    format!(
                        "{},{},{},{},{}",
                        fmt_sig15(u),
                        fmt_sig15(x),
                        fmt_sig15((u + 2.0) * e2),
                        fmt_sig15(ratio),
                        fmt_sig15((u + 2.0) * e1)
                    )
                })
                .collect();
            for r in rows {
                writeln!(out, "{r}")?;
            }
        }
        Figure::Fig2 => {
            let c = core_constants()?;
            writeln!(out, "v,lambda,approximation")?;
            let rows: Vec<String> = pts
                .par_iter()
                .map(|&v| {
                    let approx = c.lambda0 * (v + 1.0).powf(c.delta) + c.lambda1 / (v + 1.0);
                    format!("{},{},{}", fmt_sig15(v), fmt_sig15(lambda_fn(v)), fmt_sig15(approx))
                })
                .collect();
            for r in rows {
                writeln!(out, "{r}")?;
            }
        }
    }
    Ok(())
}
