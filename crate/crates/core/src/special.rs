//! Buchstab's ω, the delay function ξ and the Volterra function λ.
//!
//! ω and ξ solve delay equations of the form (u f(u))′ = c f(u−1). Both are
//! known in closed form on [1, 3]; beyond that they are marched on a grid
//! aligned to the integers (where the kinks live). λ is explicit in its
//! history: λ(v) only needs λ on [0, (v−1)/2].

use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::numeric::{exp_neg_2gamma, exp_neg_gamma, fmt_sig15, gl10, CompensatedSum};

/// Grid step for ω and ξ.
pub const DELAY_STEP: f64 = 1.0 / 1024.0;
/// Grid step for λ.
pub const LAMBDA_STEP: f64 = 1.0 / 256.0;
/// Upper end of every stored grid.
pub const GRID_MAX: f64 = 50.0;

/// A closed-form piece on [lo, hi) (or [lo, hi] when `closed` is set).
#[derive(Clone, Copy)]
pub struct ExactPiece {
    pub lo: f64,
    pub hi: f64,
    pub closed: bool,
    pub f: fn(f64) -> f64,
}

impl ExactPiece {
    fn contains(&self, u: f64) -> bool {
        u >= self.lo && (u < self.hi || (self.closed && u == self.hi))
    }
}

impl std::fmt::Debug for ExactPiece {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}{}", self.lo, self.hi, if self.closed { "]" } else { ")" })
    }
}

/// Uniform grid of samples. Points sit on integers every `1/step` samples.
#[derive(Debug, Clone)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    fn per_unit(&self) -> usize {
        (1.0 / self.step).round() as usize
    }

    /// Cubic interpolation whose four nodes never leave the unit interval
    /// containing `u`, so the kinks at integers are respected.
    pub fn interp(&self, u: f64) -> f64 {
        interp_slice(&self.values, self.start, self.step, self.per_unit(), u)
    }
}

fn interp_slice(values: &[f64], start: f64, step: f64, per_unit: usize, u: f64) -> f64 {
    let p = (u - start) / step;
    let j = p.floor();
    let ji = j as usize;
    let frac = p - j;
    if frac == 0.0 || ji + 1 >= values.len() {
        return values[ji.min(values.len() - 1)];
    }
    let lo = ji - ji % per_unit;
    let hi = (lo + per_unit).min(values.len() - 1);
    let s = ji.saturating_sub(1).max(lo).min(hi - 3);
    // Lagrange through s..s+3, evaluated at offset x = p - s.
    let x = p - s as f64;
    let (y0, y1, y2, y3) = (values[s], values[s + 1], values[s + 2], values[s + 3]);
    let l0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
    let l1 = x * (x - 2.0) * (x - 3.0) / 2.0;
    let l2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
    let l3 = x * (x - 1.0) * (x - 2.0) / 6.0;
    y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3
}

/// A special function: zero below `support`, closed-form pieces, a numeric
/// grid with a uniform error budget, and an optional asymptote past the grid.
#[derive(Debug, Clone)]
pub struct PiecewiseFn {
    pub name: &'static str,
    pub support: f64,
    pub exact_pieces: Vec<ExactPiece>,
    pub grid: Grid,
    pub err_budget: f64,
    /// Asymptote and its error envelope, used past the grid end.
    pub tail: Option<(fn(f64) -> f64, fn(f64) -> f64)>,
}

impl PiecewiseFn {
    pub fn eval(&self, u: f64) -> f64 {
        self.eval_with_err(u).0
    }

    /// Value together with the absolute error claimed for it.
    pub fn eval_with_err(&self, u: f64) -> (f64, f64) {
        if u < self.support {
            return (0.0, 0.0);
        }
        if let Some(p) = self.exact_pieces.iter().find(|p| p.contains(u)) {
            return ((p.f)(u), 0.0);
        }
        if u <= self.grid.end() {
            return (self.grid.interp(u), self.err_budget);
        }
        match self.tail {
            Some((f, env)) => (f(u), env(u)),
            None => (f64::NAN, f64::INFINITY),
        }
    }

    pub fn grid_end(&self) -> f64 {
        self.grid.end()
    }

    /// Max deviation from the exact pieces at grid points they cover.
    pub fn junction_mismatch(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in &self.exact_pieces {
            let u = p.hi;
            if u < self.grid.start || u > self.grid.end() {
                continue;
            }
            let i = ((u - self.grid.start) / self.grid.step).round() as usize;
            // Left limit of the piece against the stored sample.
            let left = (p.f)(u - 1e-12);
            worst = worst.max((left - self.grid.values[i]).abs());
        }
        worst
    }
}

/// Right-limit flag for derivatives at the kinks u = 1, 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub one_sided: bool,
}

fn omega_12(u: f64) -> f64 {
    1.0 / u
}
fn omega_23(u: f64) -> f64 {
    (1.0 + (u - 1.0).ln()) / u
}
fn xi_12(u: f64) -> f64 {
    2.0 / u
}
fn xi_23(u: f64) -> f64 {
    (4.0 * (u - 1.0).ln() + 2.0) / u
}
fn omega_asym(_u: f64) -> f64 {
    exp_neg_gamma()
}
fn omega_env(u: f64) -> f64 {
    1.0 / gamma(u + 1.0)
}
fn xi_asym(u: f64) -> f64 {
    (u + 2.0) * exp_neg_2gamma()
}
/// Envelope 2^u / (7 Γ(u+1)).
pub fn xi_envelope(u: f64) -> f64 {
    (u * std::f64::consts::LN_2).exp() / (7.0 * gamma(u + 1.0))
}
fn lambda_01(v: f64) -> f64 {
    v
}

// Adams-type 4-point weights for one cell, depending on where the cell
// sits in its unit interval.
const W_LEFT: [f64; 4] = [9.0 / 24.0, 19.0 / 24.0, -5.0 / 24.0, 1.0 / 24.0];
const W_MID: [f64; 4] = [-1.0 / 24.0, 13.0 / 24.0, 13.0 / 24.0, -1.0 / 24.0];
const W_RIGHT: [f64; 4] = [1.0 / 24.0, -5.0 / 24.0, 19.0 / 24.0, 9.0 / 24.0];

/// Integral of the samples over cell [j, j+1] (grid starting at an integer).
fn cell_integral(v: &[f64], j: usize, per_unit: usize, h: f64) -> f64 {
    let m = j % per_unit;
    let (w, s) = if m == 0 {
        (&W_LEFT, j)
    } else if m == per_unit - 1 {
        (&W_RIGHT, j - 2)
    } else {
        (&W_MID, j - 1)
    };
    h * (w[0] * v[s] + w[1] * v[s + 1] + w[2] * v[s + 2] + w[3] * v[s + 3])
}

/// March (u f(u))′ = c f(u−1) from u = 3 using u f(u) = u₀f(u₀) + c∫f.
/// Samples on [1, 3] come from `closed`.
fn march_delay(h: f64, umax: f64, c: f64, closed: fn(f64) -> f64) -> Vec<f64> {
    let n = (1.0 / h).round() as usize;
    let len = ((umax - 1.0) / h).round() as usize + 1;
    let mut v = Vec::with_capacity(len);
    for i in 0..=2 * n {
        v.push(closed(1.0 + h * i as f64));
    }
    let mut acc = CompensatedSum::new();
    acc.add(3.0 * v[2 * n]);
    for i in 2 * n + 1..len {
        let j = i - 1 - n;
        acc.add(c * cell_integral(&v, j, n, h));
        let u = 1.0 + h * i as f64;
        v.push(acc.value() / u);
    }
    v
}

fn omega_closed(u: f64) -> f64 {
    if u <= 2.0 {
        omega_12(u)
    } else {
        omega_23(u)
    }
}
fn xi_closed(u: f64) -> f64 {
    if u < 2.0 {
        xi_12(u)
    } else {
        xi_23(u)
    }
}

/// Interpolation bound from fourth differences inside each unit interval.
fn interp_bound(v: &[f64], per_unit: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..v.len().saturating_sub(4) {
        if i / per_unit != (i + 4) / per_unit && (i + 4) % per_unit != 0 {
            continue;
        }
        let d4 = v[i] - 4.0 * v[i + 1] + 6.0 * v[i + 2] - 4.0 * v[i + 3] + v[i + 4];
        worst = worst.max(d4.abs());
    }
    // Cubic interpolation error ≤ (3/128) h⁴ |f⁗| in the middle cell, and
    // at most ~ 0.15 h⁴ |f⁗| in edge cells.
    0.15 * worst
}

fn build_delay(
    name: &'static str,
    c: f64,
    closed: fn(f64) -> f64,
    pieces: Vec<ExactPiece>,
    tail: (fn(f64) -> f64, fn(f64) -> f64),
) -> PiecewiseFn {
    let h = DELAY_STEP;
    let fine = march_delay(h, GRID_MAX, c, closed);
    let coarse = march_delay(2.0 * h, GRID_MAX, c, closed);
    // Fourth-order scheme: fine error ≈ |fine − coarse| / 15.
    let diff = coarse
        .iter()
        .enumerate()
        .map(|(i, &cv)| (cv - fine[2 * i]).abs())
        .fold(0.0, f64::max);
    let per_unit = (1.0 / h).round() as usize;
    let err_budget = diff / 15.0 + interp_bound(&fine, per_unit) + 1e-13;
    PiecewiseFn {
        name,
        support: 1.0,
        exact_pieces: pieces,
        grid: Grid { start: 1.0, step: h, values: fine },
        err_budget,
        tail: Some(tail),
    }
}

/// Table for Buchstab's ω.
pub fn omega_table() -> &'static PiecewiseFn {
    static T: OnceLock<PiecewiseFn> = OnceLock::new();
    T.get_or_init(|| {
        build_delay(
            "omega",
            1.0,
            omega_closed,
            vec![
                ExactPiece { lo: 1.0, hi: 2.0, closed: true, f: omega_12 },
                ExactPiece { lo: 2.0, hi: 3.0, closed: true, f: omega_23 },
            ],
            (omega_asym, omega_env),
        )
    })
}

/// Table for ξ.
pub fn xi_table() -> &'static PiecewiseFn {
    static T: OnceLock<PiecewiseFn> = OnceLock::new();
    T.get_or_init(|| {
        build_delay(
            "xi",
            2.0,
            xi_closed,
            vec![
                ExactPiece { lo: 1.0, hi: 2.0, closed: false, f: xi_12 },
                ExactPiece { lo: 2.0, hi: 3.0, closed: false, f: xi_23 },
            ],
            (xi_asym, xi_envelope),
        )
    })
}

pub fn omega(u: f64) -> f64 {
    omega_table().eval(u)
}

pub fn xi(u: f64) -> f64 {
    xi_table().eval(u)
}

/// ξ′(u) = (2ξ(u−1) − ξ(u))/u; right limit at u = 1, 2.
pub fn xi_prime_flagged(u: f64) -> Derivative {
    if u < 1.0 {
        return Derivative { value: 0.0, one_sided: false };
    }
    Derivative {
        value: (2.0 * xi(u - 1.0) - xi(u)) / u,
        one_sided: u == 1.0 || u == 2.0,
    }
}

pub fn xi_prime(u: f64) -> f64 {
    xi_prime_flagged(u).value
}

/// ω′(u) = (ω(u−1) − ω(u))/u; right limit at u = 1, 2.
pub fn omega_prime(u: f64) -> f64 {
    if u < 1.0 {
        return 0.0;
    }
    (omega(u - 1.0) - omega(u)) / u
}

/// Sorted breakpoints in [a, b]: the ends plus every integer in between.
pub(crate) fn integer_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut v = vec![a];
    let mut k = a.floor() + 1.0;
    while k < b {
        v.push(k);
        k += 1.0;
    }
    v.push(b);
    v
}

pub(crate) fn integrate_smooth_panels(breaks: &[f64], max_len: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = gl10();
    let mut acc = CompensatedSum::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            acc.add(rule.integrate_panels(w[0], w[1], max_len, &mut f));
        }
    }
    acc.value()
}

/// ξ(u) = 2ω(u) + ∫ ω(t)ω(u−t) dt, evaluated from the ω table alone.
pub fn xi_via_convolution(u: f64) -> f64 {
    if u < 1.0 {
        return 0.0;
    }
    let mut breaks = vec![1.0, u - 1.0];
    let mut k = 2.0;
    while k < u - 1.0 {
        breaks.push(k);
        breaks.push(u - k);
        k += 1.0;
    }
    breaks.retain(|&t| t >= 1.0 && t <= u - 1.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let conv = if u >= 2.0 {
        integrate_smooth_panels(&breaks, 0.25, |t| omega(t) * omega(u - t))
    } else {
        0.0
    };
    2.0 * omega(u) + conv
}

/// ∫_a^b of a table function, split at integers.
pub fn integrate_fn(f: &PiecewiseFn, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let breaks = integer_breaks(a, b);
    integrate_smooth_panels(&breaks, 0.25, |t| f.eval(t))
}

/// The integral ∫_0^{(v−1)/2} λ(u) ξ((v−u)/(u+1)) du/(u+1), with the range
/// split at integers in u and wherever the ξ argument crosses an integer.
fn lambda_integral(v: f64, lam: &dyn Fn(f64) -> f64, xi_t: &PiecewiseFn) -> f64 {
    let b = 0.5 * (v - 1.0);
    if b <= 0.0 {
        return 0.0;
    }
    let mut breaks = integer_breaks(0.0, b);
    let mut k = 2.0;
    while k <= v {
        let u = (v - k) / (k + 1.0);
        if u > 0.0 && u < b {
            breaks.push(u);
        }
        k += 1.0;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    integrate_smooth_panels(&breaks, 0.25, |u| lam(u) * xi_t.eval((v - u) / (u + 1.0)) / (u + 1.0))
}

fn march_lambda(h: f64, vmax: f64, xi_t: &PiecewiseFn) -> Vec<f64> {
    let per_unit = (1.0 / h).round() as usize;
    let len = (vmax / h).round() as usize + 1;
    let mut vals: Vec<f64> = (0..=per_unit).map(|i| h * i as f64).collect();
    // Blocks whose integrals only reach already-computed samples.
    while vals.len() < len {
        let known = h * (vals.len() - 1) as f64;
        let mut end = vals.len();
        while end < len {
            let v = h * end as f64;
            if (0.5 * (v - 1.0)).floor() + 1.0 > known {
                break;
            }
            end += 1;
        }
        let hist = &vals;
        let block: Vec<f64> = (vals.len()..end)
            .into_par_iter()
            .map(|i| {
                let v = h * i as f64;
                let lam = |u: f64| {
                    if u <= 1.0 {
                        u
                    } else {
                        interp_slice(hist, 0.0, h, per_unit, u)
                    }
                };
                v - lambda_integral(v, &lam, xi_t)
            })
            .collect();
        vals.extend(block);
    }
    vals
}

/// Table for λ.
pub fn lambda_table() -> &'static PiecewiseFn {
    static T: OnceLock<PiecewiseFn> = OnceLock::new();
    T.get_or_init(|| {
        let xi_t = xi_table();
        let h = LAMBDA_STEP;
        let fine = march_lambda(h, GRID_MAX, xi_t);
        let coarse = march_lambda(2.0 * h, GRID_MAX, xi_t);
        let diff = coarse
            .iter()
            .enumerate()
            .map(|(i, &cv)| (cv - fine[2 * i]).abs())
            .fold(0.0, f64::max);
        let per_unit = (1.0 / h).round() as usize;
        let err_budget = diff + interp_bound(&fine, per_unit) + 16.0 * xi_t.err_budget + 1e-12;
        PiecewiseFn {
            name: "lambda",
            support: 0.0,
            exact_pieces: vec![ExactPiece { lo: 0.0, hi: 1.0, closed: true, f: lambda_01 }],
            grid: Grid { start: 0.0, step: h, values: fine },
            err_budget,
            tail: None,
        }
    })
}

/// λ(v). Past the grid the defining integral is evaluated directly, reusing
/// λ recursively on [0, (v−1)/2]; cost grows quickly beyond v ≈ 100.
pub fn lambda_fn(v: f64) -> f64 {
    let t = lambda_table();
    if v <= t.grid_end() {
        return t.eval(v);
    }
    v - lambda_integral(v, &lambda_fn, xi_table())
}

/// Which table a tabulation reads from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnKind {
    Omega,
    Xi,
    Lambda,
}

impl FnKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "omega" | "ω" => Ok(FnKind::Omega),
            "xi" | "ξ" => Ok(FnKind::Xi),
            "lambda" | "λ" => Ok(FnKind::Lambda),
            _ => Err(Error::Config(format!("unknown function '{s}' (omega, xi, lambda)"))),
        }
    }

    pub fn eval_with_err(self, u: f64) -> (f64, f64) {
        match self {
            FnKind::Omega => omega_table().eval_with_err(u),
            FnKind::Xi => xi_table().eval_with_err(u),
            FnKind::Lambda => {
                let t = lambda_table();
                if u <= t.grid_end() {
                    t.eval_with_err(u)
                } else {
                    (lambda_fn(u), t.err_budget * 4.0)
                }
            }
        }
    }
}

/// Points from, from+step, ..., up to `to` (inclusive, with rounding slack).
pub fn grid_points(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::Config(format!("bad grid from={from} to={to} step={step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| from + step * i as f64).collect())
}

/// CSV tabulation with header `u,value,err_budget`.
pub fn write_csv(out: &mut impl Write, kind: FnKind, from: f64, to: f64, step: f64) -> Result<()> {
    writeln!(out, "u,value,err_budget")?;
    for u in grid_points(from, to, step)? {
        let (v, e) = kind.eval_with_err(u);
        writeln!(out, "{},{},{}", fmt_sig15(u), fmt_sig15(v), fmt_sig15(e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{adaptive, adaptive_split, EULER_GAMMA};

    #[test]
    fn support_and_closed_forms() {
        assert_eq!(omega(0.5), 0.0);
        assert_eq!(xi(0.5), 0.0);
        assert_eq!(xi(1.0), 2.0);
        assert!((omega(1.5) - 2.0 / 3.0).abs() < 1e-15);
        assert!((xi(2.5) - 1.448_744_2).abs() < 1e-7);
        assert_eq!(lambda_fn(-1.0), 0.0);
        assert_eq!(lambda_fn(0.5), 0.5);
        for i in 0..=64 {
            let v = i as f64 / 64.0;
            assert_eq!(lambda_fn(v), v);
        }
    }

    #[test]
    fn omega_matches_delay_recurrence_oracle() {
        // ω on [3,4] from uω(u) = 3ω(3) + ∫_2^{u−1} ω, with adaptive quadrature
        // on the closed form.
        for &u in &[3.25, 3.5, 3.9] {
            let q = adaptive(omega_23, 2.0, u - 1.0, 1e-14, 40);
            let oracle = (3.0 * omega_23(3.0) + q.value) / u;
            assert!((omega(u) - oracle).abs() < 1e-11, "u={u}");
        }
        // Same for ξ with factor 2.
        for &u in &[3.1, 3.6, 4.0] {
            let q = adaptive(xi_23, 2.0, u - 1.0, 1e-14, 40);
            let oracle = (3.0 * xi_23(3.0) + 2.0 * q.value) / u;
            assert!((xi(u) - oracle).abs() < 1e-11, "u={u}");
        }
    }

    #[test]
    fn asymptotes_at_ten() {
        let eg = (-EULER_GAMMA).exp();
        assert!((omega(10.0) - eg).abs() < 1.0 / gamma(11.0));
        assert!((xi(10.0) - 12.0 * eg * eg).abs() < 4.1e-5);
    }

    #[test]
    fn err_budgets_are_small() {
        assert!(omega_table().err_budget < 1e-9, "{}", omega_table().err_budget);
        assert!(xi_table().err_budget < 1e-9, "{}", xi_table().err_budget);
        assert!(lambda_table().err_budget < 1e-7, "{}", lambda_table().err_budget);
        assert!(omega_table().junction_mismatch() < 1e-12);
        assert!(xi_table().junction_mismatch() < 1e-12);
    }

    #[test]
    fn derivative_right_limits() {
        let d1 = xi_prime_flagged(1.0);
        assert!(d1.one_sided);
        assert_eq!(d1.value, -2.0);
        let d2 = xi_prime_flagged(2.0);
        assert!(d2.one_sided);
        assert!((d2.value - 1.5).abs() < 1e-15);
        // Away from kinks: compare with a central difference.
        for &u in &[2.5, 4.3, 7.7] {
            let fd = (xi(u + 1e-5) - xi(u - 1e-5)) / 2e-5;
            assert!((xi_prime(u) - fd).abs() < 1e-6, "u={u}");
            assert!(!xi_prime_flagged(u).one_sided);
        }
    }

    #[test]
    fn convolution_agrees() {
        assert_eq!(xi_via_convolution(0.5), 0.0);
        assert!((xi_via_convolution(1.5) - 4.0 / 3.0).abs() < 1e-15);
        assert!((xi_via_convolution(5.0) - xi(5.0)).abs() < 1e-6);
    }

    #[test]
    fn fundamental_residual() {
        for &u in &[3.3, 4.7, 8.1] {
            let r = u * xi(u) - 2.0 - 2.0 * integrate_fn(xi_table(), 1.0, u - 1.0);
            assert!(r.abs() < 1e-8, "u={u} r={r}");
        }
    }

    #[test]
    fn lambda_three_against_adaptive_oracle() {
        // λ(3) = 3 − ∫_0^1 u ξ((3−u)/(u+1)) du/(u+1), ξ in closed form.
        let f = |u: f64| {
            let a = (3.0 - u) / (u + 1.0);
            let x = if a < 2.0 { 2.0 / a } else { (4.0 * (a - 1.0).ln() + 2.0) / a };
            u * x / (u + 1.0)
        };
        let q = adaptive_split(f, &[0.0, 1.0 / 3.0, 1.0], 1e-13, 50);
        let oracle = 3.0 - q.value;
        assert!((lambda_fn(3.0) - oracle).abs() < 1e-9, "{} vs {}", lambda_fn(3.0), oracle);
    }

    #[test]
    fn lambda_direct_beyond_grid_is_continuous() {
        let t = lambda_table();
        let at_end = t.eval(50.0);
        let direct = 50.0 - lambda_integral(50.0, &lambda_fn, xi_table());
        assert!((at_end - direct).abs() < 1e-8);
        assert!(lambda_fn(60.0) > at_end);
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_csv(&mut buf, FnKind::Xi, 0.0, 10.0, 0.25).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines.len(), 42);
        assert_eq!(lines[0], "u,value,err_budget");
        assert!(lines[5].starts_with("1.00000000000000,2.00000000000000,"));
    }

    #[test]
    fn second_derivative_envelope() {
        // ξ″ from central differences of ξ′ on [3.5, 5] against 2^u/(7Γ(u+1)).
        let h = 1e-3;
        let mut u: f64 = 3.5;
        while u <= 5.0 {
            let d2 = (xi_prime(u + h) - xi_prime(u - h)) / (2.0 * h);
            assert!(d2.abs() < xi_envelope(u), "u={u} ξ''={d2}");
            u += 1.0 / 64.0;
        }
    }

    #[test]
    fn derivative_envelope() {
        let e2 = (-2.0 * EULER_GAMMA).exp();
        let mut u: f64 = 2.5;
        while u <= 15.0 {
            assert!((xi_prime(u) - e2).abs() < xi_envelope(u), "u={u}");
            u += 1.0 / 128.0;
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn support(u in -20.0f64..1.0, v in -20.0f64..0.0) {
                prop_assume!(u < 1.0 && v < 0.0);
                prop_assert_eq!(omega(u), 0.0);
                prop_assert_eq!(xi(u), 0.0);
                prop_assert_eq!(lambda_fn(v), 0.0);
            }

            #[test]
            fn lambda_identity_on_unit_interval(v in 0.0f64..=1.0) {
                prop_assert_eq!(lambda_fn(v), v);
            }

            #[test]
            fn xi_bounds(u in 1.0f64..50.0) {
                let x = xi(u);
                prop_assert!((u + 2.0) / 4.0 <= x && x <= u + 1.0);
            }

            #[test]
            fn omega_between_half_and_one(u in 1.0f64..50.0) {
                let w = omega(u);
                prop_assert!((0.5..=1.0).contains(&w));
            }

            #[test]
            fn lambda_increasing(v in 0.0f64..59.0, dv in 0.01f64..1.0) {
                prop_assert!(lambda_fn(v + dv) > lambda_fn(v));
            }
        }
    }
}
