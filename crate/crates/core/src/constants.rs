//! Constants attached to g(s) = 1 + ĥ(s): the real zero δ, the zero census
//! by the argument principle, and the residues λ_k = 1/(s_k(s_k−1)g′(s_k)).
//!
//! g is evaluated with the ξ grid truncated at V, in the variable
//! w = log(v+1) where the integrand becomes F(w) e^{−sw}.

use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::exponential;
use statrs::function::gamma::gamma;

use crate::error::{check_range, Error, Result};
use crate::numeric::{adaptive, adaptive_split, exp_neg_2gamma, exp_neg_gamma, gl16};
use crate::special::{integer_breaks, integrate_smooth_panels, omega_table, xi_envelope, xi_prime, xi_table, GRID_MAX};

pub const DEFAULT_V: f64 = 6.0;
/// Truncation used for the published constants; V = 6 leaves the residue
/// at −1 about 3e-5 off its closed form.
pub const CONSTANTS_V: f64 = 8.0;
/// Panel length in w = log(v+1); resolves e^{−i τ w} for |τ| up to ~64.
const W_PANEL: f64 = 1.0 / 64.0;

#[derive(Debug, Clone, Copy)]
struct Node {
    w: f64,
    /// weight × F(w)
    wf: f64,
}

/// g(s) truncated at V, with precomputed quadrature nodes.
#[derive(Debug, Clone)]
pub struct GEvaluator {
    v_trunc: f64,
    fine: Vec<Node>,
    coarse: Vec<Node>,
    /// Bound on |g − g_V| for Re s ≥ −3.
    pub tail_bound: f64,
}

/// A g value with its error split.
#[derive(Debug, Clone, Copy)]
pub struct GValue {
    pub value: Complex64,
    pub quad_err: f64,
    pub tail_bound: f64,
}

impl GValue {
    pub fn err(&self) -> f64 {
        self.quad_err + self.tail_bound
    }
}

fn build_nodes(v_trunc: f64, panel: f64) -> Vec<Node> {
    let e2g = exp_neg_2gamma();
    let xi_t = xi_table();
    let mut breaks: Vec<f64> = integer_breaks(0.0, v_trunc).iter().map(|v| v.ln_1p()).collect();
    breaks.dedup();
    let rule = gl16();
    let mut nodes = Vec::new();
    for seg in breaks.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let k = ((b - a) / panel).ceil().max(1.0) as usize;
        let h = (b - a) / k as f64;
        for i in 0..k {
            let lo = a + h * i as f64;
            let hi = if i + 1 == k { b } else { lo + h };
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let w = mid + half * x;
                let ew = w.exp();
                let f = xi_t.eval(ew - 1.0) - (ew + 1.0) * e2g;
                nodes.push(Node { w, wf: wt * half * f });
            }
        }
    }
    nodes
}

/// ∫_V^∞ |ξ(v) − (v+2)e^{−2γ}| (v+1)^{−σ−1} dv: grid values up to the grid
/// end, the 2^v/(7Γ(v+1)) envelope beyond.
pub fn tail_bound(v_trunc: f64, sigma: f64) -> f64 {
    let xi_t = xi_table();
    let e2g = exp_neg_2gamma();
    let end = xi_t.grid_end();
    let f = |v: f64| (xi_t.eval(v) - (v + 2.0) * e2g).abs() * (v + 1.0).powf(-sigma - 1.0);
    let mut total = 0.0;
    if v_trunc < end {
        let q = integrate_smooth_panels(&integer_breaks(v_trunc, end), 1.0 / 32.0, f);
        // Grid error carried through the weight.
        let weight = integrate_smooth_panels(&[v_trunc, end], 0.5, |v| (v + 1.0).powf(-sigma - 1.0));
        total += q + xi_t.err_budget * weight;
    }
    let start = v_trunc.max(end);
    let env = adaptive(|v: f64| xi_envelope(v) * (v + 1.0).powf(-sigma - 1.0), start, start + 100.0, 1e-20, 40);
    total + env.value + env.err
}

impl GEvaluator {
    /// Truncation V must lie in [5, grid end].
    pub fn new(v_trunc: f64) -> Result<Self> {
        check_range("truncation V", v_trunc, 5.0, GRID_MAX)?;
        Ok(Self {
            v_trunc,
            fine: build_nodes(v_trunc, W_PANEL),
            coarse: build_nodes(v_trunc, 2.0 * W_PANEL),
            tail_bound: tail_bound(v_trunc, -3.0),
        })
    }

    pub fn truncation(&self) -> f64 {
        self.v_trunc
    }

    fn check_pole(s: Complex64) -> Result<()> {
        if s.norm() < 1e-12 || (s - 1.0).norm() < 1e-12 {
            return Err(Error::Pole { re: s.re, im: s.im });
        }
        Ok(())
    }

    fn sum(nodes: &[Node], s: Complex64, deriv: bool) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        for n in nodes {
            let mut t = (-s * n.w).exp() * n.wf;
            if deriv {
                t *= -n.w;
            }
            // Neumaier on each component.
            let y = t - comp;
            let sum = acc + y;
            comp = (sum - acc) - y;
            acc = sum;
        }
        acc
    }

    fn poles(s: Complex64) -> Complex64 {
        let e2g = exp_neg_2gamma();
        e2g / s + e2g / (s - 1.0)
    }

    fn poles_deriv(s: Complex64) -> Complex64 {
        let e2g = exp_neg_2gamma();
        -e2g / (s * s) - e2g / ((s - 1.0) * (s - 1.0))
    }

    /// g_V(s) without error bookkeeping; s must avoid 0 and 1.
    pub fn g(&self, s: Complex64) -> Complex64 {
        1.0 + Self::sum(&self.fine, s, false) + Self::poles(s)
    }

    pub fn g_prime(&self, s: Complex64) -> Complex64 {
        Self::sum(&self.fine, s, true) + Self::poles_deriv(s)
    }

    pub fn g_eval(&self, s: Complex64) -> Result<GValue> {
        Self::check_pole(s)?;
        let fine = Self::sum(&self.fine, s, false);
        let coarse = Self::sum(&self.coarse, s, false);
        Ok(GValue {
            value: 1.0 + fine + Self::poles(s),
            quad_err: (fine - coarse).norm(),
            tail_bound: tail_bound(self.v_trunc, s.re),
        })
    }

    pub fn g_prime_eval(&self, s: Complex64) -> Result<GValue> {
        Self::check_pole(s)?;
        let fine = Self::sum(&self.fine, s, true);
        let coarse = Self::sum(&self.coarse, s, true);
        Ok(GValue {
            value: fine + Self::poles_deriv(s),
            quad_err: (fine - coarse).norm(),
            // log(v+1) ≤ v+1 turns the derivative tail into the value tail at σ−1.
            tail_bound: tail_bound(self.v_trunc, s.re - 1.0),
        })
    }
}

pub fn g_eval(s: Complex64, v_trunc: f64) -> Result<GValue> {
    GEvaluator::new(v_trunc)?.g_eval(s)
}

pub fn g_prime_eval(s: Complex64, v_trunc: f64) -> Result<GValue> {
    GEvaluator::new(v_trunc)?.g_prime_eval(s)
}

/// Axis-aligned rectangle in the s-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Rect {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        Self { re_lo, re_hi, im_lo, im_hi }
    }

    pub fn square(center: Complex64, half: f64) -> Self {
        Self::new(center.re - half, center.re + half, center.im - half, center.im + half)
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_lo, self.im_lo),
            Complex64::new(self.re_hi, self.im_lo),
            Complex64::new(self.re_hi, self.im_hi),
            Complex64::new(self.re_lo, self.im_hi),
        ]
    }
}

/// Argument-principle scan of a rectangle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContourScan {
    pub winding: i64,
    /// Total argument change divided by 2π (should sit near an integer).
    pub turns: f64,
    pub min_abs: f64,
    pub samples: usize,
}

struct Seg {
    darg: f64,
    min_abs: f64,
    samples: usize,
}

impl GEvaluator {
    // Argument increment from a to b, bisecting until each step turns by
    // less than π/4.
    fn seg_scan(&self, a: Complex64, ga: Complex64, b: Complex64, gb: Complex64, depth: u32) -> Seg {
        let darg = (gb / ga).arg();
        let min_abs = ga.norm().min(gb.norm());
        if darg.abs() < FRAC_PI_4 || depth >= 40 {
            return Seg { darg, min_abs, samples: 1 };
        }
        let m = 0.5 * (a + b);
        let gm = self.g(m);
        let l = self.seg_scan(a, ga, m, gm, depth + 1);
        let r = self.seg_scan(m, gm, b, gb, depth + 1);
        Seg { darg: l.darg + r.darg, min_abs: l.min_abs.min(r.min_abs), samples: l.samples + r.samples }
    }

    /// Golden-section search of |g| on the segment [a, b].
    fn refine_min(&self, a: Complex64, b: Complex64) -> f64 {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let at = |t: f64| self.g(a + (b - a) * t).norm();
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let (mut f1, mut f2) = (at(x1), at(x2));
        for _ in 0..60 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = at(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = at(x2);
            }
        }
        f1.min(f2).min(at(0.0)).min(at(1.0))
    }

    /// Winding number of g around `rect` (counter-clockwise), with the
    /// minimum of |g| on the boundary.
    pub fn scan(&self, rect: &Rect, max_step: f64) -> Result<ContourScan> {
        let c = rect.corners();
        let mut pts = Vec::new();
        for e in 0..4 {
            let (a, b) = (c[e], c[(e + 1) % 4]);
            let n = ((b - a).norm() / max_step).ceil().max(1.0) as usize;
            for i in 0..n {
                pts.push(a + (b - a) * (i as f64 / n as f64));
            }
        }
        for p in &pts {
            Self::check_pole(*p)?;
        }
        let vals: Vec<Complex64> = pts.par_iter().map(|&p| self.g(p)).collect();
        let n = pts.len();
        let segs: Vec<Seg> = (0..n)
            .into_par_iter()
            .map(|i| {
                let j = (i + 1) % n;
                self.seg_scan(pts[i], vals[i], pts[j], vals[j], 0)
            })
            .collect();
        let total: f64 = segs.iter().map(|s| s.darg).sum();
        let samples = segs.iter().map(|s| s.samples).sum();
        // Refine around the three smallest segment minima.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| segs[a].min_abs.total_cmp(&segs[b].min_abs).then(a.cmp(&b)));
        let mut min_abs = segs[order[0]].min_abs;
        for &i in order.iter().take(3) {
            let prev = (i + n - 1) % n;
            let next = (i + 2) % n;
            min_abs = min_abs.min(self.refine_min(pts[prev], pts[(i + 1) % n]));
            min_abs = min_abs.min(self.refine_min(pts[i], pts[next]));
        }
        let turns = total / TAU;
        Ok(ContourScan { winding: turns.round() as i64, turns, min_abs, samples })
    }
}

/// Contour sampling step: fine enough for the smallest squares used here.
fn default_step(rect: &Rect) -> f64 {
    let side = (rect.re_hi - rect.re_lo).min(rect.im_hi - rect.im_lo);
    (side / 16.0).min(0.02)
}

/// Zeros minus poles of g inside `rect`. Fails when |g_V| on the boundary
/// does not clear the truncation error, since then g and g_V could differ
/// in winding.
pub fn count_zeros_rect(rect: &Rect, v_trunc: f64) -> Result<i64> {
    let ev = GEvaluator::new(v_trunc)?;
    count_zeros_with(&ev, rect)
}

pub fn count_zeros_with(ev: &GEvaluator, rect: &Rect) -> Result<i64> {
    let scan = ev.scan(rect, default_step(rect))?;
    let margin = tail_bound(ev.v_trunc, rect.re_lo) + 1e-9;
    if scan.min_abs <= margin {
        return Err(Error::Contour { min_abs: scan.min_abs, margin });
    }
    Ok(scan.winding)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    RealBisection,
    ComplexRefine,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C64 {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// A located zero of g with its a-posteriori evidence.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RootCertificate {
    pub location: C64,
    pub enclosure: Rect,
    pub winding: i64,
    pub residual: f64,
    pub residue: C64,
    pub method: RootMethod,
    #[serde(rename = "truncation_V")]
    pub truncation_v: f64,
}

impl RootCertificate {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.location.re, self.location.im)
    }

    pub fn residue(&self) -> Complex64 {
        Complex64::new(self.residue.re, self.residue.im)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// Half-width of the a-posteriori square around a located zero.
const ENCLOSURE_HALF: f64 = 1e-3;

pub fn residue_with(ev: &GEvaluator, s: Complex64) -> Complex64 {
    1.0 / (s * (s - 1.0) * ev.g_prime(s))
}

fn certify(ev: &GEvaluator, s: Complex64, method: RootMethod) -> Result<RootCertificate> {
    let enclosure = Rect::square(s, ENCLOSURE_HALF);
    let winding = count_zeros_with(ev, &enclosure)?;
    if winding != 1 {
        return Err(Error::Solver(format!("winding {winding} around located zero {s}")));
    }
    Ok(RootCertificate {
        location: s.into(),
        enclosure,
        winding,
        residual: ev.g(s).norm(),
        residue: residue_with(ev, s).into(),
        method,
        truncation_v: ev.v_trunc,
    })
}

/// Bisection for the real zero of g in (0.1, 0.9).
pub fn find_delta_with(ev: &GEvaluator) -> Result<RootCertificate> {
    let g = |x: f64| ev.g(Complex64::new(x, 0.0)).re;
    let (mut lo, mut hi) = (0.1, 0.9);
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo > 0.0 && ghi < 0.0) {
        return Err(Error::Solver(format!("no sign change of g on (0.1, 0.9): {glo}, {ghi}")));
    }
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    certify(ev, Complex64::new(0.5 * (lo + hi), 0.0), RootMethod::RealBisection)
}

pub fn find_delta_via_g() -> Result<RootCertificate> {
    find_delta_with(&GEvaluator::new(DEFAULT_V)?)
}

/// Newton refinement with the analytic derivative.
pub fn refine_zero_with(ev: &GEvaluator, seed: Complex64) -> Result<RootCertificate> {
    let mut s = seed;
    for _ in 0..100 {
        let gs = ev.g(s);
        if gs.norm() <= 1e-12 {
            break;
        }
        let step = gs / ev.g_prime(s);
        if !step.is_finite() || step.norm() > 1.0 {
            return Err(Error::Solver(format!("Newton diverged from seed {seed}")));
        }
        s -= step;
        if step.norm() < 1e-15 * s.norm().max(1.0) {
            break;
        }
    }
    let residual = ev.g(s).norm();
    if residual > 1e-10 {
        return Err(Error::Solver(format!("residual {residual:e} after refinement from {seed}")));
    }
    certify(ev, s, RootMethod::ComplexRefine)
}

pub fn refine_zero(seed: Complex64) -> Result<RootCertificate> {
    refine_zero_with(&GEvaluator::new(DEFAULT_V)?, seed)
}

pub fn residue_at(cert: &RootCertificate) -> Result<Complex64> {
    let ev = GEvaluator::new(cert.truncation_v)?;
    Ok(residue_with(&ev, cert.location()))
}

/// λ₁ = 2/(3e^{−2γ} − 2).
pub fn lambda1_exact() -> f64 {
    2.0 / (3.0 * exp_neg_2gamma() - 2.0)
}

/// J(u) = ∫_u^∞ e^{−t}/t dt.
pub fn exp_integral_j(u: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("J(u) needs u > 0, got {u}")));
    }
    exponential::integral(u, 1).ok_or_else(|| Error::Domain(format!("J({u}) did not converge")))
}

/// A(u) = J(u) + γ + log u = Σ_{k≥1} (−1)^{k+1} u^k/(k·k!), and A(u) − u.
fn a_series(u: f64) -> (f64, f64) {
    let mut term = u; // u^k / k!
    let mut rest = 0.0;
    let mut k = 1.0;
    loop {
        k += 1.0;
        term *= -u / k;
        let t = term / k;
        rest += t;
        if t.abs() < 1e-18 * (u + rest.abs()) {
            break;
        }
    }
    (u + rest, rest)
}

/// e^x − 1 − x without cancellation for moderate x.
fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() > 1.0 {
        return x.exp_m1() - x;
    }
    let mut term = x;
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        k += 1.0;
        term *= x / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// e^{2J(u)} − 1 − b₀u^{−2} − b₁u^{−1} on (0, 1].
fn q_regular_part(u: f64) -> f64 {
    let (a, a_minus_u) = a_series(u);
    let e2g = exp_neg_2gamma();
    let two_a = 2.0 * a;
    let bracket = if two_a.abs() > 1.0 {
        // (e^{2A} − 1 − 2A) + 2(A − u)
        (two_a.exp_m1() - two_a) + 2.0 * a_minus_u
    } else {
        expm1_minus_x(two_a) + 2.0 * a_minus_u
    };
    e2g * bracket / (u * u) - 1.0
}

/// Regularized Q(s) for real s > −1, s ∉ {0, 1}.
pub fn q_eval(s: f64) -> Result<f64> {
    if !(s > -1.0) || s == 0.0 || s == 1.0 {
        return Err(Error::Domain(format!("Q(s) needs s > −1 away from 0, 1; got {s}")));
    }
    let e2g = exp_neg_2gamma();
    let head = adaptive(|u: f64| if u == 0.0 { 0.0 } else { u.powf(s) * q_regular_part(u) }, 0.0, 1.0, 1e-14, 60);
    let tail = adaptive_split(
        |u: f64| u.powf(s) * (2.0 * exponential::integral(u, 1).unwrap_or(0.0)).exp_m1(),
        &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
        1e-14,
        40,
    );
    Ok(head.value + e2g / (s - 1.0) + 2.0 * e2g / s + tail.value)
}

/// Real zero of Q in (0.1, 0.9) by bisection.
pub fn find_delta_via_q() -> Result<f64> {
    let (mut lo, mut hi) = (0.1, 0.9);
    let qlo = q_eval(lo)?;
    let qhi = q_eval(hi)?;
    if qlo.signum() == qhi.signum() {
        return Err(Error::Solver(format!("no sign change of Q on (0.1, 0.9): {qlo}, {qhi}")));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if q_eval(mid)?.signum() == qlo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Both sides of (s+1)Q(s) = 2Γ(s+1)g(s).
pub fn q_g_identity(ev: &GEvaluator, s: f64) -> Result<(f64, f64)> {
    let lhs = (s + 1.0) * q_eval(s)?;
    let rhs = 2.0 * gamma(s + 1.0) * ev.g_eval(Complex64::new(s, 0.0))?.value.re;
    Ok((lhs, rhs))
}

/// λ₀ = 1/(δ(δ−1)I), with I = g′(δ) integrated directly in v.
pub fn lambda0_via_i(delta: f64) -> f64 {
    let i = i_integral(delta);
    1.0 / (delta * (delta - 1.0) * i)
}

/// I = −∫_0^∞ (ξ(v)−(v+2)e^{−2γ}) log(v+1)/(v+1)^{1+δ} dv − e^{−2γ}/δ² − e^{−2γ}/(δ−1)².
pub fn i_integral(delta: f64) -> f64 {
    let xi_t = xi_table();
    let e2g = exp_neg_2gamma();
    let end = xi_t.grid_end();
    let f = |v: f64| (xi_t.eval(v) - (v + 2.0) * e2g) * v.ln_1p() * (v + 1.0).powf(-1.0 - delta);
    let q = integrate_smooth_panels(&integer_breaks(0.0, end), 0.125, f);
    -q - e2g / (delta * delta) - e2g / ((delta - 1.0) * (delta - 1.0))
}

/// H(σ) = 2^{1−σ} + ∫_1^∞ |ξ′(v) − e^{−2γ}| (v+1)^{−σ} dv.
pub fn h_bound(sigma: f64) -> f64 {
    let e2g = exp_neg_2gamma();
    let end = xi_table().grid_end();
    let f = |v: f64| (xi_prime(v) - e2g).abs() * (v + 1.0).powf(-sigma);
    // ξ′ needs ξ(v−1) and ξ(v), so kinks sit at the integers only.
    let q = integrate_smooth_panels(&integer_breaks(1.0, end), 1.0 / 32.0, f);
    let env = adaptive(|v: f64| xi_envelope(v) * (v + 1.0).powf(-sigma), end, end + 100.0, 1e-20, 40);
    2f64.powf(1.0 - sigma) + q + env.value
}

/// Both sides of s∫_0^∞ u^{s−1}(e^{J(u)}−1)du = Γ(s)(1 + ∫_0^∞ ω(v)(v+1)^{−s} dv).
pub fn buchstab_transform_check(s: f64) -> Result<(f64, f64)> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("transform check needs s > 1, got {s}")));
    }
    let eg = exp_neg_gamma();
    let head = adaptive(
        |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let (a, _) = a_series(u);
            u.powf(s - 1.0) * (eg * a.exp_m1() / u - 1.0)
        },
        0.0,
        1.0,
        1e-14,
        60,
    );
    let tail = adaptive_split(
        |u: f64| u.powf(s - 1.0) * exponential::integral(u, 1).unwrap_or(0.0).exp_m1(),
        &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
        1e-14,
        40,
    );
    let lhs = s * (eg / (s - 1.0) + head.value + tail.value);
    let om = omega_table();
    let end = om.grid_end();
    let body = integrate_smooth_panels(&integer_breaks(1.0, end), 0.125, |v| om.eval(v) * (v + 1.0).powf(-s));
    let rhs = gamma(s) * (1.0 + body + eg * (end + 1.0).powf(1.0 - s) / (s - 1.0));
    Ok((lhs, rhs))
}

/// δ, λ₀ and λ₁ at the constants truncation, computed once per process.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoreConstants {
    pub delta: f64,
    pub lambda0: f64,
    pub lambda1: f64,
}

pub fn core_constants() -> Result<CoreConstants> {
    static C: std::sync::OnceLock<Result<CoreConstants>> = std::sync::OnceLock::new();
    C.get_or_init(|| {
        let ev = GEvaluator::new(CONSTANTS_V)?;
        let d = find_delta_with(&ev)?;
        let l1 = refine_zero_with(&ev, Complex64::new(-1.0, 0.0))?;
        Ok(CoreConstants { delta: d.location.re, lambda0: d.residue.re, lambda1: l1.residue.re })
    })
    .clone()
}

/// All constants in one pass, in the shape the `constants` command prints.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    #[serde(rename = "truncation_V")]
    pub truncation_v: f64,
    pub delta: RootCertificate,
    pub delta_via_q: f64,
    pub lambda0: f64,
    pub lambda0_via_i: f64,
    pub lambda1: RootCertificate,
    pub lambda1_exact: f64,
    pub complex_pair: RootCertificate,
    pub rect_winding: i64,
    pub rect_min_abs_g5: f64,
    pub tail_bound_v5: f64,
    pub h_minus3: f64,
    pub q_identity_lhs: f64,
    pub q_identity_rhs: f64,
}

/// Seed for the upper member of the complex pair.
pub const COMPLEX_SEED: Complex64 = Complex64::new(-1.962, 11.575);
/// The zero-census rectangle.
pub const CENSUS_RECT: Rect = Rect { re_lo: -3.0, re_hi: 3.0, im_lo: -62.0, im_hi: 62.0 };

pub fn constants_report(v_trunc: f64) -> Result<ConstantsReport> {
    let ev = GEvaluator::new(v_trunc)?;
    let ev5 = GEvaluator::new(5.0)?;
    let delta = find_delta_with(&ev)?;
    let delta_via_q = find_delta_via_q()?;
    let lambda1 = refine_zero_with(&ev, Complex64::new(-1.0, 0.0))?;
    let complex_pair = refine_zero_with(&ev, COMPLEX_SEED)?;
    let scan = ev5.scan(&CENSUS_RECT, default_step(&CENSUS_RECT))?;
    let (q_identity_lhs, q_identity_rhs) = q_g_identity(&ev, 2.0)?;
    Ok(ConstantsReport {
        truncation_v: v_trunc,
        lambda0: delta.residue.re,
        lambda0_via_i: lambda0_via_i(delta.location.re),
        delta,
        delta_via_q,
        lambda1,
        lambda1_exact: lambda1_exact(),
        complex_pair,
        rect_winding: scan.winding,
        rect_min_abs_g5: scan.min_abs,
        tail_bound_v5: ev5.tail_bound,
        h_minus3: h_bound(-3.0),
        q_identity_lhs,
        q_identity_rhs,
    })
}
