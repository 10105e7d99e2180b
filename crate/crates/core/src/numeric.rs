//! Small numerical toolkit shared by the special-function, constants and
//! report modules: compensated summation, Gauss rules, adaptive
//! Gauss–Kronrod, and the fixed 15-significant-digit output format.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// e^{-γ}
pub fn exp_neg_gamma() -> f64 {
    (-EULER_GAMMA).exp()
}

/// e^{-2γ}
pub fn exp_neg_2gamma() -> f64 {
    (-2.0 * EULER_GAMMA).exp()
}

/// Values a quadrature rule can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                if n == 1 {
                    p0 = 1.0;
                    p1 = z;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over [a, b] with a single application of the rule.
    pub fn integrate<T: QuadValue>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }

    /// Composite rule: [a, b] split into panels no longer than `max_len`.
    pub fn integrate_panels<T: QuadValue>(
        &self,
        a: f64,
        b: f64,
        max_len: f64,
        mut f: impl FnMut(f64) -> T,
    ) -> T {
        if b <= a {
            return T::zero();
        }
        let k = ((b - a) / max_len).ceil().max(1.0) as usize;
        let h = (b - a) / k as f64;
        let mut acc = T::zero();
        for i in 0..k {
            let lo = a + h * i as f64;
            let hi = if i + 1 == k { b } else { lo + h };
            acc = acc + self.integrate(lo, hi, &mut f);
        }
        acc
    }
}

/// Shared 16-point rule.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Shared 10-point rule.
pub fn gl10() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron = kron + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    (kron, (kron - gauss).magnitude())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quad<T> {
    pub value: T,
    pub err: f64,
}

/// Cap on bisections per call; noisy integrands would otherwise split to
/// `max_depth` everywhere.
const MAX_SPLITS: usize = 1 << 14;

/// Adaptive Gauss–Kronrod (7/15) by recursive bisection.
///
/// Each panel is accepted once its Gauss/Kronrod difference falls below its
/// share of `abs_tol`, or once `max_depth` halvings have been spent.
pub fn adaptive<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Quad<T> {
    if b <= a {
        return Quad { value: T::zero(), err: 0.0 };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut value = T::zero();
    let mut err = 0.0;
    // Explicit stack in left-to-right order so accumulation order is fixed.
    let mut stack = vec![(a, b, v, e, 0u32)];
    let mut splits = 0usize;
    while let Some((lo, hi, v, e, depth)) = stack.pop() {
        let share = abs_tol * (hi - lo) / (b - a);
        if e <= share.max(f64::MIN_POSITIVE)
            || depth >= max_depth
            || e <= 1e-15 * v.magnitude()
            || splits >= MAX_SPLITS
        {
            value = value + v;
            err += e;
            continue;
        }
        splits += 1;
        let mid = 0.5 * (lo + hi);
        let (vl, el) = gk15(&mut f, lo, mid);
        let (vr, er) = gk15(&mut f, mid, hi);
        stack.push((mid, hi, vr, er, depth + 1));
        stack.push((lo, mid, vl, el, depth + 1));
    }
    Quad { value, err }
}

/// Adaptive integration over consecutive breakpoints, each sub-interval
/// receiving a tolerance share proportional to its length.
pub fn adaptive_split<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    breaks: &[f64],
    abs_tol: f64,
    max_depth: u32,
) -> Quad<T> {
    let total = breaks.last().copied().unwrap_or(0.0) - breaks.first().copied().unwrap_or(0.0);
    let mut value = T::zero();
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let q = adaptive(&mut f, w[0], w[1], abs_tol * (w[1] - w[0]) / total, max_depth);
        value = value + q.value;
        err += q.err;
    }
    Quad { value, err }
}

/// Fixed-format rendering with 15 significant digits.
pub fn fmt_sig15(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return format!("{:.14}", 0.0);
    }
    let mag = x.abs().log10().floor() as i32;
    let mut decimals = 14 - mag;
    // log10 can be off by one near powers of ten; re-check on the rounded text.
    let s = format!("{:.*}", decimals.max(0) as usize, x);
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    let significant = digits.trim_start_matches('0').len();
    if significant > 15 && decimals > 0 {
        decimals -= (significant - 15) as i32;
    } else if significant < 15 {
        decimals += (15 - significant) as i32;
    }
    format!("{:.*}", decimals.max(0) as usize, x)
}

/// Round to 15 significant digits (the value `fmt_sig15` prints).
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    fmt_sig15(x).parse().unwrap_or(x)
}
