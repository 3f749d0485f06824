//! Numerical kernel: adaptive Gauss-Kronrod quadrature, quadrature with an
//! inverse square-root endpoint singularity, Brent root finding and Ridders'
//! extrapolated central differences.
//!
//! Every routine is a pure function of its inputs. Results are bit-for-bit
//! reproducible for a fixed tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{CmcError, Result};

/// Accuracy request shared by the quadrature and root-finding routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_depth: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-10,
            abs: 1e-12,
            max_depth: 50,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_depth: u32) -> Result<Self> {
        let tol = Tolerance {
            rel,
            abs,
            max_depth,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel > 0.0) || !(self.abs >= 0.0) || self.max_depth < 1 {
            return Err(CmcError::InvalidParameter(format!(
                "tolerance needs rel > 0, abs >= 0, max_depth >= 1 (got {self:?})"
            )));
        }
        Ok(())
    }

    /// Tolerance used for internal root solves that must be resolved to
    /// (nearly) machine precision.
    pub(crate) fn tight() -> Self {
        Tolerance {
            rel: 4.0 * f64::EPSILON,
            abs: 1e-300,
            max_depth: 50,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(CmcError::InvalidParameter(format!(
                "bracket needs finite lo < hi (got [{lo}, {hi}])"
            )));
        }
        Ok(Bracket { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `count` equally spaced points including both ends.
    pub fn linspace(&self, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![self.lo],
            _ => (0..count)
                .map(|i| self.lo + self.width() * i as f64 / (count - 1) as f64)
                .collect(),
        }
    }
}

// Kronrod 21-point abscissae and weights with the embedded 10-point Gauss
// rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_855_517,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

fn checked<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let y = f(x)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(CmcError::NonFinite { at: x, value: y })
    }
}

/// One Gauss-Kronrod 21 panel: (integral, error estimate).
fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((result, err))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Panel budget of one adaptive integration; an integrand whose error is
/// dominated by rounding noise would otherwise be bisected indefinitely.
const MAX_PANELS: usize = 1 << 14;

/// Globally adaptive Gauss-Kronrod quadrature of a fallible integrand.
///
/// The panel with the largest error estimate is bisected until the summed
/// error drops below `max(tol.abs, tol.rel * |Q|)`. Bisecting a panel deeper
/// than `tol.max_depth` levels is reported as [`CmcError::NonConvergence`].
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    tol.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(CmcError::InvalidParameter(format!(
            "integration limits must be finite (got [{a}, {b}])"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return try_integrate(f, b, a, tol).map(|q| -q);
    }

    let (value, error) = gk21(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value,
        error,
        depth: 0,
    });
    let mut total = value;
    let mut total_err = error;

    while total_err > tol.target(total) {
        let worst = heap.pop().expect("heap holds at least one panel");
        if worst.depth >= tol.max_depth || heap.len() >= MAX_PANELS {
            return Err(CmcError::NonConvergence {
                a,
                b,
                error: total_err,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk21(&mut f, worst.a, mid)?;
        let (v2, e2) = gk21(&mut f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        for (lo, hi, value, error) in [(worst.a, mid, v1, e1), (mid, worst.b, v2, e2)] {
            heap.push(Panel {
                a: lo,
                b: hi,
                value,
                error,
                depth: worst.depth + 1,
            });
        }
        // Resum when the retired panel dominated the totals (the running
        // update would cancel) and periodically against drift.
        if worst.error >= 0.25 * (total_err + worst.error - e1 - e2) || heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(heap.iter().map(|p| p.value).sum())
}

/// Adaptive quadrature of a plain integrand; see [`try_integrate`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, tol)
}

/// Integral over `[a, b]` of an integrand that blows up like `(b - s)^{-1/2}`
/// at the right end.
///
/// The substitution `s = b - v^2` turns the integral into
/// `∫_0^{√(b-a)} 2 v f(b - v^2) dv`, whose integrand is bounded, and hands
/// it to [`try_integrate`].
pub fn try_integrate_sqrt_singular<F>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a <= b) {
        return Err(CmcError::InvalidParameter(format!(
            "singular quadrature needs a <= b (got [{a}, {b}])"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let width = (b - a).sqrt();
    try_integrate(
        |v| {
            let s = (b - v * v).max(a);
            let y = 2.0 * v * f(s)?;
            if y.is_finite() {
                Ok(y)
            } else {
                Err(CmcError::NonFinite { at: s, value: y })
            }
        },
        0.0,
        width,
        tol,
    )
}

/// Plain-integrand form of [`try_integrate_sqrt_singular`].
pub fn integrate_sqrt_singular<F>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_sqrt_singular(|s| Ok(f(s)), a, b, tol)
}

/// Brent's method: inverse quadratic / secant steps with a bisection
/// fallback that keeps the sign change bracketed.
///
/// Terminates once the bracket is narrower than `tol.abs + tol.rel * |x|`
/// (plus a few ulps) or an exact zero is hit.
pub fn try_find_root<F>(mut f: F, bracket: Bracket, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    tol.validate()?;
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa.is_nan() || fb.is_nan() {
        return Err(CmcError::NonFinite {
            at: if fa.is_nan() { a } else { b },
            value: f64::NAN,
        });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(CmcError::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
            note: "",
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    // Bisection alone needs ~log2(width / eps) steps; allow generous slack.
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * (tol.abs + tol.rel * b.abs());
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() && fa.is_finite() && fc.is_finite() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if fb.is_nan() {
            return Err(CmcError::NonFinite { at: b, value: fb });
        }
    }
    Ok(b)
}

/// Plain-function form of [`try_find_root`].
pub fn find_root<F>(mut f: F, bracket: Bracket, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_find_root(|x| Ok(f(x)), bracket, tol)
}

/// Derivative estimate together with Ridders' error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeEstimate {
    pub value: f64,
    pub error: f64,
}

/// Ridders' method: central differences with steps `scale / 1.4^k`,
/// extrapolated in a Neville tableau. The caller guarantees that `f` is
/// defined on `[x - scale, x + scale]`.
pub fn try_derivative_estimate<F>(mut f: F, x: f64, scale: f64) -> Result<DerivativeEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    const SHRINK: f64 = 1.4;
    const SHRINK2: f64 = SHRINK * SHRINK;
    const TABLE: usize = 10;
    const SAFE: f64 = 2.0;

    if !(scale > 0.0) || !scale.is_finite() {
        return Err(CmcError::InvalidParameter(format!(
            "derivative step scale must be positive (got {scale})"
        )));
    }
    let mut central = |h: f64| -> Result<f64> {
        let fp = checked(&mut f, x + h)?;
        let fm = checked(&mut f, x - h)?;
        Ok((fp - fm) / (2.0 * h))
    };

    let mut table = [[0.0_f64; TABLE]; TABLE];
    let mut h = scale;
    table[0][0] = central(h)?;
    let mut best = DerivativeEstimate {
        value: table[0][0],
        error: f64::INFINITY,
    };
    for i in 1..TABLE {
        h /= SHRINK;
        table[0][i] = central(h)?;
        let mut fac = SHRINK2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= SHRINK2;
            let err = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if err <= best.error {
                best = DerivativeEstimate {
                    value: table[j][i],
                    error: err,
                };
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * best.error {
            break;
        }
    }
    if !best.value.is_finite() {
        return Err(CmcError::NonFinite {
            at: x,
            value: best.value,
        });
    }
    Ok(best)
}

/// Fallible derivative; see [`try_derivative_estimate`].
pub fn try_derivative<F>(f: F, x: f64, scale: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_derivative_estimate(f, x, scale).map(|d| d.value)
}

/// Central-difference derivative with Richardson extrapolation.
pub fn derivative<F>(mut f: F, x: f64, scale: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_derivative(|t| Ok(f(t)), x, scale)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre polynomial from the Chebyshev-like
    /// initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                let p = if order == 1 { x } else { p1 };
                let pm1 = if order == 1 { 1.0 } else { p0 };
                dp = n * (x * p - pm1) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            weights[i] = w;
            nodes[order - 1 - i] = -x;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// `Σ w_i f(x_i)` over the reference nodes on `[-1, 1]`.
    pub fn sum_with<F>(&self, mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    /// Fixed-order quadrature of `f` over `[a, b]`.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(center + half * x))
            .sum::<f64>()
            * half
    }
}

/// Shared 10-point rule for short-interval difference integrals.
pub(crate) fn gauss10() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

/// Chebyshev-Lobatto nodes on `[a, b]`, clustered at both ends.
pub fn chebyshev_nodes(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..count)
            .map(|j| {
                if j == 0 {
                    a
                } else if j == count - 1 {
                    b
                } else {
                    let c = (std::f64::consts::PI * j as f64 / (count - 1) as f64).cos();
                    a + 0.5 * (b - a) * (1.0 - c)
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_sine() {
        let tol = Tolerance::default();
        assert_relative_eq!(integrate(|_| 1.0, 0.0, 1.0, &tol).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(integrate(f64::sin, 0.0, PI, &tol).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn sine_cubed_reduction_formula() {
        // ∫_0^{π/2} sin^3 = (2/3)·∫_0^{π/2} sin = 2/3
        let q = integrate(|x| x.sin().powi(3), 0.0, PI / 2.0, &Tolerance::default()).unwrap();
        assert_relative_eq!(q, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let tol = Tolerance::default();
        let q = integrate(f64::exp, 1.0, 0.0, &tol).unwrap();
        assert_relative_eq!(q, 1.0 - std::f64::consts::E, epsilon = 1e-12);
    }

    #[test]
    fn depth_cap_is_reported() {
        let tol = Tolerance::new(1e-14, 0.0, 3).unwrap();
        let err = integrate(|x| (1.0 / x.abs().max(1e-300)).sqrt(), -1.0, 1.0, &tol).unwrap_err();
        assert!(matches!(err, CmcError::NonConvergence { .. }));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate(|x| 1.0 / (x - 0.5), 0.0, 1.0, &Tolerance::default()).unwrap_err();
        assert!(matches!(err, CmcError::NonFinite { .. }));
    }

    #[test]
    fn sqrt_singular_examples() {
        let tol = Tolerance::default();
        let q = integrate_sqrt_singular(|s| 1.0 / (1.0 - s).sqrt(), 0.0, 1.0, &tol).unwrap();
        assert_relative_eq!(q, 2.0, epsilon = 1e-12);
        // s/√(1-s²) = s/(√(1-s)√(1+s)); evaluate in the factored form so the
        // integrand stays accurate next to the endpoint.
        let q = integrate_sqrt_singular(|s| s / ((1.0 - s) * (1.0 + s)).sqrt(), 0.0, 1.0, &tol)
            .unwrap();
        assert_relative_eq!(q, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn sqrt_singular_agrees_on_regular_integrands() {
        let tol = Tolerance::default();
        let plain = integrate(|x| x.cos() * x.exp(), 0.2, 1.7, &tol).unwrap();
        let subst = integrate_sqrt_singular(|x| x.cos() * x.exp(), 0.2, 1.7, &tol).unwrap();
        assert!((plain - subst).abs() <= 10.0 * tol.target(plain));
    }

    #[test]
    fn root_examples() {
        let tol = Tolerance::new(1e-14, 1e-15, 50).unwrap();
        let b = |lo, hi| Bracket::new(lo, hi).unwrap();
        assert_relative_eq!(find_root(|x| x - 0.5, b(0.0, 1.0), &tol).unwrap(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(find_root(f64::cos, b(1.0, 2.0), &tol).unwrap(), PI / 2.0, epsilon = 1e-13);
        let r = find_root(|x| (x / 2.0).tanh() - 0.5, b(0.0, 5.0), &tol).unwrap();
        assert_relative_eq!(r, 2.0 * 0.5_f64.atanh(), epsilon = 1e-13);
    }

    #[test]
    fn root_without_sign_change() {
        let err = find_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), &Tolerance::default())
            .unwrap_err();
        assert!(matches!(err, CmcError::NoSignChange { .. }));
    }

    #[test]
    fn root_survives_infinite_endpoint_value() {
        // Bisection fallback must keep working when one end evaluates to +inf.
        let tol = Tolerance::new(1e-14, 1e-15, 50).unwrap();
        let r = find_root(|x| (x / 2.0).tan() - 1.0, Bracket::new(0.0, PI).unwrap(), &tol).unwrap();
        assert_relative_eq!(r, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn bracket_rejects_reversed() {
        assert!(Bracket::new(1.0, 0.0).is_err());
        assert!(Bracket::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_relative_eq!(derivative(|x| x * x, 3.0, 0.5).unwrap(), 6.0, epsilon = 1e-10);
        assert_relative_eq!(derivative(f64::sinh, 0.0, 0.5).unwrap(), 1.0, epsilon = 1e-12);
        let err = derivative(|x| if x > 0.0 { f64::NAN } else { x }, 0.0, 0.1).unwrap_err();
        assert!(matches!(err, CmcError::NonFinite { .. }));
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(10);
        let q = rule.integrate(|x| x.powi(19) + 3.0 * x.powi(18), -1.0, 1.0);
        assert_relative_eq!(q, 6.0 / 19.0, epsilon = 1e-14);
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        let odd = GaussLegendre::new(7);
        assert_relative_eq!(odd.integrate(|x| x.powi(12), 0.0, 1.0), 1.0 / 13.0, epsilon = 1e-14);
    }

    #[test]
    fn chebyshev_nodes_cover_interval() {
        let nodes = chebyshev_nodes(0.0, 2.0, 9);
        assert_eq!(nodes.first(), Some(&0.0));
        assert_eq!(nodes.last(), Some(&2.0));
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }
}
