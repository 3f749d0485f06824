//! The radial basis function
//!
//! ```text
//! φ_ε(s) = I(s) / sin_ε^{n−1}(s),      I(s) = ∫_0^s sin_ε^{n−1}(u) du,
//! ```
//!
//! the solution of `y' = −(n−1) cot_ε(s) y + 1` with `y(0) = 0`, together
//! with its first two derivatives, the auxiliaries `ω_ε`, `μ_ε`, `Λ` used to
//! establish its monotonicity and convexity, and the comparison function
//! `F_ε(s) = φ_ε(s₀)φ_ε'(s) − φ_ε(s)φ_ε'(s₀)`.
//!
//! Away from the origin everything is evaluated from the closed recursion
//! `φ_m = ε((m−1)φ_{m−2}/sin_ε² − cot_ε)/m` on `φ_m = I_m / sin_ε^m`, seeded
//! with `φ_0 = s` and `φ_1 = tan_ε(s/2)`. Below [`SERIES_CROSSOVER`] the
//! Maclaurin series is used instead, so `φ_ε'(0) = 1/n` comes out exactly.

use serde::{Deserialize, Serialize};

use crate::error::{CmcError, Result};
use crate::numerics::{gauss10, Tolerance};
use crate::spaceform::{horner, SpaceForm, SERIES_CROSSOVER};

/// `φ_ε`, its derivatives and the primitive `I` at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisEval {
    pub s: f64,
    pub phi: f64,
    pub dphi: f64,
    pub d2phi: f64,
    pub primitive: f64,
}

/// The auxiliaries of the convexity argument at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaAux {
    /// `ω_ε = sin_ε^n − (n−1) cos_ε I`, positive on `(0, R_ε)`.
    pub omega: f64,
    /// `μ_ε = ε(n−1) I + cos_ε sin_ε^{n−2}`, with `ω_ε' = sin_ε μ_ε`.
    pub mu: f64,
    /// `Λ = ε sin_ε² I − cos_ε (sin_ε^n − n cos_ε I)`, with
    /// `Λ' = 2ε sin_ε ω_ε` and `φ_ε'' = (n−1) Λ / sin_ε^{n+1}`.
    pub lambda: f64,
}

/// Closed-form `φ_ε`; loses relative accuracy as `s → 0`.
pub(crate) fn phi_closed(sf: &SpaceForm, s: f64) -> f64 {
    let m = sf.n() - 1;
    let eps = sf.epsilon();
    let sin2 = sf.sin_eps(s).powi(2);
    let cot = sf.cot_unchecked(s);
    let (mut order, mut value) = if m.is_multiple_of(2) { (0, s) } else { (1, sf.half_tan(s)) };
    while order < m {
        order += 2;
        let k = order as f64;
        value = eps * ((k - 1.0) * value / sin2 - cot) / k;
    }
    value
}

pub(crate) fn phi_raw(sf: &SpaceForm, s: f64) -> f64 {
    if s < SERIES_CROSSOVER {
        s * horner(&sf.series().phi, s * s)
    } else {
        phi_closed(sf, s)
    }
}

pub(crate) fn dphi_raw(sf: &SpaceForm, s: f64) -> f64 {
    if s < SERIES_CROSSOVER {
        let c = &sf.series().phi;
        let x = s * s;
        c.iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (k, ck)| acc * x + (2 * k + 1) as f64 * ck)
    } else {
        1.0 - (sf.nf() - 1.0) * sf.cot_unchecked(s) * phi_closed(sf, s)
    }
}

pub(crate) fn d2phi_raw(sf: &SpaceForm, s: f64) -> f64 {
    if s < SERIES_CROSSOVER {
        let c = &sf.series().phi;
        let x = s * s;
        s * c
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, ck)| acc * x + ((2 * k + 1) * (2 * k)) as f64 * ck)
    } else {
        let n = sf.nf();
        let phi = phi_closed(sf, s);
        let cot = sf.cot_unchecked(s);
        (n - 1.0) * (sf.epsilon() * phi - cot + n * cot * cot * phi)
    }
}

/// Largest interval length on which the difference integrals use the fixed
/// Gauss rule. On `S^n` it shrinks with the distance to the pole of `φ_ε` at
/// `π` so the rule stays exact to rounding.
fn short_interval(sf: &SpaceForm, b: f64) -> f64 {
    if sf.is_spherical() {
        0.25 * (std::f64::consts::PI - b).min(1.0)
    } else {
        0.25
    }
}

/// `φ_ε(b) − φ_ε(a)` for `a ≤ b`, without cancellation for short intervals.
pub(crate) fn phi_gap(sf: &SpaceForm, a: f64, b: f64) -> f64 {
    if b - a < short_interval(sf, b) {
        gauss10().integrate(|u| dphi_raw(sf, u), a, b)
    } else {
        phi_raw(sf, b) - phi_raw(sf, a)
    }
}

/// `φ_ε(b) − φ_ε(b − len)` with the length given exactly, so the result is
/// smooth in `len` even where `b − len` rounds.
pub(crate) fn phi_gap_back(sf: &SpaceForm, b: f64, len: f64) -> f64 {
    if len < short_interval(sf, b) {
        let rule = gauss10();
        0.5 * len * rule.sum_with(|x| dphi_raw(sf, b - 0.5 * len * (1.0 - x)))
    } else {
        phi_raw(sf, b) - phi_raw(sf, b - len)
    }
}

/// `φ_ε'(b) − φ_ε'(b − len)`; see [`phi_gap_back`].
pub(crate) fn dphi_gap_back(sf: &SpaceForm, b: f64, len: f64) -> f64 {
    if len < short_interval(sf, b) {
        let rule = gauss10();
        0.5 * len * rule.sum_with(|x| d2phi_raw(sf, b - 0.5 * len * (1.0 - x)))
    } else {
        dphi_raw(sf, b) - dphi_raw(sf, b - len)
    }
}

/// `F_ε(s₀ − len)` with the distance to `s₀` given exactly.
pub(crate) fn f_eps_back(sf: &SpaceForm, s0: f64, len: f64) -> f64 {
    if len <= 0.0 {
        return 0.0;
    }
    if len < short_interval(sf, s0) {
        dphi_raw(sf, s0) * phi_gap_back(sf, s0, len) - phi_raw(sf, s0) * dphi_gap_back(sf, s0, len)
    } else {
        f_eps_raw(sf, s0, s0 - len)
    }
}

/// `φ_ε'(b) − φ_ε'(a)` for `a ≤ b`, without cancellation for short intervals.
pub(crate) fn dphi_gap(sf: &SpaceForm, a: f64, b: f64) -> f64 {
    if b - a < short_interval(sf, b) {
        gauss10().integrate(|u| d2phi_raw(sf, u), a, b)
    } else {
        dphi_raw(sf, b) - dphi_raw(sf, a)
    }
}

/// `φ_ε(s)`, with the smooth extension `φ_ε(0) = 0`. Strictly increasing on
/// `[0, R_ε)`.
pub fn phi_eps(sf: &SpaceForm, s: f64) -> Result<f64> {
    sf.check_radius(s)?;
    Ok(phi_raw(sf, s))
}

/// `φ_ε'(s)`; exactly `1/n` at the origin.
pub fn phi_eps_prime(sf: &SpaceForm, s: f64) -> Result<f64> {
    sf.check_radius(s)?;
    Ok(dphi_raw(sf, s))
}

/// `φ_ε''(s) = (n−1) Λ(s) / sin_ε^{n+1}(s)`; its sign is ε on `(0, R_ε)`.
pub fn phi_eps_second(sf: &SpaceForm, s: f64) -> Result<f64> {
    sf.check_open_radius(s)?;
    Ok(d2phi_raw(sf, s))
}

/// `φ_ε` through an adaptive quadrature of `I`; the generic path used to
/// cross-check the closed forms.
pub fn phi_eps_quadrature(sf: &SpaceForm, s: f64, tol: &Tolerance) -> Result<f64> {
    sf.check_radius(s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let primitive = sf.primitive_i_quadrature(s, tol)?;
    Ok(primitive / sf.sin_eps(s).powi(sf.n() as i32 - 1))
}

/// All basis quantities at `s`.
pub fn eval(sf: &SpaceForm, s: f64) -> Result<BasisEval> {
    sf.check_radius(s)?;
    Ok(BasisEval {
        s,
        phi: phi_raw(sf, s),
        dphi: dphi_raw(sf, s),
        d2phi: d2phi_raw(sf, s),
        primitive: sf.primitive_unchecked(s),
    })
}

/// `ω_ε`, `μ_ε` and `Λ` at `s ∈ [0, R_ε)`.
///
/// `ω_ε` and `Λ` are assembled from `φ_ε'` and `φ_ε''`
/// (`ω_ε = sin_ε^n φ_ε'`, `Λ = sin_ε^{n+1} φ_ε''/(n−1)`) so their signs are
/// resolved near the origin, where the defining expressions cancel.
pub fn lemma_aux(sf: &SpaceForm, s: f64) -> Result<LemmaAux> {
    sf.check_radius(s)?;
    let n = sf.n() as i32;
    let sin = sf.sin_eps(s);
    let omega = sin.powi(n) * dphi_raw(sf, s);
    let lambda = sin.powi(n + 1) * d2phi_raw(sf, s) / (sf.nf() - 1.0);
    let mu = sf.epsilon() * (sf.nf() - 1.0) * sf.primitive_unchecked(s)
        + sf.cos_eps(s) * sin.powi(n - 2);
    Ok(LemmaAux { omega, mu, lambda })
}

/// `F_ε(s) = φ_ε(s₀)φ_ε'(s) − φ_ε(s)φ_ε'(s₀)` for `0 ≤ s ≤ s₀ < R_ε`.
///
/// `F_ε(s₀) = 0` exactly and `F_ε(0) = φ_ε(s₀)/n`. Near `s₀` it is computed
/// as `φ_ε'(s₀)(φ_ε(s₀) − φ_ε(s)) − φ_ε(s₀)(φ_ε'(s₀) − φ_ε'(s))` with the
/// differences integrated directly, which keeps full relative accuracy.
pub fn f_eps(sf: &SpaceForm, s0: f64, s: f64) -> Result<f64> {
    sf.check_open_radius(s0)?;
    if !(0.0..=s0).contains(&s) {
        return Err(CmcError::OutOfDomain {
            value: s,
            domain: "[0, s0]",
        });
    }
    Ok(f_eps_raw(sf, s0, s))
}

pub(crate) fn f_eps_raw(sf: &SpaceForm, s0: f64, s: f64) -> f64 {
    if s == s0 {
        return 0.0;
    }
    let phi0 = phi_raw(sf, s0);
    let dphi0 = dphi_raw(sf, s0);
    if s0 - s < short_interval(sf, s0) {
        dphi0 * phi_gap(sf, s, s0) - phi0 * dphi_gap(sf, s, s0)
    } else {
        phi0 * dphi_raw(sf, s) - phi_raw(sf, s) * dphi0
    }
}
