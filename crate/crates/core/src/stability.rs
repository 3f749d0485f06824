//! Stability of the spheres through the variation field of the family.
//!
//! Differentiating the family `H ↦ Σ_H` (all spheres share their lowest
//! point) gives a normal field `f` with `Lf = 1`. By Koiso's criterion a
//! sphere whose Jacobi operator has exactly one negative eigenvalue and a
//! kernel spanned by the ambient Killing fields is stable iff `∫_Σ f ≥ 0`.
//! Those spectral preconditions are taken from the literature, not computed.
//!
//! Sign convention: `f = ⟨∂X/∂H, N⟩` with `N` the **inward** normal, so a
//! nested family has `f ≥ 0`, and `∫_Σ f = −dV/dH`.
//!
//! On the lower hemisphere `f = θ g` with `g(s) = ∂h/∂H = ∫_0^s φ_ε/θ³`.
//! Integrating by parts against `(1/θ)' = H² φ_ε φ_ε'/θ³` gives the bounded
//! form
//!
//! ```text
//! f(s) = (1/H²) [ 1/φ_ε'(s) − n θ(s) + θ(s) G(s) ],   G(s) = ∫_0^s φ_ε''/(φ_ε'² θ),
//! ```
//!
//! which tends to `1/(H² φ_ε'(s₀))` at the equator. On the upper hemisphere
//! the reflected point moves by `2 dh_eq/dH` more, so `f ↦ f − 2θ dh_eq/dH`.

use serde::{Deserialize, Serialize};

use crate::basis::{d2phi_raw, dphi_raw, phi_raw};
use crate::error::{CmcError, Result};
use crate::numerics::{chebyshev_nodes, try_derivative_estimate, try_find_root, try_integrate, Bracket, Tolerance};
use crate::profile::{CmcSphere, SphereParams};
use crate::spaceform::{unit_sphere_measure, SpaceForm};

/// Samples per hemisphere used for `f_min` in a [`StabilityReport`].
const REPORT_SAMPLES: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hemisphere {
    Lower,
    Upper,
}

/// Stability verdict for one sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub params: SphereParams,
    pub normalized_mean_curvature: f64,
    /// `∫_Σ f`; equals `−dV/dH`.
    pub integral_f: f64,
    /// `f` on the equator, `1/(H² φ_ε'(s₀))`.
    pub f_equator: f64,
    /// Smallest sampled value of `f` over both hemispheres.
    pub f_min: f64,
    /// Derivative of the equator height along the family.
    pub dh_eq_dh: f64,
    pub stable: bool,
    /// Always true: the spectral hypotheses of Koiso's criterion are assumed.
    pub koiso_preconditions_assumed: bool,
    pub tolerance: Tolerance,
}

/// Derivative of the equator height `h_eq(H)` along the family, by Ridders
/// extrapolation of central differences.
pub fn dh_eq_dh(space: &SpaceForm, mean_curvature: f64, tol: &Tolerance) -> Result<f64> {
    let h = mean_curvature;
    let scale = if space.is_spherical() {
        0.2 * h
    } else {
        (0.2 * (h - space.critical_mean_curvature())).min(0.2 * h)
    };
    let estimate = try_derivative_estimate(
        |x| Ok(CmcSphere::new(space, x, tol)?.equator_height()),
        h,
        scale,
    )?;
    Ok(estimate.value)
}

/// The variation field of one sphere, with the quantities shared by all
/// evaluation points precomputed.
#[derive(Debug, Clone)]
pub struct VariationField {
    sphere: CmcSphere,
    g_total: f64,
    dh_eq_dh: f64,
}

impl VariationField {
    pub fn new(params: &SphereParams, tol: &Tolerance) -> Result<Self> {
        let sphere = CmcSphere::from_params(params.clone(), tol)?;
        let sf = sphere.space().clone();
        let g_total = sphere.full_integral(|s, _, _, theta| Ok(g_integrand(&sf, s, theta)))?;
        let dh = dh_eq_dh(&sf, params.mean_curvature, tol)?;
        Ok(Self {
            sphere,
            g_total,
            dh_eq_dh: dh,
        })
    }

    pub fn sphere(&self) -> &CmcSphere {
        &self.sphere
    }

    pub fn dh_eq_dh(&self) -> f64 {
        self.dh_eq_dh
    }

    fn g_partial(&self, s: f64) -> Result<f64> {
        let sf = self.sphere.space();
        if s <= 0.5 * self.sphere.s0() {
            try_integrate(
                |u| Ok(g_integrand(sf, u, self.sphere.theta_raw(u))),
                0.0,
                s,
                self.sphere.tolerance(),
            )
        } else {
            let tail = self
                .sphere
                .tail_integral(s, |u, _, _, theta| Ok(g_integrand(sf, u, theta)))?;
            Ok(self.g_total - tail)
        }
    }

    /// `f` at radius `s ∈ [0, s₀]` on the given hemisphere.
    pub fn value(&self, s: f64, hemisphere: Hemisphere) -> Result<f64> {
        let theta = self.sphere.theta(s)?;
        let h = self.sphere.mean_curvature();
        let n = self.sphere.space().nf();
        let lower = (1.0 / dphi_raw(self.sphere.space(), s) - n * theta + theta * self.g_partial(s)?) / (h * h);
        Ok(match hemisphere {
            Hemisphere::Lower => lower,
            Hemisphere::Upper => lower - 2.0 * theta * self.dh_eq_dh,
        })
    }

    /// `f` on the equator.
    pub fn equator_value(&self) -> f64 {
        let h = self.sphere.mean_curvature();
        1.0 / (h * h * dphi_raw(self.sphere.space(), self.sphere.s0()))
    }

    /// `∫_Σ f = |S^{n−1}| [ 2 ∫_0^{s₀} k(u)(I(s₀) − I(u)) du − 2 I(s₀) dh_eq/dH ]`
    /// with `k = φ_ε/θ³`, the order-swapped form of `∫ sin_ε^{n−1} g`.
    pub fn integral(&self) -> Result<f64> {
        let sf = self.sphere.space();
        let s0 = self.sphere.s0();
        let inner = self.sphere.full_integral(|u, gap, _, theta| {
            Ok(phi_raw(sf, u) / theta.powi(3) * sf.primitive_gap_back(s0, gap))
        })?;
        let i0 = sf.primitive_unchecked(s0);
        Ok(unit_sphere_measure(sf.n() - 1) * 2.0 * (inner - i0 * self.dh_eq_dh))
    }
}

fn g_integrand(sf: &SpaceForm, s: f64, theta: f64) -> f64 {
    let d = dphi_raw(sf, s);
    d2phi_raw(sf, s) / (d * d * theta)
}

/// `f` at one point; builds a [`VariationField`] per call.
pub fn variation_f(params: &SphereParams, s: f64, hemisphere: Hemisphere, tol: &Tolerance) -> Result<f64> {
    VariationField::new(params, tol)?.value(s, hemisphere)
}

/// `∫_Σ f` for one sphere.
pub fn integral_f(params: &SphereParams, tol: &Tolerance) -> Result<f64> {
    VariationField::new(params, tol)?.integral()
}

/// Root of `H ↦ ∫_{Σ_H} f` in the bracket: the stability threshold `H₀`.
/// Mean curvature is the sum of the principal curvatures here; divide by `n`
/// for the averaged convention.
pub fn stability_threshold_h0(space: &SpaceForm, bracket: Bracket, tol: &Tolerance) -> Result<f64> {
    let value = |h: f64| integral_f(&SphereParams::solve(space, h)?, tol);
    let (f_lo, f_hi) = (value(bracket.lo)?, value(bracket.hi)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(CmcError::NoSignChange {
            lo: bracket.lo,
            hi: bracket.hi,
            f_lo,
            f_hi,
            note: " (the integral of f keeps its sign: every sphere in the bracket is on the same side of the threshold)",
        });
    }
    let root_tol = Tolerance::new(tol.rel.max(1e-10), tol.abs.max(1e-12), tol.max_depth)?;
    try_find_root(value, bracket, &root_tol)
}

/// Stability verdict via Koiso's criterion, `stable ⇔ ∫_Σ f ≥ 0`.
pub fn stability_verdict(params: &SphereParams, tol: &Tolerance) -> Result<StabilityReport> {
    let field = VariationField::new(params, tol)?;
    let integral = field.integral()?;
    let mut f_min = f64::INFINITY;
    for s in chebyshev_nodes(0.0, params.s0, REPORT_SAMPLES) {
        for hemisphere in [Hemisphere::Lower, Hemisphere::Upper] {
            f_min = f_min.min(field.value(s, hemisphere)?);
        }
    }
    Ok(StabilityReport {
        params: params.clone(),
        normalized_mean_curvature: params.normalized_mean_curvature(),
        integral_f: integral,
        f_equator: field.equator_value(),
        f_min,
        dh_eq_dh: field.dh_eq_dh(),
        stable: integral >= 0.0,
        koiso_preconditions_assumed: true,
        tolerance: *tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::new(1e-11, 1e-14, 50).unwrap()
    }

    #[test]
    fn f_vanishes_at_the_lower_pole() {
        let p = SphereParams::solve(&SpaceForm::hyperbolic(2).unwrap(), 2.0).unwrap();
        assert!(variation_f(&p, 0.0, Hemisphere::Lower, &tol()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn equator_limit() {
        for (sf, h) in [
            (SpaceForm::hyperbolic(2).unwrap(), 2.0),
            (SpaceForm::spherical(3).unwrap(), 1.1),
        ] {
            let p = SphereParams::solve(&sf, h).unwrap();
            let field = VariationField::new(&p, &tol()).unwrap();
            let near = field.value(p.s0 * (1.0 - 1e-9), Hemisphere::Lower).unwrap();
            assert_relative_eq!(near, field.equator_value(), max_relative = 1e-4);
            let at = field.value(p.s0, Hemisphere::Upper).unwrap();
            assert_relative_eq!(at, field.equator_value(), max_relative = 1e-12);
        }
    }

    #[test]
    fn integral_is_minus_volume_derivative() {
        let sf = SpaceForm::spherical(2).unwrap();
        for h in [0.3, 1.0] {
            let p = SphereParams::solve(&sf, h).unwrap();
            let dv = crate::numerics::derivative(
                |x| CmcSphere::new(&sf, x, &tol()).unwrap().volume().unwrap(),
                h,
                0.1 * h,
            )
            .unwrap();
            assert_relative_eq!(integral_f(&p, &tol()).unwrap(), -dv, max_relative = 1e-6);
        }
    }

    #[test]
    fn hyperbolic_threshold_does_not_exist() {
        let sf = SpaceForm::hyperbolic(2).unwrap();
        let err = stability_threshold_h0(&sf, Bracket::new(1.5, 5.0).unwrap(), &tol()).unwrap_err();
        assert!(matches!(err, CmcError::NoSignChange { .. }));
    }
}
