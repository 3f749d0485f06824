//! Nesting of the sphere family.
//!
//! Viewing the equator height `h(s₀)` of the lower hemisphere as a function
//! of the equator radius, with `ρ(s, s₀) = φ_ε(s)/φ_ε(s₀)`,
//!
//! ```text
//! dh/ds₀ = ∫_0^{s₀} Λ(s, s₀) Ψ(s, s₀) ds,   Λ = ∂ρ/∂s + ∂ρ/∂s₀ = F_ε(s)/φ_ε²(s₀),
//! ```
//!
//! where `Ψ = (1 − ρ²)^{−3/2}` is `dJ/dρ` for the height integrand
//! `J = ρ/√(1 − ρ²)` (substitute `s = s₀ x` to move the `s₀` dependence out
//! of the limit, differentiate, and undo the substitution). So the equator
//! rises with `s₀` wherever `F_ε ≥ 0`, and two spheres with `H > H*` are then
//! nested.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{d2phi_raw, dphi_raw, f_eps_back, f_eps_raw, phi_raw};
use crate::error::{CmcError, Result};
use crate::numerics::{chebyshev_nodes, Tolerance};
use crate::profile::{CmcSphere, SphereParams};
use crate::spaceform::SpaceForm;

/// Pointwise margins below this count as violations; the band up to zero is
/// a tie (the curves touch at the pole).
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

/// Outcome of comparing the spheres of mean curvature `H > H*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestingReport {
    /// `(H, H*)`.
    pub pair: (f64, f64),
    pub s0: f64,
    pub s0_star: f64,
    pub equator_height: f64,
    pub equator_height_star: f64,
    /// `h(s) ≥ h*(s)` at every sample of `(0, s₀)`, up to the violation
    /// tolerance.
    pub height_dominance: bool,
    /// `h(s₀) ≤ h*(s₀*)`.
    pub equator_order: bool,
    pub nested: bool,
    /// Smallest of the sampled height gaps `h − h*`, the equator gap
    /// `h*(s₀*) − h(s₀)` and the radius gap `s₀* − s₀`. Negative exactly
    /// when some check fails.
    pub worst_margin: f64,
    pub samples: usize,
    pub violation_tolerance: f64,
}

/// One-sided estimate of the nesting threshold `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaEstimate {
    pub space: SpaceForm,
    /// Largest equator radius below which `F_ε ≥ 0` was verified; `None` on
    /// `H^n × R`, where every radius qualifies.
    pub s0_max: Option<f64>,
    /// `1/φ_ε(s0_max)`, or `n − 1` on `H^n × R`.
    pub alpha_upper: f64,
    /// Number of `s`-samples (and of scanned radii) behind the estimate.
    pub grid_resolution: usize,
    /// Width of the final bisection bracket on `s0_max`.
    pub s0_resolution: f64,
}

fn check_pair(sf: &SpaceForm, s0: f64, s: f64) -> Result<()> {
    sf.check_open_radius(s0)?;
    if s > 0.0 && s < s0 {
        Ok(())
    } else {
        Err(CmcError::OutOfDomain {
            value: s,
            domain: "(0, s0)",
        })
    }
}

/// `Λ(s, s₀) = F_ε(s)/φ_ε²(s₀)` for `0 < s < s₀ < R_ε`.
pub fn nesting_integrand(sf: &SpaceForm, s0: f64, s: f64) -> Result<f64> {
    check_pair(sf, s0, s)?;
    Ok(f_eps_raw(sf, s0, s) / phi_raw(sf, s0).powi(2))
}

/// `Λ(s, s₀) = φ_ε'(s)/φ_ε(s₀) − φ_ε'(s₀)φ_ε(s)/φ_ε²(s₀)`, the unsimplified
/// sum of partial derivatives.
pub fn nesting_integrand_direct(sf: &SpaceForm, s0: f64, s: f64) -> Result<f64> {
    check_pair(sf, s0, s)?;
    let phi0 = phi_raw(sf, s0);
    Ok(dphi_raw(sf, s) / phi0 - dphi_raw(sf, s0) * phi_raw(sf, s) / (phi0 * phi0))
}

/// `Λ` on `S² × R` in closed form: `(φ(s)/φ(s₀)) (1/sin s − 1/sin s₀)` with
/// `φ(s) = tan(s/2)`. Negative when `π/2 < s < s₀`.
pub fn nesting_integrand_s2(s0: f64, s: f64) -> Result<f64> {
    let sf = SpaceForm::spherical(2)?;
    check_pair(&sf, s0, s)?;
    Ok((s / 2.0).tan() / (s0 / 2.0).tan() * (1.0 / s.sin() - 1.0 / s0.sin()))
}

/// `dh(s₀)/ds₀`, the rate at which the equator height grows with the equator
/// radius.
pub fn dphi_ds0(sf: &SpaceForm, s0: f64, tol: &Tolerance) -> Result<f64> {
    let sphere = CmcSphere::from_params(SphereParams::from_radius(sf, s0)?, tol)?;
    let scale = phi_raw(sf, s0).powi(2);
    // Λ vanishes linearly at s₀ while Ψ ~ (s₀ − s)^{-3/2}.
    sphere.full_integral(|_, gap, _, theta| Ok(f_eps_back(sf, s0, gap) / scale / theta.powi(3)))
}

/// Builds both spheres and compares their lower hemispheres on `samples`
/// Chebyshev nodes of `[0, s₀]`.
pub fn check_nested(
    sf: &SpaceForm,
    mean_curvature: f64,
    mean_curvature_star: f64,
    samples: usize,
    tol: &Tolerance,
) -> Result<NestingReport> {
    if !(mean_curvature > mean_curvature_star) {
        return Err(CmcError::InvalidParameter(format!(
            "nesting compares H > H* (got H = {mean_curvature}, H* = {mean_curvature_star})"
        )));
    }
    if samples < 3 {
        return Err(CmcError::InvalidParameter(format!(
            "nesting needs at least 3 samples (got {samples})"
        )));
    }
    let sphere = CmcSphere::new(sf, mean_curvature, tol)?;
    let star = CmcSphere::new(sf, mean_curvature_star, tol)?;
    let (s0, s0_star) = (sphere.s0(), star.s0());

    let nodes = chebyshev_nodes(0.0, s0, samples);
    let interior = &nodes[1..samples - 1];
    let gaps = interior
        .iter()
        .map(|&s| {
            let other = if s <= s0_star { star.height(s)? } else { f64::NAN };
            Ok(sphere.height(s)? - other)
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst_gap = gaps
        .iter()
        .fold(f64::INFINITY, |m, &g| if g.is_nan() { f64::NEG_INFINITY } else { m.min(g) });

    let equator_gap = star.equator_height() - sphere.equator_height();
    let height_dominance = worst_gap > -VIOLATION_TOLERANCE;
    let equator_order = equator_gap > -VIOLATION_TOLERANCE;
    let nested = height_dominance && equator_order && s0 < s0_star;
    Ok(NestingReport {
        pair: (mean_curvature, mean_curvature_star),
        s0,
        s0_star,
        equator_height: sphere.equator_height(),
        equator_height_star: star.equator_height(),
        height_dominance,
        equator_order,
        nested,
        worst_margin: worst_gap.min(equator_gap).min(s0_star - s0),
        samples,
        violation_tolerance: VIOLATION_TOLERANCE,
    })
}

/// `F_ε(·; s₀) ≥ 0` on the Chebyshev grid, together with the sign of
/// `F_ε'(s₀) = φ_ε(s₀)φ_ε''(s₀) − φ_ε'(s₀)²` which decides the sign of `F_ε`
/// just inside `s₀`, below the grid spacing.
fn comparison_nonnegative(sf: &SpaceForm, s0: f64, grid: usize) -> bool {
    let (phi0, dphi0) = (phi_raw(sf, s0), dphi_raw(sf, s0));
    if dphi0 * dphi0 - phi0 * d2phi_raw(sf, s0) < 0.0 {
        return false;
    }
    chebyshev_nodes(0.0, s0, grid)
        .into_iter()
        .all(|s| f_eps_raw(sf, s0, s) >= 0.0)
}

/// Scans `grid` equally spaced radii of `(0, π)` for the first one at which
/// `F_ε` takes a negative value, then bisects between it and its predecessor.
/// On `H^n × R` returns `α = n − 1` immediately.
///
/// The result is an upper bound for the nesting threshold: `F_ε ≥ 0` is
/// sufficient for nesting, not necessary.
pub fn estimate_alpha(sf: &SpaceForm, grid: usize, tol: &Tolerance) -> AlphaEstimate {
    let grid = grid.max(3);
    if !sf.is_spherical() {
        return AlphaEstimate {
            space: sf.clone(),
            s0_max: None,
            alpha_upper: sf.critical_mean_curvature(),
            grid_resolution: grid,
            s0_resolution: 0.0,
        };
    }
    let pi = std::f64::consts::PI;
    let radii: Vec<f64> = (1..=grid).map(|k| pi * k as f64 / (grid + 1) as f64).collect();
    let passes: Vec<bool> = radii
        .par_iter()
        .map(|&s0| comparison_nonnegative(sf, s0, grid))
        .collect();
    let first_fail = passes.iter().position(|ok| !ok);
    let (mut lo, mut hi) = match first_fail {
        None => (radii[grid - 1], radii[grid - 1]),
        Some(0) => (0.0, radii[0]),
        Some(k) => (radii[k - 1], radii[k]),
    };
    let target = tol.abs.max(tol.rel * hi).max(f64::EPSILON * hi);
    for _ in 0..200 {
        if hi - lo <= target {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if comparison_nonnegative(sf, mid, grid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha_upper = if lo > 0.0 {
        1.0 / phi_raw(sf, lo)
    } else {
        f64::INFINITY
    };
    AlphaEstimate {
        space: sf.clone(),
        s0_max: Some(lo),
        alpha_upper,
        grid_resolution: grid,
        s0_resolution: hi - lo,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::new(1e-11, 1e-14, 50).unwrap()
    }

    #[test]
    fn integrand_domain() {
        let sf = SpaceForm::hyperbolic(2).unwrap();
        assert!(nesting_integrand(&sf, 1.0, 1.0).is_err());
        assert!(nesting_integrand(&sf, 1.0, 0.0).is_err());
        assert!(nesting_integrand_s2(PI, 1.0).is_err());
    }

    #[test]
    fn closed_form_on_s2() {
        let sf = SpaceForm::spherical(2).unwrap();
        for (s0, s) in [(1.0, 0.4), (2.0, 1.9), (3.0, 2.0), (3.0, 0.05)] {
            let generic = nesting_integrand(&sf, s0, s).unwrap();
            assert_relative_eq!(generic, nesting_integrand_s2(s0, s).unwrap(), max_relative = 1e-12);
        }
        assert!(nesting_integrand_s2(3.0, 2.0).unwrap() < 0.0);
    }

    #[test]
    fn equator_rises_in_hyperbolic_space() {
        let sf = SpaceForm::hyperbolic(2).unwrap();
        assert!(dphi_ds0(&sf, 1.5, &tol()).unwrap() > 0.0);
    }

    #[test]
    fn equator_falls_near_the_antipode() {
        let sf = SpaceForm::spherical(2).unwrap();
        assert!(dphi_ds0(&sf, 3.0, &tol()).unwrap() < 0.0);
    }

    #[test]
    fn s2_alpha_is_one() {
        let sf = SpaceForm::spherical(2).unwrap();
        let est = estimate_alpha(&sf, 64, &tol());
        let s0_max = est.s0_max.unwrap();
        assert!((s0_max - PI / 2.0).abs() < 1e-8, "{s0_max}");
        assert!((est.alpha_upper - 1.0).abs() < 1e-8);
    }

    #[test]
    fn hyperbolic_alpha_is_critical() {
        for n in 2..=5 {
            let est = estimate_alpha(&SpaceForm::hyperbolic(n).unwrap(), 16, &tol());
            assert_eq!(est.alpha_upper, (n - 1) as f64);
            assert_eq!(est.s0_max, None);
        }
    }

    #[test]
    fn nested_pair() {
        let sf = SpaceForm::hyperbolic(2).unwrap();
        let r = check_nested(&sf, 3.0, 2.0, 64, &tol()).unwrap();
        assert!(r.nested && r.height_dominance && r.equator_order);
        assert!(r.worst_margin > 0.0);
        assert!(check_nested(&sf, 2.0, 3.0, 64, &tol()).is_err());
        assert!(matches!(
            check_nested(&sf, 3.0, 0.5, 64, &tol()),
            Err(CmcError::SubcriticalH { .. })
        ));
    }
}
