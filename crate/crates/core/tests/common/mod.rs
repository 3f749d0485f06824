//! Whole-family finite-difference oracle for the variation field.
//!
//! The meridian half-plane `(s, t)` carries the flat metric `ds² + dt²`, so
//! the normal displacement between `Σ_H` and `Σ_{H+δ}` can be measured there
//! with plane geometry: from each point `p` of `Σ_H` follow the inward normal
//! `N` until it meets the closed meridian of `Σ_{H+δ}`, and call the signed
//! distance `λ`. Then `λ/δ → f` and `∫_Σ λ/δ → ∫_Σ f` as `δ → 0`.

#![allow(dead_code)]

use cmc_rot::numerics::{find_root, Bracket, GaussLegendre, Tolerance};
use cmc_rot::{CmcSphere, SpaceForm};

/// Steps in `H` for the extrapolation ladder.
pub const DELTAS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

const QUADRATURE_ORDER: usize = 48;

pub fn tol() -> Tolerance {
    Tolerance::new(1e-11, 1e-14, 50).unwrap()
}

/// Point of the closed meridian of `sphere` at arclength-like parameter
/// `σ ∈ [0, 2s₀]`: the lower hemisphere for `σ ≤ s₀`, then the upper one
/// traversed back to the axis.
fn meridian(sphere: &CmcSphere, sigma: f64) -> (f64, f64) {
    let s0 = sphere.s0();
    let h_eq = sphere.equator_height();
    if sigma <= s0 {
        (sigma, sphere.height(sigma.max(0.0)).unwrap())
    } else {
        let s = (2.0 * s0 - sigma).max(0.0);
        (s, 2.0 * h_eq - sphere.height(s).unwrap())
    }
}

/// Signed distance along `normal` from `p` to the meridian of `other`,
/// searched near the parameter `guess`.
fn normal_distance(other: &CmcSphere, p: (f64, f64), normal: (f64, f64), guess: f64) -> f64 {
    let top = 2.0 * other.s0();
    let cross = |sigma: f64| {
        let c = meridian(other, sigma);
        (c.0 - p.0) * normal.1 - (c.1 - p.1) * normal.0
    };
    let mut width = 0.02 * other.s0();
    let sigma = loop {
        let lo = (guess - width).max(0.0);
        let hi = (guess + width).min(top);
        let (f_lo, f_hi) = (cross(lo), cross(hi));
        if f_lo == 0.0 {
            break lo;
        }
        if f_hi == 0.0 {
            break hi;
        }
        if f_lo.signum() != f_hi.signum() {
            break find_root(cross, Bracket::new(lo, hi).unwrap(), &tol()).unwrap();
        }
        assert!(lo > 0.0 || hi < top, "no crossing of the displaced meridian");
        width *= 2.0;
    };
    let c = meridian(other, sigma);
    (c.0 - p.0) * normal.0 + (c.1 - p.1) * normal.1
}

/// `∫_Σ λ/δ` for one step `δ`, with the area element integrated in
/// `v = √(s₀ − s)` by a fixed Gauss rule on each hemisphere.
pub fn displacement_integral(sf: &SpaceForm, h: f64, delta: f64) -> f64 {
    let tol = tol();
    let sphere = CmcSphere::new(sf, h, &tol).unwrap();
    let other = CmcSphere::new(sf, h + delta, &tol).unwrap();
    let (s0, s0_other) = (sphere.s0(), other.s0());
    let h_eq = sphere.equator_height();
    let area_constant = sf.sphere_area_constant();
    let k = sf.n() as i32 - 1;
    let rule = GaussLegendre::new(QUADRATURE_ORDER);
    let v_max = s0.sqrt();
    let mut total = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = 0.5 * v_max * (1.0 + x);
        let s = s0 - v * v;
        let rho = sphere.rho(s).unwrap();
        let theta = sphere.theta(s).unwrap();
        let weight = area_constant * sf.sin_eps(s).powi(k) * 2.0 * v / theta;
        let scaled = s * s0_other / s0;

        let lower = (s, sphere.height(s).unwrap());
        let lambda_lower = normal_distance(&other, lower, (-rho, theta), scaled);
        let upper = (s, 2.0 * h_eq - lower.1);
        let lambda_upper = normal_distance(&other, upper, (-rho, -theta), 2.0 * s0_other - scaled);

        total += 0.5 * v_max * w * weight * (lambda_lower + lambda_upper) / delta;
    }
    total
}

/// Richardson extrapolation of [`displacement_integral`] over [`DELTAS`]
/// (error `a δ + b δ² + …`).
pub fn fd_integral_f(sf: &SpaceForm, h: f64) -> f64 {
    let d: Vec<f64> = DELTAS.iter().map(|&delta| displacement_integral(sf, h, delta)).collect();
    let r1 = [2.0 * d[1] - d[0], 2.0 * d[2] - d[1]];
    (4.0 * r1[1] - r1[0]) / 3.0
}
