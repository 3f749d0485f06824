//! Rotational CMC spheres: the parameter `s₀`, the meridian profile and the
//! global geometry (height, area, enclosed volume).
//!
//! A sphere of mean curvature `H` (the sum of the principal curvatures) in
//! `M^n_ε × R` meets the slice `t = const` through its equator in a geodesic
//! sphere of radius `s₀`, fixed by `H φ_ε(s₀) = 1`. The lower half is the
//! graph `t = h(s)` over the ball of radius `s₀` with
//!
//! ```text
//! h(s) = ∫_0^s ρ/θ,   ρ = H φ_ε,   θ = √(1 − ρ²),
//! ```
//!
//! and the upper half is its reflection through `t = h(s₀)`.

use serde::{Deserialize, Serialize};

use crate::basis::{dphi_raw, phi_gap, phi_gap_back, phi_raw};
use crate::error::{CmcError, Result};
use crate::numerics::{chebyshev_nodes, try_find_root, try_integrate, Bracket, Tolerance};
use crate::spaceform::{unit_sphere_measure, SpaceForm};

/// Default number of meridian samples.
pub const DEFAULT_SAMPLES: usize = 512;

/// Largest equator radius accepted on `H^n × R`; `sinh²` overflows soon after.
const MAX_HYPERBOLIC_RADIUS: f64 = 300.0;

/// `(ε, n, H, s₀)` for one sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereParams {
    pub space: SpaceForm,
    pub mean_curvature: f64,
    pub s0: f64,
}

impl SphereParams {
    /// Solves `H φ_ε(s₀) = 1`.
    ///
    /// On `H^n × R` spheres exist only for `H > n − 1`; on `S^n × R` for all
    /// `H > 0`.
    pub fn solve(space: &SpaceForm, mean_curvature: f64) -> Result<Self> {
        let h = mean_curvature;
        if !(h.is_finite() && h > 0.0) {
            return Err(CmcError::OutOfDomain {
                value: h,
                domain: "H > 0",
            });
        }
        let tight = Tolerance::tight();
        let s0 = if space.is_spherical() {
            let pi = std::f64::consts::PI;
            // atan keeps the residual bounded near the pole of φ_ε at π.
            try_find_root(
                |s| Ok((h * phi_raw(space, s)).atan() - std::f64::consts::FRAC_PI_4),
                Bracket::new(0.0, pi)?,
                &tight,
            )?
        } else {
            let critical = space.critical_mean_curvature();
            if h <= critical {
                return Err(CmcError::SubcriticalH {
                    mean_curvature: h,
                    critical,
                });
            }
            let mut hi = 1.0;
            while h * phi_raw(space, hi) <= 1.0 {
                hi *= 2.0;
                if hi > MAX_HYPERBOLIC_RADIUS {
                    return Err(CmcError::InvalidParameter(format!(
                        "H = {h} is too close to n-1 = {critical}: the equator radius exceeds {MAX_HYPERBOLIC_RADIUS}"
                    )));
                }
            }
            try_find_root(|s| Ok(h * phi_raw(space, s) - 1.0), Bracket::new(0.0, hi)?, &tight)?
        };
        Ok(Self {
            space: space.clone(),
            mean_curvature: h,
            s0,
        })
    }

    /// The sphere whose equator has radius `s₀`, i.e. `H = 1/φ_ε(s₀)`.
    pub fn from_radius(space: &SpaceForm, s0: f64) -> Result<Self> {
        space.check_open_radius(s0)?;
        if s0 > MAX_HYPERBOLIC_RADIUS {
            return Err(CmcError::OutOfDomain {
                value: s0,
                domain: "(0, 300]",
            });
        }
        Ok(Self {
            space: space.clone(),
            mean_curvature: 1.0 / phi_raw(space, s0),
            s0,
        })
    }

    /// `H/n`, the mean curvature normalized as the average of the principal
    /// curvatures.
    pub fn normalized_mean_curvature(&self) -> f64 {
        self.mean_curvature / self.space.nf()
    }
}

/// Principal curvatures at a point of the sphere. `profile` belongs to the
/// meridian direction and `rotational` (multiplicity `n − 1`) to the orbit of
/// the rotations; `profile + (n−1) rotational = H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvatures {
    pub profile: f64,
    pub rotational: f64,
}

/// One meridian sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    pub t_lower: f64,
    pub t_upper: f64,
    pub rho: f64,
    pub k_profile: f64,
    pub k_rot: f64,
}

/// The meridian sampled on Chebyshev–Lobatto nodes of `[0, s₀]`, clustered
/// at the pole and at the equator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub params: SphereParams,
    pub equator_height: f64,
    pub samples: Vec<ProfileSample>,
}

/// Global geometry of one sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub params: SphereParams,
    pub normalized_mean_curvature: f64,
    /// `h(s₀)`, the height of the equator above the lower pole.
    pub equator_height: f64,
    /// `2 h(s₀)`.
    pub total_height: f64,
    pub area: f64,
    pub volume: f64,
    /// Whether the sphere is convex: always on `H^n × R`, and on `S^n × R`
    /// exactly when `s₀ < π/2`.
    pub convex: bool,
}

/// A solved sphere with its equator height cached.
#[derive(Debug, Clone)]
pub struct CmcSphere {
    params: SphereParams,
    tol: Tolerance,
    equator_height: f64,
}

impl CmcSphere {
    pub fn new(space: &SpaceForm, mean_curvature: f64, tol: &Tolerance) -> Result<Self> {
        Self::from_params(SphereParams::solve(space, mean_curvature)?, tol)
    }

    pub fn from_params(params: SphereParams, tol: &Tolerance) -> Result<Self> {
        tol.validate()?;
        let mut sphere = Self {
            params,
            tol: *tol,
            equator_height: f64::NAN,
        };
        let half = 0.5 * sphere.s0();
        let head = try_integrate(|s| Ok(sphere.rho_raw(s) / sphere.theta_raw(s)), 0.0, half, tol)?;
        let tail = sphere.tail_integral(half, |_, _, rho, theta| Ok(rho / theta))?;
        sphere.equator_height = head + tail;
        Ok(sphere)
    }

    pub fn params(&self) -> &SphereParams {
        &self.params
    }

    pub fn space(&self) -> &SpaceForm {
        &self.params.space
    }

    pub fn mean_curvature(&self) -> f64 {
        self.params.mean_curvature
    }

    pub fn s0(&self) -> f64 {
        self.params.s0
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    pub fn equator_height(&self) -> f64 {
        self.equator_height
    }

    fn check(&self, s: f64) -> Result<()> {
        if (0.0..=self.s0()).contains(&s) {
            Ok(())
        } else {
            Err(CmcError::OutOfDomain {
                value: s,
                domain: "[0, s0]",
            })
        }
    }

    pub(crate) fn rho_raw(&self, s: f64) -> f64 {
        self.mean_curvature() * phi_raw(self.space(), s)
    }

    /// `1 − ρ(s)`, accurate near the equator.
    pub(crate) fn one_minus_rho_raw(&self, s: f64) -> f64 {
        if s >= self.s0() {
            0.0
        } else {
            self.mean_curvature() * phi_gap(self.space(), s, self.s0())
        }
    }

    pub(crate) fn theta_raw(&self, s: f64) -> f64 {
        let d = self.one_minus_rho_raw(s);
        (d * (2.0 - d)).max(0.0).sqrt()
    }

    /// `∫_a^{s₀} g(s, s₀ − s, ρ, θ) ds` for integrands that may blow up like `1/θ`
    /// at the equator, computed in `v = √(s₀ − s)`. The gap `1 − ρ` is
    /// evaluated from the exact length `v²`, so the integrand stays smooth in
    /// `v` where `s₀ − v²` rounds.
    pub(crate) fn tail_integral<G>(&self, a: f64, mut g: G) -> Result<f64>
    where
        G: FnMut(f64, f64, f64, f64) -> Result<f64>,
    {
        let s0 = self.s0();
        if a >= s0 {
            return Ok(0.0);
        }
        try_integrate(
            |v| {
                if v == 0.0 {
                    return Ok(0.0);
                }
                let s = (s0 - v * v).max(0.0);
                let d = self.mean_curvature() * phi_gap_back(self.space(), s0, v * v);
                let theta = (d * (2.0 - d)).sqrt();
                let y = 2.0 * v * g(s, v * v, 1.0 - d, theta)?;
                if y.is_finite() {
                    Ok(y)
                } else {
                    Err(CmcError::NonFinite { at: s, value: y })
                }
            },
            0.0,
            (s0 - a).sqrt(),
            &self.tol,
        )
    }

    /// `∫_0^{s₀} g(s, s₀ − s, ρ, θ) ds`, split at `s₀/2` with the equator half done
    /// by [`Self::tail_integral`].
    pub(crate) fn full_integral<G>(&self, mut g: G) -> Result<f64>
    where
        G: FnMut(f64, f64, f64, f64) -> Result<f64>,
    {
        let half = 0.5 * self.s0();
        let head = try_integrate(
            |s| g(s, self.s0() - s, self.rho_raw(s), self.theta_raw(s)),
            0.0,
            half,
            &self.tol,
        )?;
        Ok(head + self.tail_integral(half, g)?)
    }

    /// `ρ(s) = H φ_ε(s)`, the sine of the angle between the meridian and the
    /// horizontal slice.
    pub fn rho(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.rho_raw(s))
    }

    /// `θ(s) = √(1 − ρ²)`.
    pub fn theta(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.theta_raw(s))
    }

    /// Height `h(s)` of the lower hemisphere above its pole.
    pub fn height(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        if s <= 0.5 * self.s0() {
            try_integrate(|u| Ok(self.rho_raw(u) / self.theta_raw(u)), 0.0, s, &self.tol)
        } else {
            Ok(self.equator_height - self.tail_integral(s, |_, _, rho, theta| Ok(rho / theta))?)
        }
    }

    pub fn principal_curvatures(&self, s: f64) -> Result<PrincipalCurvatures> {
        self.check(s)?;
        let h = self.mean_curvature();
        let dphi = dphi_raw(self.space(), s);
        // cot_ε φ_ε = (1 − φ_ε')/(n−1) by the defining equation; finite at 0.
        Ok(PrincipalCurvatures {
            profile: h * dphi,
            rotational: h * (1.0 - dphi) / (self.space().nf() - 1.0),
        })
    }

    /// Meridian sampled at `samples ≥ 2` Chebyshev–Lobatto nodes.
    pub fn profile_curve(&self, samples: usize) -> Result<ProfileCurve> {
        if samples < 2 {
            return Err(CmcError::InvalidParameter(format!(
                "a profile needs at least 2 samples (got {samples})"
            )));
        }
        let nodes = chebyshev_nodes(0.0, self.s0(), samples);
        let half = 0.5 * self.s0();
        let h_eq = self.equator_height;
        let mut previous = (0.0, 0.0);
        let mut out = Vec::with_capacity(samples);
        for &s in &nodes {
            let t = if s <= half {
                let step = try_integrate(
                    |u| Ok(self.rho_raw(u) / self.theta_raw(u)),
                    previous.0,
                    s,
                    &self.tol,
                )?;
                previous = (s, previous.1 + step);
                previous.1
            } else {
                h_eq - self.tail_integral(s, |_, _, rho, theta| Ok(rho / theta))?
            };
            let k = self.principal_curvatures(s)?;
            out.push(ProfileSample {
                s,
                t_lower: t,
                t_upper: 2.0 * h_eq - t,
                rho: self.rho_raw(s),
                k_profile: k.profile,
                k_rot: k.rotational,
            });
        }
        Ok(ProfileCurve {
            params: self.params.clone(),
            equator_height: h_eq,
            samples: out,
        })
    }

    /// `A = 2|S^{n−1}| ∫_0^{s₀} sin_ε^{n−1}/θ ds`.
    pub fn area(&self) -> Result<f64> {
        let sf = self.space();
        let k = sf.n() as i32 - 1;
        let q = self.full_integral(|s, _, _, theta| Ok(sf.sin_eps(s).powi(k) / theta))?;
        Ok(2.0 * unit_sphere_measure(sf.n() - 1) * q)
    }

    /// Enclosed volume `V = 2|S^{n−1}| ∫_0^{s₀} I(s) ρ/θ ds`, obtained by
    /// integrating `2|S^{n−1}| ∫ (h(s₀) − h(s)) sin_ε^{n−1} ds` by parts.
    pub fn volume(&self) -> Result<f64> {
        let sf = self.space();
        let q = self.full_integral(|s, _, rho, theta| Ok(sf.primitive_unchecked(s) * rho / theta))?;
        Ok(2.0 * unit_sphere_measure(sf.n() - 1) * q)
    }

    pub fn is_convex(&self) -> bool {
        match self.space().convexity_constant() {
            Ok(constant) => self.mean_curvature() > 1.0 / constant,
            Err(_) => true,
        }
    }

    pub fn geometry(&self) -> Result<GeometryReport> {
        Ok(GeometryReport {
            params: self.params.clone(),
            normalized_mean_curvature: self.params.normalized_mean_curvature(),
            equator_height: self.equator_height,
            total_height: 2.0 * self.equator_height,
            area: self.area()?,
            volume: self.volume()?,
            convex: self.is_convex(),
        })
    }
}
