//! The ambient product `Q_ε^n × R`: ε-trigonometry, the radius bound
//! `R_ε`, the critical mean curvature `C_ε`, the primitive
//! `I(s) = ∫_0^s sin_ε^{n-1}` and the sphere measures `ω_{n-1}`, `vol(S^n)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CmcError, Result};
use crate::numerics::{gauss10, integrate, Tolerance};

/// Below this radius `I`, `φ_ε` and its derivatives are evaluated from their
/// Maclaurin series instead of the closed forms, which lose digits to
/// cancellation as `s → 0`.
pub const SERIES_CROSSOVER: f64 = 0.5;

/// Number of even-power terms kept in the small-radius series. The series of
/// `φ_ε(s)/s` in `s²` has radius of convergence `π²`, so at the crossover the
/// truncation error is below `(0.5/π)^{2·SERIES_TERMS}`.
const SERIES_TERMS: usize = 24;

/// Sign of the sectional curvature of the space form factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Curvature {
    /// `H^n`, ε = −1.
    Hyperbolic,
    /// `S^n`, ε = +1.
    Spherical,
}

impl Curvature {
    pub fn epsilon(self) -> f64 {
        match self {
            Curvature::Hyperbolic => -1.0,
            Curvature::Spherical => 1.0,
        }
    }
}

impl TryFrom<i8> for Curvature {
    type Error = CmcError;

    fn try_from(value: i8) -> Result<Self> {
        match value {
            -1 => Ok(Curvature::Hyperbolic),
            1 => Ok(Curvature::Spherical),
            other => Err(CmcError::InvalidParameter(format!(
                "epsilon must be -1 or +1 (got {other})"
            ))),
        }
    }
}

impl From<Curvature> for i8 {
    fn from(c: Curvature) -> i8 {
        match c {
            Curvature::Hyperbolic => -1,
            Curvature::Spherical => 1,
        }
    }
}

/// Maclaurin coefficients in `x = s²` for a fixed (ε, n):
/// `I(s) = s^n Σ primitive[k] x^k` and `φ_ε(s) = s Σ phi[k] x^k`.
#[derive(Debug, PartialEq)]
pub(crate) struct SmallRadiusSeries {
    pub(crate) primitive: Vec<f64>,
    pub(crate) phi: Vec<f64>,
}

impl SmallRadiusSeries {
    fn new(epsilon: f64, n: u32) -> Self {
        // sin_ε(s)/s = Σ (−ε)^k x^k / (2k+1)!
        let mut sinc = vec![0.0; SERIES_TERMS];
        let mut fact = 1.0;
        for (k, c) in sinc.iter_mut().enumerate() {
            if k > 0 {
                fact *= ((2 * k) * (2 * k + 1)) as f64;
            }
            *c = (-epsilon).powi(k as i32) / fact;
        }
        // (sin_ε(s)/s)^{n-1}
        let mut power = vec![0.0; SERIES_TERMS];
        power[0] = 1.0;
        for _ in 1..n {
            power = multiply(&power, &sinc);
        }
        let primitive: Vec<f64> = power
            .iter()
            .enumerate()
            .map(|(k, p)| p / (n as f64 + 2.0 * k as f64))
            .collect();
        let phi = divide(&primitive, &power);
        SmallRadiusSeries { primitive, phi }
    }
}

fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

fn divide(num: &[f64], den: &[f64]) -> Vec<f64> {
    let len = num.len().min(den.len());
    let mut out = vec![0.0; len];
    for k in 0..len {
        let acc: f64 = (1..=k).map(|j| den[j] * out[k - j]).sum();
        out[k] = (num[k] - acc) / den[0];
    }
    out
}

/// Horner evaluation of `Σ coeffs[k] x^k`.
pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[derive(Serialize, Deserialize)]
struct SpaceFormSpec {
    epsilon: Curvature,
    n: u32,
}

/// The ambient space `Q_ε^n × R`, with its derived constants.
///
/// Immutable after construction; cloning is cheap.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "SpaceFormSpec", into = "SpaceFormSpec")]
pub struct SpaceForm {
    curvature: Curvature,
    n: u32,
    sphere_area: f64,
    sphere_volume: f64,
    series: Arc<SmallRadiusSeries>,
}

impl TryFrom<SpaceFormSpec> for SpaceForm {
    type Error = CmcError;

    fn try_from(spec: SpaceFormSpec) -> Result<Self> {
        SpaceForm::new(spec.epsilon, spec.n)
    }
}

impl From<SpaceForm> for SpaceFormSpec {
    fn from(sf: SpaceForm) -> Self {
        SpaceFormSpec {
            epsilon: sf.curvature,
            n: sf.n,
        }
    }
}

impl fmt::Debug for SpaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceForm")
            .field("epsilon", &i8::from(self.curvature))
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for SpaceForm {
    fn eq(&self, other: &Self) -> bool {
        self.curvature == other.curvature && self.n == other.n
    }
}

impl SpaceForm {
    pub fn new(curvature: Curvature, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(CmcError::InvalidParameter(format!(
                "dimension n must be at least 2 (got {n})"
            )));
        }
        Ok(SpaceForm {
            curvature,
            n,
            sphere_area: unit_sphere_measure(n - 1),
            sphere_volume: unit_sphere_measure(n),
            series: Arc::new(SmallRadiusSeries::new(curvature.epsilon(), n)),
        })
    }

    /// Builds the space from the integer sign ε ∈ {−1, +1}.
    pub fn from_epsilon(epsilon: i8, n: u32) -> Result<Self> {
        SpaceForm::new(Curvature::try_from(epsilon)?, n)
    }

    pub fn hyperbolic(n: u32) -> Result<Self> {
        SpaceForm::new(Curvature::Hyperbolic, n)
    }

    pub fn spherical(n: u32) -> Result<Self> {
        SpaceForm::new(Curvature::Spherical, n)
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// ε as a float, −1.0 or +1.0.
    pub fn epsilon(&self) -> f64 {
        self.curvature.epsilon()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub(crate) fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn is_spherical(&self) -> bool {
        self.curvature == Curvature::Spherical
    }

    /// `R_ε`: `+∞` for `H^n`, `π` for `S^n`.
    pub fn max_radius(&self) -> f64 {
        match self.curvature {
            Curvature::Hyperbolic => f64::INFINITY,
            Curvature::Spherical => PI,
        }
    }

    /// `C_ε`: `n − 1` for `H^n`, `0` for `S^n`. Rotational spheres exist
    /// exactly for `H > C_ε`.
    pub fn critical_mean_curvature(&self) -> f64 {
        match self.curvature {
            Curvature::Hyperbolic => self.nf() - 1.0,
            Curvature::Spherical => 0.0,
        }
    }

    /// `ω_{n−1}`, the area of the unit `(n−1)`-sphere.
    pub fn sphere_area_constant(&self) -> f64 {
        self.sphere_area
    }

    /// `vol(S^n) = ω_n`, the area of the unit `n`-sphere.
    pub fn sphere_volume(&self) -> f64 {
        self.sphere_volume
    }

    pub(crate) fn series(&self) -> &SmallRadiusSeries {
        &self.series
    }

    pub fn cos_eps(&self, s: f64) -> f64 {
        match self.curvature {
            Curvature::Hyperbolic => s.cosh(),
            Curvature::Spherical => s.cos(),
        }
    }

    pub fn sin_eps(&self, s: f64) -> f64 {
        match self.curvature {
            Curvature::Hyperbolic => s.sinh(),
            Curvature::Spherical => s.sin(),
        }
    }

    /// `cot_ε = cos_ε / sin_ε` on `(0, R_ε)`.
    pub fn cot_eps(&self, s: f64) -> Result<f64> {
        self.check_open_radius(s)?;
        Ok(self.cot_unchecked(s))
    }

    pub(crate) fn cot_unchecked(&self, s: f64) -> f64 {
        match self.curvature {
            Curvature::Hyperbolic => 1.0 / s.tanh(),
            Curvature::Spherical => 1.0 / s.tan(),
        }
    }

    /// `tan_ε(s/2)`, i.e. `ε(1 − cos_ε s)/sin_ε s` written without
    /// cancellation.
    pub(crate) fn half_tan(&self, s: f64) -> f64 {
        match self.curvature {
            Curvature::Hyperbolic => (0.5 * s).tanh(),
            Curvature::Spherical => (0.5 * s).tan(),
        }
    }

    pub(crate) fn check_open_radius(&self, s: f64) -> Result<()> {
        if s > 0.0 && s < self.max_radius() {
            Ok(())
        } else {
            Err(CmcError::OutOfDomain {
                value: s,
                domain: "(0, R_eps)",
            })
        }
    }

    pub(crate) fn check_radius(&self, s: f64) -> Result<()> {
        if s >= 0.0 && s < self.max_radius() {
            Ok(())
        } else {
            Err(CmcError::OutOfDomain {
                value: s,
                domain: "[0, R_eps)",
            })
        }
    }

    /// `I(s) = ∫_0^s sin_ε^{n−1}(u) du`, closed form (series near 0).
    ///
    /// Defined on `[0, R_ε)`; for `S^n` the closed end `s = π` is admitted.
    pub fn primitive_i(&self, s: f64) -> Result<f64> {
        let admits_pi = self.is_spherical() && s == PI;
        if !admits_pi {
            self.check_radius(s)?;
        }
        Ok(self.primitive_unchecked(s))
    }

    pub(crate) fn primitive_unchecked(&self, s: f64) -> f64 {
        if s < SERIES_CROSSOVER {
            s.powi(self.n as i32) * horner(&self.series.primitive, s * s)
        } else if self.is_spherical() && s > PI - SERIES_CROSSOVER {
            // I(s) = I(π) − I(π − s) by the symmetry sin(π − u) = sin u.
            self.full_primitive() - self.primitive_unchecked(PI - s)
        } else {
            crate::basis::phi_closed(self, s) * self.sin_eps(s).powi(self.n as i32 - 1)
        }
    }

    /// `I(π) = 2·S(n)` on `S^n`.
    fn full_primitive(&self) -> f64 {
        // ∫_0^π sin^m = π·(m−1)!!/m!! for even m, 2·(m−1)!!/m!! for odd m.
        let m = self.n - 1;
        let mut ratio = 1.0;
        let mut k = m;
        while k >= 2 {
            ratio *= (k - 1) as f64 / k as f64;
            k -= 2;
        }
        if m.is_multiple_of(2) {
            PI * ratio
        } else {
            2.0 * ratio
        }
    }

    /// `I(b) − I(b − len)`, computed without cancellation when `len` is
    /// short.
    pub(crate) fn primitive_gap_back(&self, b: f64, len: f64) -> f64 {
        if len < 0.25 {
            let m = self.n as i32 - 1;
            0.5 * len * gauss10().sum_with(|x| self.sin_eps(b - 0.5 * len * (1.0 - x)).powi(m))
        } else {
            self.primitive_unchecked(b) - self.primitive_unchecked(b - len)
        }
    }

    /// `I(s)` by adaptive quadrature; independent of the closed-form path.
    pub fn primitive_i_quadrature(&self, s: f64, tol: &Tolerance) -> Result<f64> {
        let admits_pi = self.is_spherical() && s == PI;
        if !admits_pi {
            self.check_radius(s)?;
        }
        let m = self.n as i32 - 1;
        integrate(|u| self.sin_eps(u).powi(m), 0.0, s, tol)
    }

    /// `S(n) = ∫_0^{π/2} sin^{n−1}(s) ds`. A sphere of `S^n × R` is strictly
    /// convex iff `H > 1/S(n)`.
    pub fn convexity_constant(&self) -> Result<f64> {
        if !self.is_spherical() {
            return Err(CmcError::WrongSpace {
                expected: "the spherical factor S^n (epsilon = +1)",
            });
        }
        Ok(0.5 * self.full_primitive())
    }
}

/// Area of the unit `k`-sphere, `2π^{(k+1)/2}/Γ((k+1)/2)`, through the
/// recurrence `ω_k = 2π ω_{k−2}/(k−1)`.
pub fn unit_sphere_measure(k: u32) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * unit_sphere_measure(k - 2) / (k - 1) as f64,
    }
}
