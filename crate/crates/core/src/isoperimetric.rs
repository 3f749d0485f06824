//! Volume, area and the isoperimetric comparison along the sphere family.
//!
//! Where the family is nested the enclosed volume is strictly monotone in
//! `H`, so each volume is bounded by exactly one sphere. On `S^n × R` the
//! sphere also competes with the slab `S^n × [a, b]`, whose boundary area
//! `2|S^n|` does not depend on the enclosed volume.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CmcError, Result};
use crate::numerics::{try_find_root, Bracket, Tolerance};
use crate::profile::{CmcSphere, SphereParams};
use crate::spaceform::SpaceForm;

/// Number of probes used to confirm monotonicity before inverting the
/// volume map.
const MONOTONE_PROBES: usize = 17;

/// Reference window for the normalized crossing `H₁/n` on `S² × R`.
pub const S2_CROSSING_REFERENCE: (f64, f64) = (0.31, 0.35);

/// One point of the isoperimetric curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub mean_curvature: f64,
    pub volume: f64,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoperimetricReport {
    pub space: SpaceForm,
    /// Sorted by increasing `H`.
    pub curve: Vec<CurvePoint>,
    /// `2|S^n|` on `S^n × R`.
    pub slab_area: Option<f64>,
    /// Mean curvature at which the sphere area crosses the slab area, when a
    /// sign change occurs on the grid.
    pub crossing_h: Option<f64>,
    /// Volume strictly decreasing along the grid, so `V ↦ H` is one-to-one
    /// on the tested range.
    pub unique_h_for_v: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabComparison {
    pub sphere_area: f64,
    pub slab_area_at_equal_volume: f64,
}

/// The crossing `H₁` with its normalized value and, on `S² × R`, the
/// comparison with the reference window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub space: SpaceForm,
    pub h1: f64,
    pub h1_normalized: f64,
    /// Expected window for `h1_normalized`, when one is known.
    pub reference: Option<(f64, f64)>,
    /// The crossing falls outside the reference window.
    pub flagged: bool,
}

fn require_spherical(sf: &SpaceForm) -> Result<()> {
    if sf.is_spherical() {
        Ok(())
    } else {
        Err(CmcError::WrongSpace {
            expected: "S^n x R (epsilon = +1): slabs compete only there",
        })
    }
}

/// `2|S^n|`, the boundary area of any slab `S^n × [a, b]`.
pub fn slab_area(sf: &SpaceForm) -> Result<f64> {
    require_spherical(sf)?;
    Ok(2.0 * sf.sphere_volume())
}

fn sphere_volume_at(sf: &SpaceForm, h: f64, tol: &Tolerance) -> Result<f64> {
    CmcSphere::new(sf, h, tol)?.volume()
}

/// The sphere enclosing volume `V`, searched for in `bracket`.
///
/// The volume is probed across the bracket first; a non-monotone volume is
/// refused with [`CmcError::NonMonotone`] rather than resolved to one of
/// several roots.
pub fn volume_to_h(sf: &SpaceForm, volume: f64, bracket: Bracket, tol: &Tolerance) -> Result<SphereParams> {
    if !(volume.is_finite() && volume > 0.0) {
        return Err(CmcError::OutOfDomain {
            value: volume,
            domain: "V > 0",
        });
    }
    let probes = bracket.linspace(MONOTONE_PROBES);
    let volumes = probes
        .par_iter()
        .map(|&h| sphere_volume_at(sf, h, tol))
        .collect::<Result<Vec<f64>>>()?;
    let decreasing = volumes.windows(2).all(|w| w[1] < w[0]);
    let increasing = volumes.windows(2).all(|w| w[1] > w[0]);
    if !(decreasing || increasing) {
        return Err(CmcError::NonMonotone {
            what: "enclosed volume",
            lo: bracket.lo,
            hi: bracket.hi,
        });
    }
    let (v_lo, v_hi) = (volumes[0], volumes[MONOTONE_PROBES - 1]);
    if volume < v_lo.min(v_hi) || volume > v_lo.max(v_hi) {
        let note = if sf.is_spherical() && volume > v_lo.max(v_hi) {
            " (V exceeds every sphere volume on the bracket; for large V in S^n x R a slab S^n x [a,b] may bound the region instead)"
        } else {
            " (V lies outside the volume range of the bracket)"
        };
        return Err(CmcError::NoSignChange {
            lo: bracket.lo,
            hi: bracket.hi,
            f_lo: v_lo - volume,
            f_hi: v_hi - volume,
            note,
        });
    }
    let root_tol = Tolerance::new(tol.rel.min(1e-12), tol.abs.min(1e-14), tol.max_depth)?;
    let h = try_find_root(
        |h| Ok(sphere_volume_at(sf, h, tol)? / volume - 1.0),
        bracket,
        &root_tol,
    )?;
    SphereParams::solve(sf, h)
}

/// Area of `Σ_H` against the slab area at the same enclosed volume.
pub fn slab_comparison(sf: &SpaceForm, mean_curvature: f64, tol: &Tolerance) -> Result<SlabComparison> {
    let slab = slab_area(sf)?;
    Ok(SlabComparison {
        sphere_area: CmcSphere::new(sf, mean_curvature, tol)?.area()?,
        slab_area_at_equal_volume: slab,
    })
}

/// Root of `H ↦ A(Σ_H) − 2|S^n|` in the bracket.
pub fn slab_crossing_h1(sf: &SpaceForm, bracket: Bracket, tol: &Tolerance) -> Result<f64> {
    let slab = slab_area(sf)?;
    let root_tol = Tolerance::new(tol.rel.max(1e-10), tol.abs.max(1e-12), tol.max_depth)?;
    try_find_root(
        |h| Ok(CmcSphere::new(sf, h, tol)?.area()? - slab),
        bracket,
        &root_tol,
    )
}

/// [`slab_crossing_h1`] with the normalized value and, on `S² × R`, a flag
/// raised when it leaves [`S2_CROSSING_REFERENCE`].
pub fn slab_crossing_report(sf: &SpaceForm, bracket: Bracket, tol: &Tolerance) -> Result<CrossingReport> {
    let h1 = slab_crossing_h1(sf, bracket, tol)?;
    let normalized = h1 / sf.n() as f64;
    let reference = (sf.n() == 2).then_some(S2_CROSSING_REFERENCE);
    let flagged = reference.is_some_and(|(lo, hi)| !(lo..=hi).contains(&normalized));
    Ok(CrossingReport {
        space: sf.clone(),
        h1,
        h1_normalized: normalized,
        reference,
        flagged,
    })
}

/// Volume and area over a grid of mean curvatures.
///
/// On `H^n × R` the family is nested, so a volume that fails to decrease is
/// reported as [`CmcError::NonMonotone`]. On `S^n × R` monotonicity is only
/// recorded in the report.
pub fn isoperimetric_curve(sf: &SpaceForm, grid: &[f64], tol: &Tolerance) -> Result<IsoperimetricReport> {
    if grid.is_empty() {
        return Err(CmcError::InvalidParameter("empty H grid".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let curve = grid
        .par_iter()
        .map(|&h| {
            let sphere = CmcSphere::new(sf, h, tol)?;
            Ok(CurvePoint {
                mean_curvature: h,
                volume: sphere.volume()?,
                area: sphere.area()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let unique = curve.windows(2).all(|w| w[1].volume < w[0].volume);
    if !unique && !sf.is_spherical() {
        return Err(CmcError::NonMonotone {
            what: "enclosed volume",
            lo: grid[0],
            hi: grid[grid.len() - 1],
        });
    }
    let (slab, crossing) = if sf.is_spherical() {
        let slab = slab_area(sf)?;
        let crossing = curve
            .windows(2)
            .find(|w| (w[0].area - slab).signum() != (w[1].area - slab).signum())
            .map(|w| slab_crossing_h1(sf, Bracket::new(w[0].mean_curvature, w[1].mean_curvature)?, tol))
            .transpose()?;
        (Some(slab), crossing)
    } else {
        (None, None)
    };
    Ok(IsoperimetricReport {
        space: sf.clone(),
        curve,
        slab_area: slab,
        crossing_h: crossing,
        unique_h_for_v: unique,
    })
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
    fn slab_area_of_s2() {
        assert_relative_eq!(slab_area(&SpaceForm::spherical(2).unwrap()).unwrap(), 8.0 * PI, epsilon = 1e-13);
        assert!(matches!(
            slab_area(&SpaceForm::hyperbolic(2).unwrap()),
            Err(CmcError::WrongSpace { .. })
        ));
    }

    #[test]
    fn small_spheres_beat_slabs() {
        let sf = SpaceForm::spherical(2).unwrap();
        let cmp = slab_comparison(&sf, 5.0, &tol()).unwrap();
        assert!(cmp.sphere_area < 0.1 * cmp.slab_area_at_equal_volume);
        let cmp = slab_comparison(&sf, 0.1, &tol()).unwrap();
        assert!(cmp.sphere_area > cmp.slab_area_at_equal_volume);
    }

    #[test]
    fn volume_round_trip() {
        let sf = SpaceForm::hyperbolic(2).unwrap();
        let v = sphere_volume_at(&sf, 2.0, &tol()).unwrap();
        let p = volume_to_h(&sf, v, Bracket::new(1.2, 6.0).unwrap(), &tol()).unwrap();
        assert!((p.mean_curvature - 2.0).abs() < 1e-6);
    }

    #[test]
    fn huge_volume_in_s2_mentions_slabs() {
        let sf = SpaceForm::spherical(2).unwrap();
        let err = volume_to_h(&sf, 1e4, Bracket::new(0.5, 5.0).unwrap(), &tol()).unwrap_err();
        match err {
            CmcError::NoSignChange { note, .. } => assert!(note.contains("slab")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_monotone_bracket_is_refused() {
        let sf = SpaceForm::spherical(2).unwrap();
        let err = volume_to_h(&sf, 10.0, Bracket::new(0.1, 1.0).unwrap(), &tol()).unwrap_err();
        assert!(matches!(err, CmcError::NonMonotone { .. }));
    }

    #[test]
    fn single_point_curve() {
        let sf = SpaceForm::hyperbolic(2).unwrap();
        let r = isoperimetric_curve(&sf, &[2.0], &tol()).unwrap();
        assert_eq!(r.curve.len(), 1);
        assert!(r.unique_h_for_v && r.slab_area.is_none() && r.crossing_h.is_none());
    }
}
