use std::f64::consts::PI;

use cmc_rot::basis::{eval, f_eps, lemma_aux, phi_eps};
use cmc_rot::nesting::{nesting_integrand, nesting_integrand_direct};
use cmc_rot::{CmcSphere, SpaceForm, SphereParams, Tolerance};
use proptest::prelude::*;

fn space() -> impl Strategy<Value = SpaceForm> {
    (prop::bool::ANY, 2u32..=7).prop_map(|(spherical, n)| {
        if spherical {
            SpaceForm::spherical(n).unwrap()
        } else {
            SpaceForm::hyperbolic(n).unwrap()
        }
    })
}

/// Radius in the open domain; hyperbolic radii stay where `φ'` and `φ''`
/// keep relative accuracy.
fn radius(sf: &SpaceForm, unit: f64) -> f64 {
    if sf.is_spherical() {
        PI * (0.001 + 0.998 * unit)
    } else {
        0.001 + 7.0 * unit
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn defining_equation_holds(sf in space(), unit in 0.0..1.0f64) {
        let s = radius(&sf, unit);
        let b = eval(&sf, s).unwrap();
        let cot = sf.cot_eps(s).unwrap();
        let residual = b.dphi + (sf.n() as f64 - 1.0) * cot * b.phi - 1.0;
        prop_assert!(residual.abs() < 1e-9 * (1.0 + (cot * b.phi).abs()));
        prop_assert!((b.phi - b.primitive / sf.sin_eps(s).powi(sf.n() as i32 - 1)).abs() < 1e-10 * (1.0 + b.phi));
    }

    #[test]
    fn phi_increasing(sf in space(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let (a, b) = (radius(&sf, u.min(v)), radius(&sf, u.max(v)));
        prop_assume!(b - a > 1e-9);
        prop_assert!(phi_eps(&sf, a).unwrap() < phi_eps(&sf, b).unwrap());
    }

    #[test]
    fn comparison_endpoints(sf in space(), unit in 0.0..1.0f64) {
        let s0 = radius(&sf, unit);
        prop_assert_eq!(f_eps(&sf, s0, s0).unwrap(), 0.0);
        let at_zero = f_eps(&sf, s0, 0.0).unwrap();
        let expected = phi_eps(&sf, s0).unwrap() / sf.n() as f64;
        prop_assert!((at_zero - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn nesting_integrand_paths_agree(sf in space(), u in 0.001..1.0f64, frac in 0.001..0.999f64) {
        let s0 = radius(&sf, u);
        let s = frac * s0;
        let a = nesting_integrand(&sf, s0, s).unwrap();
        let b = nesting_integrand_direct(&sf, s0, s).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn mu_is_a_lower_dimensional_primitive(n in 3u32..=7, spherical in prop::bool::ANY, unit in 0.0..1.0f64) {
        // μ_ε' = (n−2) sin_ε^{n−3} and μ_ε(0) = 0 for n > 2.
        let sf = if spherical { SpaceForm::spherical(n).unwrap() } else { SpaceForm::hyperbolic(n).unwrap() };
        let s = radius(&sf, unit).min(5.0);
        let mu = lemma_aux(&sf, s).unwrap().mu;
        let expected = (n as f64 - 2.0) * if n == 3 {
            s
        } else {
            SpaceForm::new(sf.curvature(), n - 2).unwrap().primitive_i(s).unwrap()
        };
        prop_assert!((mu - expected).abs() <= 1e-10 * expected.abs().max(1.0));
    }

    #[test]
    fn sphere_is_a_graph_of_increasing_height(sf in space(), unit in 0.05..0.95f64) {
        let s0 = radius(&sf, unit).min(4.0);
        let p = SphereParams::from_radius(&sf, s0).unwrap();
        let sphere = CmcSphere::from_params(p, &Tolerance::new(1e-10, 1e-13, 50).unwrap()).unwrap();
        let mut last = 0.0;
        for k in 1..=8 {
            let h = sphere.height(s0 * k as f64 / 8.0).unwrap();
            prop_assert!(h > last);
            last = h;
        }
        prop_assert!((last - sphere.equator_height()).abs() < 1e-9);
    }
}
