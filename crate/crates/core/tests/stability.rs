use approx::assert_relative_eq;
use cmc_rot::numerics::chebyshev_nodes;
use cmc_rot::stability::{
    integral_f, stability_threshold_h0, stability_verdict, Hemisphere, StabilityReport, VariationField,
};
use cmc_rot::{Bracket, SpaceForm, SphereParams, Tolerance};

fn tol() -> Tolerance {
    Tolerance::new(1e-11, 1e-14, 50).unwrap()
}

fn params(sf: &SpaceForm, h: f64) -> SphereParams {
    SphereParams::solve(sf, h).unwrap()
}

#[test]
fn frozen_integrals() {
    let cases = [
        (SpaceForm::hyperbolic(2).unwrap(), 2.0, 13.442663749808),
        (SpaceForm::spherical(2).unwrap(), 1.0, 14.933716249626),
        (SpaceForm::hyperbolic(3).unwrap(), 2.5, 278.570800527413),
        (SpaceForm::spherical(3).unwrap(), 0.5, 4.463440100891),
    ];
    for (sf, h, expected) in cases {
        assert_relative_eq!(integral_f(&params(&sf, h), &tol()).unwrap(), expected, max_relative = 1e-8);
    }
}

#[test]
fn hyperbolic_field_is_nonnegative() {
    for (n, h) in [(2, 1.2), (2, 2.0), (3, 2.5), (4, 6.0)] {
        let sf = SpaceForm::hyperbolic(n).unwrap();
        let p = params(&sf, h);
        let field = VariationField::new(&p, &tol()).unwrap();
        for s in chebyshev_nodes(0.0, p.s0, 65) {
            for hemi in [Hemisphere::Lower, Hemisphere::Upper] {
                assert!(field.value(s, hemi).unwrap() >= -1e-9, "n={n} H={h} s={s}");
            }
        }
    }
}

#[test]
fn field_is_continuous_across_the_equator() {
    for (sf, h) in [
        (SpaceForm::hyperbolic(3).unwrap(), 3.0),
        (SpaceForm::spherical(2).unwrap(), 0.2),
    ] {
        let p = params(&sf, h);
        let field = VariationField::new(&p, &tol()).unwrap();
        for hemi in [Hemisphere::Lower, Hemisphere::Upper] {
            let near = field.value(p.s0 * (1.0 - 1e-10), hemi).unwrap();
            assert_relative_eq!(near, field.equator_value(), max_relative = 1e-4);
        }
    }
}

#[test]
fn verdicts() {
    let r = stability_verdict(&params(&SpaceForm::hyperbolic(3).unwrap(), 2.5), &tol()).unwrap();
    assert!(r.stable && r.koiso_preconditions_assumed);
    // H as the sum of curvatures: 0.6 and 0.2 are 0.30 and 0.10 normalized.
    let s2 = SpaceForm::spherical(2).unwrap();
    assert!(stability_verdict(&params(&s2, 0.6), &tol()).unwrap().stable);
    assert!(!stability_verdict(&params(&s2, 0.2), &tol()).unwrap().stable);
    assert!(integral_f(&params(&s2, 0.05), &tol()).unwrap() < 0.0);
}

#[test]
fn integral_increases_on_the_threshold_window() {
    let s2 = SpaceForm::spherical(2).unwrap();
    let values: Vec<f64> = (0..=18)
        .map(|k| integral_f(&params(&s2, 0.05 + 0.025 * k as f64), &tol()).unwrap())
        .collect();
    for w in values.windows(2) {
        assert!(w[1] > w[0], "integral of f is not increasing: {values:?}");
    }
}

#[test]
fn threshold_in_s3() {
    // Report-only value; no reference exists for n > 2.
    let h0 = stability_threshold_h0(&SpaceForm::spherical(3).unwrap(), Bracket::new(0.01, 2.0).unwrap(), &tol())
        .unwrap();
    assert_relative_eq!(h0, 0.4263855925680079, max_relative = 1e-7);
}

#[test]
fn report_round_trips_through_json() {
    let r = stability_verdict(&params(&SpaceForm::spherical(2).unwrap(), 1.0), &tol()).unwrap();
    let back: StabilityReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}
