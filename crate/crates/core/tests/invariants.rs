use std::f64::consts::PI;

use moutard_core::point::{big_b_point, denom};
use moutard_core::{
    build_grid, omega_closed, scenario_seed, singular_circles, Coupling, Energy, OmegaClosedForm,
    OmegaContext, OmegaKind, PhysicalPoint, QuadratureConfig, Scenario, ScenarioConfig,
    SpectralParam,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn oracle_b(l: Complex64, e: f64, alpha: f64) -> Complex64 {
    let m2 = l.norm_sqr();
    let sign = if m2 > 1.0 { 1.0 } else { -1.0 };
    -sign / (l.conj() * (m2.ln().abs() + e.abs().ln() - 4.0 * PI / alpha))
}

fn params() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (
        -9.0f64..-0.1,
        prop_oneof![0.5f64..20.0, -20.0f64..-0.5],
        0.02f64..50.0,
        -3.2f64..3.2,
    )
        .prop_filter(
            "off the unit circle and the singular circles",
            |(e, a, r, _)| {
                let d = (r * r).ln().abs() + e.abs().ln() - 4.0 * PI / a;
                (r - 1.0).abs() > 1e-3 && d.abs() > 1e-3
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn creation_reproduces_point_coefficient((e, a, r, t) in params()) {
        let (en, al) = (Energy::new(e).unwrap(), Coupling::new(a).unwrap());
        let grid = build_grid(0.05, 20.0, 4, 2, en, Some(al)).unwrap();
        let seed = scenario_seed(Scenario::Creation, en, al, &grid, &ScenarioConfig::default());
        let l = SpectralParam::from_polar(r, t).unwrap();
        let got = seed.transform_b().eval(l).unwrap();
        let want = oracle_b(l.value(), e, a);
        prop_assert!((got - want).norm() <= 1e-12 * want.norm());
    }

    #[test]
    fn annihilation_cancels_the_coefficient((e, a, r, t) in params()) {
        let (en, al) = (Energy::new(e).unwrap(), Coupling::new(a).unwrap());
        let grid = build_grid(0.05, 20.0, 4, 2, en, Some(al)).unwrap();
        let seed = scenario_seed(Scenario::Annihilation, en, al, &grid, &ScenarioConfig::default());
        let l = SpectralParam::from_polar(r, t).unwrap();
        let got = seed.transform_b().eval(l).unwrap();
        prop_assert!(got.norm() <= 1e-12 * oracle_b(l.value(), e, a).norm().max(1.0));
    }

    #[test]
    fn coefficient_symmetries((e, a, r, t) in params()) {
        let (en, al) = (Energy::new(e).unwrap(), Coupling::new(a).unwrap());
        let l = SpectralParam::from_polar(r, t).unwrap();
        let lv = l.value();
        let v = big_b_point(l, en, al).unwrap();
        let refl = big_b_point(SpectralParam::new(1.0 / lv.conj()).unwrap(), en, al).unwrap();
        let anti = big_b_point(SpectralParam::new(-1.0 / lv.conj()).unwrap(), en, al).unwrap();
        prop_assert!((refl + lv * lv * v.conj()).norm() <= 1e-13 * refl.norm());
        prop_assert!((anti - lv.norm_sqr() * v).norm() <= 1e-13 * anti.norm());
    }

    #[test]
    fn singular_radii_are_reciprocal_roots(e in -9.0f64..-0.1, a in prop_oneof![0.5f64..20.0, -20.0f64..-0.5]) {
        let (en, al) = (Energy::new(e).unwrap(), Coupling::new(a).unwrap());
        let set = singular_circles(en, al);
        let s = 4.0 * PI / a - e.abs().ln();
        prop_assert_eq!(set.radii.len(), if s > 0.0 { 2 } else { 0 });
        for &rad in &set.radii {
            let root = SpectralParam::from_polar(rad, 0.3).unwrap();
            prop_assert!(denom(root, en, al).abs() <= 1e-12 * (1.0 + s));
        }
        if let [lo, hi] = set.radii[..] {
            prop_assert!((lo * hi - 1.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn green_free_omegas_are_imaginary((e, a, r, t) in params()) {
        let ctx = OmegaContext {
            z: PhysicalPoint::new(1.0, 0.5),
            energy: Energy::new(e).unwrap(),
            alpha: Coupling::new(a).unwrap(),
            quadrature: QuadratureConfig::default(),
        };
        let l = SpectralParam::from_polar(r, t).unwrap();
        for kind in [OmegaKind::FfCreation, OmegaKind::FfAnnihilation] {
            let w = omega_closed(&OmegaClosedForm::canonical(kind, ctx.alpha), &ctx, l).unwrap();
            prop_assert!(w.re.abs() <= 1e-10 * (1.0 + w.norm()));
        }
    }
}
