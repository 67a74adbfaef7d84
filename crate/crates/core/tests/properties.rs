use proptest::prelude::*;

use levy_voigt::{
    generalized_voigt_pdf, moment_quadrature, riesz_apply_spectral_with, stable_pdf, stable_pdf_rescale, Grid1D,
    MomentQuery, ProfileSamples, RieszOrder, SpectralOptions, StableParams, Tolerance, VoigtSpec,
};

fn order() -> impl Strategy<Value = f64> {
    0.3f64..=2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn profile_is_even(a1 in order(), a2 in order(), tau in 0.1f64..10.0, x in 0.0f64..30.0) {
        let s = VoigtSpec::new(a1, a2, tau).unwrap();
        prop_assert_eq!(generalized_voigt_pdf(&s, x).unwrap(), generalized_voigt_pdf(&s, -x).unwrap());
    }

    #[test]
    fn orders_commute(a1 in order(), a2 in order(), tau in 0.1f64..10.0, x in -30.0f64..30.0) {
        let p = generalized_voigt_pdf(&VoigtSpec::new(a1, a2, tau).unwrap(), x).unwrap();
        let q = generalized_voigt_pdf(&VoigtSpec::new(a2, a1, tau).unwrap(), x).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn self_similar_scaling(alpha in order(), tau in 0.1f64..10.0, x in -20.0f64..20.0) {
        let p = StableParams::new(alpha, tau).unwrap();
        let d = stable_pdf(&p, x).unwrap() - stable_pdf_rescale(&p, x).unwrap();
        prop_assert!(d.abs() < 1e-8, "{d:e}");
    }

    #[test]
    fn decreasing_away_from_origin(
        a1 in order(), a2 in order(), tau in 0.1f64..10.0, x in 0.0f64..20.0, dx in 0.01f64..5.0,
    ) {
        let s = VoigtSpec::new(a1, a2, tau).unwrap();
        let near = generalized_voigt_pdf(&s, x).unwrap();
        let far = generalized_voigt_pdf(&s, x + dx).unwrap();
        prop_assert!(far <= near + 2e-10, "{near} < {far}");
        prop_assert!(far >= -1e-10);
    }

    #[test]
    fn inner_mass_is_a_distribution(a1 in order(), a2 in order(), y in 0.01f64..100.0) {
        let sym = VoigtSpec::new(a1, a2, 1.0).unwrap().symbol();
        let tol = Tolerance::absolute(1e-10);
        let m1 = sym.inner_mass(y, tol).unwrap().value;
        let m2 = sym.inner_mass(2.0 * y, tol).unwrap().value;
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&m1));
        prop_assert!(m2 >= m1 - 2e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn riesz_is_linear(alpha in 0.2f64..=2.0, a in -3.0f64..3.0, b in -3.0f64..3.0, w in 0.5f64..2.0) {
        let grid = Grid1D::new(40.0, 4001).unwrap();
        let xs = grid.points();
        let f: Vec<f64> = xs.iter().map(|x| (-x * x).exp()).collect();
        let g: Vec<f64> = xs.iter().map(|x| (-(x / w).powi(2)).exp()).collect();
        let mix: Vec<f64> = f.iter().zip(&g).map(|(p, q)| a * p + b * q).collect();
        let order = RieszOrder::new(alpha).unwrap();
        let opts = SpectralOptions { decay_tol: 1e-10, ..Default::default() };
        let apply = |v: Vec<f64>| riesz_apply_spectral_with(&order, &ProfileSamples::new(grid, v, 0.0).unwrap(), &opts).unwrap();
        let (df, dg, dm) = (apply(f), apply(g), apply(mix));
        // roundoff scales with the largest multiplier on the grid, (pi/h)^alpha
        let tol = 1e-14 * (std::f64::consts::PI / grid.spacing()).powf(alpha) * (1.0 + a.abs() + b.abs());
        for i in 0..grid.len() {
            let d = dm.values[i] - (a * df.values[i] + b * dg.values[i]);
            prop_assert!(d.abs() < tol, "{d:e} > {tol:e}");
        }
    }

    /// The local growth rate of `<|x|^q>^{1/q}` lies between the two pure-order rates.
    #[test]
    fn scaling_exponent_sandwich(a1 in 0.6f64..1.4, a2 in 1.5f64..2.0, ln_tau in -4.0f64..4.0) {
        let q = 0.5 * a1;
        let ln_m = |ln_t: f64| {
            let query = MomentQuery::new(VoigtSpec::new(a1, a2, ln_t.exp()).unwrap(), q).unwrap();
            moment_quadrature(&query).unwrap().value.ln() / q
        };
        let h = 0.05;
        let slope = (ln_m(ln_tau + h) - ln_m(ln_tau - h)) / (2.0 * h);
        prop_assert!(slope >= 1.0 / a2 - 1e-4 && slope <= 1.0 / a1 + 1e-4, "{slope} not in [{}, {}]", 1.0 / a2, 1.0 / a1);
    }
}
