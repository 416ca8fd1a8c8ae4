use fracivp::kernels::KernelSpec;
use fracivp::specfun::{mittag_leffler_real, MlParams};
use fracivp::transforms::{
    initial_value_limit, invert_checked, invert_laplace, FnLaplace, InversionMethod,
    LaplaceFunction, LimitStatus,
};
use fracivp::Result;
use num_complex::Complex64;

type Pair = (Box<dyn LaplaceFunction>, Box<dyn Fn(f64) -> f64>);

fn known_pairs() -> Vec<Pair> {
    let ml_half = MlParams::classical(0.5).unwrap();
    vec![
        (
            Box::new(FnLaplace::new(
                "1/(s+1)",
                |s: Complex64| Ok(1.0 / (s + 1.0)),
            )),
            Box::new(|t: f64| (-t).exp()),
        ),
        (
            Box::new(FnLaplace::new("1/s^2", |s: Complex64| Ok(1.0 / (s * s)))),
            Box::new(|t| t),
        ),
        (
            Box::new(FnLaplace::new("1/(s^2+1)", |s: Complex64| {
                Ok(1.0 / (s * s + 1.0))
            })),
            Box::new(|t: f64| t.sin()),
        ),
        (
            Box::new(
                FnLaplace::new("1/(s-1)", |s: Complex64| Ok(1.0 / (s - 1.0))).with_abscissa(1.0),
            ),
            Box::new(|t: f64| t.exp()),
        ),
        (
            Box::new(FnLaplace::new("s^{-1/2}/(s^{1/2}+1)", |s: Complex64| {
                Ok(s.powf(-0.5) / (s.sqrt() + 1.0))
            })),
            Box::new(move |t: f64| mittag_leffler_real(ml_half, -t.sqrt()).unwrap()),
        ),
    ]
}

#[test]
fn talbot_examples() {
    let f = FnLaplace::new("1/(s+1)", |s: Complex64| Ok(1.0 / (s + 1.0)));
    let v = invert_laplace(&f, 1.0, InversionMethod::Talbot).unwrap();
    assert!((v - 0.36787944117144233).abs() < 1e-8 * 0.37);
    let f = FnLaplace::new("1/s^2", |s: Complex64| Ok(1.0 / (s * s)));
    let v = invert_laplace(&f, 2.0, InversionMethod::Talbot).unwrap();
    assert!((v - 2.0).abs() < 1e-8 * 2.0);
    let f = FnLaplace::new(
        "ml pair",
        |s: Complex64| Ok(s.powf(-0.5) / (s.sqrt() + 1.0)),
    );
    let v = invert_laplace(&f, 1.0, InversionMethod::Talbot).unwrap();
    let oracle = 1.0f64.exp() * libm::erfc(1.0);
    assert!((v - oracle).abs() < 1e-8 * oracle, "{v} vs {oracle}");
    assert!((oracle - 0.427_583_576_155_807).abs() < 1e-15);
}

#[test]
fn round_trip_known_pairs() {
    for (f, exact) in known_pairs() {
        for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let want = exact(t);
            let got = invert_laplace(f.as_ref(), t, InversionMethod::Talbot).unwrap();
            assert!(
                (got - want).abs() <= 1e-8 * want.abs().max(1e-300),
                "{} t={t}: {got} vs {want}",
                f.describe()
            );
        }
    }
}

#[test]
fn methods_agree_on_known_pairs() {
    // Stehfest only sees the real axis; growing or oscillating originals and
    // exponential decay past t ~ 1 are outside its double-precision reach.
    let well_conditioned: [(usize, &[f64]); 3] = [
        (0, &[0.1, 0.5, 1.0]),
        (1, &[0.1, 0.5, 1.0, 2.0, 5.0]),
        (4, &[0.1, 0.5, 1.0, 2.0, 5.0]),
    ];
    let pairs = known_pairs();
    for (idx, times) in well_conditioned {
        let (f, exact) = &pairs[idx];
        for &t in times {
            let c = invert_checked(f.as_ref(), t).unwrap();
            let want = exact(t);
            let rel = (c.cross_check - c.value).abs() / want.abs();
            assert!(
                rel < 1e-5,
                "{} t={t}: stehfest {} vs {want} ({rel:e})",
                f.describe(),
                c.cross_check
            );
            assert!(!c.disagreement);
        }
    }
}

#[test]
fn cross_check_flags_ill_conditioned_input() {
    let f = FnLaplace::new("1/(s^2+1)", |s: Complex64| Ok(1.0 / (s * s + 1.0)));
    let c = invert_checked(&f, 5.0).unwrap();
    assert!(c.disagreement);
    assert!((c.value - 5f64.sin()).abs() < 1e-8);
}

#[test]
fn kernel_round_trip() {
    for alpha in [0.3, 0.5, 0.8] {
        for spec in [
            KernelSpec::caputo_fabrizio(alpha).unwrap(),
            KernelSpec::atangana_baleanu(alpha).unwrap(),
        ] {
            let f = FnLaplace::new(spec.label(), move |s| spec.laplace_continued(s));
            for t in [0.5, 1.0, 2.0] {
                let got = invert_laplace(&f, t, InversionMethod::Talbot).unwrap();
                let want = spec.time(t).unwrap();
                assert!(
                    (got - want).abs() < 1e-6,
                    "{} t={t}: {got} vs {want}",
                    spec.label()
                );
            }
        }
    }
}

#[test]
fn limit_examples() {
    let f = FnLaplace::new("1/(s+1)", |s: Complex64| Ok(1.0 / (s + 1.0)));
    let est = initial_value_limit(&f).unwrap();
    assert!(est.converged && (est.value - 1.0).abs() < 1e-8, "{est:?}");

    let cf = KernelSpec::caputo_fabrizio(0.5).unwrap();
    let f = FnLaplace::new(
        "[s psi_cf]^-1 / s",
        move |s: Complex64| -> Result<Complex64> { Ok(1.0 / (s * s * cf.laplace_continued(s)?)) },
    );
    let est = initial_value_limit(&f).unwrap();
    assert!(est.converged && (est.value - 0.5).abs() < 1e-8, "{est:?}");

    let f = FnLaplace::new("s^{-3/2}", |s: Complex64| Ok(s.powf(-1.5)));
    let est = initial_value_limit(&f).unwrap();
    assert!(est.converged && est.value.abs() < 1e-8, "{est:?}");
    assert_eq!(est.samples.len(), 8);
}

#[test]
fn limit_matches_known_pairs() {
    for (f, exact) in known_pairs() {
        let f0 = exact(1e-300);
        let est = initial_value_limit(f.as_ref()).unwrap();
        assert!(est.converged, "{}: {est:?}", f.describe());
        assert!(
            (est.value - f0).abs() < 1e-6,
            "{}: {} vs {f0}",
            f.describe(),
            est.value
        );
    }
}

#[test]
fn limit_reports_divergence() {
    let f = FnLaplace::new("s^{-1/2}", |s: Complex64| Ok(s.powf(-0.5)));
    let est = initial_value_limit(&f).unwrap();
    assert_eq!(est.status, LimitStatus::Divergent);
    assert!(est.value.is_infinite() && !est.converged);
    let slow = FnLaplace::new("s^{-0.95}", |s: Complex64| Ok(s.powf(-0.95)));
    assert_eq!(
        initial_value_limit(&slow).unwrap().status,
        LimitStatus::Divergent
    );
}

#[test]
fn limit_reports_oscillation() {
    let f = FnLaplace::new("sin(ln s)/s", |s: Complex64| Ok(s.ln().sin() / s));
    let est = initial_value_limit(&f).unwrap();
    assert_eq!(est.status, LimitStatus::Oscillating);
    assert!(!est.converged);
}
