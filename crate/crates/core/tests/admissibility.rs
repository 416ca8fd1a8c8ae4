use fracivp::admissibility::{
    check_laplace_condition, full_report, probe_singularity, reproduce_verdicts, Family,
    Singularity, Verdict, TABLE_FAMILIES,
};
use fracivp::kernels::KernelSpec;
use fracivp::transforms::LimitStatus;

#[test]
fn laplace_condition_examples() {
    let est = check_laplace_condition(&KernelSpec::caputo(0.5).unwrap()).unwrap();
    assert!(est.converged && est.value.abs() < 1e-8, "{est:?}");

    let est = check_laplace_condition(&KernelSpec::caputo_fabrizio(0.5).unwrap()).unwrap();
    assert!(est.converged && (est.value - 0.5).abs() < 1e-8);

    let est = check_laplace_condition(&KernelSpec::atangana_baleanu(0.25).unwrap()).unwrap();
    assert!(est.converged && (est.value - 0.75).abs() < 1e-8);

    let p = KernelSpec::prabhakar(0.5, 0.8, 1.0, -1.0).unwrap();
    let est = check_laplace_condition(&p).unwrap();
    assert!(est.converged && est.value.abs() < 1e-8, "{est:?}");
}

#[test]
fn singularity_examples() {
    let probe = probe_singularity(&KernelSpec::caputo(0.5).unwrap()).unwrap();
    assert_eq!(probe.class, Singularity::Singular);
    let probe = probe_singularity(&KernelSpec::caputo_fabrizio(0.5).unwrap()).unwrap();
    assert_eq!(probe.class, Singularity::Bounded);
    assert!((probe.boundary_value - 2.0).abs() < 1e-10);
    let p = KernelSpec::prabhakar(0.5, 0.5, 1.0, -1.0).unwrap();
    assert_eq!(probe_singularity(&p).unwrap().class, Singularity::Singular);
}

#[test]
fn report_examples() {
    for alpha in [0.1, 0.37, 0.5, 0.9] {
        let r = full_report(&KernelSpec::caputo(alpha).unwrap()).unwrap();
        assert_eq!(r.laplace_verdict, Verdict::Admissible);
        assert_eq!(r.singularity_probe.class, Singularity::Singular);
        assert!(r.consistent);
    }
    let r = full_report(&KernelSpec::caputo_fabrizio(0.5).unwrap()).unwrap();
    assert_eq!(r.laplace_verdict, Verdict::Inadmissible);
    assert_eq!(r.singularity_probe.class, Singularity::Bounded);
    assert!(r.consistent);
    let r = full_report(&KernelSpec::atangana_baleanu(1.0).unwrap()).unwrap();
    assert_eq!(r.laplace_verdict, Verdict::Admissible);
    assert!(r.consistent);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["laplace_verdict"], "admissible");
}

#[test]
fn duality_over_registry() {
    for family in TABLE_FAMILIES {
        for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let r = full_report(&family.spec(alpha).unwrap()).unwrap();
            assert!(r.consistent, "{} alpha={alpha}: {r:?}", family.label());
            assert_eq!(
                r.laplace_verdict,
                family.expected(),
                "{} alpha={alpha}",
                family.label()
            );
        }
    }
}

#[test]
fn closed_form_agreement() {
    for alpha in [0.1, 0.25, 0.5, 0.75, 0.9] {
        for m in [1.0, 2.0, 0.3] {
            for spec in [
                KernelSpec::caputo_fabrizio(alpha)
                    .unwrap()
                    .with_m_norm(m)
                    .unwrap(),
                KernelSpec::atangana_baleanu(alpha)
                    .unwrap()
                    .with_m_norm(m)
                    .unwrap(),
            ] {
                let r = full_report(&spec).unwrap();
                let want = r.analytic_expectation.unwrap();
                assert!(
                    (r.laplace_limit.value - want).abs() < 1e-6,
                    "{}",
                    spec.label()
                );
            }
        }
        let r = full_report(&KernelSpec::caputo(alpha).unwrap()).unwrap();
        assert!(r.laplace_limit.value.abs() < 1e-6);
    }
}

#[test]
fn prabhakar_flips_at_beta_one() {
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let below = full_report(&Family::Prabhakar { beta: 0.95 }.spec(alpha).unwrap()).unwrap();
        let above = full_report(&Family::Prabhakar { beta: 1.05 }.spec(alpha).unwrap()).unwrap();
        assert_eq!(
            below.laplace_verdict,
            Verdict::Admissible,
            "alpha={alpha} {below:?}"
        );
        assert_eq!(
            above.laplace_verdict,
            Verdict::Inadmissible,
            "alpha={alpha}"
        );
        assert_eq!(above.laplace_limit.status, LimitStatus::Divergent);
        assert!(below.consistent && above.consistent);

        let at_one = full_report(&Family::Prabhakar { beta: 1.0 }.spec(alpha).unwrap()).unwrap();
        let ab = full_report(&KernelSpec::atangana_baleanu(alpha).unwrap()).unwrap();
        assert_eq!(at_one.laplace_verdict, Verdict::Inadmissible);
        assert!((at_one.laplace_limit.value - ab.laplace_limit.value).abs() < 1e-10);
        assert!((at_one.laplace_limit.value - (1.0 - alpha)).abs() < 1e-8);
    }
}

#[test]
fn doubling_m_halves_the_limit() {
    for alpha in [0.25, 0.5, 0.75] {
        for base in [
            KernelSpec::caputo_fabrizio(alpha).unwrap(),
            KernelSpec::atangana_baleanu(alpha).unwrap(),
        ] {
            let one = check_laplace_condition(&base).unwrap().value;
            let two = check_laplace_condition(&base.with_m_norm(2.0).unwrap())
                .unwrap()
                .value;
            assert!((two - 0.5 * one).abs() < 1e-10 * one);
        }
    }
}

#[test]
fn headline_table() {
    let rows = reproduce_verdicts().unwrap();
    assert_eq!(rows.len(), 63);
    assert!(rows.iter().all(|r| r.consistent && r.verdict == r.expected));
}
