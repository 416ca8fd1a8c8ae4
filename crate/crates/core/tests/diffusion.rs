use std::f64::consts::PI;

use fracivp::diffusion::{
    deviation, deviation_curve, deviation_limit, predicted_limit_deviation, solve,
    solve_transformed, Grid, GridParams, InitialCondition, Problem,
};
use fracivp::kernels::KernelSpec;
use fracivp::specfun::{gamma, mittag_leffler_real, MlParams};
use fracivp::Error;

/// `e^{x²} erfc(x)`, with the asymptotic series once `e^{x²}` would overflow.
fn erfcx(x: f64) -> f64 {
    if x < 25.0 {
        (x * x).exp() * libm::erfc(x)
    } else {
        let inv = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..8 {
            term *= -((2 * n - 1) as f64) * inv;
            sum += term;
        }
        sum / (x * PI.sqrt())
    }
}

fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn heat_gaussian(x: f64, t: f64) -> f64 {
    let v = 1.0 + 2.0 * t;
    (-x * x / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
}

fn all_kernels(alpha: f64) -> Vec<KernelSpec> {
    vec![
        KernelSpec::caputo(alpha).unwrap(),
        KernelSpec::caputo_fabrizio(alpha).unwrap(),
        KernelSpec::atangana_baleanu(alpha).unwrap(),
        KernelSpec::prabhakar_ab_aligned(alpha, 0.8, 1.0, 1.0).unwrap(),
    ]
}

fn default_grid() -> Grid {
    Grid::new(GridParams::default()).unwrap()
}

fn gaussian() -> InitialCondition {
    InitialCondition::gaussian(1.0).unwrap()
}

#[test]
fn solution_hat_examples() {
    let p = Problem::new(
        KernelSpec::caputo(0.5).unwrap(),
        InitialCondition::Delta,
        1.0,
    )
    .unwrap();
    let want = erfcx(1.0);
    assert!((p.solution_hat(1.0, 1.0).unwrap() - want).abs() < 1e-9);
    assert!((want - 0.427_583_576_155_807).abs() < 1e-15);

    for spec in all_kernels(0.5) {
        let p = Problem::new(spec, InitialCondition::Delta, 1.0).unwrap();
        assert!((p.solution_hat(0.0, 3.0).unwrap() - 1.0).abs() < 1e-9);
    }
    let classical = Problem::new(
        KernelSpec::caputo(1.0).unwrap(),
        InitialCondition::Delta,
        1.0,
    )
    .unwrap();
    assert!((classical.solution_hat(2.0, 0.5).unwrap() - 0.1353352832366127).abs() < 1e-9);
}

#[test]
fn classical_gaussian_spreads_like_heat() {
    let grid = default_grid();
    let p = Problem::new(KernelSpec::caputo(1.0).unwrap(), gaussian(), 1.0).unwrap();
    let field = solve(&p, &grid, &[0.5]).unwrap();
    let err = grid.x().iter().zip(&field.w[0]).fold(0.0_f64, |m, (x, w)| {
        m.max((w - heat_gaussian(*x, 0.5)).abs())
    });
    assert!(err < 1e-6, "{err}");
}

#[test]
fn caputo_delta_centre_value() {
    let grid = default_grid();
    let p = Problem::new(
        KernelSpec::caputo(0.5).unwrap(),
        InitialCondition::Delta,
        1.0,
    )
    .unwrap();
    let field = solve(&p, &grid, &[1.0]).unwrap();
    let centre = field.w[0][grid.params().points / 2];
    let kmax = *grid.k().last().unwrap();
    let truncated = simpson(0.0, kmax, 400_000, |k| erfcx(k * k)) / PI;
    assert!((centre - truncated).abs() < 1e-6, "{centre} vs {truncated}");
    // the untruncated value is 1 / (2 Γ(3/4)); the tail beyond k_max is ~1e-3
    let exact = 0.5 / gamma(0.75).unwrap();
    assert!((centre - exact).abs() < 2e-3);
}

#[test]
fn cf_gaussian_conserves_mass() {
    let grid = default_grid();
    let p = Problem::new(KernelSpec::caputo_fabrizio(0.5).unwrap(), gaussian(), 1.0).unwrap();
    let times = [1e-4, 1e-2, 0.1, 1.0, 5.0];
    let field = solve(&p, &grid, &times).unwrap();
    for i in 0..times.len() {
        assert!((field.mass(i) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn initial_profile_limit_examples() {
    let p = Problem::new(KernelSpec::caputo(0.5).unwrap(), gaussian(), 1.0).unwrap();
    let est = p.initial_profile_limit(1.0).unwrap();
    assert!(
        est.converged && (est.value - 0.6065306597126334).abs() < 1e-8,
        "{est:?}"
    );

    let p = Problem::new(
        KernelSpec::caputo_fabrizio(0.5).unwrap(),
        InitialCondition::Delta,
        1.0,
    )
    .unwrap();
    let est = p.initial_profile_limit(1.0).unwrap();
    assert!(est.converged && (est.value - 2.0 / 3.0).abs() < 1e-8);

    for spec in all_kernels(0.3) {
        for ic in [
            InitialCondition::Delta,
            gaussian(),
            InitialCondition::boxcar(2.0).unwrap(),
        ] {
            let p = Problem::new(spec, ic, 1.0).unwrap();
            let est = p.initial_profile_limit(0.0).unwrap();
            assert!(
                (est.value - ic.mass()).abs() < 1e-8,
                "{} {}",
                spec.label(),
                ic.name()
            );
        }
    }
}

#[test]
fn caputo_deviation_vanishes() {
    let grid = default_grid();
    let p = Problem::new(KernelSpec::caputo(0.5).unwrap(), gaussian(), 1.0).unwrap();
    assert!(deviation(&p, &grid, 1e-6).unwrap() < 1e-2);
    let limit = deviation_limit(&p, &grid).unwrap();
    assert!(limit.extrapolated.abs() < 1e-6 && limit.direct.abs() < 1e-10);
}

/// `max_x |(1/π) ∫_0^∞ φ̂(k) c²k²/(A + c²k²) cos(kx) dk|` for the unit Gaussian.
fn lorentzian_gap(a: f64) -> f64 {
    let g = |x: f64| {
        simpson(0.0, 40.0, 8000, |k| {
            (-0.5 * k * k).exp() * k * k / (a + k * k) * (k * x).cos()
        }) / PI
    };
    (0..=1000)
        .map(|i| g(i as f64 * 0.01).abs())
        .fold(0.0, f64::max)
}

#[test]
fn cf_deviation_tends_to_filtered_gap() {
    let grid = default_grid();
    let a = 2.0;
    let oracle = lorentzian_gap(a);
    // at x = 0 the gap is φ(0) − (√A/2) e^{A/2} erfc(√(A/2))
    let at_zero = 1.0 / (2.0 * PI).sqrt() - 0.5 * a.sqrt() * erfcx((a / 2.0).sqrt());
    assert!((oracle - at_zero).abs() < 1e-10, "{oracle} {at_zero}");

    let p = Problem::new(KernelSpec::caputo_fabrizio(0.5).unwrap(), gaussian(), 1.0).unwrap();
    let limit = deviation_limit(&p, &grid).unwrap();
    assert!((limit.extrapolated - oracle).abs() < 1e-3);
    assert!((limit.direct - oracle).abs() < 1e-6);
    assert!((predicted_limit_deviation(&p, &grid) - oracle).abs() < 1e-6);
    assert!(oracle > 0.09);
}

#[test]
fn classical_deviation_vanishes() {
    let grid = default_grid();
    for ic in [gaussian(), InitialCondition::Delta] {
        let p = Problem::new(KernelSpec::caputo_fabrizio(1.0).unwrap(), ic, 1.0).unwrap();
        let curve = deviation_curve(&p, &grid, &[1e-2, 1e-4, 1e-6, 1e-8]).unwrap();
        assert!(curve.windows(2).all(|w| w[1].1 < w[0].1), "{curve:?}");
        if ic.is_smooth() {
            assert!(curve[3].1 < 1e-7);
        }
    }
}

#[test]
fn transformed_problem_matches_direct_solve() {
    let grid = default_grid();
    let p = Problem::new(KernelSpec::caputo(0.5).unwrap(), gaussian(), 1.0).unwrap();
    let times = [0.01, 0.5, 2.0];
    let direct = solve(&p, &grid, &times).unwrap();
    let shifted = solve_transformed(&p, &grid, &times).unwrap();
    for (a, b) in direct.w.iter().zip(&shifted.w) {
        let err = a
            .iter()
            .zip(b)
            .fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()));
        assert!(err < 1e-6, "{err}");
    }
    for row in &shifted.chi.w_hat {
        assert_eq!(row[0].re, 0.0);
    }
}

#[test]
fn cf_shifted_unknown_jumps_at_zero() {
    let p = Problem::new(KernelSpec::caputo_fabrizio(0.5).unwrap(), gaussian(), 1.0).unwrap();
    let est = p.chi_initial_limit(1.0).unwrap();
    let want = -(-0.5f64).exp() / 3.0;
    assert!(est.converged && (est.value - want).abs() < 1e-8, "{est:?}");
    let caputo = Problem::new(KernelSpec::caputo(0.5).unwrap(), gaussian(), 1.0).unwrap();
    assert!(caputo.chi_initial_limit(1.0).unwrap().value.abs() < 1e-8);
    assert_eq!(p.chi_hat(0.0, 0.3).unwrap(), 0.0);
}

#[test]
fn mass_conservation_matrix() {
    let grid = default_grid();
    let ics = [
        gaussian(),
        InitialCondition::Delta,
        InitialCondition::boxcar(2.0).unwrap(),
    ];
    let times = [1e-3, 0.1, 1.0, 5.0];
    for alpha in [0.3, 0.7, 1.0] {
        for spec in all_kernels(alpha) {
            for ic in ics {
                let p = Problem::new(spec, ic, 1.0).unwrap();
                let field = solve(&p, &grid, &times).unwrap();
                for (i, t) in times.iter().enumerate() {
                    let gap = (field.mass(i) - ic.mass()).abs();
                    assert!(gap < 1e-8, "{} {} t={t}: {gap:e}", spec.label(), ic.name());
                }
            }
        }
    }
}

#[test]
fn fields_are_real_and_even() {
    let grid = Grid::new(GridParams {
        half_width: 40.0,
        points: 1024,
    })
    .unwrap();
    let n = grid.params().points;
    for spec in all_kernels(0.5) {
        let p = Problem::new(spec, gaussian(), 1.0).unwrap();
        let field = solve(&p, &grid, &[0.1, 1.0]).unwrap();
        assert!(field.imag_residue < 1e-10);
        for row in &field.w {
            for j in 1..n / 2 {
                assert!((row[j] - row[n - j]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn caputo_matches_mittag_leffler() {
    for alpha in [0.3, 0.5, 0.8] {
        let ml = MlParams::classical(alpha).unwrap();
        let p = Problem::new(KernelSpec::caputo(alpha).unwrap(), gaussian(), 1.0).unwrap();
        for k in [0.25, 0.5, 1.0, 2.0, 4.0] {
            for t in [0.01, 0.1, 0.5, 1.0, 3.0] {
                let got = p.solution_hat(k, t).unwrap();
                let want =
                    (-0.5 * k * k).exp() * mittag_leffler_real(ml, -k * k * t.powf(alpha)).unwrap();
                assert!((got - want).abs() < 1e-6, "alpha={alpha} k={k} t={t}");
            }
        }
    }
}

#[test]
fn initial_condition_dichotomy() {
    let grid = Grid::new(GridParams {
        half_width: 40.0,
        points: 512,
    })
    .unwrap();
    let c = 1.0;
    for alpha in [0.3, 0.5, 0.8] {
        for spec in all_kernels(alpha) {
            let p = Problem::new(spec, gaussian(), c).unwrap();
            let mut gap = 0.0_f64;
            for &k in grid.k() {
                let est = p.initial_profile_limit(k).unwrap();
                assert!(est.converged, "{} k={k}", spec.label());
                gap = gap.max((est.value - p.ic.fourier(k)).abs());
            }
            match spec.kind() {
                fracivp::kernels::KernelKind::CaputoFabrizio
                | fracivp::kernels::KernelKind::AtanganaBaleanu => {
                    let a = 1.0 / (1.0 - alpha);
                    let closed = grid
                        .k()
                        .iter()
                        .map(|&k| p.ic.fourier(k) * c * c * k * k / (a + c * c * k * k))
                        .fold(0.0, f64::max);
                    assert!(closed > 0.0);
                    assert!(
                        (gap - closed).abs() < 1e-6,
                        "{} {gap} vs {closed}",
                        spec.label()
                    );
                }
                _ => assert!(gap < 1e-6, "{} {gap}", spec.label()),
            }
        }
    }
}

#[test]
fn caputo_delta_is_nonnegative() {
    let grid = default_grid();
    for alpha in [0.5, 0.8] {
        let p = Problem::new(
            KernelSpec::caputo(alpha).unwrap(),
            InitialCondition::Delta,
            1.0,
        )
        .unwrap();
        let field = solve(&p, &grid, &[0.1, 1.0]).unwrap();
        for row in &field.w {
            let min = row.iter().copied().fold(f64::INFINITY, f64::min);
            let peak = row.iter().copied().fold(0.0, f64::max);
            assert!(
                min >= -1e-6 * peak,
                "alpha={alpha}: min {min:e} peak {peak}"
            );
        }
    }
}

#[test]
fn narrow_domain_is_rejected() {
    let grid = Grid::new(GridParams {
        half_width: 3.0,
        points: 256,
    })
    .unwrap();
    let p = Problem::new(KernelSpec::caputo(0.5).unwrap(), gaussian(), 1.0).unwrap();
    assert!(matches!(
        solve(&p, &grid, &[0.1]),
        Err(Error::BoundaryDecay(_))
    ));
    let wide_box = Problem::new(
        KernelSpec::caputo(0.5).unwrap(),
        InitialCondition::boxcar(3.0).unwrap(),
        1.0,
    )
    .unwrap();
    assert!(matches!(
        solve(&wide_box, &grid, &[0.1]),
        Err(Error::BoundaryDecay(_))
    ));
}
