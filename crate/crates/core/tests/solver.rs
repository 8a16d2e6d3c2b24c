use std::collections::BTreeMap;

use num_complex::Complex64;
use qsqg_core::norms::besov_sup_norm;
use qsqg_core::solver::*;
use qsqg_core::*;

fn grid(n: usize) -> GridSpec {
    GridSpec::periodic_2pi(n).unwrap()
}

fn params() -> SpaceParams {
    SpaceParams::default_point()
}

type Coeffs = BTreeMap<(i64, i64), Complex64>;

/// `d_1(theta R_2 theta) - d_2(theta R_1 theta)` by convolving exponential coefficients.
fn convolution_oracle(theta: &Coeffs) -> Coeffs {
    let i = Complex64::new(0.0, 1.0);
    let riesz = |j: usize| -> Coeffs {
        theta
            .iter()
            .map(|(&k, &c)| {
                let kj = if j == 1 { k.0 } else { k.1 } as f64;
                let m = ((k.0 * k.0 + k.1 * k.1) as f64).sqrt();
                (k, c * i * kj / m)
            })
            .collect()
    };
    let product = |a: &Coeffs, b: &Coeffs| -> Coeffs {
        let mut out = Coeffs::new();
        for (&p, &x) in a {
            for (&q, &y) in b {
                *out.entry((p.0 + q.0, p.1 + q.1)).or_default() += x * y;
            }
        }
        out
    };
    let p2 = product(theta, &riesz(2));
    let p1 = product(theta, &riesz(1));
    let mut out = Coeffs::new();
    for (&k, &c) in &p2 {
        *out.entry(k).or_default() += i * k.0 as f64 * c;
    }
    for (&k, &c) in &p1 {
        *out.entry(k).or_default() -= i * k.1 as f64 * c;
    }
    out
}

fn synthesize(g: GridSpec, coeffs: &Coeffs) -> RealField {
    RealField::from_fn(g, |x1, x2| {
        coeffs
            .iter()
            .map(|(&k, &c)| (c * Complex64::new(0.0, k.0 as f64 * x1 + k.1 as f64 * x2).exp()).re)
            .sum()
    })
}

#[test]
fn nonlinearity_matches_coefficient_convolution() {
    let g = grid(64);
    let half_i = Complex64::new(0.0, 0.5);
    // sin(x1) + sin(x2) + 0.3 cos(x1 + 2 x2)
    let mut theta = Coeffs::new();
    theta.insert((1, 0), -half_i);
    theta.insert((-1, 0), half_i);
    theta.insert((0, 1), -half_i);
    theta.insert((0, -1), half_i);
    theta.insert((1, 2), Complex64::new(0.15, 0.0));
    theta.insert((-1, -2), Complex64::new(0.15, 0.0));
    let field = synthesize(g, &theta);
    let expected = synthesize(g, &convolution_oracle(&theta));
    let got = nonlinearity(&field).unwrap();
    assert!(got.max_diff(&expected).unwrap() < 1e-12);
    assert!(got.mean().abs() < 1e-15);
}

#[test]
fn nonlinearity_single_variable_and_zero() {
    let g = grid(64);
    assert_eq!(nonlinearity(&RealField::zeros(g)).unwrap().max_abs(), 0.0);
    let s = RealField::from_fn(g, |x, _| x.sin());
    assert!(nonlinearity(&s).unwrap().max_abs() < 1e-14);
    assert!(matches!(
        nonlinearity(&RealField::constant(g, 1.0)),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn linear_flow_examples() {
    let g = grid(32);
    let p = params();
    let tg = TimeGrid::graded(1.0, 32).unwrap();
    let zero = linear_flow(&RealField::zeros(g), &tg, &p).unwrap();
    assert!(zero.snapshots().iter().all(|s| s.max_abs() == 0.0));
    let f = RealField::from_fn(g, |x, _| x.sin());
    let flow = linear_flow(&f, &tg, &p).unwrap();
    for (t, snap) in flow.iter() {
        assert!(snap.max_diff(&f.scaled((-t).exp())).unwrap() < 1e-15);
    }
    let coarse = linear_flow(&f, &TimeGrid::graded(1.0, 16).unwrap(), &p).unwrap();
    let restricted = flow.select(|i, _| i % 2 == 1);
    assert_eq!(restricted.times().len(), 16);
    assert!(restricted.max_diff(&coarse).unwrap() < 1e-15);
}

#[test]
fn duhamel_of_stationary_density_is_exact() {
    let g = grid(32);
    let a = 0.7;
    let tg = TimeGrid::graded(2.0, 20).unwrap();
    let density = Trajectory::from_fn(&tg, |_| RealField::from_fn(g, |x, _| a * x.sin())).unwrap();
    let out = duhamel_from_density(&density, &params()).unwrap();
    for (t, snap) in out.iter() {
        let expected = RealField::from_fn(g, |x, _| a * (1.0 - (-t).exp()) * x.sin());
        assert!(snap.max_diff(&expected).unwrap() < 1e-12);
    }
}

#[test]
fn duhamel_is_bilinear() {
    let g = grid(32);
    let p = params();
    let tg = TimeGrid::graded(1.0, 16).unwrap();
    let fields = Corpus::random(5, 2, 5).materialize(&g);
    let u = linear_flow(&fields[0], &tg, &p).unwrap();
    let v = linear_flow(&fields[1], &tg, &p).unwrap();
    let zero = Trajectory::zeros(g, &tg);
    let b = duhamel_bilinear(&u, &v, &p).unwrap();
    assert_eq!(
        duhamel_bilinear(&zero, &v, &p)
            .unwrap()
            .max_diff(&zero)
            .unwrap(),
        0.0
    );
    assert_eq!(
        duhamel_bilinear(&u, &zero, &p)
            .unwrap()
            .max_diff(&zero)
            .unwrap(),
        0.0
    );
    let scaled = duhamel_bilinear(&u.scaled(-2.5), &v, &p).unwrap();
    let scale = b
        .snapshots()
        .iter()
        .map(|s| s.max_abs())
        .fold(0.0, f64::max);
    assert!(scaled.max_diff(&b.scaled(-2.5)).unwrap() <= 1e-12 * 2.5 * scale);
    let other = linear_flow(&fields[0], &TimeGrid::graded(1.0, 17).unwrap(), &p).unwrap();
    assert!(matches!(
        duhamel_bilinear(&other, &v, &p),
        Err(Error::Domain(_))
    ));
    let other_grid =
        linear_flow(&Corpus::random(5, 1, 5).materialize(&grid(16))[0], &tg, &p).unwrap();
    assert!(matches!(
        duhamel_bilinear(&other_grid, &v, &p),
        Err(Error::Domain(_))
    ));
}

fn two_mode(g: GridSpec, eps: f64) -> RealField {
    RealField::from_fn(g, |x1, x2| eps * (x1.sin() + (2.0 * x2).cos()))
}

#[test]
fn picard_zero_data() {
    let g = grid(32);
    let (traj, report) =
        picard_solve(&RealField::zeros(g), &params(), &SolverConfig::default()).unwrap();
    assert!(report.converged);
    assert_eq!(report.iterations(), 1);
    assert!(traj.snapshots().iter().all(|s| s.max_abs() == 0.0));
}

#[test]
fn picard_small_data_contracts_and_matches_reference() {
    let g = grid(64);
    let p = params();
    let cfg = SolverConfig::default();
    let theta0 = two_mode(g, 1e-3);
    let (sol, report) = picard_solve(&theta0, &p, &cfg).unwrap();
    assert!(report.converged);
    assert!(report.contraction_ratio < 0.5);
    let norm = *report.iterates_norms.last().unwrap();
    let residual = fixed_point_residual(&sol, &theta0, &p, &cfg).unwrap();
    assert!(residual <= 2.0 * cfg.picard_tol * (1.0 + norm));
    for w in report.increments.windows(2).skip(1) {
        assert!(w[1] <= report.contraction_ratio * w[0] * (1.0 + 1e-12));
    }
    let reference = reference_solve(&theta0, &p, &cfg).unwrap();
    for (a, b) in sol.snapshots().iter().zip(reference.snapshots()) {
        assert!(a.max_diff(b).unwrap() <= 1e-3 * b.max_abs());
        assert!(a.mean().abs() < 1e-16 && b.mean().abs() < 1e-16);
    }
}

#[test]
fn picard_large_data_breaks_contraction() {
    let g = grid(64);
    match picard_solve(&two_mode(g, 10.0), &params(), &SolverConfig::default()) {
        Err(Error::Divergence { .. }) => {}
        Ok((_, report)) => assert!(report.contraction_ratio >= 1.0, "{report:?}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn reference_linear_switch_reproduces_linear_flow() {
    let g = grid(32);
    let p = params();
    let cfg = SolverConfig::default();
    let f = Corpus::random(3, 1, 5).materialize(&g).remove(0);
    let lin = reference_solve_with(&f, &p, &cfg, RhsMode::LinearOnly).unwrap();
    let exact = linear_flow(&f, &cfg.timegrid, &p).unwrap();
    assert!(lin.max_diff(&exact).unwrap() <= 1e-13 * f.max_abs());
}

#[test]
fn reference_solver_is_second_order() {
    let g = grid(32);
    let p = params();
    let theta0 = RealField::from_fn(g, |x1, x2| {
        x1.sin() + (2.0 * x2).cos() + 0.5 * (x1 + x2).sin()
    });
    let run = |s: usize| {
        let mut cfg = SolverConfig::new(TimeGrid::graded(1.0, 16).unwrap());
        cfg.reference_substeps = s;
        reference_solve(&theta0, &p, &cfg).unwrap()
    };
    let fine = run(16);
    let e1 = run(2).max_diff(&fine).unwrap();
    let e2 = run(4).max_diff(&fine).unwrap();
    assert!((e1 / e2).log2() >= 1.8, "{e1} {e2}");
    for s in fine.snapshots() {
        assert!(s.mean().abs() < 1e-15);
    }
}

#[test]
fn scaling_transform_group_law() {
    let g = grid(64);
    let p = params();
    let f = Corpus::random(8, 1, 10).materialize(&g).remove(0);
    assert_eq!(scaling_transform(&f, 1, &p).unwrap(), f);
    let twice = scaling_transform(&scaling_transform(&f, 2, &p).unwrap(), 2, &p).unwrap();
    let four = scaling_transform(&f, 4, &p).unwrap();
    assert!(twice.max_diff(&four).unwrap() <= 1e-12 * four.max_abs());
    assert!(matches!(
        scaling_transform(&f, 3, &p),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        scaling_transform(&f, 0, &p),
        Err(Error::Domain(_))
    ));
}

#[test]
fn besov_sup_is_nearly_scale_invariant() {
    let g = grid(64);
    let p = params();
    for f in Corpus::random(11, 50, 10).materialize(&g) {
        let a = besov_sup_norm(&f, p.critical_regularity()).value;
        let b = besov_sup_norm(
            &scaling_transform(&f, 2, &p).unwrap(),
            p.critical_regularity(),
        )
        .value;
        assert!((0.8..=1.25).contains(&(b / a)), "{}", b / a);
    }
}

#[test]
fn scaled_trajectory_matches_scaled_flow() {
    let g = grid(64);
    let p = params();
    let f = Corpus::random(4, 1, 8).materialize(&g).remove(0);
    let tg = TimeGrid::graded(1.0, 32).unwrap();
    let flow = linear_flow(&f, &tg, &p).unwrap();
    let scaled = scale_trajectory(&flow, 2, &p, None).unwrap();
    let f2 = scaling_transform(&f, 2, &p).unwrap();
    for (t, snap) in scaled.iter() {
        let direct = qsqg_core::spectral::heat_semigroup(&f2, t, &p).unwrap();
        assert!(snap.max_diff(&direct).unwrap() <= 1e-12 * f2.max_abs());
    }
    let lam2b = 2f64.powf(2.0 * p.beta());
    let targets: Vec<f64> = (1..=10).map(|i| i as f64 * 0.09 / lam2b).collect();
    let interp = scale_trajectory(&flow, 2, &p, Some(&targets)).unwrap();
    for (t, snap) in interp.iter() {
        let direct = qsqg_core::spectral::heat_semigroup(&f2, t, &p).unwrap();
        assert!(snap.max_diff(&direct).unwrap() <= 1e-2 * f2.max_abs());
    }
    assert!(scale_trajectory(&flow, 2, &p, Some(&[1.0])).is_err());
}
