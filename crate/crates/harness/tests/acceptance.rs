//! Acceptance criteria 1-11, run in order with one PASS/FAIL line each.
//!
//! Lines go straight to the process stdout so they show up without
//! `--nocapture`.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use qsqg::config::{ExperimentConfig, ExperimentKind};
use qsqg::experiments::lemmas_kernel_decay;
use qsqg::{persist, run, ExperimentReport};
use qsqg_core::norms::*;
use qsqg_core::solver::{linear_flow, reference_solve};
use qsqg_core::spectral::{divergence, sqg_velocity};
use qsqg_core::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn criterion(id: u32, name: &str, budget: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = o.passed && in_time;
    emit(&format!(
        "criterion {id:>2} {}: {name} ({:.1} s of {} s) {}{}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        o.detail,
        if in_time { "" } else { " [over budget]" },
    ));
    passed
}

fn grid(n: usize) -> GridSpec {
    GridSpec::periodic_2pi(n).unwrap()
}

fn rel(a: &RealField, b: &RealField) -> f64 {
    a.max_diff(b).unwrap() / b.max_abs().max(1e-300)
}

fn metric(r: &ExperimentReport, key: &str) -> f64 {
    r.get(key).unwrap_or(f64::NAN)
}

fn operator_algebra() -> Outcome {
    let g = grid(128);
    let fields = Corpus::for_grid(7, 8, &g).materialize(&g);
    let mut worst = [0.0f64; 5];
    for f in &fields {
        let s = f.to_spectral();
        worst[0] = worst[0].max(rel(&s.to_real(), f));
        let rr = s
            .riesz(Axis::X1)
            .riesz(Axis::X1)
            .add(&s.riesz(Axis::X2).riesz(Axis::X2))
            .unwrap();
        worst[1] = worst[1].max(rel(&rr.to_real().scaled(-1.0), f));
        let heat = s.heat(0.3, 0.75).heat(0.45, 0.75).to_real();
        worst[2] = worst[2].max(rel(&heat, &s.heat(0.75, 0.75).to_real()));
        let frac = s.fractional_power(0.35).fractional_power(0.4).to_real();
        worst[3] = worst[3].max(rel(&frac, &s.fractional_power(0.75).to_real()));
        let div = divergence(&sqg_velocity(f).unwrap()).unwrap();
        worst[4] = worst[4].max(div.max_abs() / f.max_abs());
    }
    let limits = [1e-13, 1e-12, 1e-12, 1e-12, 1e-12];
    outcome(
        worst.iter().zip(limits).all(|(w, l)| *w <= l),
        format!(
            "round-trip {:.1e}, riesz {:.1e}, heat {:.1e}, power {:.1e}, div {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn kernel_decay() -> Outcome {
    let p = SpaceParams::default_point();
    let a = lemmas_kernel_decay(1.0, &p, &grid(64)).unwrap();
    let b = lemmas_kernel_decay(1.0, &p, &grid(128)).unwrap();
    let pairs = [
        (a.riesz0, b.riesz0),
        (a.riesz1, b.riesz1),
        (a.gradient, b.gradient),
    ];
    let drifts: Vec<f64> = pairs.iter().map(|(x, y)| (y - x).abs() / x).collect();
    let finite = pairs
        .iter()
        .all(|(x, y)| x.is_finite() && y.is_finite() && *x > 0.0);
    outcome(
        finite && drifts.iter().all(|d| *d < 0.2),
        format!(
            "maxima {:.4e}/{:.4e}/{:.4e}, drifts {:.1e}/{:.1e}/{:.1e}",
            b.riesz0, b.riesz1, b.gradient, drifts[0], drifts[1], drifts[2]
        ),
    )
}

type FieldNorm = Box<dyn Fn(&RealField, &BoxSweepConfig) -> f64>;
type TrajNorm = Box<dyn Fn(&Trajectory, &BoxSweepConfig) -> f64>;

fn norm_axioms() -> Outcome {
    let p = SpaceParams::default_point();
    let g = grid(64);
    let times = TimeGrid::graded(1.0, 16).unwrap();
    let field_norms: Vec<(&str, FieldNorm)> = vec![
        (
            "morrey",
            Box::new(|f, s| morrey_norm(f, 2.0, 1.0, s).unwrap().value),
        ),
        (
            "q_direct",
            Box::new(move |f, s| q_norm_direct(f, &p, s).unwrap().value),
        ),
        (
            "q_semigroup",
            Box::new(move |f, s| q_norm_semigroup(f, &p, s).unwrap().value),
        ),
        (
            "morrey_semigroup",
            Box::new(move |f, s| morrey_semigroup_functional(f, 0.5, &p, s).unwrap().value),
        ),
        ("besov_sum", Box::new(|f, _| besov_sum_norm(f).value)),
        ("besov_sup", Box::new(|f, _| besov_sup_norm(f, -0.5).value)),
        (
            "caloric",
            Box::new(move |f, s| caloric_minus1_norm(f, &p, &times, s).unwrap().value),
        ),
    ];
    let traj_norms: Vec<(&str, TrajNorm)> = vec![
        (
            "x_norm",
            Box::new(move |t, s| x_norm(t, &p, s).unwrap().value),
        ),
        (
            "x_1",
            Box::new(move |t, s| x_k_norm(t, &p, 1, s).unwrap().value),
        ),
        (
            "x_2",
            Box::new(move |t, s| x_k_norm(t, &p, 2, s).unwrap().value),
        ),
        (
            "carleson_l1",
            Box::new(move |t, s| carleson_l1_functional(t, &p, s).unwrap().value),
        ),
    ];
    let base = BoxSweepConfig {
        levels: 3,
        ..Default::default()
    };
    let larger = [
        BoxSweepConfig { levels: 4, ..base },
        BoxSweepConfig {
            center_refinement: 2,
            ..base
        },
    ];
    let f = Corpus::for_grid(5, 1, &g).materialize(&g).remove(0);
    let traj = linear_flow(&f, &times, &p).unwrap();
    let zero_traj = Trajectory::zeros(g, &times);
    let mut failures = Vec::new();
    let mut worst_homog = 0.0f64;
    let mut check = |name: &str, zero: f64, base_v: f64, scaled: &[(f64, f64)], bigger: &[f64]| {
        if zero != 0.0 || base_v.is_nan() || base_v <= 0.0 {
            failures.push(format!("{name}:zero"));
        }
        for &(c, v) in scaled {
            let e = (v - c.abs() * base_v).abs() / (c.abs() * base_v);
            worst_homog = worst_homog.max(e);
            if e > 1e-12 {
                failures.push(format!("{name}:homogeneity"));
            }
        }
        if bigger.iter().any(|&v| v < base_v) {
            failures.push(format!("{name}:monotone"));
        }
    };
    for (name, n) in &field_norms {
        let v = n(&f, &base);
        let scaled: Vec<(f64, f64)> = [-3.0, 0.25]
            .iter()
            .map(|&c| (c, n(&f.scaled(c), &base)))
            .collect();
        let bigger: Vec<f64> = larger.iter().map(|s| n(&f, s)).collect();
        check(name, n(&RealField::zeros(g), &base), v, &scaled, &bigger);
    }
    for (name, n) in &traj_norms {
        let v = n(&traj, &base);
        let scaled: Vec<(f64, f64)> = [-3.0, 0.25]
            .iter()
            .map(|&c| (c, n(&traj.scaled(c), &base)))
            .collect();
        let bigger: Vec<f64> = larger.iter().map(|s| n(&traj, s)).collect();
        check(name, n(&zero_traj, &base), v, &scaled, &bigger);
    }
    outcome(
        failures.is_empty(),
        format!(
            "11 estimators, worst homogeneity {:.1e}{}",
            worst_homog,
            if failures.is_empty() {
                String::new()
            } else {
                format!(", failed: {}", failures.join(" "))
            }
        ),
    )
}

fn riesz() -> Outcome {
    let r = run(&ExperimentConfig::default_for(ExperimentKind::Riesz)).unwrap();
    let (a, b) = (metric(&r, "max_ratio_n64"), metric(&r, "max_ratio_n128"));
    let d = metric(&r, "max_ratio_drift");
    outcome(
        a.is_finite() && b.is_finite() && d < 0.1,
        format!("max ratio {a:.4} -> {b:.4}, drift {d:.2e}"),
    )
}

fn identity() -> Outcome {
    let r = run(&ExperimentConfig::default_for(ExperimentKind::Identity)).unwrap();
    let err = metric(&r, "constant_max_abs_error");
    let s64 = metric(&r, "spread_n64");
    let s128 = metric(&r, "spread_n128");
    let d = metric(&r, "interval_drift");
    outcome(
        err < 1e-8 && s64 <= 20.0 && s128 <= 20.0 && d < 0.15,
        format!("constant error {err:.1e}, spread {s64:.3}/{s128:.3}, drift {d:.2e}"),
    )
}

fn scaling() -> Outcome {
    let r = run(&ExperimentConfig::default_for(ExperimentKind::Scaling)).unwrap();
    let inside = metric(&r, "in_band_fraction_l2");
    let outside = metric(&r, "control_out_fraction_l2");
    outcome(
        inside >= 0.9 && outside >= 0.9,
        format!("critical in band {inside:.2}, control out of band {outside:.2}"),
    )
}

fn small_data() -> Outcome {
    let mut cfg = ExperimentConfig::default_for(ExperimentKind::Wellposed);
    cfg.knobs.amplitudes = vec![1e-3];
    let r = run(&cfg).unwrap();
    let ratio = metric(&r, "eps_1e-3_contraction_ratio");
    let conv = metric(&r, "eps_1e-3_converged");
    let oracle = metric(&r, "eps_1e-3_oracle_rel_error");
    let residual_ok = r
        .checks
        .iter()
        .any(|c| c.name.starts_with("fixed-point residual") && c.passed);
    outcome(
        conv == 1.0 && ratio < 0.5 && residual_ok && oracle <= 1e-3,
        format!(
            "converged {}, contraction {ratio:.2e}, residual bound {}, oracle {oracle:.2e}",
            conv == 1.0,
            if residual_ok { "met" } else { "missed" }
        ),
    )
}

fn reference_order() -> Outcome {
    let g = grid(64);
    let p = SpaceParams::default_point();
    let theta0 = RealField::from_fn(g, |x1, x2| {
        0.1 * (x1.sin() + (2.0 * x2).cos() + 0.5 * (x1 + x2).sin())
    });
    let solve = |s: usize| {
        let mut cfg = SolverConfig::new(TimeGrid::graded(1.0, 16).unwrap());
        cfg.reference_substeps = s;
        reference_solve(&theta0, &p, &cfg).unwrap()
    };
    let (a, b, c) = (solve(2), solve(4), solve(8));
    let e1 = a.max_diff(&b).unwrap();
    let e2 = b.max_diff(&c).unwrap();
    let order = (e1 / e2).log2();
    outcome(order >= 1.8, format!("observed order {order:.3}"))
}

fn regularity() -> Outcome {
    let r = run(&ExperimentConfig::default_for(ExperimentKind::Regularity)).unwrap();
    let xs: Vec<f64> = (0..3).map(|k| metric(&r, &format!("x_k{k}"))).collect();
    let err = metric(&r, "single_mode_k1_error");
    outcome(
        xs.iter().all(|v| v.is_finite()) && err <= 1e-3,
        format!(
            "x_k {:.3e}/{:.3e}/{:.3e}, single-mode error {err:.1e}",
            xs[0], xs[1], xs[2]
        ),
    )
}

fn lemmas() -> Outcome {
    let r = run(&ExperimentConfig::default_for(ExperimentKind::Lemmas)).unwrap();
    let names = ["energy", "k0", "k1", "remark"];
    let drifts: Vec<f64> = names
        .iter()
        .map(|n| metric(&r, &format!("{n}_drift")))
        .collect();
    let constants: Vec<f64> = names
        .iter()
        .map(|n| metric(&r, &format!("{n}_constant_m32")))
        .collect();
    outcome(
        constants.iter().all(|c| c.is_finite() && *c > 0.0) && drifts.iter().all(|d| *d < 0.1),
        format!(
            "constants {}, drifts {}",
            constants
                .iter()
                .map(|c| format!("{c:.3e}"))
                .collect::<Vec<_>>()
                .join("/"),
            drifts
                .iter()
                .map(|d| format!("{d:.1e}"))
                .collect::<Vec<_>>()
                .join("/")
        ),
    )
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

fn determinism() -> Outcome {
    let mut identical = Vec::new();
    for kind in [ExperimentKind::Wellposed, ExperimentKind::Lemmas] {
        let cfg = ExperimentConfig::default_for(kind);
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        persist(&run(&cfg).unwrap(), a.path()).unwrap();
        persist(&run(&cfg).unwrap(), b.path()).unwrap();
        let (x, y) = (tree(a.path()), tree(b.path()));
        identical.push((kind, !x.is_empty() && x == y, x.len()));
    }
    outcome(
        identical.iter().all(|t| t.1),
        identical
            .iter()
            .map(|(k, same, n)| {
                format!(
                    "{k}: {n} files {}",
                    if *same { "identical" } else { "differ" }
                )
            })
            .collect::<Vec<_>>()
            .join(", "),
    )
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "operator algebra", secs(5), operator_algebra),
        criterion(2, "kernel decay", secs(10), kernel_decay),
        criterion(3, "norm axioms", secs(30), norm_axioms),
        criterion(4, "Riesz boundedness", secs(300), riesz),
        criterion(5, "space identity", secs(300), identity),
        criterion(6, "scaling criticality", secs(180), scaling),
        criterion(7, "small-data well-posedness", secs(180), small_data),
        criterion(8, "reference solver order", secs(120), reference_order),
        criterion(9, "regularity ladder", secs(180), regularity),
        criterion(10, "inequality constants", secs(180), lemmas),
        criterion(11, "determinism", secs(600), determinism),
    ];
    let failed: Vec<usize> = (1..=results.len()).filter(|&i| !results[i - 1]).collect();
    emit(&format!(
        "acceptance: {} of {} criteria pass",
        results.len() - failed.len(),
        results.len()
    ));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
