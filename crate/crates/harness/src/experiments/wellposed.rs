use qsqg_core::norms::caloric_minus1_norm;
use qsqg_core::solver::{fixed_point_residual, picard_solve, reference_solve};
use qsqg_core::{Error, GridSpec, RealField};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{num, ExperimentReport, PlotData, SavedTrajectory, Severity, Table};

/// Initial datum `eps (sin x1 + cos 2 x2)` in units of the torus.
pub fn two_mode_datum(grid: &GridSpec, eps: f64) -> RealField {
    let w = 2.0 * std::f64::consts::PI / grid.length();
    RealField::from_fn(*grid, |x1, x2| {
        eps * ((w * x1).sin() + (2.0 * w * x2).cos())
    })
}

struct Outcome {
    eps: f64,
    data_norm: f64,
    picard: std::result::Result<(qsqg_core::Trajectory, qsqg_core::PicardReport), Error>,
    residual: Option<f64>,
    oracle: std::result::Result<f64, Error>,
    mean_max: f64,
}

fn run_one(cfg: &ExperimentConfig, eps: f64) -> Result<Outcome> {
    let p = cfg.params;
    let s = &cfg.solver;
    let theta0 = two_mode_datum(&cfg.grid, eps);
    let data_norm = caloric_minus1_norm(&theta0, &p, &s.timegrid, &s.norm_sweep)?.value;
    let picard = picard_solve(&theta0, &p, s);
    let mut residual = None;
    let mut mean_max: f64 = 0.0;
    let oracle = match &picard {
        Ok((sol, rep)) => {
            if rep.converged {
                residual = Some(fixed_point_residual(sol, &theta0, &p, s)?);
            }
            mean_max = sol
                .snapshots()
                .iter()
                .map(|x| x.mean().abs())
                .fold(0.0, f64::max);
            reference_solve(&theta0, &p, s).map(|r| {
                sol.snapshots()
                    .iter()
                    .zip(r.snapshots())
                    .map(|(a, b)| {
                        let scale = b.max_abs();
                        let d = a.max_diff(b).expect("same grid");
                        if scale > 0.0 {
                            d / scale
                        } else {
                            d
                        }
                    })
                    .fold(0.0, f64::max)
            })
        }
        Err(_) => Err(Error::Domain("no Picard solution".into())),
    };
    Ok(Outcome {
        eps,
        data_norm,
        picard,
        residual,
        oracle,
        mean_max,
    })
}

/// Picard solves over an amplitude ladder, checked against the reference solver.
pub fn run_wellposedness_sweep(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(cfg.clone());
    let mut amps = cfg.knobs.amplitudes.clone();
    amps.sort_by(f64::total_cmp);
    let outcomes: Vec<Outcome> = amps
        .par_iter()
        .map(|&e| run_one(cfg, e))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;

    let tol = cfg.solver.picard_tol;
    let mut table = Table::new(
        "wellposed",
        &[
            "eps",
            "data_norm",
            "status",
            "converged",
            "iterations",
            "contraction_ratio",
            "solution_norm",
            "residual",
            "oracle_rel_error",
        ],
    );
    let mut largest: Option<f64> = None;
    let mut converged_ratios: Vec<(f64, f64)> = Vec::new();
    let mut ratio_points = Vec::new();
    for o in &outcomes {
        let oracle = match &o.oracle {
            Ok(v) => num(*v),
            Err(Error::BlowUp { time }) => format!("blowup@{}", num(*time)),
            Err(_) => "undefined".into(),
        };
        match &o.picard {
            Ok((sol, rep)) => {
                let norm = *rep.iterates_norms.last().expect("at least the linear flow");
                table.push(vec![
                    num(o.eps),
                    num(o.data_norm),
                    "ok".into(),
                    rep.converged.to_string(),
                    rep.iterations().to_string(),
                    num(rep.contraction_ratio),
                    num(norm),
                    o.residual.map_or_else(|| "undefined".into(), num),
                    oracle,
                ]);
                ratio_points.push((o.eps, rep.contraction_ratio));
                if rep.converged {
                    largest = Some(o.eps);
                    converged_ratios.push((o.eps, rep.contraction_ratio));
                    let res = o.residual.unwrap_or(f64::INFINITY);
                    report.check(
                        format!("fixed-point residual at eps={}", num(o.eps)),
                        Severity::Hard,
                        res <= 2.0 * tol * (1.0 + norm),
                        format!("{} <= {}", num(res), num(2.0 * tol * (1.0 + norm))),
                    );
                }
                report.check(
                    format!("zero mean conserved at eps={}", num(o.eps)),
                    Severity::Hard,
                    o.mean_max <= 1e-12 * (1.0 + o.eps),
                    num(o.mean_max),
                );
                if o.eps == 0.0 {
                    let zero = sol.snapshots().iter().all(|s| s.max_abs() == 0.0);
                    report.check(
                        "zero data gives the zero solution",
                        Severity::Hard,
                        zero && rep.converged,
                        "",
                    );
                }
                if o.eps > 0.0 && o.eps <= 1e-3 {
                    report.check(
                        format!(
                            "small data eps={} converges with contraction < 1/2",
                            num(o.eps)
                        ),
                        Severity::Hard,
                        rep.converged && rep.contraction_ratio < 0.5,
                        num(rep.contraction_ratio),
                    );
                    let err = o.oracle.as_ref().copied().unwrap_or(f64::INFINITY);
                    report.check(
                        format!("oracle agreement at eps={}", num(o.eps)),
                        Severity::Hard,
                        err <= 1e-3,
                        num(err),
                    );
                }
                if (o.eps - cfg.knobs.regularity_amplitude).abs() <= 1e-15 * o.eps.max(1.0) {
                    report.trajectories.push(SavedTrajectory {
                        name: "solution".into(),
                        trajectory: sol.clone(),
                        picard: Some(rep.clone()),
                    });
                }
                let key = format!("eps_{}", num(o.eps));
                report.metric(format!("{key}_contraction_ratio"), rep.contraction_ratio);
                report.metric(format!("{key}_converged"), rep.converged as u8 as f64);
                if let Ok(e) = &o.oracle {
                    report.metric(format!("{key}_oracle_rel_error"), *e);
                }
                if let Some(r) = o.residual {
                    report.metric(format!("{key}_residual"), r);
                }
            }
            Err(e) => {
                let status = match e {
                    Error::Divergence { iteration } => format!("divergence@{iteration}"),
                    other => other.to_string(),
                };
                table.push(vec![
                    num(o.eps),
                    num(o.data_norm),
                    status,
                    "false".into(),
                    "undefined".into(),
                    "undefined".into(),
                    "undefined".into(),
                    "undefined".into(),
                    oracle,
                ]);
            }
        }
    }
    match largest {
        Some(e) => report.metric("largest_converging_eps", e),
        None => report.note("largest_converging_eps", "none"),
    }
    let mut violations = Vec::new();
    for (i, &(e1, r1)) in converged_ratios.iter().enumerate() {
        for &(e2, r2) in &converged_ratios[i + 1..] {
            if e1 < e2 && r1 > r2 + 0.1 {
                violations.push(format!("{}>{}", num(e1), num(e2)));
            }
        }
    }
    report.check(
        "contraction ratio quasi-monotone in eps",
        Severity::Soft,
        violations.is_empty(),
        violations.join(" "),
    );
    report.plots.push(PlotData {
        name: "contraction_ratio".into(),
        x_label: "eps".into(),
        y_label: "contraction_ratio".into(),
        points: ratio_points,
    });
    report.tables.push(table);
    Ok(report)
}
