use qsqg_core::norms::caloric_minus1_norm;
use qsqg_core::solver::scaling_transform;
use qsqg_core::TimeGrid;

use super::{corpus, per_field};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{num, opt, ratio, ExperimentReport, PlotData, Severity, Table};

pub const BAND: (f64, f64) = (0.8, 1.25);

fn in_band(r: f64) -> bool {
    (BAND.0..=BAND.1).contains(&r)
}

/// Data-norm ratios under `theta0 -> lambda^{2b-1} theta0(lambda x)`, with a
/// control using the exponent `lambda^1`.
pub fn run_scaling_invariance(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(cfg.clone());
    let p = cfg.params;
    // the largest sweep box has height (L/2^first_level)^{2 beta}
    let top = cfg.grid.length() / 2f64.powi(cfg.sweep.first_level as i32);
    let times = TimeGrid::graded(top.powf(2.0 * p.beta()), cfg.knobs.data_steps)?;
    report.note("data_horizon", num(times.horizon()));
    let fields = corpus(cfg).materialize(&cfg.grid);
    let lambdas = cfg.knobs.lambdas.clone();
    let rows = per_field(&fields, |_, f| {
        let base = caloric_minus1_norm(f, &p, &times, &cfg.sweep)?.value;
        let mut out = Vec::new();
        for &l in &lambdas {
            let scaled = scaling_transform(f, l, &p)?;
            let critical = caloric_minus1_norm(&scaled, &p, &times, &cfg.sweep)?.value;
            let control_factor = (l as f64).powf(1.0 - (2.0 * p.beta() - 1.0));
            let control =
                caloric_minus1_norm(&scaled.scaled(control_factor), &p, &times, &cfg.sweep)?.value;
            out.push((l, critical, control));
        }
        Ok((base, out))
    })?;

    let mut table = Table::new(
        "scaling",
        &[
            "field",
            "lambda",
            "exponent",
            "norm",
            "norm_scaled",
            "ratio",
        ],
    );
    for &l in &lambdas {
        let mut crit_in = 0usize;
        let mut ctrl_out = 0usize;
        let mut defined = 0usize;
        let mut points = Vec::new();
        let mut exact_identity = true;
        for (i, (base, per)) in rows.iter().enumerate() {
            let &(_, critical, control) = per.iter().find(|x| x.0 == l).expect("lambda present");
            let rc = ratio(critical, *base);
            let rx = ratio(control, *base);
            table.push(vec![
                i.to_string(),
                l.to_string(),
                "critical".into(),
                num(*base),
                num(critical),
                opt(rc),
            ]);
            table.push(vec![
                i.to_string(),
                l.to_string(),
                "control".into(),
                num(*base),
                num(control),
                opt(rx),
            ]);
            if let (Some(rc), Some(rx)) = (rc, rx) {
                defined += 1;
                crit_in += in_band(rc) as usize;
                ctrl_out += (!in_band(rx)) as usize;
                points.push((i as f64, rc));
                if l == 1 && rc != 1.0 {
                    exact_identity = false;
                }
            }
        }
        if defined == 0 {
            continue;
        }
        let fin = crit_in as f64 / defined as f64;
        let fout = ctrl_out as f64 / defined as f64;
        report.metric(format!("in_band_fraction_l{l}"), fin);
        report.metric(format!("control_out_fraction_l{l}"), fout);
        report.plots.push(PlotData {
            name: format!("ratio_l{l}"),
            x_label: "field".into(),
            y_label: "ratio".into(),
            points,
        });
        if l == 1 {
            report.check(
                "lambda = 1 gives ratio exactly 1",
                Severity::Hard,
                exact_identity,
                "",
            );
        } else {
            report.check(
                format!("critical ratio in [0.8, 1.25] for >= 90% at lambda={l}"),
                Severity::Soft,
                fin >= 0.9,
                num(fin),
            );
            report.check(
                format!("control ratio outside [0.8, 1.25] for >= 90% at lambda={l}"),
                Severity::Soft,
                fout >= 0.9,
                num(fout),
            );
        }
    }
    report.tables.push(table);
    Ok(report)
}
