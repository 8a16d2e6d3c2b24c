use qsqg_core::norms::q_norm_semigroup;
use qsqg_core::spectral::riesz_transform;
use qsqg_core::{Axis, CarlesonBox};

use super::{corpus, grids, per_field};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{drift, num, opt, ratio, ExperimentReport, PlotData, Severity, Table};

fn box_text(b: Option<CarlesonBox>) -> String {
    b.map_or_else(
        || "none".into(),
        |b| {
            format!(
                "center=({}, {}) radius={}",
                num(b.center[0]),
                num(b.center[1]),
                num(b.radius)
            )
        },
    )
}

/// Ratio `||R_j f|| / ||f||` of semigroup Q-norms over the corpus, at `N` and `2N`.
pub fn run_riesz_boundedness(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(cfg.clone());
    let mut table = Table::new("riesz", &["field", "j", "n", "q_f", "q_rjf", "ratio"]);
    let corpus = corpus(cfg);
    let mut overall = Vec::new();
    for grid in grids(cfg) {
        let fields = corpus.materialize(&grid);
        let rows = per_field(&fields, |_, f| {
            let q = q_norm_semigroup(f, &cfg.params, &cfg.sweep)?;
            let r1 = q_norm_semigroup(&riesz_transform(f, Axis::X1)?, &cfg.params, &cfg.sweep)?;
            let r2 = q_norm_semigroup(&riesz_transform(f, Axis::X2)?, &cfg.params, &cfg.sweep)?;
            Ok((q, [r1, r2]))
        })?;
        let mut best: Option<(f64, usize, usize, Option<CarlesonBox>)> = None;
        for j in 0..2 {
            let mut max_j: Option<f64> = None;
            let mut points = Vec::new();
            for (i, (q, rs)) in rows.iter().enumerate() {
                let r = ratio(rs[j].value, q.value);
                table.push(vec![
                    i.to_string(),
                    (j + 1).to_string(),
                    grid.n().to_string(),
                    num(q.value),
                    num(rs[j].value),
                    opt(r),
                ]);
                if let Some(r) = r {
                    points.push((i as f64, r));
                    if max_j.is_none_or(|m| r > m) {
                        max_j = Some(r);
                    }
                    if best.is_none_or(|b| r > b.0) {
                        best = Some((r, i, j + 1, rs[j].attaining_box));
                    }
                }
            }
            if let Some(m) = max_j {
                report.metric(format!("max_ratio_j{}_n{}", j + 1, grid.n()), m);
            }
            report.plots.push(PlotData {
                name: format!("ratio_j{}_n{}", j + 1, grid.n()),
                x_label: "field".into(),
                y_label: "ratio".into(),
                points,
            });
        }
        match best {
            Some((r, i, j, bx)) => {
                report.metric(format!("max_ratio_n{}", grid.n()), r);
                report.note(
                    format!("max_ratio_n{}_case", grid.n()),
                    format!("field={i} j={j} {}", box_text(bx)),
                );
                report.check(
                    format!("finite max ratio at N={}", grid.n()),
                    Severity::Hard,
                    r.is_finite(),
                    num(r),
                );
                overall.push(r);
            }
            None => report.note(
                format!("max_ratio_n{}", grid.n()),
                "undefined (no nonzero field)",
            ),
        }
    }
    if let [a, b] = overall[..] {
        let d = drift(a, b);
        report.metric("max_ratio_drift", d);
        report.check(
            "max ratio drift under N doubling < 10%",
            Severity::Soft,
            d < 0.1,
            num(d),
        );
    }
    report.tables.push(table);
    Ok(report)
}
