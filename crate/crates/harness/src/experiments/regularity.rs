use qsqg_core::norms::{besov_sum_norm, x_k_norm};
use qsqg_core::solver::{linear_flow, picard_solve};
use qsqg_core::{GridSpec, RealField, SpaceParams, TimeGrid, Trajectory};

use super::wellposed::two_mode_datum;
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::report::{num, opt, ratio, ExperimentReport, PlotData, Severity, Table};

pub const ORDERS: [i32; 3] = [0, 1, 2];

/// `sup_t t^{(2b-1+k)/(2b)} max_{|a|=k} ||d^a u(t)||_{B^{0,1}_inf}`.
pub fn besov_ladder(traj: &Trajectory, params: &SpaceParams, k: u32) -> f64 {
    let beta = params.beta();
    let power = (2.0 * beta - 1.0 + k as f64) / (2.0 * beta);
    let mut best: f64 = 0.0;
    for (t, f) in traj.iter() {
        let spectrum = f.to_spectral();
        for i in 0..=k {
            let d = spectrum.derivative([k - i, i]).to_real();
            best = best.max(t.powf(power) * besov_sum_norm(&d).value);
        }
    }
    best
}

/// Linear flow of `sin x1` on `L = 2 pi`, uniform nodes through `t = 1`.
pub fn single_mode_flow(n: usize, params: &SpaceParams) -> Result<Trajectory> {
    let grid = GridSpec::periodic_2pi(n)?;
    let f = RealField::from_fn(grid, |x, _| x.sin());
    Ok(linear_flow(&f, &TimeGrid::new(4.0, 400, 1.0)?, params)?)
}

/// The `X^{b,k}` ladder of a small-data solution, plus the single-mode closed form.
pub fn run_regularity_decay(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(cfg.clone());
    let p = cfg.params;
    let eps = cfg.knobs.regularity_amplitude;
    let theta0 = two_mode_datum(&cfg.grid, eps);
    let (sol, picard) = picard_solve(&theta0, &p, &cfg.solver)?;
    if !picard.converged {
        return Err(HarnessError::Numerical(format!(
            "Picard did not converge at eps={}",
            num(eps)
        )));
    }
    report.metric("eps", eps);
    report.metric("picard_iterations", picard.iterations() as f64);

    let mut table = Table::new(
        "regularity",
        &["k", "x_k_norm", "multi_index", "growth", "besov_ladder"],
    );
    let mut prev: Option<f64> = None;
    let mut values = Vec::new();
    let mut points = Vec::new();
    for k in ORDERS {
        let r = x_k_norm(&sol, &p, k, &cfg.sweep)?;
        let ladder = besov_ladder(&sol, &p, k as u32);
        let growth = prev.and_then(|a| ratio(r.value, a));
        table.push(vec![
            k.to_string(),
            num(r.value),
            r.multi_index
                .map_or_else(|| "none".into(), |a| format!("({} {})", a[0], a[1])),
            opt(growth),
            num(ladder),
        ]);
        report.metric(format!("x_k{k}"), r.value);
        report.metric(format!("besov_ladder_k{k}"), ladder);
        if let Some(g) = growth {
            report.metric(format!("growth_k{}_k{k}", k - 1), g);
            report.check(
                format!("growth factor k={} -> k={k} below 50", k - 1),
                Severity::Soft,
                g < 50.0,
                num(g),
            );
        }
        points.push((k as f64, r.value));
        values.push(r.value);
        prev = Some(r.value);
    }
    report.check(
        "x_k norms finite for k = 0, 1, 2",
        Severity::Hard,
        values.iter().all(|v| v.is_finite()),
        values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" "),
    );

    let flow = single_mode_flow(cfg.grid.n(), &p)?;
    let closed = (-1f64).exp();
    let measured = besov_ladder(&flow, &p, 1);
    report.metric("single_mode_k1", measured);
    report.metric("single_mode_k1_error", (measured - closed).abs());
    report.check(
        "single-mode k=1 ladder equals max_t t e^{-t} = 1/e",
        Severity::Hard,
        (measured - closed).abs() <= 1e-3,
        format!("{} vs {}", num(measured), num(closed)),
    );
    report.plots.push(PlotData {
        name: "x_k".into(),
        x_label: "k".into(),
        y_label: "x_k_norm".into(),
        points,
    });
    report.tables.push(table);
    Ok(report)
}
