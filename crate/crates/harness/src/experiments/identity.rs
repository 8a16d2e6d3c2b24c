use qsqg_core::norms::{morrey_norm, q_norm_semigroup};
use qsqg_core::spectral::fractional_laplacian;
use qsqg_core::SpaceParams;
use statrs::function::gamma::gamma;

use super::{corpus, grids, per_field};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::quadrature::integrate;
use crate::report::{drift, num, opt, ratio, ExperimentReport, PlotData, Severity, Table};

/// Admissible `(alpha, beta)` pairs for the constant check.
pub const IDENTITY_PAIRS: [(f64, f64); 5] = [
    (0.25, 0.75),
    (0.3, 0.8),
    (0.5, 0.9),
    (0.2, 0.85),
    (0.4, 0.7),
];

fn gamma_exponent(p: &SpaceParams) -> f64 {
    (p.alpha() - p.beta() + 3.0) / (2.0 * p.beta())
}

// e^{-2u} u^{p-1} < 1e-30 beyond this for the exponents above
const TAIL_CUT: f64 = 45.0;

/// `int_0^inf u^{p-1} e^{-2u} du` by adaptive quadrature.
pub fn gamma_constant_quadrature(p: &SpaceParams) -> Result<f64> {
    let e = gamma_exponent(p);
    let f = move |u: f64| {
        if u == 0.0 {
            0.0
        } else {
            u.powf(e - 1.0) * (-2.0 * u).exp()
        }
    };
    Ok(integrate(&f, 0.0, 1.0, 1e-14)? + integrate(&f, 1.0, TAIL_CUT, 1e-14)?)
}

/// `Gamma(p) / 2^p`.
pub fn gamma_constant_closed_form(p: &SpaceParams) -> f64 {
    let e = gamma_exponent(p);
    gamma(e) / 2f64.powf(e)
}

/// Constant check plus the Morrey/semigroup equivalence interval over the corpus.
pub fn run_space_identity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(cfg.clone());
    let mut constants = Table::new(
        "constants",
        &[
            "alpha",
            "beta",
            "p",
            "quadrature",
            "closed_form",
            "abs_error",
        ],
    );
    let mut worst: f64 = 0.0;
    for (a, b) in IDENTITY_PAIRS {
        let p = SpaceParams::new(a, b)?;
        let q = gamma_constant_quadrature(&p)?;
        let c = gamma_constant_closed_form(&p);
        worst = worst.max((q - c).abs());
        constants.push(vec![
            num(a),
            num(b),
            num(gamma_exponent(&p)),
            num(q),
            num(c),
            num((q - c).abs()),
        ]);
    }
    report.metric("constant_max_abs_error", worst);
    report.check(
        "C_{a,b} quadrature matches Gamma(p)/2^p within 1e-8",
        Severity::Hard,
        worst <= 1e-8,
        num(worst),
    );
    let own = gamma_constant_quadrature(&cfg.params)?;
    report.metric("constant", own);

    let p = cfg.params;
    let gamma_power = (p.alpha() - p.beta() + 1.0) / 2.0;
    let lam = 2.0 - 2.0 * (p.alpha() + p.beta() - 1.0);
    report.note(
        "morrey_exponents",
        format!("p=2 lambda={} on (-Delta)^{}", num(lam), num(gamma_power)),
    );

    let mut table = Table::new(
        "equivalence",
        &["field", "n", "morrey", "q_semigroup", "ratio"],
    );
    let corpus = corpus(cfg);
    let mut intervals = Vec::new();
    for grid in grids(cfg) {
        let fields = corpus.materialize(&grid);
        let rows = per_field(&fields, |_, f| {
            let m = morrey_norm(&fractional_laplacian(f, gamma_power)?, 2.0, lam, &cfg.sweep)?;
            let q = q_norm_semigroup(f, &p, &cfg.sweep)?;
            Ok((m.value, q.value))
        })?;
        let mut points = Vec::new();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (i, (m, q)) in rows.iter().enumerate() {
            let r = ratio(*m, *q);
            table.push(vec![
                i.to_string(),
                grid.n().to_string(),
                num(*m),
                num(*q),
                opt(r),
            ]);
            if let Some(r) = r {
                lo = lo.min(r);
                hi = hi.max(r);
                points.push((i as f64, r));
            }
        }
        report.plots.push(PlotData {
            name: format!("equivalence_n{}", grid.n()),
            x_label: "field".into(),
            y_label: "ratio".into(),
            points,
        });
        if lo.is_finite() {
            let n = grid.n();
            report.metric(format!("c1_n{n}"), lo);
            report.metric(format!("c2_n{n}"), hi);
            report.metric(format!("spread_n{n}"), hi / lo);
            report.check(
                format!("equivalence spread <= 20 at N={n}"),
                Severity::Soft,
                hi / lo <= 20.0,
                num(hi / lo),
            );
            intervals.push((lo, hi));
        }
    }
    if let [(l1, h1), (l2, h2)] = intervals[..] {
        let d = drift(l1, l2).max(drift(h1, h2));
        report.metric("interval_drift", d);
        report.check(
            "equivalence interval drift under N doubling < 15%",
            Severity::Soft,
            d < 0.15,
            num(d),
        );
    }
    report.tables.push(constants);
    report.tables.push(table);
    Ok(report)
}
