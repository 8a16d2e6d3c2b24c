use qsqg_core::norms::carleson_l1_functional;
use qsqg_core::solver::duhamel_from_density;
use qsqg_core::spectral::kernel_fields;
use qsqg_core::time::node_quadrature;
use qsqg_core::{Axis, GridSpec, RealField, SpaceParams, SpectralField, TimeGrid, Trajectory};

use rayon::prelude::*;

use super::corpus_of_size;
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{drift, num, opt, ratio, ExperimentReport, Severity, Table};

/// Smooth space-time field `cos(w t) F_a + sin(w t) F_b` with `w` in `{1, 2, 3} pi`.
#[derive(Clone, Debug)]
pub struct SmoothPath {
    a: RealField,
    b: RealField,
    omega: f64,
}

impl SmoothPath {
    pub fn new(a: RealField, b: RealField, index: usize) -> Self {
        SmoothPath {
            a,
            b,
            omega: std::f64::consts::PI * (1 + index % 3) as f64,
        }
    }

    pub fn at(&self, t: f64) -> RealField {
        let (s, c) = (self.omega * t).sin_cos();
        self.a
            .zip_with(&self.b, |x, y| c * x + s * y)
            .expect("both fields share a grid")
    }

    pub fn trajectory(&self, times: &TimeGrid) -> Result<Trajectory> {
        Ok(Trajectory::from_fn(times, |t| self.at(t))?)
    }
}

fn l2_squared(f: &RealField) -> f64 {
    f.grid().cell_area() * f.values().iter().map(|v| v * v).sum::<f64>()
}

fn l1(f: &RealField) -> f64 {
    f.grid().cell_area() * f.values().iter().map(|v| v.abs()).sum::<f64>()
}

/// `sum_m c_m E(t_m)` with the exact-weight nodes for `int_0^T E t^{-a/b} dt`.
fn weighted_time_integral(times: &[f64], values: &[f64], params: &SpaceParams) -> f64 {
    let upper = *times.last().expect("nonempty");
    let (coef, _) = node_quadrature(times, upper, params.time_weight_exponent());
    coef.iter().zip(values).map(|(c, v)| c * v).sum()
}

/// `int ||A||^2 t^{-a/b} / int ||f||^2 t^{-a/b}`, `A` the Duhamel integral of
/// `(-Delta)^b f`.
pub fn energy_ratio(
    path: &SmoothPath,
    times: &TimeGrid,
    params: &SpaceParams,
) -> Result<Option<f64>> {
    let f = path.trajectory(times)?;
    let forced = f.map(|_, x| x.to_spectral().fractional_power(params.beta()).to_real());
    let a = duhamel_from_density(&forced, params)?;
    let lhs: Vec<f64> = a.snapshots().iter().map(l2_squared).collect();
    let rhs: Vec<f64> = f.snapshots().iter().map(l2_squared).collect();
    Ok(ratio(
        weighted_time_integral(f.times(), &lhs, params),
        weighted_time_integral(f.times(), &rhs, params),
    ))
}

/// Left-hand forms built on `I(t) = int_0^t N ds`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothingForm {
    /// `t^{k/2} (-Delta)^{(k b + 1)/2} e^{-(t/2) Lambda} I(t)`.
    Order(u32),
    /// `(-Delta)^{1/2} e^{-t Lambda} I(t)`.
    Remark,
}

impl SmoothingForm {
    pub const ALL: [SmoothingForm; 3] = [
        SmoothingForm::Order(0),
        SmoothingForm::Order(1),
        SmoothingForm::Remark,
    ];

    pub fn name(self) -> String {
        match self {
            SmoothingForm::Order(k) => format!("k{k}"),
            SmoothingForm::Remark => "remark".into(),
        }
    }

    fn apply(self, t: f64, integral: &SpectralField, beta: f64) -> SpectralField {
        match self {
            SmoothingForm::Order(k) => integral
                .heat(t / 2.0, beta)
                .fractional_power((k as f64 * beta + 1.0) / 2.0)
                .scaled(t.powf(k as f64 / 2.0)),
            SmoothingForm::Remark => integral.heat(t, beta).fractional_power(0.5),
        }
    }
}

/// Cumulative trapezoid `int_0^{t_m} N ds` from `N(0)` and the node values.
fn cumulative_integral(path: &SmoothPath, traj: &Trajectory) -> Vec<SpectralField> {
    let mut prev_t = 0.0;
    let mut prev = path.at(0.0).to_spectral();
    let mut acc = SpectralField::zeros(*prev.grid());
    let mut out = Vec::with_capacity(traj.len());
    for (t, f) in traj.iter() {
        let cur = f.to_spectral();
        let step = prev
            .add(&cur)
            .expect("same grid")
            .scaled(0.5 * (t - prev_t));
        acc = acc.add(&step).expect("same grid");
        out.push(acc.clone());
        prev = cur;
        prev_t = t;
    }
    out
}

/// Left side over `A(N) int int |N| s^{-a/b}` for each form.
pub fn smoothing_ratios(
    path: &SmoothPath,
    times: &TimeGrid,
    cfg: &ExperimentConfig,
) -> Result<Vec<Option<f64>>> {
    let p = cfg.params;
    let n = path.trajectory(times)?;
    let integrals = cumulative_integral(path, &n);
    let a_n = carleson_l1_functional(&n, &p, &cfg.sweep)?.value;
    let l1s: Vec<f64> = n.snapshots().iter().map(l1).collect();
    let rhs = a_n * weighted_time_integral(n.times(), &l1s, &p);
    Ok(SmoothingForm::ALL
        .iter()
        .map(|form| {
            let lhs: Vec<f64> = n
                .times()
                .iter()
                .zip(&integrals)
                .map(|(&t, i)| l2_squared(&form.apply(t, i, p.beta()).to_real()))
                .collect();
            ratio(weighted_time_integral(n.times(), &lhs, &p), rhs)
        })
        .collect())
}

/// Decay maxima of the heat-Riesz kernels and the heat gradient at time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelDecay {
    /// `max (1+|x|)^2 |K^b_j|` over `j`.
    pub riesz0: f64,
    /// `max (1+|x|)^3 |d_i K^b_j|` over `i, j`.
    pub riesz1: f64,
    /// `max (t^{1/(2b)}+|x|)^3 |grad K_t|`.
    pub gradient: f64,
}

fn torus_radius(grid: &GridSpec, i1: usize, i2: usize) -> f64 {
    let l = grid.length();
    let [x1, x2] = grid.point(i1, i2);
    let d1 = x1.min(l - x1);
    let d2 = x2.min(l - x2);
    (d1 * d1 + d2 * d2).sqrt()
}

fn weighted_max(grid: &GridSpec, f: impl Fn(usize) -> f64, weight: impl Fn(f64) -> f64) -> f64 {
    let n = grid.n();
    let mut best: f64 = 0.0;
    for i2 in 0..n {
        for i1 in 0..n {
            let idx = grid.index(i1, i2);
            best = best.max(weight(torus_radius(grid, i1, i2)) * f(idx));
        }
    }
    best
}

pub fn kernel_decay(t: f64, params: &SpaceParams, grid: &GridSpec) -> Result<KernelDecay> {
    let k = kernel_fields(t, params, grid)?;
    let mut riesz0: f64 = 0.0;
    let mut riesz1: f64 = 0.0;
    for kj in &k.riesz {
        riesz0 = riesz0.max(weighted_max(
            grid,
            |i| kj.values()[i].abs(),
            |r| (1.0 + r).powi(2),
        ));
        let s = kj.to_spectral();
        for axis in [Axis::X1, Axis::X2] {
            let d = s.partial(axis).to_real();
            riesz1 = riesz1.max(weighted_max(
                grid,
                |i| d.values()[i].abs(),
                |r| (1.0 + r).powi(3),
            ));
        }
    }
    let scale = t.powf(1.0 / (2.0 * params.beta()));
    let [g1, g2] = &k.gradient;
    let gradient = weighted_max(
        grid,
        |i| g1.values()[i].hypot(g2.values()[i]),
        |r| (scale + r).powi(3),
    );
    Ok(KernelDecay {
        riesz0,
        riesz1,
        gradient,
    })
}

fn max_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    values
        .flatten()
        .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
}

/// Empirical constants of the energy and smoothing inequalities under time
/// refinement, and kernel decay maxima under grid refinement.
pub fn run_lemma_checks(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(cfg.clone());
    let p = cfg.params;
    let count = cfg.knobs.lemma_trajectories;
    let fields = corpus_of_size(cfg, 2 * count).materialize(&cfg.grid);
    let paths: Vec<SmoothPath> = (0..count)
        .map(|i| SmoothPath::new(fields[2 * i].clone(), fields[2 * i + 1].clone(), i))
        .collect();
    let coarse = cfg.solver.timegrid;
    let fine = coarse.refined(2);
    let time_grids = [coarse, fine];

    let mut table = Table::new(
        "lemmas",
        &["trajectory", "steps", "energy", "k0", "k1", "remark"],
    );
    let mut constants: Vec<[Option<f64>; 4]> = Vec::new();
    for tg in &time_grids {
        let rows: Vec<[Option<f64>; 4]> = paths
            .par_iter()
            .map(|path| {
                let e = energy_ratio(path, tg, &p)?;
                let s = smoothing_ratios(path, tg, cfg)?;
                Ok([e, s[0], s[1], s[2]])
            })
            .collect::<Vec<Result<_>>>()
            .into_iter()
            .collect::<Result<_>>()?;
        for (i, r) in rows.iter().enumerate() {
            let mut row = vec![i.to_string(), tg.steps().to_string()];
            row.extend(r.iter().map(|v| opt(*v)));
            table.push(row);
        }
        let mut best = [None; 4];
        for (c, b) in best.iter_mut().enumerate() {
            *b = max_defined(rows.iter().map(|r| r[c]));
        }
        constants.push(best);
    }
    let mut names = vec!["energy".to_string()];
    names.extend(SmoothingForm::ALL.iter().map(|f| f.name()));
    for (c, name) in names.iter().enumerate() {
        let (a, b) = (constants[0][c], constants[1][c]);
        match (a, b) {
            (Some(a), Some(b)) => {
                report.metric(format!("{name}_constant_m{}", coarse.steps()), a);
                report.metric(format!("{name}_constant_m{}", fine.steps()), b);
                let d = drift(a, b);
                report.metric(format!("{name}_drift"), d);
                report.check(
                    format!("{name} constant stable under time refinement"),
                    Severity::Soft,
                    d < 0.1,
                    format!("drift {}", num(d)),
                );
            }
            _ => report.note(format!("{name}_constant"), "undefined"),
        }
    }
    report.check(
        "inequality constants finite",
        Severity::Hard,
        constants.iter().flatten().flatten().all(|v| v.is_finite()),
        "",
    );
    report.tables.push(table);

    let mut kt = Table::new("kernels", &["n", "t", "riesz0", "riesz1", "gradient"]);
    let grids: Vec<GridSpec> = super::grids(cfg);
    let decays: Vec<KernelDecay> = grids
        .iter()
        .map(|g| kernel_decay(cfg.knobs.kernel_time, &p, g))
        .collect::<Result<_>>()?;
    for (g, d) in grids.iter().zip(&decays) {
        kt.push(vec![
            g.n().to_string(),
            num(cfg.knobs.kernel_time),
            num(d.riesz0),
            num(d.riesz1),
            num(d.gradient),
        ]);
        report.metric(format!("kernel_riesz0_n{}", g.n()), d.riesz0);
        report.metric(format!("kernel_riesz1_n{}", g.n()), d.riesz1);
        report.metric(format!("kernel_gradient_n{}", g.n()), d.gradient);
    }
    report.check(
        "kernel decay maxima finite",
        Severity::Hard,
        decays
            .iter()
            .all(|d| d.riesz0.is_finite() && d.riesz1.is_finite() && d.gradient.is_finite()),
        "",
    );
    if let [a, b] = decays[..] {
        for (name, x, y) in [
            ("riesz0", a.riesz0, b.riesz0),
            ("riesz1", a.riesz1, b.riesz1),
            ("gradient", a.gradient, b.gradient),
        ] {
            let d = drift(x, y);
            report.metric(format!("kernel_{name}_drift"), d);
            report.check(
                format!("kernel {name} maximum stable under grid doubling"),
                Severity::Soft,
                d < 0.2,
                format!("drift {}", num(d)),
            );
        }
    }
    report.tables.push(kt);
    Ok(report)
}
