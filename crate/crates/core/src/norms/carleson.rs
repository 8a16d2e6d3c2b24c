use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};
use crate::grid::{Axis, GridSpec};
use crate::params::SpaceParams;
use crate::solver::linear_flow;
use crate::time::{node_quadrature, power_weight_integral, TimeGrid, Trajectory};

use super::besov::besov_sum_spectral;
use super::report::NormReport;
use super::sweep::{BoxSweepConfig, SweepRadius};
use super::{disk_sup, BoxMax};

fn add_squares(density: &mut [f64], weight: f64, fields: &[RealField]) {
    for f in fields {
        for (d, v) in density.iter_mut().zip(f.values()) {
            *d += weight * v * v;
        }
    }
}

/// `sum_radii sup_centers`, reduced in ladder order.
fn sweep_max(
    radii: &[SweepRadius],
    per_radius: impl Fn(&SweepRadius) -> BoxMax + Sync + Send,
) -> BoxMax {
    radii
        .par_iter()
        .map(per_radius)
        .collect::<Vec<_>>()
        .into_iter()
        .fold(BoxMax::default(), BoxMax::merge)
}

fn box_report(best: BoxMax, hash: String, take_sqrt: bool) -> NormReport {
    let value = if take_sqrt {
        best.value.max(0.0).sqrt()
    } else {
        best.value
    };
    let mut report = NormReport::new(value, hash);
    report.attaining_box = best.attained;
    report
}

/// Gradient energy density `|grad e^{-s Lambda} f|^2`.
fn gradient_energy(spectrum: &SpectralField, s: f64, beta: f64) -> Vec<f64> {
    let evolved = spectrum.heat(s, beta);
    let mut density = vec![0.0; spectrum.grid().len()];
    add_squares(
        &mut density,
        1.0,
        &[
            evolved.partial(Axis::X1).to_real(),
            evolved.partial(Axis::X2).to_real(),
        ],
    );
    density
}

/// Semigroup characterization of the `Q^beta_alpha` norm:
/// `sup r^{2a+2b-4} int_0^{r^{2b}} int_{B(x,r)} |grad e^{-t Lambda} f|^2 t^{-a/b}`, square-rooted.
pub fn q_norm_semigroup(
    f: &RealField,
    params: &SpaceParams,
    sweep: &BoxSweepConfig,
) -> Result<NormReport> {
    let grid = *f.grid();
    let radii = sweep.radii(&grid)?;
    let spectrum = f.to_spectral().without_mean();
    let (beta, a) = (params.beta(), params.time_weight_exponent());
    let best = sweep_max(&radii, |rad| {
        let mut density = vec![0.0; grid.len()];
        for (lo, hi) in sweep.time_cells(rad.radius.powf(2.0 * beta)) {
            let w = power_weight_integral(lo, hi, a);
            for (d, e) in density
                .iter_mut()
                .zip(gradient_energy(&spectrum, 0.5 * (lo + hi), beta))
            {
                *d += w * e;
            }
        }
        disk_sup(
            &grid,
            rad,
            &density,
            rad.radius.powf(params.carleson_radius_exponent()),
        )
    });
    let hash = sweep.config_hash(&grid, &format!("q_semigroup|{}|{}", params.alpha(), beta));
    Ok(box_report(best, hash, true))
}

/// `sup r^{2 gamma - 2} int_0^r int_{B(x,r)} |grad e^{-t^{2b} Lambda} f|^2 t`, square-rooted.
pub fn morrey_semigroup_functional(
    f: &RealField,
    gamma: f64,
    params: &SpaceParams,
    sweep: &BoxSweepConfig,
) -> Result<NormReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!(
            "gamma must lie in (0,1), got {gamma}"
        )));
    }
    let grid = *f.grid();
    let radii = sweep.radii(&grid)?;
    let spectrum = f.to_spectral().without_mean();
    let beta = params.beta();
    let best = sweep_max(&radii, |rad| {
        let mut density = vec![0.0; grid.len()];
        for (lo, hi) in sweep.time_cells(rad.radius) {
            let w = power_weight_integral(lo, hi, -1.0);
            let t = 0.5 * (lo + hi);
            for (d, e) in
                density
                    .iter_mut()
                    .zip(gradient_energy(&spectrum, t.powf(2.0 * beta), beta))
            {
                *d += w * e;
            }
        }
        disk_sup(&grid, rad, &density, rad.radius.powf(2.0 * gamma - 2.0))
    });
    let hash = sweep.config_hash(&grid, &format!("morrey_semigroup|{gamma}|{beta}"));
    Ok(box_report(best, hash, true))
}

/// Carleson sup over the sweep of `sum_m c_m(r) density_m`, with node weights
/// from [`node_quadrature`] on `(0, r^{2b}]`.
fn trajectory_carleson(
    grid: &GridSpec,
    times: &[f64],
    densities: &[Vec<f64>],
    params: &SpaceParams,
    sweep: &BoxSweepConfig,
) -> Result<(BoxMax, bool)> {
    let radii = sweep.radii(grid)?;
    let a = params.time_weight_exponent();
    let partial = radii.iter().any(|rad| {
        let (_, p) = node_quadrature(times, rad.radius.powf(2.0 * params.beta()), a);
        p
    });
    let best = sweep_max(&radii, |rad| {
        let (coef, _) = node_quadrature(times, rad.radius.powf(2.0 * params.beta()), a);
        let mut density = vec![0.0; grid.len()];
        for (c, e) in coef.iter().zip(densities) {
            if *c != 0.0 {
                for (d, v) in density.iter_mut().zip(e) {
                    *d += c * v;
                }
            }
        }
        disk_sup(
            grid,
            rad,
            &density,
            rad.radius.powf(params.carleson_radius_exponent()),
        )
    });
    Ok((best, partial))
}

fn require_nonempty(traj: &Trajectory) -> Result<GridSpec> {
    traj.grid()
        .copied()
        .ok_or_else(|| Error::Domain("empty trajectory".into()))
}

/// Solution-space norm: `sup_t t^{1-1/(2b)} ||f(t)||_{B^{0,1}_inf}` plus the
/// square root of the Carleson sup of `|f|^2 + |R_1 f|^2 + |R_2 f|^2`.
pub fn x_norm(
    traj: &Trajectory,
    params: &SpaceParams,
    sweep: &BoxSweepConfig,
) -> Result<NormReport> {
    x_norm_tagged(traj, params, sweep, "x_norm")
}

fn x_norm_tagged(
    traj: &Trajectory,
    params: &SpaceParams,
    sweep: &BoxSweepConfig,
    tag: &str,
) -> Result<NormReport> {
    let grid = require_nonempty(traj)?;
    sweep.validate(&grid)?;
    let weight_power = 1.0 - 1.0 / (2.0 * params.beta());
    let per_node: Vec<(f64, Vec<f64>)> = traj
        .snapshots()
        .par_iter()
        .map(|snap| {
            let spectrum = snap.to_spectral().without_mean();
            let (besov, _) = besov_sum_spectral(&spectrum);
            let mut density = vec![0.0; grid.len()];
            add_squares(
                &mut density,
                1.0,
                &[
                    spectrum.to_real(),
                    spectrum.riesz(Axis::X1).to_real(),
                    spectrum.riesz(Axis::X2).to_real(),
                ],
            );
            (besov, density)
        })
        .collect();

    let mut besov_part = 0.0;
    let mut besov_time = None;
    for (&t, (b, _)) in traj.times().iter().zip(&per_node) {
        let v = t.powf(weight_power) * b;
        if besov_time.is_none() || v > besov_part {
            besov_part = v;
            besov_time = Some(t);
        }
    }
    let densities: Vec<Vec<f64>> = per_node.into_iter().map(|(_, d)| d).collect();
    let (best, partial) = trajectory_carleson(&grid, traj.times(), &densities, params, sweep)?;
    let carleson_part = best.value.max(0.0).sqrt();

    let hash = sweep.config_hash(
        &grid,
        &format!("{tag}|{}|{}", params.alpha(), params.beta()),
    );
    let mut report = NormReport::new(besov_part + carleson_part, hash);
    report.attaining_box = best.attained;
    report.attaining_time = besov_time;
    report.besov_part = Some(besov_part);
    report.carleson_part = Some(carleson_part);
    report.partial_coverage = partial;
    Ok(report)
}

/// Higher-order solution norm: the largest [`x_norm`] of
/// `t^{k/(2b)} d^a u` over multi-indices `a = (k - i, i)`.
pub fn x_k_norm(
    traj: &Trajectory,
    params: &SpaceParams,
    k: i32,
    sweep: &BoxSweepConfig,
) -> Result<NormReport> {
    if k < 0 {
        return Err(Error::Domain(format!(
            "derivative order must be nonnegative, got {k}"
        )));
    }
    if k == 0 {
        let mut r = x_norm(traj, params, sweep)?;
        r.multi_index = Some([0, 0]);
        return Ok(r);
    }
    require_nonempty(traj)?;
    let k = k as u32;
    let time_power = k as f64 / (2.0 * params.beta());
    let mut best: Option<NormReport> = None;
    for i in 0..=k {
        let index = [k - i, i];
        let derived = traj.map(|t, f| {
            f.to_spectral()
                .derivative(index)
                .to_real()
                .scaled(t.powf(time_power))
        });
        let mut r = x_norm_tagged(&derived, params, sweep, &format!("x_k|{k}"))?;
        r.multi_index = Some(index);
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("k + 1 >= 1 multi-indices"))
}

/// `sup r^{2a+2b-4} int_0^{r^{2b}} int_{B(x,r)} |f| t^{-a/b}`; no mean
/// subtraction and no square root.
pub fn carleson_l1_functional(
    traj: &Trajectory,
    params: &SpaceParams,
    sweep: &BoxSweepConfig,
) -> Result<NormReport> {
    let grid = require_nonempty(traj)?;
    let densities: Vec<Vec<f64>> = traj
        .snapshots()
        .iter()
        .map(|s| s.values().iter().map(|v| v.abs()).collect())
        .collect();
    let (best, partial) = trajectory_carleson(&grid, traj.times(), &densities, params, sweep)?;
    let hash = sweep.config_hash(
        &grid,
        &format!("carleson_l1|{}|{}", params.alpha(), params.beta()),
    );
    let mut report = box_report(best, hash, false);
    report.partial_coverage = partial;
    Ok(report)
}

/// Data norm: [`x_norm`] of the caloric extension `t -> e^{-t Lambda} u0` on `times`.
pub fn caloric_minus1_norm(
    u0: &RealField,
    params: &SpaceParams,
    times: &TimeGrid,
    sweep: &BoxSweepConfig,
) -> Result<NormReport> {
    let flow = linear_flow(&u0.without_mean(), times, params)?;
    x_norm_tagged(&flow, params, sweep, "caloric")
}
