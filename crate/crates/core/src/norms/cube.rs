use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::GridSpec;
use crate::params::SpaceParams;

use super::report::NormReport;
use super::sweep::{BoxSweepConfig, SweepRadius};
use super::BoxMax;

/// Values of the cube of edge `side` grid points whose lower corner is `center - side/2`.
fn gather_cube(f: &RealField, center: (usize, usize), side: usize) -> Vec<f64> {
    let n = f.grid().n();
    let half = side / 2;
    let mut out = Vec::with_capacity(side * side);
    for j2 in 0..side {
        let i2 = (center.1 + n + j2 - half) % n;
        for j1 in 0..side {
            let i1 = (center.0 + n + j1 - half) % n;
            out.push(f.get(i1, i2));
        }
    }
    out
}

/// Per-center values for one radius, reduced in lexicographic center order.
fn cube_sweep(
    f: &RealField,
    rad: &SweepRadius,
    eval: impl Fn(&[f64], usize) -> f64 + Sync + Send,
) -> BoxMax {
    let grid = f.grid();
    let side = rad.cube_side(grid);
    let centers = rad.centers(grid);
    let mut best = BoxMax::default();
    if side == grid.n() {
        // the cube is the whole torus; every center sees the same values
        let v = eval(&gather_cube(f, (0, 0), side), side);
        for &c in &centers {
            best.offer(v, rad.carleson_box(grid, c));
        }
        return best;
    }
    let values: Vec<f64> = centers
        .par_iter()
        .map(|&c| eval(&gather_cube(f, c, side), side))
        .collect();
    for (&c, v) in centers.iter().zip(values) {
        best.offer(v, rad.carleson_box(grid, c));
    }
    best
}

fn finish(best: BoxMax, value: f64, hash: String) -> NormReport {
    let mut report = NormReport::new(value, hash);
    report.attaining_box = best.attained;
    report
}

/// Morrey norm `sup_I (l(I)^{-lam} int_I |f - f_I|^p)^{1/p}` over cubes of edge `l = 2r`.
pub fn morrey_norm(f: &RealField, p: f64, lam: f64, sweep: &BoxSweepConfig) -> Result<NormReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!(
            "Morrey exponent p must be >= 1, got {p}"
        )));
    }
    let grid = *f.grid();
    let radii = sweep.radii(&grid)?;
    let f = f.without_mean();
    let area = grid.cell_area();
    let mut best = BoxMax::default();
    for rad in &radii {
        let edge = rad.cube_side(&grid) as f64 * grid.spacing();
        let pre = edge.powf(-lam);
        best = best.merge(cube_sweep(&f, rad, |vals, _| {
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            pre * area * vals.iter().map(|v| (v - mean).abs().powf(p)).sum::<f64>()
        }));
    }
    let value = best.value.max(0.0).powf(1.0 / p);
    Ok(finish(
        best,
        value,
        sweep.config_hash(&grid, &format!("morrey|{p}|{lam}")),
    ))
}

/// `|d|^{-s}` on offsets `d` in `(-side, side)^2`, torus distance, zero on the diagonal.
fn kernel_table(grid: &GridSpec, side: usize, s: f64) -> Vec<f64> {
    let w = 2 * side - 1;
    let mut table = vec![0.0; w * w];
    for j2 in 0..w {
        for j1 in 0..w {
            let d1 = j1 as i64 - (side as i64 - 1);
            let d2 = j2 as i64 - (side as i64 - 1);
            let dist = grid.torus_offset_distance(d1, d2);
            if dist >= 0.5 * grid.spacing() {
                table[j2 * w + j1] = dist.powf(-s);
            }
        }
    }
    table
}

/// `int_I int_I |f(x) - f(y)|^2 |x - y|^{-s}` by the exhaustive pair sum.
fn pair_energy(vals: &[f64], side: usize, table: &[f64]) -> f64 {
    let w = 2 * side - 1;
    let mut total = 0.0;
    for p2 in 0..side {
        for p1 in 0..side {
            let fp = vals[p2 * side + p1];
            // pairs (p, q) with q after p in row-major order; doubled below
            for q2 in p2..side {
                let start = if q2 == p2 { p1 + 1 } else { 0 };
                let row = (q2 + side - 1 - p2) * w + side - 1 - p1;
                let qrow = &vals[q2 * side..(q2 + 1) * side];
                for q1 in start..side {
                    let diff = fp - qrow[q1];
                    total += diff * diff * table[row + q1];
                }
            }
        }
    }
    2.0 * total
}

/// Double-integral `Q^beta_alpha` norm:
/// `sup_I l(I)^{2a+2b-4} int_I int_I |f(x)-f(y)|^2 / |x-y|^{4+2a-2b}`, square-rooted.
pub fn q_norm_direct(
    f: &RealField,
    params: &SpaceParams,
    sweep: &BoxSweepConfig,
) -> Result<NormReport> {
    let grid = *f.grid();
    let radii = sweep.radii(&grid)?;
    let f = f.without_mean();
    let s = 4.0 + 2.0 * params.alpha() - 2.0 * params.beta();
    let area2 = grid.cell_area() * grid.cell_area();
    let mut best = BoxMax::default();
    for rad in &radii {
        let side = rad.cube_side(&grid);
        let edge = side as f64 * grid.spacing();
        let pre = edge.powf(params.carleson_radius_exponent()) * area2;
        let table = kernel_table(&grid, side, s);
        best = best.merge(cube_sweep(&f, rad, |vals, side| {
            pre * pair_energy(vals, side, &table)
        }));
    }
    let value = best.value.max(0.0).sqrt();
    let hash = sweep.config_hash(
        &grid,
        &format!("q_direct|{}|{}", params.alpha(), params.beta()),
    );
    Ok(finish(best, value, hash))
}
