use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};
use crate::params::SpaceParams;
use crate::time::{TimeGrid, Trajectory};

use super::nonlinear::bilinear_density;
use super::phi1;

/// `t -> e^{-t Lambda} theta0` at every node of `grid`.
pub fn linear_flow(
    theta0: &RealField,
    grid: &TimeGrid,
    params: &SpaceParams,
) -> Result<Trajectory> {
    theta0.require_mean_zero("linear_flow")?;
    let s = theta0.to_spectral().without_mean();
    let times = grid.nodes();
    let snapshots = times
        .par_iter()
        .map(|&t| s.heat(t, params.beta()).to_real())
        .collect();
    Trajectory::new(times, snapshots)
}

/// `int_0^{t_m} e^{-(t_m - s) Lambda} g(s) ds` with `g` frozen at the left node
/// of each interval and the semigroup factor integrated exactly per mode.
/// `densities[j]` is `g(t_{j+1})`; on the first interval `g(t_1)` is used.
pub(crate) fn duhamel_spectral(
    times: &[f64],
    densities: &[SpectralField],
    beta: f64,
) -> Vec<SpectralField> {
    let Some(first) = densities.first() else {
        return Vec::new();
    };
    let grid = *first.grid();
    let lambda: Vec<f64> = grid
        .frequency_moduli()
        .iter()
        .map(|r| r.powf(2.0 * beta))
        .collect();
    let mut acc = SpectralField::zeros(grid);
    let mut out = Vec::with_capacity(times.len());
    let mut prev = 0.0;
    for (m, &t) in times.iter().enumerate() {
        let dt = t - prev;
        let g = &densities[m.saturating_sub(1)];
        let coeffs = acc.coeffs_mut();
        for (idx, c) in coeffs.iter_mut().enumerate().skip(1) {
            let l = lambda[idx];
            *c = *c * (-dt * l).exp() + g.coeffs()[idx] * phi1(dt, l);
        }
        coeffs[0] = num_complex::Complex64::new(0.0, 0.0);
        out.push(acc.clone());
        prev = t;
    }
    out
}

/// Duhamel integral of a prescribed density trajectory, bypassing the nonlinearity.
pub fn duhamel_from_density(density: &Trajectory, params: &SpaceParams) -> Result<Trajectory> {
    if density.is_empty() {
        return Ok(Trajectory::empty());
    }
    let spectra: Vec<SpectralField> = density
        .snapshots()
        .par_iter()
        .map(|s| s.to_spectral())
        .collect();
    let out = duhamel_spectral(density.times(), &spectra, params.beta());
    Trajectory::new(
        density.times().to_vec(),
        out.iter().map(|s| s.to_real()).collect(),
    )
}

fn check_pair(u: &Trajectory, v: &Trajectory) -> Result<()> {
    if u.times() != v.times() {
        return Err(Error::Domain(
            "trajectories live on different time grids".into(),
        ));
    }
    if let (Some(a), Some(b)) = (u.grid(), v.grid()) {
        if !a.compatible(b) {
            return Err(Error::Domain(
                "trajectories live on different spatial grids".into(),
            ));
        }
    }
    for s in u.snapshots().iter().chain(v.snapshots()) {
        s.require_mean_zero("duhamel_bilinear")?;
    }
    Ok(())
}

/// `B(u, v)(t) = int_0^t e^{-(t-s) Lambda} (d_1(v R_2 u) - d_2(v R_1 u))(s) ds`.
pub fn duhamel_bilinear(
    u: &Trajectory,
    v: &Trajectory,
    params: &SpaceParams,
) -> Result<Trajectory> {
    duhamel_bilinear_with(u, v, params, true)
}

pub(crate) fn duhamel_bilinear_spectral(
    u: &Trajectory,
    v: &Trajectory,
    params: &SpaceParams,
    dealias: bool,
) -> Result<Vec<SpectralField>> {
    check_pair(u, v)?;
    let densities: Vec<SpectralField> = u
        .snapshots()
        .par_iter()
        .zip(v.snapshots().par_iter())
        .map(|(a, b)| bilinear_density(&a.to_spectral(), &b.to_spectral(), dealias))
        .collect();
    Ok(duhamel_spectral(u.times(), &densities, params.beta()))
}

pub(crate) fn duhamel_bilinear_with(
    u: &Trajectory,
    v: &Trajectory,
    params: &SpaceParams,
    dealias: bool,
) -> Result<Trajectory> {
    if u.is_empty() && v.is_empty() {
        return Ok(Trajectory::empty());
    }
    let out = duhamel_bilinear_spectral(u, v, params, dealias)?;
    Trajectory::new(
        u.times().to_vec(),
        out.iter().map(|s| s.to_real()).collect(),
    )
}
