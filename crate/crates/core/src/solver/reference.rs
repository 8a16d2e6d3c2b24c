use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};
use crate::params::SpaceParams;
use crate::time::Trajectory;

use super::nonlinear::bilinear_density;
use super::phi1;
use super::picard::SolverConfig;

/// Right-hand side used by [`reference_solve_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsMode {
    Nonlinear,
    /// Drops the nonlinearity; the scheme then reproduces the linear flow.
    LinearOnly,
}

/// Two-stage exponential integrator on `reference_substeps` uniform substeps
/// per time-grid interval.
pub fn reference_solve(
    theta0: &RealField,
    params: &SpaceParams,
    config: &SolverConfig,
) -> Result<Trajectory> {
    reference_solve_with(theta0, params, config, RhsMode::Nonlinear)
}

pub fn reference_solve_with(
    theta0: &RealField,
    params: &SpaceParams,
    config: &SolverConfig,
    mode: RhsMode,
) -> Result<Trajectory> {
    config.validate()?;
    theta0.require_mean_zero("reference_solve")?;
    let grid = *theta0.grid();
    let lambda: Vec<f64> = grid
        .frequency_moduli()
        .iter()
        .map(|r| r.powf(2.0 * params.beta()))
        .collect();
    let rhs = |s: &SpectralField| match mode {
        RhsMode::Nonlinear => bilinear_density(s, s, config.dealias),
        RhsMode::LinearOnly => SpectralField::zeros(grid),
    };

    let times = config.timegrid.nodes();
    let mut state = theta0.to_spectral().without_mean();
    let mut snapshots = Vec::with_capacity(times.len());
    let mut prev = 0.0;
    for &t in &times {
        let h = (t - prev) / config.reference_substeps as f64;
        let decay: Vec<f64> = lambda.iter().map(|l| (-h * l).exp()).collect();
        let weight: Vec<f64> = lambda.iter().map(|&l| phi1(h, l)).collect();
        for step in 0..config.reference_substeps {
            let n0 = rhs(&state);
            let mut predictor = state.clone();
            for (i, c) in predictor.coeffs_mut().iter_mut().enumerate() {
                *c = *c * decay[i] + n0.coeffs()[i] * weight[i];
            }
            let n1 = rhs(&predictor);
            let coeffs = state.coeffs_mut();
            for (i, c) in coeffs.iter_mut().enumerate() {
                *c = *c * decay[i] + (n0.coeffs()[i] + n1.coeffs()[i]) * (0.5 * weight[i]);
            }
            coeffs[0] = num_complex::Complex64::new(0.0, 0.0);
            if coeffs
                .iter()
                .any(|c| !(c.re.is_finite() && c.im.is_finite()))
            {
                return Err(Error::BlowUp {
                    time: prev + h * (step + 1) as f64,
                });
            }
        }
        snapshots.push(state.to_real());
        prev = t;
    }
    Trajectory::new(times, snapshots)
}
