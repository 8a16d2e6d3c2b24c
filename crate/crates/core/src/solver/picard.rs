use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::norms::{x_norm, BoxSweepConfig};
use crate::params::SpaceParams;
use crate::time::{TimeGrid, Trajectory};

use super::duhamel::{duhamel_bilinear_with, linear_flow};

/// Time grid, stopping rule and norm sweep for the Picard and reference solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub timegrid: TimeGrid,
    /// Relative X-norm increment at which Picard iteration stops.
    pub picard_tol: f64,
    pub max_iter: usize,
    /// Data-norm size quoted as "small"; reporting only.
    pub smallness_threshold: f64,
    pub dealias: bool,
    /// Sweep used for every X-norm evaluation inside the iteration.
    pub norm_sweep: BoxSweepConfig,
    /// Uniform substeps per time-grid interval in the reference solver.
    pub reference_substeps: usize,
}

impl SolverConfig {
    pub fn new(timegrid: TimeGrid) -> Self {
        SolverConfig {
            timegrid,
            picard_tol: 1e-8,
            max_iter: 40,
            smallness_threshold: 1e-2,
            dealias: true,
            norm_sweep: BoxSweepConfig::default(),
            reference_substeps: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.picard_tol > 0.0 && self.picard_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "picard_tol must be positive, got {}",
                self.picard_tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        if self.reference_substeps == 0 {
            return Err(Error::Domain(
                "reference_substeps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::new(TimeGrid::graded(1.0, 32).expect("valid default grid"))
    }
}

/// Norm history of a Picard run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    /// X-norm of iterate `k`, starting with the linear flow.
    pub iterates_norms: Vec<f64>,
    /// X-norm of iterate `k+1` minus iterate `k`.
    pub increments: Vec<f64>,
    pub converged: bool,
    /// Largest ratio of consecutive increments (0 when fewer than two).
    pub contraction_ratio: f64,
}

impl PicardReport {
    pub fn iterations(&self) -> usize {
        self.increments.len()
    }

    /// Rows `iteration,norm,increment`; iteration 0 has no increment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,norm,increment\n");
        for (k, norm) in self.iterates_norms.iter().enumerate() {
            let inc = if k == 0 {
                String::new()
            } else {
                format!("{:e}", self.increments[k - 1])
            };
            out.push_str(&format!("{k},{norm:e},{inc}\n"));
        }
        out
    }
}

fn increment_ratio(prev: f64, next: f64) -> f64 {
    if prev == 0.0 {
        if next == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        next / prev
    }
}

/// Picard iteration `theta^{k+1} = e^{-t Lambda} theta0 + B(theta^k, theta^k)`.
///
/// Non-convergence within `max_iter` is reported, not raised; a non-finite
/// iterate is a [`Error::Divergence`].
pub fn picard_solve(
    theta0: &RealField,
    params: &SpaceParams,
    config: &SolverConfig,
) -> Result<(Trajectory, PicardReport)> {
    config.validate()?;
    let sweep = &config.norm_sweep;
    let linear = linear_flow(theta0, &config.timegrid, params)?;
    let norm0 = x_norm(&linear, params, sweep)?.value;
    if !norm0.is_finite() {
        return Err(Error::Divergence { iteration: 0 });
    }
    let mut report = PicardReport {
        iterates_norms: vec![norm0],
        increments: Vec::new(),
        converged: false,
        contraction_ratio: 0.0,
    };
    let mut current = linear.clone();
    for k in 1..=config.max_iter {
        let b = duhamel_bilinear_with(&current, &current, params, config.dealias)?;
        let next = linear.add(&b)?;
        if !next.is_finite() {
            return Err(Error::Divergence { iteration: k });
        }
        let delta = x_norm(&next.sub(&current)?, params, sweep)?.value;
        let norm = x_norm(&next, params, sweep)?.value;
        if !(delta.is_finite() && norm.is_finite()) {
            return Err(Error::Divergence { iteration: k });
        }
        if let Some(&prev) = report.increments.last() {
            report.contraction_ratio = report.contraction_ratio.max(increment_ratio(prev, delta));
        }
        report.increments.push(delta);
        report.iterates_norms.push(norm);
        current = next;
        if delta <= config.picard_tol * (norm + 1.0) {
            report.converged = true;
            break;
        }
    }
    Ok((current, report))
}

/// X-norm of `theta - e^{-t Lambda} theta0 - B(theta, theta)`.
pub fn fixed_point_residual(
    theta: &Trajectory,
    theta0: &RealField,
    params: &SpaceParams,
    config: &SolverConfig,
) -> Result<f64> {
    let linear = linear_flow(theta0, &config.timegrid, params)?;
    let b = duhamel_bilinear_with(theta, theta, params, config.dealias)?;
    let residual = theta.sub(&linear)?.sub(&b)?;
    Ok(x_norm(&residual, params, &config.norm_sweep)?.value)
}
