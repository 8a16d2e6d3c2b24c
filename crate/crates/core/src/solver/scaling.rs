use crate::error::{Error, Result};
use crate::field::RealField;
use crate::params::SpaceParams;
use crate::time::Trajectory;

fn check_lambda(n: usize, lambda: u32) -> Result<()> {
    if lambda == 0 || !n.is_multiple_of(lambda as usize) {
        return Err(Error::Domain(format!(
            "dilation factor {lambda} does not divide N={n}"
        )));
    }
    Ok(())
}

fn dilate(f: &RealField, lambda: u32, factor: f64) -> RealField {
    let grid = *f.grid();
    let n = grid.n();
    let l = lambda as usize;
    RealField::from_fn_indexed(grid, |i1, i2| factor * f.get((l * i1) % n, (l * i2) % n))
}

/// Critical rescaling `lambda^{2b-1} theta0(lambda x mod L)`.
pub fn scaling_transform(
    theta0: &RealField,
    lambda: u32,
    params: &SpaceParams,
) -> Result<RealField> {
    check_lambda(theta0.grid().n(), lambda)?;
    let factor = (lambda as f64).powf(2.0 * params.beta() - 1.0);
    Ok(dilate(theta0, lambda, factor))
}

/// `theta_lambda(t, x) = lambda^{2b-1} theta(lambda^{2b} t, lambda x)`.
///
/// Without `target_times` the result lives at `t_m / lambda^{2b}`, so every
/// source time is a node; otherwise `theta` is interpolated linearly in time
/// and targets mapping outside `[t_1, t_M]` are rejected.
pub fn scale_trajectory(
    traj: &Trajectory,
    lambda: u32,
    params: &SpaceParams,
    target_times: Option<&[f64]>,
) -> Result<Trajectory> {
    let Some(grid) = traj.grid() else {
        return Ok(Trajectory::empty());
    };
    check_lambda(grid.n(), lambda)?;
    let time_factor = (lambda as f64).powf(2.0 * params.beta());
    let factor = (lambda as f64).powf(2.0 * params.beta() - 1.0);
    let Some(targets) = target_times else {
        let times = traj.times().iter().map(|t| t / time_factor).collect();
        let snapshots = traj
            .snapshots()
            .iter()
            .map(|s| dilate(s, lambda, factor))
            .collect();
        return Trajectory::new(times, snapshots);
    };
    let src = traj.times();
    let (first, last) = (src[0], src[src.len() - 1]);
    let mut snapshots = Vec::with_capacity(targets.len());
    for &t in targets {
        let s = t * time_factor;
        if s < first * (1.0 - 1e-12) || s > last * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "rescaled time {s} lies outside the trajectory range [{first}, {last}]"
            )));
        }
        let s = s.clamp(first, last);
        let j = src
            .partition_point(|&x| x < s)
            .clamp(1, src.len().max(2) - 1)
            .min(src.len() - 1);
        let field = if src.len() == 1 {
            traj.snapshots()[0].clone()
        } else {
            let (a, b) = (src[j - 1], src[j]);
            let w = ((s - a) / (b - a)).clamp(0.0, 1.0);
            traj.snapshots()[j - 1].zip_with(&traj.snapshots()[j], |x, y| (1.0 - w) * x + w * y)?
        };
        snapshots.push(dilate(&field, lambda, factor));
    }
    Trajectory::new(targets.to_vec(), snapshots)
}
