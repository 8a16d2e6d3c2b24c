//! Discretized estimators for the Morrey, Q-type, Besov and solution-space
//! norms, all evaluated as maxima over a finite [`BoxSweepConfig`].
//!
//! Homogeneous norms subtract the spatial mean of their input on ingestion.
//! Reported suprema are lower bounds for the continuum quantity; each report
//! carries the box, level or time where the maximum was attained.

mod besov;
mod carleson;
mod cube;
mod report;
mod sweep;

pub use besov::{besov_sum_norm, besov_sup_norm};
pub use carleson::{
    caloric_minus1_norm, carleson_l1_functional, morrey_semigroup_functional, q_norm_semigroup,
    x_k_norm, x_norm,
};
pub use cube::{morrey_norm, q_norm_direct};
pub use report::NormReport;
pub use sweep::{BoxSweepConfig, CarlesonBox, SweepRadius};

pub(crate) use sweep::short_hash;

use crate::grid::GridSpec;

/// Running maximum over boxes; the first box wins ties.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct BoxMax {
    pub value: f64,
    pub attained: Option<CarlesonBox>,
}

impl BoxMax {
    pub fn offer(&mut self, value: f64, bx: CarlesonBox) {
        if self.attained.is_none() || value > self.value {
            self.value = value;
            self.attained = Some(bx);
        }
    }

    pub fn merge(mut self, other: BoxMax) -> BoxMax {
        if let Some(bx) = other.attained {
            self.offer(other.value, bx);
        }
        self
    }
}

/// `sup_centers prefactor * int_{B(x0, r)} density`.
pub(crate) fn disk_sup(
    grid: &GridSpec,
    radius: &SweepRadius,
    density: &[f64],
    prefactor: f64,
) -> BoxMax {
    let n = grid.n() as i64;
    let offsets = radius.disk_offsets();
    let area = grid.cell_area();
    let mut best = BoxMax::default();
    for (c1, c2) in radius.centers(grid) {
        let mut sum = 0.0;
        for &(d1, d2) in &offsets {
            let i1 = (c1 as i64 + d1).rem_euclid(n);
            let i2 = (c2 as i64 + d2).rem_euclid(n);
            sum += density[(i2 * n + i1) as usize];
        }
        best.offer(prefactor * sum * area, radius.carleson_box(grid, (c1, c2)));
    }
    best
}
