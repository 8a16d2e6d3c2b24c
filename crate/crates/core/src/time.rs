//! Graded time grids, trajectories, and the exact-weight time quadrature shared
//! by the Carleson-type estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::GridSpec;

/// Graded grid `t_m = T (m/M)^q`, `m = 1..M`, with the implicit `t_0 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
    grading: f64,
}

impl TimeGrid {
    pub const MIN_STEPS: usize = 16;

    pub fn new(horizon: f64, steps: usize, grading: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Domain(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if steps < Self::MIN_STEPS {
            return Err(Error::Domain(format!(
                "time grid needs at least {} nodes, got {steps}",
                Self::MIN_STEPS
            )));
        }
        if !(grading.is_finite() && grading >= 1.0) {
            return Err(Error::Domain(format!(
                "grading exponent must be >= 1, got {grading}"
            )));
        }
        Ok(TimeGrid {
            horizon,
            steps,
            grading,
        })
    }

    /// Quadratically graded grid.
    pub fn graded(horizon: f64, steps: usize) -> Result<Self> {
        Self::new(horizon, steps, 2.0)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// The positive nodes `t_1 < ... < t_M`.
    pub fn nodes(&self) -> Vec<f64> {
        let m = self.steps as f64;
        (1..=self.steps)
            .map(|i| self.horizon * (i as f64 / m).powf(self.grading))
            .collect()
    }

    /// Same horizon and grading with `factor` times as many nodes.
    pub fn refined(&self, factor: usize) -> TimeGrid {
        TimeGrid {
            steps: self.steps * factor.max(1),
            ..*self
        }
    }
}

/// Snapshots `theta(t_m, .)` at strictly increasing positive times.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    snapshots: Vec<RealField>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, snapshots: Vec<RealField>) -> Result<Self> {
        if times.len() != snapshots.len() {
            return Err(Error::Domain(format!(
                "{} times but {} snapshots",
                times.len(),
                snapshots.len()
            )));
        }
        if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Domain("trajectory times must be positive".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        if let Some(first) = snapshots.first() {
            for s in &snapshots[1..] {
                first.grid().ensure_compatible(s.grid())?;
            }
        }
        Ok(Trajectory { times, snapshots })
    }

    pub fn empty() -> Self {
        Trajectory {
            times: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    /// Evaluates `f(t)` at every node of `grid`.
    pub fn from_fn(grid: &TimeGrid, f: impl Fn(f64) -> RealField) -> Result<Self> {
        let times = grid.nodes();
        let snapshots = times.iter().map(|&t| f(t)).collect();
        Self::new(times, snapshots)
    }

    pub fn zeros(field_grid: GridSpec, time_grid: &TimeGrid) -> Self {
        let times = time_grid.nodes();
        let snapshots = times.iter().map(|_| RealField::zeros(field_grid)).collect();
        Trajectory { times, snapshots }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshots(&self) -> &[RealField] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> Option<&GridSpec> {
        self.snapshots.first().map(|s| s.grid())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &RealField)> {
        self.times.iter().copied().zip(self.snapshots.iter())
    }

    /// Applies `f(t, snapshot)` to every node.
    pub fn map(&self, f: impl Fn(f64, &RealField) -> RealField) -> Trajectory {
        Trajectory {
            times: self.times.clone(),
            snapshots: self.iter().map(|(t, s)| f(t, s)).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(f64, &RealField) -> Result<RealField>) -> Result<Trajectory> {
        let snapshots = self
            .iter()
            .map(|(t, s)| f(t, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            times: self.times.clone(),
            snapshots,
        })
    }

    pub fn scaled(&self, c: f64) -> Trajectory {
        self.map(|_, s| s.scaled(c))
    }

    fn ensure_same_nodes(&self, other: &Trajectory) -> Result<()> {
        if self.times != other.times {
            return Err(Error::Domain(
                "trajectories live on different time grids".into(),
            ));
        }
        if let (Some(a), Some(b)) = (self.grid(), other.grid()) {
            a.ensure_compatible(b)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &Trajectory) -> Result<Trajectory> {
        self.ensure_same_nodes(other)?;
        let snapshots = self
            .snapshots
            .iter()
            .zip(&other.snapshots)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            times: self.times.clone(),
            snapshots,
        })
    }

    pub fn sub(&self, other: &Trajectory) -> Result<Trajectory> {
        self.add(&other.scaled(-1.0))
    }

    /// Largest pointwise difference over all nodes.
    pub fn max_diff(&self, other: &Trajectory) -> Result<f64> {
        self.ensure_same_nodes(other)?;
        let mut worst = 0.0_f64;
        for (a, b) in self.snapshots.iter().zip(&other.snapshots) {
            worst = worst.max(a.max_diff(b)?);
        }
        Ok(worst)
    }

    /// Keeps the nodes whose index satisfies `keep`.
    pub fn select(&self, keep: impl Fn(usize, f64) -> bool) -> Trajectory {
        let mut times = Vec::new();
        let mut snapshots = Vec::new();
        for (i, (t, s)) in self.iter().enumerate() {
            if keep(i, t) {
                times.push(t);
                snapshots.push(s.clone());
            }
        }
        Trajectory { times, snapshots }
    }

    pub fn is_finite(&self) -> bool {
        self.snapshots
            .iter()
            .all(|s| s.values().iter().all(|v| v.is_finite()))
    }
}

/// Exact integral of `t^{-exponent}` over `[lo, hi]`.
pub fn power_weight_integral(lo: f64, hi: f64, exponent: f64) -> f64 {
    let p = 1.0 - exponent;
    if p.abs() < 1e-14 {
        return (hi / lo).ln();
    }
    (hi.powf(p) - lo.powf(p)) / p
}

/// Node weights `c_m` such that `sum_m c_m E(t_m)` approximates
/// `int_0^upper E(t) t^{-exponent} dt`.
///
/// Each cell `[t_{m-1}, t_m]` (with `t_0 = 0`), clipped at `upper`, carries the
/// exact integral of the weight; the integrand is evaluated at the cell
/// midpoint by linear interpolation between nodes, and held constant on the
/// first cell. The flag reports whether `upper` exceeds the last node.
pub fn node_quadrature(times: &[f64], upper: f64, exponent: f64) -> (Vec<f64>, bool) {
    let mut coef = vec![0.0; times.len()];
    let mut lo = 0.0;
    for (m, &t) in times.iter().enumerate() {
        if lo >= upper {
            break;
        }
        let hi = t.min(upper);
        let w = power_weight_integral(lo, hi, exponent);
        if m == 0 {
            coef[0] += w;
        } else {
            let mid = 0.5 * (lo + hi);
            let theta = (mid - lo) / (t - lo);
            coef[m - 1] += w * (1.0 - theta);
            coef[m] += w * theta;
        }
        lo = t;
    }
    let partial = times
        .last()
        .is_none_or(|&last| upper > last * (1.0 + 1e-12));
    (coef, partial)
}
