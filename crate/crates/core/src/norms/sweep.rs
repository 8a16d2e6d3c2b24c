use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Center/radius pair indexing the parabolic box `(0, r^{2 beta}) x B(x0, r)`.
///
/// The same pair names the cube of edge `2r` centred at `x0` for the
/// double-integral and Morrey estimators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonBox {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Discretization of "sup over all boxes".
///
/// Radii follow the ladder `r_m = L 2^{-m}` for `m = first_level ..
/// first_level + levels - 1`; centers sit on a sublattice with spacing
/// `r_m / 2^center_refinement`; time integrals over `(0, top]` use the
/// geometric nodes `top * ratio^{-q}`, `q < time_nodes`, closed by the cell
/// `[0, smallest node]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSweepConfig {
    pub first_level: u32,
    pub levels: u32,
    pub center_refinement: u32,
    pub time_nodes: usize,
    pub time_ratio: f64,
}

impl Default for BoxSweepConfig {
    fn default() -> Self {
        BoxSweepConfig {
            first_level: 1,
            levels: 4,
            center_refinement: 1,
            time_nodes: 40,
            time_ratio: 2f64.powf(0.25),
        }
    }
}

/// One rung of the radius ladder, resolved on a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRadius {
    pub level: u32,
    pub radius: f64,
    /// Radius in grid spacings.
    pub radius_points: usize,
    /// Center spacing in grid spacings.
    pub center_stride: usize,
}

impl SweepRadius {
    /// Center indices `(i1, i2)` in lexicographic order (`i2` outer).
    pub fn centers(&self, grid: &GridSpec) -> Vec<(usize, usize)> {
        let n = grid.n();
        let mut out = Vec::new();
        for i2 in (0..n).step_by(self.center_stride) {
            for i1 in (0..n).step_by(self.center_stride) {
                out.push((i1, i2));
            }
        }
        out
    }

    pub fn carleson_box(&self, grid: &GridSpec, center: (usize, usize)) -> CarlesonBox {
        CarlesonBox {
            center: grid.point(center.0, center.1),
            radius: self.radius,
        }
    }

    /// Offsets `(d1, d2)` with `|d| < r` in grid units.
    pub fn disk_offsets(&self) -> Vec<(i64, i64)> {
        let rp = self.radius_points as i64;
        let mut out = Vec::new();
        for d2 in (1 - rp)..rp {
            for d1 in (1 - rp)..rp {
                if d1 * d1 + d2 * d2 < rp * rp {
                    out.push((d1, d2));
                }
            }
        }
        out
    }

    /// Cube edge `2r` in grid points, capped at the full torus.
    pub fn cube_side(&self, grid: &GridSpec) -> usize {
        (2 * self.radius_points).min(grid.n())
    }
}

impl BoxSweepConfig {
    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        if self.first_level < 1 {
            return Err(Error::InvalidSweep(
                "radii must not exceed L/2 (first_level >= 1)".into(),
            ));
        }
        if self.levels < 3 {
            return Err(Error::InvalidSweep(format!(
                "need at least 3 radii, got {}",
                self.levels
            )));
        }
        if self.time_nodes < 16 {
            return Err(Error::InvalidSweep(format!(
                "need at least 16 time nodes, got {}",
                self.time_nodes
            )));
        }
        if !(self.time_ratio.is_finite() && self.time_ratio > 1.0) {
            return Err(Error::InvalidSweep(format!(
                "time ratio must exceed 1, got {}",
                self.time_ratio
            )));
        }
        let deepest = self.first_level + self.levels - 1 + self.center_refinement;
        if deepest >= usize::BITS || !grid.n().is_multiple_of(1usize << deepest) {
            return Err(Error::InvalidSweep(format!(
                "N={} is not divisible by 2^{deepest}; smallest radius or center spacing falls off the grid",
                grid.n()
            )));
        }
        Ok(())
    }

    pub fn radii(&self, grid: &GridSpec) -> Result<Vec<SweepRadius>> {
        self.validate(grid)?;
        let n = grid.n();
        Ok((self.first_level..self.first_level + self.levels)
            .map(|m| SweepRadius {
                level: m,
                radius: grid.length() / (1u64 << m) as f64,
                radius_points: n >> m,
                center_stride: n >> (m + self.center_refinement),
            })
            .collect())
    }

    /// Cells `(lo, hi)` covering `(0, top]`, largest first.
    pub fn time_cells(&self, top: f64) -> Vec<(f64, f64)> {
        let nodes: Vec<f64> = (0..self.time_nodes)
            .map(|q| top * self.time_ratio.powi(-(q as i32)))
            .collect();
        let mut cells: Vec<(f64, f64)> = nodes.windows(2).map(|w| (w[1], w[0])).collect();
        cells.push((0.0, *nodes.last().expect("time_nodes >= 1")));
        cells
    }

    /// Stable identifier of an estimator run on `grid` with this sweep.
    pub fn config_hash(&self, grid: &GridSpec, extra: &str) -> String {
        let text = format!(
            "{}|{}|{}",
            serde_json::to_string(grid).unwrap_or_default(),
            serde_json::to_string(self).unwrap_or_default(),
            extra
        );
        short_hash(&text)
    }
}

pub(crate) fn short_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
