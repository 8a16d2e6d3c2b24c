use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate axis of the 2-torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X1, Axis::X2];

    /// Axis from its 1-based index (1 or 2).
    pub fn from_index(j: usize) -> Result<Axis> {
        match j {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            _ => Err(Error::Domain(format!("axis index must be 1 or 2, got {j}"))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 1,
            Axis::X2 => 2,
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::X1 => Axis::X2,
            Axis::X2 => Axis::X1,
        }
    }
}

/// Uniform `N x N` grid on the torus `[0, L)^2`.
///
/// Samples are stored row-major with the row index running along `x2` and the
/// column index along `x1`, so sample `(i1, i2)` sits at `i2 * N + i1` and at
/// the point `(i1 * L / N, i2 * L / N)`. The frequency lattice is
/// `xi = (2 pi / L) k` with `k` in `{-N/2, ..., N/2 - 1}^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    side_points: usize,
    domain_length: f64,
    dealias_fraction: f64,
}

pub const DEFAULT_DEALIAS_FRACTION: f64 = 2.0 / 3.0;

impl GridSpec {
    pub fn new(side_points: usize, domain_length: f64) -> Result<Self> {
        Self::with_dealias(side_points, domain_length, DEFAULT_DEALIAS_FRACTION)
    }

    pub fn with_dealias(
        side_points: usize,
        domain_length: f64,
        dealias_fraction: f64,
    ) -> Result<Self> {
        if side_points < 8 || !side_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "side_points must be an even integer >= 8, got {side_points}"
            )));
        }
        if !(domain_length.is_finite() && domain_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "domain_length must be positive and finite, got {domain_length}"
            )));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias_fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        Ok(GridSpec {
            side_points,
            domain_length,
            dealias_fraction,
        })
    }

    /// The `2 pi`-periodic grid most examples use.
    pub fn periodic_2pi(side_points: usize) -> Result<Self> {
        Self::new(side_points, 2.0 * PI)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.side_points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.side_points * self.side_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.domain_length
    }

    #[inline]
    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.domain_length / self.side_points as f64
    }

    /// Area element `h^2`.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i2 * self.side_points + i1
    }

    #[inline]
    pub fn point(&self, i1: usize, i2: usize) -> [f64; 2] {
        let h = self.spacing();
        [i1 as f64 * h, i2 as f64 * h]
    }

    /// Signed integer wavenumber for FFT-ordered index `i`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.side_points;
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Angular frequency for FFT-ordered index `i`.
    #[inline]
    pub fn frequency(&self, i: usize) -> f64 {
        2.0 * PI / self.domain_length * self.wavenumber(i) as f64
    }

    /// Frequency vectors of every lattice mode, in storage order.
    pub fn frequencies(&self) -> Vec<[f64; 2]> {
        let n = self.side_points;
        let axis: Vec<f64> = (0..n).map(|i| self.frequency(i)).collect();
        let mut out = Vec::with_capacity(n * n);
        for i2 in 0..n {
            for i1 in 0..n {
                out.push([axis[i1], axis[i2]]);
            }
        }
        out
    }

    /// `|xi|` for every lattice mode, in storage order.
    pub fn frequency_moduli(&self) -> Vec<f64> {
        self.frequencies()
            .into_iter()
            .map(|[a, b]| a.hypot(b))
            .collect()
    }

    /// True when mode `(i1, i2)` survives the dealiasing mask.
    #[inline]
    pub fn dealias_keep(&self, i1: usize, i2: usize) -> bool {
        let cut = self.dealias_fraction * self.side_points as f64 / 2.0;
        (self.wavenumber(i1).abs() as f64) <= cut && (self.wavenumber(i2).abs() as f64) <= cut
    }

    /// Sampled torus distance from the origin for grid offset `(d1, d2)`.
    #[inline]
    pub fn torus_offset_distance(&self, d1: i64, d2: i64) -> f64 {
        let n = self.side_points as i64;
        let wrap = |d: i64| {
            let d = d.rem_euclid(n);
            d.min(n - d)
        };
        let h = self.spacing();
        (wrap(d1) as f64 * h).hypot(wrap(d2) as f64 * h)
    }

    /// Grids agree on resolution and length (dealias fraction is a processing option).
    pub fn compatible(&self, other: &GridSpec) -> bool {
        self.side_points == other.side_points && self.domain_length == other.domain_length
    }

    pub(crate) fn ensure_compatible(&self, other: &GridSpec) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "N={} L={} vs N={} L={}",
                self.side_points, self.domain_length, other.side_points, other.domain_length
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_or_odd_grids() {
        assert!(GridSpec::new(6, 1.0).is_err());
        assert!(GridSpec::new(9, 1.0).is_err());
        assert!(GridSpec::new(8, 0.0).is_err());
        assert!(GridSpec::with_dealias(8, 1.0, 0.0).is_err());
        assert!(GridSpec::new(8, 1.0).is_ok());
    }

    #[test]
    fn wavenumbers_cover_symmetric_range() {
        let g = GridSpec::new(8, 2.0 * PI).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert!((g.frequency(3) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn dealias_mask_two_thirds() {
        let g = GridSpec::new(64, 2.0 * PI).unwrap();
        // cut = 64/3 = 21.33
        assert!(g.dealias_keep(21, 0));
        assert!(!g.dealias_keep(22, 0));
        assert!(!g.dealias_keep(0, 64 - 22));
        assert!(g.dealias_keep(64 - 21, 64 - 21));
    }

    #[test]
    fn torus_distance_wraps() {
        let g = GridSpec::new(16, 16.0).unwrap();
        assert_eq!(g.torus_offset_distance(15, 0), 1.0);
        assert_eq!(g.torus_offset_distance(-3, 4), 5.0);
        assert_eq!(g.torus_offset_distance(8, 0), 8.0);
    }
}
