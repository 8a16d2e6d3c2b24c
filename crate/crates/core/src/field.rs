//! Real and spectral fields on the discrete torus, and the 2D FFT behind them.
//!
//! Fourier convention: `f_hat(xi) = sum_x f(x) e^{-i xi.x} h^2`, with inverse
//! `f(x) = L^{-2} sum_xi f_hat(xi) e^{i xi.x}`. Under it `d_j <-> i xi_j`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Relative size of the spatial mean below which a field counts as mean-zero.
pub const MEAN_ZERO_TOLERANCE: f64 = 1e-10;

struct Plan2d {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLANS: Lazy<Mutex<HashMap<usize, Arc<Plan2d>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize) -> Arc<Plan2d> {
    let mut cache = PLANS.lock().expect("fft plan cache poisoned");
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plan2d {
                n,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

impl Plan2d {
    /// Unnormalized 2D transform in place (rows, transpose, rows, transpose).
    fn process(&self, data: &mut [Complex64], inverse: bool) {
        let fft = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
        fft.process_with_scratch(data, &mut scratch);
        transpose_square(data, self.n);
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// A real scalar function sampled on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at index {bad}")));
        }
        Ok(RealField { grid, values })
    }

    pub(crate) fn from_raw(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        RealField { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        RealField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, c: f64) -> Self {
        RealField {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f(x1, x2)` at every grid point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i2 in 0..n {
            for i1 in 0..n {
                let [x1, x2] = grid.point(i1, i2);
                values.push(f(x1, x2));
            }
        }
        RealField { grid, values }
    }

    /// Samples `f(i1, i2)` at every grid index.
    pub fn from_fn_indexed(grid: GridSpec, f: impl Fn(usize, usize) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i2 in 0..n {
            for i1 in 0..n {
                values.push(f(i1, i2));
            }
        }
        RealField { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize) -> f64 {
        self.values[self.grid.index(i1, i2)]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `(sum f^2 h^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()).sqrt()
    }

    pub fn is_mean_zero(&self) -> bool {
        self.mean().abs() <= MEAN_ZERO_TOLERANCE * self.max_abs()
    }

    pub(crate) fn require_mean_zero(&self, op: &str) -> Result<()> {
        if self.is_mean_zero() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{op} requires a mean-zero field (mean = {:e})",
                self.mean()
            )))
        }
    }

    pub fn without_mean(&self) -> RealField {
        let m = self.mean();
        self.map(|v| v - m)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealField {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> RealField {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &RealField) -> Result<RealField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealField) -> Result<RealField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &RealField) -> Result<RealField> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn zip_with(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<RealField> {
        self.grid.ensure_compatible(&other.grid)?;
        Ok(RealField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Maximum pointwise difference.
    pub fn max_diff(&self, other: &RealField) -> Result<f64> {
        self.grid.ensure_compatible(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn to_spectral(&self) -> SpectralField {
        let mut data: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        plan(self.grid.n()).process(&mut data, false);
        let scale = self.grid.cell_area();
        for c in &mut data {
            *c *= scale;
        }
        SpectralField {
            grid: self.grid,
            coeffs: data,
        }
    }
}

/// Fourier coefficients of a real field, in FFT storage order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    /// Wraps coefficients after checking length and Hermitian symmetry.
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        let field = SpectralField { grid, coeffs };
        let scale = field.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
        if field.hermitian_defect() > 1e-10 * scale {
            return Err(Error::Precondition(
                "coefficients are not Hermitian-symmetric".into(),
            ));
        }
        Ok(field)
    }

    pub(crate) fn from_raw(grid: GridSpec, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        SpectralField { grid, coeffs }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    #[inline]
    pub fn coeff(&self, i1: usize, i2: usize) -> Complex64 {
        self.coeffs[self.grid.index(i1, i2)]
    }

    #[inline]
    pub fn zero_mode(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Largest `|c(k) - conj(c(-k))|` over lattice pairs.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0_f64;
        for i2 in 0..n {
            for i1 in 0..n {
                let j1 = (n - i1) % n;
                let j2 = (n - i2) % n;
                let d = self.coeffs[self.grid.index(i1, i2)]
                    - self.coeffs[self.grid.index(j1, j2)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Multiplies every coefficient by `g(xi, |xi|)`.
    pub(crate) fn map_modes(&self, g: impl Fn([f64; 2], f64) -> Complex64) -> SpectralField {
        let n = self.grid.n();
        let axis: Vec<f64> = (0..n).map(|i| self.grid.frequency(i)).collect();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for i2 in 0..n {
            for i1 in 0..n {
                let xi = [axis[i1], axis[i2]];
                let modulus = xi[0].hypot(xi[1]);
                coeffs.push(self.coeffs[i2 * n + i1] * g(xi, modulus));
            }
        }
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    /// Real-valued multiplier variant of [`map_modes`](Self::map_modes).
    pub(crate) fn map_modes_real(&self, g: impl Fn([f64; 2], f64) -> f64) -> SpectralField {
        self.map_modes(|xi, m| Complex64::new(g(xi, m), 0.0))
    }

    pub fn scaled(&self, c: f64) -> SpectralField {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.grid.ensure_compatible(&other.grid)?;
        Ok(SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.grid.ensure_compatible(&other.grid)?;
        Ok(SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Zeroes every mode outside the dealiasing mask.
    pub fn dealiased(&self) -> SpectralField {
        let n = self.grid.n();
        let mut out = self.clone();
        for i2 in 0..n {
            for i1 in 0..n {
                if !self.grid.dealias_keep(i1, i2) {
                    out.coeffs[i2 * n + i1] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// Inverse transform; the imaginary residue (self-paired Nyquist modes) is dropped.
    pub fn to_real(&self) -> RealField {
        let mut data = self.coeffs.clone();
        plan(self.grid.n()).process(&mut data, true);
        let inv_area = 1.0 / (self.grid.length() * self.grid.length());
        RealField {
            grid: self.grid,
            values: data.iter().map(|c| c.re * inv_area).collect(),
        }
    }
}
