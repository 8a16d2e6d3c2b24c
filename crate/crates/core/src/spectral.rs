//! Fourier-multiplier engine and the concrete operators built on it:
//! fractional Laplacian powers, Riesz transforms, the fractional heat
//! semigroup, SQG velocity, Littlewood-Paley blocks and kernel extraction.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};
use crate::grid::{Axis, GridSpec};
use crate::params::SpaceParams;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

type SymbolFn = dyn Fn([f64; 2]) -> Complex64 + Send + Sync;

/// A Fourier multiplier `m(xi)` with an explicit value at `xi = 0`.
#[derive(Clone)]
pub struct MultiplierSymbol {
    evaluator: Arc<SymbolFn>,
    zero_mode_value: Complex64,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("zero_mode_value", &self.zero_mode_value)
            .finish_non_exhaustive()
    }
}

impl MultiplierSymbol {
    pub fn new(
        evaluator: impl Fn([f64; 2]) -> Complex64 + Send + Sync + 'static,
        zero_mode_value: Complex64,
    ) -> Self {
        MultiplierSymbol {
            evaluator: Arc::new(evaluator),
            zero_mode_value,
        }
    }

    pub fn real(
        evaluator: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static,
        zero_mode_value: f64,
    ) -> Self {
        Self::new(
            move |xi| Complex64::new(evaluator(xi), 0.0),
            Complex64::new(zero_mode_value, 0.0),
        )
    }

    pub fn identity() -> Self {
        Self::real(|_| 1.0, 1.0)
    }

    /// `d_j <-> i xi_j`.
    pub fn derivative(axis: Axis) -> Self {
        let j = axis.index() - 1;
        Self::new(move |xi| I * xi[j], ZERO)
    }

    /// `R_j <-> i xi_j / |xi|`, zero at the origin.
    pub fn riesz(axis: Axis) -> Self {
        let j = axis.index() - 1;
        Self::new(move |xi| I * (xi[j] / xi[0].hypot(xi[1])), ZERO)
    }

    /// `(-Delta)^gamma <-> |xi|^{2 gamma}`; the mean is sent to 0 unless `gamma = 0`.
    pub fn fractional_laplacian(gamma: f64) -> Self {
        let zero = if gamma == 0.0 { 1.0 } else { 0.0 };
        Self::real(move |xi| xi[0].hypot(xi[1]).powf(2.0 * gamma), zero)
    }

    /// `exp(-t (-Delta)^beta) <-> exp(-t |xi|^{2 beta})`.
    pub fn heat(t: f64, beta: f64) -> Self {
        Self::real(
            move |xi| (-t * xi[0].hypot(xi[1]).powf(2.0 * beta)).exp(),
            1.0,
        )
    }

    #[inline]
    pub fn eval(&self, xi: [f64; 2]) -> Complex64 {
        (self.evaluator)(xi)
    }

    #[inline]
    pub fn zero_mode_value(&self) -> Complex64 {
        self.zero_mode_value
    }

    /// Pointwise product `m1 * m2`.
    pub fn product(&self, other: &MultiplierSymbol) -> MultiplierSymbol {
        let (a, b) = (self.evaluator.clone(), other.evaluator.clone());
        MultiplierSymbol {
            evaluator: Arc::new(move |xi| a(xi) * b(xi)),
            zero_mode_value: self.zero_mode_value * other.zero_mode_value,
        }
    }
}

/// Multiplies the Fourier coefficients of `f` by `m`.
///
/// The symbol must satisfy `m(-xi) = conj(m(xi))` on every nonzero lattice
/// frequency and take a real value at the origin; otherwise the output would
/// not be real and a symmetry error is returned.
pub fn apply_multiplier(f: &RealField, m: &MultiplierSymbol) -> Result<RealField> {
    let spectrum = f.to_spectral();
    Ok(apply_multiplier_spectral(&spectrum, m)?.to_real())
}

/// [`apply_multiplier`] acting on coefficients.
pub fn apply_multiplier_spectral(f: &SpectralField, m: &MultiplierSymbol) -> Result<SpectralField> {
    let z = m.zero_mode_value();
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("symbol zero-mode value is not finite".into()));
    }
    if z.im != 0.0 {
        return Err(Error::NonHermitianSymbol { xi1: 0.0, xi2: 0.0 });
    }
    let grid = *f.grid();
    let n = grid.n();
    let mut out = Vec::with_capacity(grid.len());
    for i2 in 0..n {
        for i1 in 0..n {
            let c = f.coeff(i1, i2);
            if i1 == 0 && i2 == 0 {
                out.push(z * c);
                continue;
            }
            let xi = [grid.frequency(i1), grid.frequency(i2)];
            let v = m.eval(xi);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Domain(format!(
                    "symbol is not finite at xi=({}, {})",
                    xi[0], xi[1]
                )));
            }
            let w = m.eval([-xi[0], -xi[1]]);
            if (w - v.conj()).norm() > 1e-12 * v.norm().max(1.0) {
                return Err(Error::NonHermitianSymbol {
                    xi1: xi[0],
                    xi2: xi[1],
                });
            }
            out.push(v * c);
        }
    }
    Ok(SpectralField::from_raw(grid, out))
}

impl SpectralField {
    /// `i xi_j f_hat`.
    pub fn partial(&self, axis: Axis) -> SpectralField {
        let j = axis.index() - 1;
        self.map_modes(|xi, _| I * xi[j])
    }

    /// Mixed derivative `d_1^{a1} d_2^{a2}`.
    pub fn derivative(&self, orders: [u32; 2]) -> SpectralField {
        self.map_modes(|xi, _| {
            I.powu(orders[0] + orders[1])
                * xi[0].powi(orders[0] as i32)
                * xi[1].powi(orders[1] as i32)
        })
    }

    /// `i xi_j / |xi| f_hat`, zero mode sent to 0.
    pub fn riesz(&self, axis: Axis) -> SpectralField {
        let j = axis.index() - 1;
        self.map_modes(|xi, r| if r == 0.0 { ZERO } else { I * (xi[j] / r) })
    }

    /// `|xi|^{2 gamma} f_hat`; zero mode sent to 0 unless `gamma = 0`.
    pub fn fractional_power(&self, gamma: f64) -> SpectralField {
        if gamma == 0.0 {
            return self.clone();
        }
        self.map_modes_real(|_, r| if r == 0.0 { 0.0 } else { r.powf(2.0 * gamma) })
    }

    /// `exp(-t |xi|^{2 beta}) f_hat`.
    pub fn heat(&self, t: f64, beta: f64) -> SpectralField {
        if t == 0.0 {
            return self.clone();
        }
        self.map_modes_real(|_, r| (-t * r.powf(2.0 * beta)).exp())
    }

    /// Restriction to the annulus `2^l <= |xi| < 2^{l+1}`.
    pub fn annulus(&self, level: i32) -> SpectralField {
        self.map_modes_real(|_, r| {
            if r > 0.0 && lp_level(r) == level {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Sets the zero mode to 0.
    pub fn without_mean(&self) -> SpectralField {
        let mut out = self.clone();
        out.coeffs_mut()[0] = ZERO;
        out
    }
}

/// Dyadic level `l` with `2^l <= r < 2^{l+1}`, for `r > 0`.
pub fn lp_level(r: f64) -> i32 {
    debug_assert!(r > 0.0);
    let mut l = r.log2().floor() as i32;
    while 2f64.powi(l) > r {
        l -= 1;
    }
    while 2f64.powi(l + 1) <= r {
        l += 1;
    }
    l
}

/// Inclusive range of Littlewood-Paley levels occupied by nonzero lattice frequencies.
pub fn lp_levels(grid: &GridSpec) -> (i32, i32) {
    let base = 2.0 * std::f64::consts::PI / grid.length();
    let half = (grid.n() / 2) as f64;
    let lo = lp_level(base);
    let hi = lp_level(base * half * std::f64::consts::SQRT_2);
    (lo, hi)
}

/// `(-Delta)^gamma f`.
pub fn fractional_laplacian(f: &RealField, gamma: f64) -> Result<RealField> {
    if !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
    }
    if gamma < 0.0 {
        f.require_mean_zero("negative fractional Laplacian power")?;
    }
    Ok(f.to_spectral().fractional_power(gamma).to_real())
}

/// Riesz transform `R_j = d_j (-Delta)^{-1/2}`.
pub fn riesz_transform(f: &RealField, axis: Axis) -> Result<RealField> {
    f.require_mean_zero("riesz_transform")?;
    Ok(f.to_spectral().riesz(axis).to_real())
}

/// Fractional heat semigroup `exp(-t (-Delta)^beta) f`.
pub fn heat_semigroup(f: &RealField, t: f64, params: &SpaceParams) -> Result<RealField> {
    check_time(t, true)?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.to_spectral().heat(t, params.beta()).to_real())
}

/// SQG velocity `u = grad^perp (-Delta)^{-1/2} theta = (-R_2 theta, R_1 theta)`.
pub fn sqg_velocity(theta: &RealField) -> Result<[RealField; 2]> {
    theta.require_mean_zero("sqg_velocity")?;
    let s = theta.to_spectral();
    let u1 = s.riesz(Axis::X2).scaled(-1.0).to_real();
    let u2 = s.riesz(Axis::X1).to_real();
    Ok([u1, u2])
}

/// Spectral partial derivative.
pub fn partial_derivative(f: &RealField, axis: Axis) -> RealField {
    f.to_spectral().partial(axis).to_real()
}

/// `d_1 u_1 + d_2 u_2`.
pub fn divergence(u: &[RealField; 2]) -> Result<RealField> {
    partial_derivative(&u[0], Axis::X1).add(&partial_derivative(&u[1], Axis::X2))
}

/// Littlewood-Paley block `Delta_l f` with a sharp annulus.
pub fn littlewood_paley_block(f: &RealField, level: i32) -> RealField {
    f.to_spectral().annulus(level).to_real()
}

/// Every nonempty block of `f` with its level, ascending; one forward transform.
pub fn littlewood_paley_decomposition(f: &SpectralField) -> Vec<(i32, RealField)> {
    let grid = *f.grid();
    let moduli = grid.frequency_moduli();
    let (lo, hi) = lp_levels(&grid);
    let levels: Vec<i32> = moduli
        .iter()
        .map(|&r| if r > 0.0 { lp_level(r) } else { i32::MIN })
        .collect();
    let mut blocks = Vec::new();
    for l in lo..=hi {
        let mut coeffs = vec![ZERO; grid.len()];
        let mut any = false;
        for (idx, &lv) in levels.iter().enumerate() {
            if lv == l {
                coeffs[idx] = f.coeffs()[idx];
                any = true;
            }
        }
        if any {
            blocks.push((l, SpectralField::from_raw(grid, coeffs).to_real()));
        }
    }
    blocks
}

/// Kernels of the heat semigroup, its gradient, and the heat-Riesz composites.
#[derive(Clone, Debug)]
pub struct KernelFields {
    /// `K_t`, symbol `exp(-t |xi|^{2 beta})`.
    pub heat: RealField,
    /// `grad K_t`, symbols `i xi_j exp(-t |xi|^{2 beta})`.
    pub gradient: [RealField; 2],
    /// `K^beta_j`, symbols `(i xi_j / |xi|) exp(-t |xi|^{2 beta})`.
    pub riesz: [RealField; 2],
}

/// Kernel of the multiplier `m`: inverse transform of `m(xi)` itself.
pub fn kernel_of(m: &MultiplierSymbol, grid: &GridSpec) -> Result<RealField> {
    let mut delta = SpectralField::zeros(*grid);
    for c in delta.coeffs_mut() {
        *c = Complex64::new(1.0, 0.0);
    }
    Ok(apply_multiplier_spectral(&delta, m)?.to_real())
}

/// [`kernel_fields`] for an arbitrary dissipation exponent `beta > 0`.
pub fn kernel_fields_with_exponent(t: f64, beta: f64, grid: &GridSpec) -> Result<KernelFields> {
    check_time(t, false)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let heat_sym = MultiplierSymbol::heat(t, beta);
    let heat = kernel_of(&heat_sym, grid)?;
    let spectrum = heat.to_spectral();
    let gradient = [
        spectrum.partial(Axis::X1).to_real(),
        spectrum.partial(Axis::X2).to_real(),
    ];
    let riesz = [
        spectrum.riesz(Axis::X1).to_real(),
        spectrum.riesz(Axis::X2).to_real(),
    ];
    Ok(KernelFields {
        heat,
        gradient,
        riesz,
    })
}

/// Kernels `K_t`, `grad K_t` and `K^beta_j` sampled on the grid.
pub fn kernel_fields(t: f64, params: &SpaceParams, grid: &GridSpec) -> Result<KernelFields> {
    kernel_fields_with_exponent(t, params.beta(), grid)
}

fn check_time(t: f64, allow_zero: bool) -> Result<()> {
    let ok = t.is_finite() && if allow_zero { t >= 0.0 } else { t > 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "time must be {}, got {t}",
            if allow_zero {
                "nonnegative"
            } else {
                "positive"
            }
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> GridSpec {
        GridSpec::periodic_2pi(n).unwrap()
    }

    #[test]
    fn lp_level_boundaries() {
        assert_eq!(lp_level(1.0), 0);
        assert_eq!(lp_level(2.0), 1);
        assert_eq!(lp_level(3.999), 1);
        assert_eq!(lp_level(4.0), 2);
        assert_eq!(lp_level(0.5), -1);
        assert_eq!(lp_level(8f64.sqrt()), 1);
    }

    #[test]
    fn identity_symbol_is_exact() {
        let g = grid(16);
        let f = RealField::from_fn(g, |x, y| (x + 2.0 * y).sin() + 0.3);
        let out = apply_multiplier(&f, &MultiplierSymbol::identity()).unwrap();
        assert!(out.max_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn derivative_of_sine() {
        let g = grid(16);
        let f = RealField::from_fn(g, |x, _| x.sin());
        let out = apply_multiplier(&f, &MultiplierSymbol::derivative(Axis::X1)).unwrap();
        let expect = RealField::from_fn(g, |x, _| x.cos());
        assert!(out.max_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn inverse_modulus_on_cos2() {
        let g = grid(16);
        let f = RealField::from_fn(g, |x, _| (2.0 * x).cos());
        let m = MultiplierSymbol::real(|xi| 1.0 / xi[0].hypot(xi[1]), 0.0);
        let out = apply_multiplier(&f, &m).unwrap();
        let expect = f.scaled(0.5);
        assert!(out.max_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn non_hermitian_symbol_is_rejected() {
        let g = grid(8);
        let f = RealField::from_fn(g, |x, _| x.sin());
        let m = MultiplierSymbol::new(|_| I, ZERO);
        assert!(matches!(
            apply_multiplier(&f, &m),
            Err(Error::NonHermitianSymbol { .. })
        ));
        let m = MultiplierSymbol::new(|_| Complex64::new(1.0, 0.0), I);
        assert!(apply_multiplier(&f, &m).is_err());
    }

    #[test]
    fn nan_symbol_is_domain_error() {
        let g = grid(8);
        let f = RealField::from_fn(g, |x, _| x.sin());
        let m = MultiplierSymbol::real(|_| f64::NAN, 0.0);
        assert!(matches!(apply_multiplier(&f, &m), Err(Error::Domain(_))));
    }

    #[test]
    fn fractional_laplacian_examples() {
        let g = grid(16);
        let s = RealField::from_fn(g, |x, _| x.sin());
        let out = fractional_laplacian(&s, 1.0).unwrap();
        assert!(out.max_diff(&s).unwrap() < 1e-13);

        let c2 = RealField::from_fn(g, |x, _| (2.0 * x).cos());
        let out = fractional_laplacian(&c2, 0.75).unwrap();
        assert!(out.max_diff(&c2.scaled(2f64.powf(1.5))).unwrap() < 1e-13);

        let shifted = s.map(|v| v + 1.0);
        assert!(matches!(
            fractional_laplacian(&shifted, -0.5),
            Err(Error::Precondition(_))
        ));
        // positive powers accept a mean and kill it
        let out = fractional_laplacian(&shifted, 1.0).unwrap();
        assert!(out.max_diff(&s).unwrap() < 1e-13);
    }

    #[test]
    fn riesz_of_single_modes() {
        let g = grid(16);
        let s = RealField::from_fn(g, |x, _| x.sin());
        let r1 = riesz_transform(&s, Axis::X1).unwrap();
        let r2 = riesz_transform(&s, Axis::X2).unwrap();
        let c = RealField::from_fn(g, |x, _| x.cos());
        assert!(r1.max_diff(&c).unwrap() < 1e-14);
        assert!(r2.max_abs() < 1e-14);
        assert!(riesz_transform(&s.map(|v| v + 0.5), Axis::X1).is_err());
    }

    #[test]
    fn heat_examples() {
        let g = grid(16);
        let p = SpaceParams::default_point();
        let s = RealField::from_fn(g, |x, _| x.sin());
        assert_eq!(heat_semigroup(&s, 0.0, &p).unwrap(), s);
        let out = heat_semigroup(&s, 1.0, &p).unwrap();
        assert!(out.max_diff(&s.scaled((-1.0f64).exp())).unwrap() < 1e-14);
        assert!(heat_semigroup(&s, -0.1, &p).is_err());
        // mean is preserved
        let shifted = s.map(|v| v + 2.0);
        let out = heat_semigroup(&shifted, 0.5, &p).unwrap();
        assert!((out.mean() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn velocity_of_single_modes() {
        let g = grid(16);
        let [u1, u2] = sqg_velocity(&RealField::from_fn(g, |x, _| x.sin())).unwrap();
        assert!(u1.max_abs() < 1e-14);
        assert!(u2.max_diff(&RealField::from_fn(g, |x, _| x.cos())).unwrap() < 1e-14);

        let [u1, u2] = sqg_velocity(&RealField::from_fn(g, |_, y| y.sin())).unwrap();
        assert!(
            u1.max_diff(&RealField::from_fn(g, |_, y| -y.cos()))
                .unwrap()
                < 1e-14
        );
        assert!(u2.max_abs() < 1e-14);
    }

    #[test]
    fn lp_blocks_of_single_modes() {
        let g = grid(32);
        let c2 = RealField::from_fn(g, |x, _| (2.0 * x).cos());
        let (lo, hi) = lp_levels(&g);
        for l in lo..=hi {
            let b = littlewood_paley_block(&c2, l);
            if l == 1 {
                assert!(b.max_diff(&c2).unwrap() < 1e-14);
            } else {
                assert!(b.max_abs() < 1e-14, "level {l}");
            }
        }
        let f = RealField::from_fn(g, |x, _| x.cos() + (4.0 * x).cos());
        let b0 = littlewood_paley_block(&f, 0);
        let b2 = littlewood_paley_block(&f, 2);
        assert!(b0.max_diff(&RealField::from_fn(g, |x, _| x.cos())).unwrap() < 1e-14);
        assert!(
            b2.max_diff(&RealField::from_fn(g, |x, _| (4.0 * x).cos()))
                .unwrap()
                < 1e-14
        );
        // empty annulus far outside the lattice
        assert!(littlewood_paley_block(&f, 40).max_abs() == 0.0);
    }

    #[test]
    fn lp_levels_span_lattice() {
        let g = grid(64);
        assert_eq!(lp_levels(&g), (0, 5)); // max |xi| = 32 sqrt(2) = 45.3
        let g = GridSpec::new(16, 4.0 * PI).unwrap();
        assert_eq!(lp_levels(&g).0, -1);
    }

    #[test]
    fn kernel_rejects_nonpositive_time() {
        let g = grid(16);
        assert!(kernel_fields(0.0, &SpaceParams::default_point(), &g).is_err());
        assert!(kernel_fields(-1.0, &SpaceParams::default_point(), &g).is_err());
    }

    #[test]
    fn kernel_has_unit_mass() {
        let g = grid(32);
        let k = kernel_fields(0.3, &SpaceParams::default_point(), &g).unwrap();
        let mass: f64 = k.heat.values().iter().sum::<f64>() * g.cell_area();
        assert!((mass - 1.0).abs() < 1e-12);
        for comp in k.gradient.iter().chain(k.riesz.iter()) {
            assert!(comp.values().iter().sum::<f64>().abs() * g.cell_area() < 1e-12);
        }
    }
}
