use crate::error::Result;
use crate::field::{RealField, SpectralField};
use crate::grid::Axis;
use crate::spectral::sqg_velocity;

fn product(a: &RealField, b: &RealField) -> RealField {
    RealField::from_raw(
        *a.grid(),
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| x * y)
            .collect(),
    )
}

fn mask(f: SpectralField, dealias: bool) -> SpectralField {
    if dealias {
        f.dealiased()
    } else {
        f
    }
}

/// Spectral density `d_1(v R_2 u) - d_2(v R_1 u)`.
///
/// With `dealias`, both factors and the products are truncated to the 2/3 mask.
pub fn bilinear_density(u: &SpectralField, v: &SpectralField, dealias: bool) -> SpectralField {
    let u = mask(u.without_mean(), dealias);
    let v = mask(v.without_mean(), dealias);
    let vr = v.to_real();
    let r1 = u.riesz(Axis::X1).to_real();
    let r2 = u.riesz(Axis::X2).to_real();
    let p2 = mask(product(&vr, &r2).to_spectral(), dealias);
    let p1 = mask(product(&vr, &r1).to_spectral(), dealias);
    let mut out = p2.partial(Axis::X1);
    for (o, q) in out
        .coeffs_mut()
        .iter_mut()
        .zip(p1.partial(Axis::X2).coeffs())
    {
        *o -= q;
    }
    out
}

/// `d_1(theta R_2 theta) - d_2(theta R_1 theta)` with dealiased products.
pub fn nonlinearity(theta: &RealField) -> Result<RealField> {
    nonlinearity_with(theta, true)
}

pub fn nonlinearity_with(theta: &RealField, dealias: bool) -> Result<RealField> {
    theta.require_mean_zero("nonlinearity")?;
    let s = theta.to_spectral();
    Ok(bilinear_density(&s, &s, dealias).to_real())
}

/// `-div(u theta)` with `u = (-R_2 theta, R_1 theta)`, no dealiasing.
pub fn nonlinearity_advective(theta: &RealField) -> Result<RealField> {
    let [u1, u2] = sqg_velocity(theta)?;
    let f1 = product(&u1, theta).to_spectral().partial(Axis::X1);
    let f2 = product(&u2, theta).to_spectral().partial(Axis::X2);
    Ok(f1.add(&f2)?.scaled(-1.0).to_real())
}
