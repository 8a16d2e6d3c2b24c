//! Mild-solution machinery: the divergence-form nonlinearity, the Duhamel
//! bilinear operator, Picard iteration, an exponential-integrator reference
//! solver and the critical scaling transform.

mod duhamel;
mod nonlinear;
mod picard;
mod reference;
mod scaling;

pub use duhamel::{duhamel_bilinear, duhamel_from_density, linear_flow};
pub use nonlinear::{bilinear_density, nonlinearity, nonlinearity_advective, nonlinearity_with};
pub use picard::{fixed_point_residual, picard_solve, PicardReport, SolverConfig};
pub use reference::{reference_solve, reference_solve_with, RhsMode};
pub use scaling::{scale_trajectory, scaling_transform};

/// Per-mode `(1 - e^{-h lambda}) / lambda`, with the limit `h` at `lambda = 0`.
pub(crate) fn phi1(h: f64, lambda: f64) -> f64 {
    let x = h * lambda;
    if x < 1e-8 {
        h * (1.0 - 0.5 * x)
    } else {
        -(-x).exp_m1() / lambda
    }
}

#[cfg(test)]
mod tests {
    use super::phi1;

    #[test]
    fn phi1_limits() {
        assert!((phi1(0.5, 0.0) - 0.5).abs() < 1e-16);
        assert!((phi1(0.5, 2.0) - (1.0 - (-1.0f64).exp()) / 2.0).abs() < 1e-15);
        assert!((phi1(1e-3, 1e-7) - 1e-3).abs() < 1e-12);
    }
}
