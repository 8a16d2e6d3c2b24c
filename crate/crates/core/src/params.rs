use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The exponent pair `(alpha, beta)` of the Q-type spaces and the dissipation.
///
/// Admissible pairs satisfy `alpha > 0`, `max(alpha, 1/2) < beta < 1` and
/// `alpha + beta - 1 >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SpaceParams {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for SpaceParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        SpaceParams::new(raw.alpha, raw.beta)
    }
}

impl From<SpaceParams> for RawParams {
    fn from(p: SpaceParams) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
        }
    }
}

// Slack for the boundary case alpha + beta = 1 given in decimal.
const BOUNDARY_SLACK: f64 = 1e-12;

impl SpaceParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let reject = |reason| {
            Err(Error::InvalidParams {
                alpha,
                beta,
                reason,
            })
        };
        if !(alpha.is_finite() && beta.is_finite()) {
            return reject("exponents must be finite");
        }
        if alpha <= 0.0 {
            return reject("alpha must be positive");
        }
        if !(beta > alpha.max(0.5) && beta < 1.0) {
            return reject("need max(alpha, 1/2) < beta < 1");
        }
        if alpha + beta - 1.0 < -BOUNDARY_SLACK {
            return reject("need alpha + beta - 1 >= 0");
        }
        Ok(SpaceParams { alpha, beta })
    }

    /// The default parameter point `(1/4, 3/4)`, on the `alpha + beta = 1` boundary.
    pub fn default_point() -> Self {
        SpaceParams {
            alpha: 0.25,
            beta: 0.75,
        }
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Exponent `alpha / beta` of the singular time weight `t^{-alpha/beta}`.
    #[inline]
    pub fn time_weight_exponent(&self) -> f64 {
        self.alpha / self.beta
    }

    /// Exponent `2 alpha + 2 beta - 4` of the radius prefactor of 2D Carleson boxes.
    #[inline]
    pub fn carleson_radius_exponent(&self) -> f64 {
        2.0 * self.alpha + 2.0 * self.beta - 4.0
    }

    /// Critical Besov regularity `1 - 2 beta` of the data space.
    #[inline]
    pub fn critical_regularity(&self) -> f64 {
        1.0 - 2.0 * self.beta
    }
}

impl Default for SpaceParams {
    fn default() -> Self {
        Self::default_point()
    }
}
