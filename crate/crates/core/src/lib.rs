//! Pseudospectral operators, Carleson-type norm estimators and a mild-solution
//! solver for the subcritical dissipative quasi-geostrophic equation
//! `theta_t + (-Delta)^beta theta = d_1(theta R_2 theta) - d_2(theta R_1 theta)`
//! on the periodic square `[0, L)^2`.

pub mod corpus;
mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod norms;
mod params;
pub mod solver;
pub mod spectral;
pub mod time;

pub use corpus::{BandLimitedField, Corpus};
pub use error::{Error, Result};
pub use field::{RealField, SpectralField};
pub use grid::{Axis, GridSpec};
pub use norms::{BoxSweepConfig, CarlesonBox, NormReport};
pub use params::SpaceParams;
pub use solver::{PicardReport, SolverConfig};
pub use spectral::MultiplierSymbol;
pub use time::{TimeGrid, Trajectory};
