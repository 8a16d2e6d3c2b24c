//! Experiment harness: configs, the experiment suite, and CSV/text persistence.

pub mod config;
pub mod error;
pub mod experiments;
pub mod persist;
pub mod quadrature;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind, Knobs};
pub use error::{HarnessError, Result};
pub use experiments::run;
pub use persist::{persist, summary_text};
pub use report::{Check, ExperimentReport, Severity};
