//! In-memory experiment results.

use std::time::Duration;

use qsqg_core::{PicardReport, Trajectory};

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    /// Failure makes the run fail.
    Hard,
    /// Failure is a warning.
    Soft,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub severity: Severity,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Two-column series for one figure.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotData {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct SavedTrajectory {
    pub name: String,
    pub trajectory: Trajectory,
    pub picard: Option<PicardReport>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub tables: Vec<Table>,
    /// Named scalar results, in insertion order.
    pub metrics: Vec<(String, f64)>,
    pub notes: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub plots: Vec<PlotData>,
    pub trajectories: Vec<SavedTrajectory>,
    /// Not persisted, so reruns stay byte-identical.
    pub wall_clock: Duration,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig) -> Self {
        ExperimentReport {
            config,
            tables: Vec::new(),
            metrics: Vec::new(),
            notes: Vec::new(),
            checks: Vec::new(),
            plots: Vec::new(),
            trajectories: Vec::new(),
            wall_clock: Duration::ZERO,
        }
    }

    pub fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.push((key.into(), value));
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        severity: Severity,
        passed: bool,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            severity,
            passed,
            detail: detail.into(),
        });
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn hard_checks_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed || c.severity == Severity::Soft)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| !c.passed && c.severity == Severity::Soft)
    }
}

/// Shortest round-trip text for a number; non-finite values become `undefined`.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        "undefined".into()
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".into(), num)
}

/// `a / b`, or `None` for `0 / 0`-type degenerate inputs.
pub fn ratio(a: f64, b: f64) -> Option<f64> {
    if b > 0.0 && a.is_finite() && b.is_finite() {
        Some(a / b)
    } else {
        None
    }
}

/// `|b - a| / |a|`.
pub fn drift(a: f64, b: f64) -> f64 {
    (b - a).abs() / a.abs()
}
