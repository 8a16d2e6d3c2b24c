//! Writes a report as a directory of plain-text files.
//!
//! Layout: `config.toml`, one `<table>.csv` per table, `summary.txt`,
//! `plot_<name>.csv` per figure, and one trajectory directory per saved run.

use std::fs;
use std::path::Path;

use qsqg_core::io::write_trajectory;

use crate::error::{HarnessError, Result};
use crate::report::{num, ExperimentReport, PlotData, Severity, Table};

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> HarnessError + '_ {
    move |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_table(path: &Path, table: &Table) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(&table.columns).map_err(csv_err(path))?;
    for row in &table.rows {
        w.write_record(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn write_plot(path: &Path, plot: &PlotData) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([&plot.x_label, &plot.y_label])
        .map_err(csv_err(path))?;
    for &(x, y) in &plot.points {
        w.write_record([num(x), num(y)]).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn summary_text(report: &ExperimentReport) -> String {
    let mut s = format!(
        "experiment = {}\nseed = {}\n",
        report.config.experiment, report.config.seed
    );
    for (k, v) in &report.metrics {
        s.push_str(&format!("{k} = {}\n", num(*v)));
    }
    for (k, v) in &report.notes {
        s.push_str(&format!("{k} = {v}\n"));
    }
    for c in &report.checks {
        let status = match (c.passed, c.severity) {
            (true, _) => "PASS",
            (false, Severity::Hard) => "FAIL",
            (false, Severity::Soft) => "WARN",
        };
        let sev = match c.severity {
            Severity::Hard => "hard",
            Severity::Soft => "soft",
        };
        s.push_str(&format!("[{status}] ({sev}) {}: {}\n", c.name, c.detail));
    }
    s
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn persist(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    write_text(&dir.join("config.toml"), &report.config.to_toml())?;
    for t in &report.tables {
        write_table(&dir.join(format!("{}.csv", t.name)), t)?;
    }
    write_text(&dir.join("summary.txt"), &summary_text(report))?;
    for p in &report.plots {
        write_plot(&dir.join(format!("plot_{}.csv", p.name)), p)?;
    }
    for saved in &report.trajectories {
        let hash = report
            .config
            .solver
            .norm_sweep
            .config_hash(&report.config.grid, &saved.name);
        write_trajectory(
            &dir.join(&saved.name),
            &saved.trajectory,
            &report.config.params,
            &hash,
            saved.picard.as_ref(),
        )?;
    }
    Ok(())
}
