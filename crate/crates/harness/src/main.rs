use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use qsqg::{persist, run, ExperimentConfig, ExperimentKind, HarnessError, Result};
use qsqg_core::{GridSpec, SpaceParams, TimeGrid};

#[derive(Parser, Debug)]
#[command(
    name = "qsqg",
    version,
    about = "Numerical experiments for the dissipative quasi-geostrophic equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Grid points per side.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Torus side length.
    #[arg(long, global = true)]
    length: Option<f64>,
    /// Time horizon of the solver grid.
    #[arg(long, global = true)]
    horizon: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; `all` writes one subdirectory per experiment.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file merged over the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    Riesz,
    Identity,
    Scaling,
    Wellposed,
    Regularity,
    Lemmas,
    All,
}

impl Command {
    fn kinds(self) -> Vec<ExperimentKind> {
        match self {
            Command::Riesz => vec![ExperimentKind::Riesz],
            Command::Identity => vec![ExperimentKind::Identity],
            Command::Scaling => vec![ExperimentKind::Scaling],
            Command::Wellposed => vec![ExperimentKind::Wellposed],
            Command::Regularity => vec![ExperimentKind::Regularity],
            Command::Lemmas => vec![ExperimentKind::Lemmas],
            Command::All => ExperimentKind::ALL.to_vec(),
        }
    }
}

fn build_config(cli: &Cli, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default_for(kind);
    if cli.alpha.is_some() || cli.beta.is_some() {
        cfg.params = SpaceParams::new(
            cli.alpha.unwrap_or(cfg.params.alpha()),
            cli.beta.unwrap_or(cfg.params.beta()),
        )?;
    }
    if cli.grid.is_some() || cli.length.is_some() {
        cfg.grid = GridSpec::new(
            cli.grid.unwrap_or(cfg.grid.n()),
            cli.length.unwrap_or(cfg.grid.length()),
        )?;
    }
    if let Some(h) = cli.horizon {
        let tg = cfg.solver.timegrid;
        cfg.solver.timegrid = TimeGrid::new(h, tg.steps(), tg.grading())?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(out) = &cli.out {
        cfg.out = if cli.command.kinds().len() > 1 {
            out.join(kind.name())
        } else {
            out.clone()
        };
    }
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.clone(),
            source,
        })?;
        cfg = cfg.merged_with(&text)?;
        cfg.experiment = kind;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn threads() -> Option<usize> {
    std::env::var("QSQG_THREADS")
        .ok()?
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

fn execute(cli: &Cli) -> Result<bool> {
    let mut all_pass = true;
    for kind in cli.command.kinds() {
        let cfg = build_config(cli, kind)?;
        info!("running {kind} into {}", cfg.out.display());
        let report = run(&cfg)?;
        persist(&report, &cfg.out)?;
        println!(
            "{kind}: {} in {:.2} s -> {}",
            if report.hard_checks_pass() {
                "PASS"
            } else {
                "FAIL"
            },
            report.wall_clock.as_secs_f64(),
            cfg.out.display()
        );
        for c in &report.checks {
            let tag = match (c.passed, c.severity) {
                (true, _) => "PASS",
                (false, qsqg::Severity::Hard) => "FAIL",
                (false, qsqg::Severity::Soft) => "WARN",
            };
            println!("  [{tag}] {}: {}", c.name, c.detail);
        }
        all_pass &= report.hard_checks_pass();
    }
    Ok(all_pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = threads() {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: could not size thread pool: {e}");
        }
    }
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
