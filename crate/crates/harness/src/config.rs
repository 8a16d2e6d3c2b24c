//! Experiment configuration, serialized verbatim next to every output.

use std::fmt;
use std::path::PathBuf;

use qsqg_core::{BoxSweepConfig, GridSpec, SolverConfig, SpaceParams, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Riesz,
    Identity,
    Scaling,
    Wellposed,
    Regularity,
    Lemmas,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Riesz,
        ExperimentKind::Identity,
        ExperimentKind::Scaling,
        ExperimentKind::Wellposed,
        ExperimentKind::Regularity,
        ExperimentKind::Lemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Riesz => "riesz",
            ExperimentKind::Identity => "identity",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Wellposed => "wellposed",
            ExperimentKind::Regularity => "regularity",
            ExperimentKind::Lemmas => "lemmas",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Experiment-specific settings; each experiment reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Knobs {
    pub corpus_size: usize,
    /// Replace the random corpus with zero fields.
    pub zero_corpus: bool,
    /// Repeat corpus measurements at twice the resolution.
    pub compare_refined: bool,
    pub lambdas: Vec<u32>,
    /// Nodes of the time grid on which data norms are evaluated.
    pub data_steps: usize,
    pub amplitudes: Vec<f64>,
    pub regularity_amplitude: f64,
    pub lemma_trajectories: usize,
    pub kernel_time: f64,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs {
            corpus_size: 50,
            zero_corpus: false,
            compare_refined: true,
            lambdas: vec![1, 2, 4],
            data_steps: 48,
            amplitudes: vec![0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0],
            regularity_amplitude: 1e-3,
            lemma_trajectories: 20,
            kernel_time: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub out: PathBuf,
    pub params: SpaceParams,
    pub grid: GridSpec,
    pub sweep: BoxSweepConfig,
    pub solver: SolverConfig,
    #[serde(default)]
    pub knobs: Knobs,
}

pub const DEFAULT_SEED: u64 = 2024;

impl ExperimentConfig {
    /// Defaults at `(1/4, 3/4)`, `N = 64`, `L = 2 pi`, `T = 1`.
    pub fn default_for(experiment: ExperimentKind) -> Self {
        let mut sweep = BoxSweepConfig::default();
        if experiment == ExperimentKind::Scaling {
            // one extra radius so the ladder shift under x -> 2x keeps an interior maximum
            sweep.levels = 5;
        }
        if experiment == ExperimentKind::Lemmas {
            // radii below 1
            sweep.first_level = 3;
            sweep.levels = 3;
        }
        ExperimentConfig {
            experiment,
            seed: DEFAULT_SEED,
            out: PathBuf::from("out").join(experiment.name()),
            params: SpaceParams::default_point(),
            grid: GridSpec::periodic_2pi(64).expect("valid default grid"),
            sweep,
            solver: SolverConfig::default(),
            knobs: Knobs::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        GridSpec::with_dealias(g.n(), g.length(), g.dealias_fraction())?;
        self.sweep.validate(g)?;
        self.solver.validate()?;
        let tg = &self.solver.timegrid;
        TimeGrid::new(tg.horizon(), tg.steps(), tg.grading())?;
        self.solver.norm_sweep.validate(g)?;
        if self.knobs.compare_refined {
            self.sweep.validate(&self.refined_grid())?;
        }
        if self
            .knobs
            .lambdas
            .iter()
            .any(|&l| l == 0 || !g.n().is_multiple_of(l as usize))
        {
            return Err(HarnessError::Config(format!(
                "every lambda must divide N={}",
                g.n()
            )));
        }
        if self.knobs.data_steps < TimeGrid::MIN_STEPS {
            return Err(HarnessError::Config(
                "data_steps must be at least 16".into(),
            ));
        }
        if self.knobs.kernel_time.is_nan() || self.knobs.kernel_time <= 0.0 {
            return Err(HarnessError::Config("kernel_time must be positive".into()));
        }
        Ok(())
    }

    /// The same torus at twice the resolution.
    pub fn refined_grid(&self) -> GridSpec {
        GridSpec::with_dealias(
            2 * self.grid.n(),
            self.grid.length(),
            self.grid.dealias_fraction(),
        )
        .expect("doubling a valid grid stays valid")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Deep-merges `overrides` (TOML text) over this config.
    pub fn merged_with(&self, overrides: &str) -> Result<Self> {
        let mut base: toml::Table = toml::from_str(&self.to_toml()).expect("own TOML parses");
        let over: toml::Table =
            toml::from_str(overrides).map_err(|e| HarnessError::Config(e.to_string()))?;
        merge(&mut base, over);
        let text = toml::to_string(&base).expect("merged table serializes");
        Self::from_toml(&text)
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}
