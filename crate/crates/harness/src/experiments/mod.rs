//! The experiment suite. Every experiment is a pure function of its config.

mod identity;
mod lemmas;
mod regularity;
mod riesz;
mod scaling;
mod wellposed;

use std::time::Instant;

use qsqg_core::{Corpus, GridSpec, RealField};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::Result;
use crate::report::ExperimentReport;

pub use identity::{
    gamma_constant_closed_form, gamma_constant_quadrature, run_space_identity, IDENTITY_PAIRS,
};
pub use lemmas::{kernel_decay as lemmas_kernel_decay, run_lemma_checks, KernelDecay};
pub use regularity::run_regularity_decay;
pub use riesz::run_riesz_boundedness;
pub use scaling::run_scaling_invariance;
pub use wellposed::run_wellposedness_sweep;

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = match cfg.experiment {
        ExperimentKind::Riesz => run_riesz_boundedness(cfg),
        ExperimentKind::Identity => run_space_identity(cfg),
        ExperimentKind::Scaling => run_scaling_invariance(cfg),
        ExperimentKind::Wellposed => run_wellposedness_sweep(cfg),
        ExperimentKind::Regularity => run_regularity_decay(cfg),
        ExperimentKind::Lemmas => run_lemma_checks(cfg),
    }?;
    report.wall_clock = start.elapsed();
    Ok(report)
}

pub(crate) fn corpus(cfg: &ExperimentConfig) -> Corpus {
    corpus_of_size(cfg, cfg.knobs.corpus_size)
}

pub(crate) fn corpus_of_size(cfg: &ExperimentConfig, count: usize) -> Corpus {
    if cfg.knobs.zero_corpus {
        Corpus::zeros(count)
    } else {
        Corpus::for_grid(cfg.seed, count, &cfg.grid)
    }
}

/// Base grid, then the doubled grid when refinement comparison is on.
pub(crate) fn grids(cfg: &ExperimentConfig) -> Vec<GridSpec> {
    let mut g = vec![cfg.grid];
    if cfg.knobs.compare_refined {
        g.push(cfg.refined_grid());
    }
    g
}

/// `f` over the corpus fields in parallel, gathered in corpus order.
pub(crate) fn per_field<T: Send>(
    fields: &[RealField],
    f: impl Fn(usize, &RealField) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    fields
        .par_iter()
        .enumerate()
        .map(|(i, x)| f(i, x))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
