//! Fixed-seed corpora of band-limited mean-zero fields.
//!
//! A corpus field is a finite trigonometric sum defined independently of the
//! grid, so the same field can be sampled at several resolutions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::field::RealField;
use crate::grid::GridSpec;

/// One trigonometric mode `a cos(xi.x) + b sin(xi.x)` with `xi = 2 pi k / L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigMode {
    pub k: [i64; 2],
    pub cos: f64,
    pub sin: f64,
}

/// A real mean-zero trigonometric polynomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BandLimitedField {
    pub modes: Vec<TrigMode>,
}

/// Lattice vectors `0 < |k| <= band` in the upper half-plane, sorted.
fn half_plane_modes(band: usize) -> Vec<[i64; 2]> {
    let b = band as i64;
    let mut out = Vec::new();
    for k2 in 0..=b {
        for k1 in -b..=b {
            if (k2 > 0 || k1 > 0) && k1 * k1 + k2 * k2 <= b * b {
                out.push([k1, k2]);
            }
        }
    }
    out
}

impl BandLimitedField {
    /// Independent standard normal coefficients on every mode with `|k| <= band`.
    pub fn random(rng: &mut ChaCha8Rng, band: usize) -> Self {
        let modes = half_plane_modes(band)
            .into_iter()
            .map(|k| TrigMode {
                k,
                cos: StandardNormal.sample(rng),
                sin: StandardNormal.sample(rng),
            })
            .collect();
        BandLimitedField { modes }
    }

    pub fn band(&self) -> usize {
        self.modes
            .iter()
            .map(|m| ((m.k[0] * m.k[0] + m.k[1] * m.k[1]) as f64).sqrt().ceil() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Samples the field on `grid`. Modes beyond the grid's Nyquist alias.
    pub fn materialize(&self, grid: &GridSpec) -> RealField {
        let w = 2.0 * std::f64::consts::PI / grid.length();
        RealField::from_fn(*grid, |x1, x2| {
            self.modes
                .iter()
                .map(|m| {
                    let phase = w * (m.k[0] as f64 * x1 + m.k[1] as f64 * x2);
                    m.cos * phase.cos() + m.sin * phase.sin()
                })
                .sum()
        })
    }
}

/// A numbered set of corpus fields with the seed that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub seed: u64,
    pub band: usize,
    pub fields: Vec<BandLimitedField>,
}

impl Corpus {
    /// `count` fields; field `i` draws from stream `i` of the seeded generator.
    pub fn random(seed: u64, count: usize, band: usize) -> Self {
        let fields = (0..count)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                BandLimitedField::random(&mut rng, band)
            })
            .collect();
        Corpus { seed, band, fields }
    }

    /// Band `N/6` for a base resolution `N`.
    pub fn for_grid(seed: u64, count: usize, base: &GridSpec) -> Self {
        Self::random(seed, count, base.n() / 6)
    }

    pub fn zeros(count: usize) -> Self {
        Corpus {
            seed: 0,
            band: 0,
            fields: vec![BandLimitedField::default(); count],
        }
    }

    pub fn explicit(seed: u64, fields: Vec<BandLimitedField>) -> Self {
        let band = fields.iter().map(|f| f.band()).max().unwrap_or(0);
        Corpus { seed, band, fields }
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn materialize(&self, grid: &GridSpec) -> Vec<RealField> {
        self.fields.iter().map(|f| f.materialize(grid)).collect()
    }
}
