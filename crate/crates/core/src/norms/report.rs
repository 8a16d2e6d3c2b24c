use serde::{Deserialize, Serialize};

use super::sweep::CarlesonBox;

/// A computed norm together with where its supremum was attained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attaining_box: Option<CarlesonBox>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attaining_level: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attaining_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multi_index: Option<[u32; 2]>,
    /// Time-weighted Besov part, for the solution-space norms.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub besov_part: Option<f64>,
    /// Square root of the Carleson part, for the solution-space norms.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub carleson_part: Option<f64>,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub corpus_seed: Option<u64>,
    #[serde(default)]
    pub partial_coverage: bool,
}

impl NormReport {
    pub(crate) fn new(value: f64, config_hash: String) -> Self {
        NormReport {
            value,
            attaining_box: None,
            attaining_level: None,
            attaining_time: None,
            multi_index: None,
            besov_part: None,
            carleson_part: None,
            config_hash,
            corpus_seed: None,
            partial_coverage: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.corpus_seed = Some(seed);
        self
    }

    /// Single-line JSON record.
    pub fn to_record(&self) -> String {
        serde_json::to_string(self).expect("NormReport serializes")
    }

    pub fn from_record(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}
