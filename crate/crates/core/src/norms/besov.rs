use crate::field::{RealField, SpectralField};
use crate::spectral::littlewood_paley_decomposition;

use super::report::NormReport;
use super::short_hash;

/// `sum_l ||Delta_l f||_inf` and the level of the largest block.
pub(crate) fn besov_sum_spectral(f: &SpectralField) -> (f64, Option<i32>) {
    let mut total = 0.0;
    let mut best: Option<(i32, f64)> = None;
    for (l, block) in littlewood_paley_decomposition(&f.without_mean()) {
        let m = block.max_abs();
        total += m;
        if best.is_none_or(|(_, b)| m > b) {
            best = Some((l, m));
        }
    }
    (total, best.map(|(l, _)| l))
}

/// Homogeneous `B^{0,1}_inf` norm: sum of block sup-norms over sharp dyadic annuli.
pub fn besov_sum_norm(f: &RealField) -> NormReport {
    let (value, level) = besov_sum_spectral(&f.to_spectral());
    let mut report = NormReport::new(value, hash(f, "besov_sum"));
    report.attaining_level = level;
    report
}

/// Homogeneous `B^{s,inf}_inf` norm: `sup_l 2^{ls} ||Delta_l f||_inf`.
pub fn besov_sup_norm(f: &RealField, s: f64) -> NormReport {
    let mut value = 0.0;
    let mut level = None;
    for (l, block) in littlewood_paley_decomposition(&f.to_spectral().without_mean()) {
        let v = 2f64.powf(l as f64 * s) * block.max_abs();
        if level.is_none() || v > value {
            value = v;
            level = Some(l);
        }
    }
    let mut report = NormReport::new(value, hash(f, &format!("besov_sup|{s}")));
    report.attaining_level = level;
    report
}

fn hash(f: &RealField, tag: &str) -> String {
    short_hash(&format!(
        "{}|{}",
        serde_json::to_string(f.grid()).unwrap_or_default(),
        tag
    ))
}
