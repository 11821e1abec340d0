use serde::{Deserialize, Serialize};

use super::metrics::quantile;
use crate::corpus::TruthRecord;
use crate::learn::classify;

/// Ambiguity band for mean judgments, inclusive at both ends.
pub const AMBIGUOUS_BAND: (f64, f64) = (0.33, 0.66);

/// Where the misclassified records sit on the mean-judgment scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub threshold: f64,
    pub n_evaluated: usize,
    pub misclassified: Vec<String>,
    /// Share of misclassified records whose mean judgment lies in [`AMBIGUOUS_BAND`].
    pub fraction_ambiguous: f64,
    /// `(q1, median, q3)` of the misclassified mean judgments.
    pub quartiles: Option<(f64, f64, f64)>,
}

pub fn error_report(ids: &[String], scores: &[f64], truths: &[TruthRecord], threshold: f64) -> ErrorReport {
    let mut wrong = Vec::new();
    let mut means = Vec::new();
    for ((id, &s), t) in ids.iter().zip(scores).zip(truths) {
        if classify(s, threshold) != t.truth_class {
            wrong.push(id.clone());
            means.push(t.mean_score);
        }
    }
    ErrorReport {
        threshold,
        n_evaluated: scores.len().min(truths.len()),
        misclassified: wrong,
        fraction_ambiguous: ambiguous_fraction(&means),
        quartiles: quartiles(&means),
    }
}

pub fn ambiguous_fraction(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let (lo, hi) = AMBIGUOUS_BAND;
    values.iter().filter(|&&v| (lo..=hi).contains(&v)).count() as f64 / values.len() as f64
}

pub fn quartiles(values: &[f64]) -> Option<(f64, f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some((quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75)))
}
