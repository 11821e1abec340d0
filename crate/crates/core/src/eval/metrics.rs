use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Scores of one model on one set of records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// `None` when the evaluated records hold a single class.
    pub auc: Option<f64>,
    /// Squared error against the mean judgment.
    pub mse: f64,
    /// Squared error against the 0/1 class label.
    pub mse_label: f64,
    pub accuracy: f64,
    /// F1 with clickbait as the positive class.
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
}

impl Metrics {
    /// Unweighted mean; AUC averages over the entries where it is defined.
    pub fn mean(items: &[Metrics]) -> Option<Metrics> {
        if items.is_empty() {
            return None;
        }
        let n = items.len() as f64;
        let avg = |f: fn(&Metrics) -> f64| items.iter().map(f).sum::<f64>() / n;
        let aucs: Vec<f64> = items.iter().filter_map(|m| m.auc).collect();
        Some(Metrics {
            auc: (!aucs.is_empty()).then(|| aucs.iter().sum::<f64>() / aucs.len() as f64),
            mse: avg(|m| m.mse),
            mse_label: avg(|m| m.mse_label),
            accuracy: avg(|m| m.accuracy),
            f1: avg(|m| m.f1),
            precision: avg(|m| m.precision),
            recall: avg(|m| m.recall),
        })
    }
}

/// Mann-Whitney AUC with midranks for tied scores. `None` unless both classes occur.
pub fn auc(scores: &[f64], classes: &[bool]) -> Option<f64> {
    let n1 = classes.iter().filter(|&&c| c).count();
    let n0 = classes.len() - n1;
    if n1 == 0 || n0 == 0 || scores.len() != classes.len() {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j+1 share their average.
        let mid = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += mid * order[i..=j].iter().filter(|&&k| classes[k]).count() as f64;
        i = j + 1;
    }
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;
    Some(u / (n1 as f64 * n0 as f64))
}

pub fn compute_metrics(
    scores: &[f64],
    mean_targets: &[f64],
    classes: &[bool],
    threshold: f64,
) -> Result<Metrics> {
    let n = scores.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no predictions to evaluate".into()));
    }
    for len in [mean_targets.len(), classes.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, got: len });
        }
    }
    let mse = scores.iter().zip(mean_targets).map(|(s, t)| (s - t).powi(2)).sum::<f64>() / n as f64;
    let mse_label = scores
        .iter()
        .zip(classes)
        .map(|(s, &c)| (s - if c { 1.0 } else { 0.0 }).powi(2))
        .sum::<f64>()
        / n as f64;

    let (mut tp, mut fp, mut fn_, mut tn) = (0usize, 0usize, 0usize, 0usize);
    for (&s, &c) in scores.iter().zip(classes) {
        match (s >= threshold, c) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    Ok(Metrics {
        auc: auc(scores, classes),
        mse,
        mse_label,
        accuracy: ratio(tp + tn, n),
        f1: ratio(2 * tp, 2 * tp + fp + fn_),
        precision,
        recall,
    })
}

/// Quantile by linear interpolation between closest ranks (`h = (n-1)p`).
/// `sorted` must be ascending and non-empty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
