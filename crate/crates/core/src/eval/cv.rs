use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, Metrics};
use super::report::{error_report, ErrorReport};
use crate::corpus::{make_folds, FoldAssignment, LabeledCorpus, TruthRecord};
use crate::features::{extract_matrix, FeatureMatrix, FeatureSchema};
use crate::learn::{fit_model, ModelConfig, ModelKind};
use crate::select::{fisher_scores, FeatureRanking};
use crate::textkit::{Lexicons, TaggerHandle};
use crate::{Error, Result};

/// A feature matrix with the truth record of every row.
#[derive(Debug, Clone)]
pub struct LabeledMatrix {
    pub matrix: FeatureMatrix,
    pub truths: Vec<TruthRecord>,
}

impl LabeledMatrix {
    pub fn new(matrix: FeatureMatrix, truths: Vec<TruthRecord>) -> Result<Self> {
        if matrix.n_rows() != truths.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.n_rows(),
                got: truths.len(),
            });
        }
        if let Some((id, t)) = matrix.ids.iter().zip(&truths).find(|(id, t)| **id != t.id) {
            return Err(Error::InvalidArgument(format!(
                "row id \"{id}\" is paired with truth \"{}\"",
                t.id
            )));
        }
        Ok(Self { matrix, truths })
    }

    pub fn extract(
        corpus: &LabeledCorpus,
        schema: &FeatureSchema,
        lexicons: &Lexicons,
        tagger: &TaggerHandle,
    ) -> Result<Self> {
        let matrix = extract_matrix(corpus.instances(), schema, lexicons, tagger);
        Self::new(matrix, corpus.truths().cloned().collect())
    }

    pub fn len(&self) -> usize {
        self.truths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truths.is_empty()
    }

    pub fn mean_scores(&self) -> Vec<f64> {
        self.truths.iter().map(|t| t.mean_score).collect()
    }

    pub fn classes(&self) -> Vec<bool> {
        self.truths.iter().map(|t| t.truth_class.is_clickbait()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub model: ModelConfig,
    /// Fisher top-k fitted on each fold's training rows.
    pub top_k: Option<usize>,
    /// Restrict to these matrix columns before any selection.
    pub columns: Option<Vec<usize>>,
    pub threshold: f64,
}

impl CvConfig {
    pub fn new(model: ModelConfig) -> Self {
        Self {
            model,
            top_k: None,
            columns: None,
            threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub features: Vec<String>,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub model: ModelKind,
    pub k: usize,
    pub folds: Vec<FoldResult>,
    pub mean: Metrics,
    /// Over the pooled held-out predictions.
    pub errors: ErrorReport,
    /// Held-out score of every row, in matrix order.
    pub predictions: Vec<f64>,
}

impl CvReport {
    /// Regressors are compared on the mean judgment, classifiers on the label.
    pub fn headline_mse(&self) -> f64 {
        if self.model.is_classifier() {
            self.mean.mse_label
        } else {
            self.mean.mse
        }
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<6} {:>7} {:>7} {:>8} {:>10} {:>7} {:>7}",
            "fold", "n_test", "AUC", "MSE", "MSE_label", "ACC", "F1"
        );
        let row = |out: &mut String, name: &str, n: String, m: &Metrics| {
            let auc = m.auc.map_or("n/a".to_string(), |a| format!("{a:.4}"));
            let _ = writeln!(
                out,
                "{name:<6} {n:>7} {auc:>7} {:>8.4} {:>10.4} {:>7.4} {:>7.4}",
                m.mse, m.mse_label, m.accuracy, m.f1
            );
        };
        for f in &self.folds {
            row(&mut out, &f.fold.to_string(), f.n_test.to_string(), &f.metrics);
        }
        row(&mut out, "mean", String::new(), &self.mean);
        let e = &self.errors;
        let _ = writeln!(
            out,
            "misclassified: {} of {} (threshold {})",
            e.misclassified.len(),
            e.n_evaluated,
            e.threshold
        );
        let _ = writeln!(out, "misclassified with mean score in [0.33, 0.66]: {:.4}", e.fraction_ambiguous);
        if let Some((q1, med, q3)) = e.quartiles {
            let _ = writeln!(out, "misclassified mean score quartiles: {q1:.4} {med:.4} {q3:.4}");
        }
        out
    }
}

fn take_rows(rows: &[Vec<f64>], idx: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| cols.iter().map(|&c| rows[i][c]).collect()).collect()
}

/// Train on all folds but one, score the held-out fold, repeat for every fold.
pub fn cross_validate(data: &LabeledMatrix, folds: &FoldAssignment, config: &CvConfig) -> Result<CvReport> {
    let m = &data.matrix;
    if folds.by_index().len() != data.len() {
        return Err(Error::DimensionMismatch {
            expected: data.len(),
            got: folds.by_index().len(),
        });
    }
    let base: Vec<usize> = match &config.columns {
        Some(c) => {
            if let Some(&bad) = c.iter().find(|&&j| j >= m.n_cols()) {
                return Err(Error::InvalidArgument(format!("column {bad} out of range")));
            }
            c.clone()
        }
        None => (0..m.n_cols()).collect(),
    };
    if base.is_empty() {
        return Err(Error::InvalidArgument("no feature columns selected".into()));
    }
    let means = data.mean_scores();
    let classes = data.classes();
    let mut predictions = vec![f64::NAN; data.len()];
    let mut results = Vec::with_capacity(folds.k);

    for fold in 0..folds.k {
        let (train, test) = folds.train_test_indices(fold);
        let cols = match config.top_k {
            Some(k) => {
                let rows = take_rows(&m.rows, &train, &base);
                let labels: Vec<bool> = train.iter().map(|&i| classes[i]).collect();
                let names: Vec<String> = base.iter().map(|&c| m.names[c].clone()).collect();
                let ranking = FeatureRanking::from_scores(&names, &fisher_scores(&rows, &labels)?)?;
                ranking.top_k_indices(k)?.into_iter().map(|j| base[j]).collect()
            }
            None => base.clone(),
        };
        let x_train = take_rows(&m.rows, &train, &cols);
        let y_mean: Vec<f64> = train.iter().map(|&i| means[i]).collect();
        let y_class: Vec<bool> = train.iter().map(|&i| classes[i]).collect();
        let model = fit_model(&config.model, &x_train, &y_mean, &y_class)?;

        let x_test = take_rows(&m.rows, &test, &cols);
        let scores = x_test
            .iter()
            .map(|x| model.predict_score(x))
            .collect::<Result<Vec<f64>>>()?;
        for (&i, &s) in test.iter().zip(&scores) {
            predictions[i] = s;
        }
        let t_mean: Vec<f64> = test.iter().map(|&i| means[i]).collect();
        let t_class: Vec<bool> = test.iter().map(|&i| classes[i]).collect();
        results.push(FoldResult {
            fold,
            n_train: train.len(),
            n_test: test.len(),
            features: cols.iter().map(|&c| m.names[c].clone()).collect(),
            metrics: compute_metrics(&scores, &t_mean, &t_class, config.threshold)?,
        });
    }

    let mean = Metrics::mean(&results.iter().map(|r| r.metrics).collect::<Vec<_>>())
        .ok_or_else(|| Error::InvalidArgument("no folds".into()))?;
    let errors = error_report(&m.ids, &predictions, &data.truths, config.threshold);
    Ok(CvReport {
        model: config.model.kind,
        k: folds.k,
        folds: results,
        mean,
        errors,
        predictions,
    })
}

/// Extract, fold and cross-validate a labeled corpus in one call.
pub fn cross_validate_corpus(
    corpus: &LabeledCorpus,
    schema: &FeatureSchema,
    lexicons: &Lexicons,
    tagger: &TaggerHandle,
    config: &CvConfig,
    k: usize,
    seed: u64,
) -> Result<CvReport> {
    let folds = make_folds(corpus, k, seed)?;
    let data = LabeledMatrix::extract(corpus, schema, lexicons, tagger)?;
    cross_validate(&data, &folds, config)
}
