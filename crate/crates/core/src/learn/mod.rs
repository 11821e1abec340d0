//! The four trainable models, their shared prediction interface and the
//! model file format.

mod forest;
mod linear;
mod logistic;
mod persist;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use forest::{fit_forest, Forest, ForestConfig, ForestMode, MaxFeatures};
pub use linear::{fit_linear, LinearModel, LINEAR_RIDGE};
pub use logistic::{
    fit_logistic, fit_logistic_with_history, logistic_loss_and_gradient, sigmoid, LogisticConfig,
    LogisticModel,
};
pub use persist::{TrainedModel, MODEL_FORMAT, MODEL_FORMAT_VERSION};
pub use tree::{fit_tree, fit_tree_on, Criterion, Node, Tree, TreeConfig};

use crate::corpus::TruthClass;
use crate::{Error, Result};

/// Floor applied to per-column standard deviations.
pub const STD_FLOOR: f64 = 1e-9;

/// Column means and population standard deviations of a training matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for r in rows {
            for ((s, v), m) in var.iter_mut().zip(r).zip(&mean) {
                *s += (v - m).powi(2);
            }
        }
        let std = var.into_iter().map(|s| (s / n).sqrt().max(STD_FLOOR)).collect();
        Self { mean, std }
    }

    pub fn apply(&self, j: usize, v: f64) -> f64 {
        (v - self.mean[j]) / self.std[j]
    }

    /// Map weights fitted on standardized columns back to raw columns.
    pub fn unscale(&self, w: &[f64], intercept: f64) -> (Vec<f64>, f64) {
        let weights: Vec<f64> = w.iter().zip(&self.std).map(|(w, s)| w / s).collect();
        let shift: f64 = weights.iter().zip(&self.mean).map(|(w, m)| w * m).sum();
        (weights, intercept - shift)
    }
}

/// Checks for a non-empty rectangular matrix matching `n_targets`; returns the width.
pub(crate) fn check_rows(rows: &[Vec<f64>], n_targets: usize) -> Result<usize> {
    if rows.len() != n_targets {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            got: n_targets,
        });
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no training rows".into()));
    }
    let d = rows[0].len();
    match rows.iter().find(|r| r.len() != d) {
        Some(r) => Err(Error::DimensionMismatch {
            expected: d,
            got: r.len(),
        }),
        None => Ok(d),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "linear")]
    Linear,
    #[serde(rename = "logistic")]
    Logistic,
    #[serde(rename = "rf-reg")]
    ForestRegression,
    #[serde(rename = "rf-clf")]
    ForestClassifier,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Linear,
        ModelKind::Logistic,
        ModelKind::ForestRegression,
        ModelKind::ForestClassifier,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Linear => "linear",
            ModelKind::Logistic => "logistic",
            ModelKind::ForestRegression => "rf-reg",
            ModelKind::ForestClassifier => "rf-clf",
        }
    }

    /// Classifiers train on the binary class, regressors on the mean judgment.
    pub fn is_classifier(self) -> bool {
        matches!(self, ModelKind::Logistic | ModelKind::ForestClassifier)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ModelKind::Linear),
            "logistic" => Ok(ModelKind::Logistic),
            "rf-reg" | "forest-regression" => Ok(ModelKind::ForestRegression),
            "rf-clf" | "forest-classifier" => Ok(ModelKind::ForestClassifier),
            other => Err(Error::InvalidArgument(format!(
                "unknown model kind \"{other}\" (expected linear, logistic, rf-reg or rf-clf)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub logistic: LogisticConfig,
    /// Used by both forest kinds; the mode follows `kind`.
    pub forest: ForestConfig,
}

impl ModelConfig {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            logistic: LogisticConfig::default(),
            forest: ForestConfig::default(),
        }
    }

    pub fn forest_config(&self) -> ForestConfig {
        ForestConfig {
            mode: if self.kind == ModelKind::ForestClassifier {
                ForestMode::Classification
            } else {
                ForestMode::Regression
            },
            ..self.forest
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Linear(LinearModel),
    Logistic(LogisticModel),
    Tree(Tree),
    Forest(Forest),
}

impl Model {
    pub fn n_features(&self) -> usize {
        match self {
            Model::Linear(m) => m.weights.len(),
            Model::Logistic(m) => m.weights.len(),
            Model::Tree(t) => t.n_features,
            Model::Forest(f) => f.n_features(),
        }
    }

    /// Unclipped output: a regression value or a positive-class probability.
    pub fn predict_raw(&self, x: &[f64]) -> Result<f64> {
        let d = self.n_features();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
        Ok(match self {
            Model::Linear(m) => m.predict_raw(x),
            Model::Logistic(m) => m.predict_proba(x),
            Model::Tree(t) => t.predict(x),
            Model::Forest(f) => f.predict(x),
        })
    }

    /// Clickbait score in `[0, 1]`.
    pub fn predict_score(&self, x: &[f64]) -> Result<f64> {
        self.predict_raw(x).map(clip_score)
    }

    pub fn predict_class(&self, x: &[f64], threshold: f64) -> Result<TruthClass> {
        self.predict_score(x).map(|s| classify(s, threshold))
    }
}

pub fn clip_score(s: f64) -> f64 {
    if s.is_nan() {
        0.0
    } else {
        s.clamp(0.0, 1.0)
    }
}

/// Clickbait iff `score >= threshold`.
pub fn classify(score: f64, threshold: f64) -> TruthClass {
    if score >= threshold {
        TruthClass::Clickbait
    } else {
        TruthClass::NoClickbait
    }
}

/// Train `config.kind` on `rows`; regressors use `mean_scores`, classifiers `classes`.
pub fn fit_model(
    config: &ModelConfig,
    rows: &[Vec<f64>],
    mean_scores: &[f64],
    classes: &[bool],
) -> Result<Model> {
    check_rows(rows, mean_scores.len())?;
    check_rows(rows, classes.len())?;
    let labels: Vec<f64> = classes.iter().map(|&c| if c { 1.0 } else { 0.0 }).collect();
    Ok(match config.kind {
        ModelKind::Linear => Model::Linear(fit_linear(rows, mean_scores)?),
        ModelKind::Logistic => Model::Logistic(fit_logistic(rows, classes, &config.logistic)?),
        ModelKind::ForestRegression => Model::Forest(fit_forest(rows, mean_scores, &config.forest_config())),
        ModelKind::ForestClassifier => {
            if classes.iter().all(|&c| c) || classes.iter().all(|&c| !c) {
                return Err(Error::SingleClass);
            }
            Model::Forest(fit_forest(rows, &labels, &config.forest_config()))
        }
    })
}
