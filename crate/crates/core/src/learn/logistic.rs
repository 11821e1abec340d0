use serde::{Deserialize, Serialize};

use super::{check_rows, Standardizer};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub l2: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            iterations: 500,
            l2: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub config: LogisticConfig,
}

impl LogisticModel {
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let z = self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
        sigmoid(z)
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean log-loss plus `l2/2 * |w|^2`, and its gradient with respect to
/// `(weights, intercept)`. The intercept is not penalized.
pub fn logistic_loss_and_gradient(
    rows: &[Vec<f64>],
    y: &[bool],
    weights: &[f64],
    intercept: f64,
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (row, &label) in rows.iter().zip(y) {
        let z = intercept + weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>();
        let t = if label { 1.0 } else { 0.0 };
        loss += softplus(z) - t * z;
        let r = sigmoid(z) - t;
        for (g, v) in grad.iter_mut().zip(row) {
            *g += r * v;
        }
        grad_b += r;
    }
    loss /= n;
    loss += 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    for (g, w) in grad.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (loss, grad, grad_b / n)
}

pub fn fit_logistic(rows: &[Vec<f64>], y: &[bool], config: &LogisticConfig) -> Result<LogisticModel> {
    fit_logistic_with_history(rows, y, config).map(|(m, _)| m)
}

/// Full-batch gradient descent from zero. Also returns the loss on the
/// standardized problem before every step and after the last one.
pub fn fit_logistic_with_history(
    rows: &[Vec<f64>],
    y: &[bool],
    config: &LogisticConfig,
) -> Result<(LogisticModel, Vec<f64>)> {
    let d = check_rows(rows, y.len())?;
    if y.iter().all(|&l| l) || y.iter().all(|&l| !l) {
        return Err(Error::SingleClass);
    }
    let scaler = Standardizer::fit(rows);
    let z: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().enumerate().map(|(j, &v)| scaler.apply(j, v)).collect())
        .collect();

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut history = Vec::with_capacity(config.iterations + 1);
    for _ in 0..config.iterations {
        let (loss, grad, grad_b) = logistic_loss_and_gradient(&z, y, &w, b, config.l2);
        history.push(loss);
        for (wj, g) in w.iter_mut().zip(&grad) {
            *wj -= config.learning_rate * g;
        }
        b -= config.learning_rate * grad_b;
    }
    history.push(logistic_loss_and_gradient(&z, y, &w, b, config.l2).0);

    let (weights, intercept) = scaler.unscale(&w, b);
    Ok((
        LogisticModel {
            weights,
            intercept,
            config: *config,
        },
        history,
    ))
}
