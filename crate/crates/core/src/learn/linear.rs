use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_rows, Standardizer};
use crate::{Error, Result};

/// Ridge strength used only for conditioning.
pub const LINEAR_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn predict_raw(&self, x: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Least squares with a tiny ridge, solved by normal equations on
/// standardized inputs. The intercept is not penalized.
pub fn fit_linear(rows: &[Vec<f64>], y: &[f64]) -> Result<LinearModel> {
    let d = check_rows(rows, y.len())?;
    let n = rows.len();
    let scaler = Standardizer::fit(rows);
    let y_mean = y.iter().sum::<f64>() / n as f64;

    let z = DMatrix::from_fn(n, d, |i, j| scaler.apply(j, rows[i][j]));
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
    let mut gram = z.transpose() * &z;
    for j in 0..d {
        gram[(j, j)] += LINEAR_RIDGE;
    }
    let rhs = z.transpose() * yc;
    let wz = match gram.clone().cholesky() {
        Some(c) => c.solve(&rhs),
        None => gram
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::InvalidArgument(format!("linear solve failed: {e}")))?,
    };

    let (weights, intercept) = scaler.unscale(wz.as_slice(), y_mean);
    if !intercept.is_finite() || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidArgument("linear fit produced non-finite weights".into()));
    }
    Ok(LinearModel { weights, intercept })
}
