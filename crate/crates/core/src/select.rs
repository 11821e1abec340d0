//! Fisher-score feature ranking and top-k selection.

use std::io::Write;

use rayon::prelude::*;

use crate::features::{FeatureMatrix, FeatureSchema};
use crate::{Error, Result};

/// Added to the within-class scatter so constant features score 0 instead of NaN.
pub const FISHER_EPSILON: f64 = 1e-12;

/// Divisor used for the per-class variances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceKind {
    /// `n_c - 1`, with variance 0 for a single-row class.
    #[default]
    Sample,
    /// `n_c`.
    Population,
}

/// Two-class Fisher score of every column of `rows` against `labels`.
pub fn fisher_scores(rows: &[Vec<f64>], labels: &[bool]) -> Result<Vec<f64>> {
    fisher_scores_with(rows, labels, VarianceKind::Sample)
}

pub fn fisher_scores_with(rows: &[Vec<f64>], labels: &[bool], kind: VarianceKind) -> Result<Vec<f64>> {
    if rows.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            got: labels.len(),
        });
    }
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("Fisher score needs at least 2 rows".into()));
    }
    let n1 = labels.iter().filter(|&&l| l).count();
    let n0 = labels.len() - n1;
    if n0 == 0 || n1 == 0 {
        return Err(Error::SingleClass);
    }
    let d = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.len(),
        });
    }

    let scores = (0..d)
        .into_par_iter()
        .map(|j| {
            let (mut s0, mut s1) = (0.0, 0.0);
            for (row, &l) in rows.iter().zip(labels) {
                if l {
                    s1 += row[j];
                } else {
                    s0 += row[j];
                }
            }
            let mu0 = s0 / n0 as f64;
            let mu1 = s1 / n1 as f64;
            let mu = (s0 + s1) / rows.len() as f64;
            let (mut ss0, mut ss1) = (0.0, 0.0);
            for (row, &l) in rows.iter().zip(labels) {
                if l {
                    ss1 += (row[j] - mu1).powi(2);
                } else {
                    ss0 += (row[j] - mu0).powi(2);
                }
            }
            let var = |ss: f64, n: usize| match kind {
                VarianceKind::Sample if n > 1 => ss / (n - 1) as f64,
                VarianceKind::Sample => 0.0,
                VarianceKind::Population => ss / n as f64,
            };
            let between = n0 as f64 * (mu0 - mu).powi(2) + n1 as f64 * (mu1 - mu).powi(2);
            let within = n0 as f64 * var(ss0, n0) + n1 as f64 * var(ss1, n1);
            between / (within + FISHER_EPSILON)
        })
        .collect();
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeature {
    /// Column index in the schema the ranking was computed over.
    pub index: usize,
    pub name: String,
    pub score: f64,
}

/// Features sorted by descending score, ties by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub entries: Vec<RankedFeature>,
}

impl FeatureRanking {
    pub fn from_scores(names: &[String], scores: &[f64]) -> Result<Self> {
        if names.len() != scores.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                got: scores.len(),
            });
        }
        let mut entries: Vec<RankedFeature> = names
            .iter()
            .zip(scores)
            .enumerate()
            .map(|(index, (name, &score))| RankedFeature {
                index,
                name: name.clone(),
                score,
            })
            .collect();
        entries.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.index.cmp(&b.index)));
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Column indices of the `k` best features, in ascending index order.
    pub fn top_k_indices(&self, k: usize) -> Result<Vec<usize>> {
        if k == 0 || k > self.entries.len() {
            return Err(Error::InvalidArgument(format!(
                "top-k must be in 1..={}, got {k}",
                self.entries.len()
            )));
        }
        let mut idx: Vec<usize> = self.entries[..k].iter().map(|e| e.index).collect();
        idx.sort_unstable();
        Ok(idx)
    }

    /// `rank,feature,score` with 1-based ranks.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["rank", "feature", "score"])?;
        for (rank, e) in self.entries.iter().enumerate() {
            w.write_record([(rank + 1).to_string(), e.name.clone(), e.score.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Rank every column of `matrix` by Fisher score against `labels`.
pub fn rank_features(matrix: &FeatureMatrix, labels: &[bool]) -> Result<FeatureRanking> {
    let scores = fisher_scores(&matrix.rows, labels)?;
    FeatureRanking::from_scores(&matrix.names, &scores)
}

/// Sub-schema of the `k` best features, keeping the original schema order.
pub fn select_top_k(ranking: &FeatureRanking, schema: &FeatureSchema, k: usize) -> Result<FeatureSchema> {
    if ranking.len() != schema.len() {
        return Err(Error::DimensionMismatch {
            expected: schema.len(),
            got: ranking.len(),
        });
    }
    Ok(schema.subset(&ranking.top_k_indices(k)?))
}
