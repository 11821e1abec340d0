use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{fit_tree_on, Criterion, Tree, TreeConfig};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ForestMode {
    #[default]
    Regression,
    Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `ceil(sqrt(d))`.
    #[default]
    Sqrt,
    All,
    Fixed(usize),
}

impl MaxFeatures {
    pub fn resolve(self, d: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => (d as f64).sqrt().ceil() as usize,
            MaxFeatures::All => d,
            MaxFeatures::Fixed(m) => m.min(d),
        }
        .max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub seed: u64,
    pub mode: ForestMode,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 400,
            max_depth: Some(20),
            min_samples_split: 2,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            seed: 42,
            mode: ForestMode::Regression,
        }
    }
}

impl ForestConfig {
    pub fn tree_config(&self, d: usize) -> TreeConfig {
        TreeConfig {
            max_depth: self.max_depth,
            min_samples_split: self.min_samples_split,
            criterion: match self.mode {
                ForestMode::Regression => Criterion::Variance,
                ForestMode::Classification => Criterion::Gini,
            },
            max_features: Some(self.max_features.resolve(d)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub config: ForestConfig,
    pub trees: Vec<Tree>,
}

impl Forest {
    /// Mean of the tree outputs; for classification that is the mean
    /// positive-class fraction. Clamped to the outputs' range so rounding
    /// never leaves it.
    pub fn predict(&self, x: &[f64]) -> f64 {
        let (mut sum, mut lo, mut hi) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
        for t in &self.trees {
            let v = t.predict(x);
            sum += v;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (sum / self.trees.len() as f64).clamp(lo, hi)
    }

    pub fn n_features(&self) -> usize {
        self.trees.first().map_or(0, |t| t.n_features)
    }
}

/// Tree seeds are drawn in order from `SplitMix64(config.seed)`; each tree
/// then owns its generator, so results do not depend on thread scheduling.
pub fn fit_forest(rows: &[Vec<f64>], y: &[f64], config: &ForestConfig) -> Forest {
    let n = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    let tree_config = config.tree_config(d);
    let mut master = SplitMix64::new(config.seed);
    let seeds: Vec<u64> = (0..config.n_trees).map(|_| master.next_u64()).collect();
    let trees = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = SplitMix64::new(s);
            let sample: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.below(n)).collect()
            } else {
                (0..n).collect()
            };
            fit_tree_on(rows, y, &sample, &tree_config, &mut rng)
        })
        .collect();
    Forest {
        config: *config,
        trees,
    }
}
