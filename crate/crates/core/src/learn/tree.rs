use serde::{Deserialize, Serialize};

use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Sum of squared deviations from the node mean.
    #[default]
    Variance,
    /// Gini impurity with `y > 0.5` as the positive class.
    Gini,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// `None` grows until the other stopping rules apply.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub criterion: Criterion,
    /// Features examined per node; `None` means all of them.
    pub max_features: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_split: 2,
            criterion: Criterion::Variance,
            max_features: None,
        }
    }
}

/// `Split(feature, threshold, left, right)`: rows with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    Leaf(f64),
    Split(usize, f64, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub n_features: usize,
    /// Node 0 is the root.
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf(v) => return v,
                Node::Split(f, t, l, r) => i = if x[f] <= t { l } else { r },
            }
        }
    }

    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes.first()? {
            Node::Split(f, t, _, _) => Some((*f, *t)),
            Node::Leaf(_) => None,
        }
    }

    pub fn depth(&self) -> usize {
        let mut max = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((i, d)) = stack.pop() {
            max = max.max(d);
            if let Node::Split(_, _, l, r) = self.nodes[i] {
                stack.push((l, d + 1));
                stack.push((r, d + 1));
            }
        }
        max
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }
}

/// Impurity of a node times its size, from running sums.
fn weighted_impurity(criterion: Criterion, n: f64, sum: f64, sum_sq: f64) -> f64 {
    match criterion {
        Criterion::Variance => (sum_sq - sum * sum / n).max(0.0),
        // `sum` counts positives here.
        Criterion::Gini => {
            let neg = n - sum;
            n - (sum * sum + neg * neg) / n
        }
    }
}

fn target_stat(criterion: Criterion, y: f64) -> f64 {
    match criterion {
        Criterion::Variance => y,
        Criterion::Gini => {
            if y > 0.5 {
                1.0
            } else {
                0.0
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Midpoint of two adjacent distinct values, kept strictly below `b`.
pub(crate) fn midpoint(a: f64, b: f64) -> f64 {
    let mid = a + (b - a) / 2.0;
    if mid >= b {
        a
    } else {
        mid
    }
}

/// Best threshold on one feature over the rows in `idx`.
fn best_threshold(
    rows: &[Vec<f64>],
    y: &[f64],
    idx: &[usize],
    feature: usize,
    criterion: Criterion,
    parent: f64,
    buf: &mut Vec<(f64, f64)>,
) -> Option<Candidate> {
    buf.clear();
    buf.extend(idx.iter().map(|&i| (rows[i][feature], target_stat(criterion, y[i]))));
    buf.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let n = buf.len() as f64;
    let total: f64 = buf.iter().map(|p| p.1).sum();
    let total_sq: f64 = buf.iter().map(|p| p.1 * p.1).sum();

    let mut best: Option<Candidate> = None;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for k in 0..buf.len() - 1 {
        sum += buf[k].1;
        sum_sq += buf[k].1 * buf[k].1;
        if buf[k].0 == buf[k + 1].0 {
            continue;
        }
        let nl = (k + 1) as f64;
        let nr = n - nl;
        let child = weighted_impurity(criterion, nl, sum, sum_sq)
            + weighted_impurity(criterion, nr, total - sum, total_sq - sum_sq);
        let gain = parent - child;
        if best.map_or(true, |b| gain > b.gain) {
            best = Some(Candidate {
                feature,
                threshold: midpoint(buf[k].0, buf[k + 1].0),
                gain,
            });
        }
    }
    best
}

pub fn fit_tree(rows: &[Vec<f64>], y: &[f64], config: &TreeConfig, rng: &mut SplitMix64) -> Tree {
    let idx: Vec<usize> = (0..rows.len()).collect();
    fit_tree_on(rows, y, &idx, config, rng)
}

/// Grow a tree on the (possibly repeated) row indices in `sample`.
pub fn fit_tree_on(
    rows: &[Vec<f64>],
    y: &[f64],
    sample: &[usize],
    config: &TreeConfig,
    rng: &mut SplitMix64,
) -> Tree {
    let d = rows.first().map_or(0, Vec::len);
    let mut nodes = vec![Node::Leaf(0.0)];
    let mut buf = Vec::with_capacity(sample.len());
    let mut features: Vec<usize> = (0..d).collect();
    let per_node = config.max_features.map_or(d, |m| m.clamp(1, d.max(1)));

    // (node slot, rows reaching it, depth); left children are grown first.
    let mut stack = vec![(0usize, sample.to_vec(), 0usize)];
    while let Some((slot, idx, depth)) = stack.pop() {
        let n = idx.len();
        let mean = if n == 0 {
            0.0
        } else {
            idx.iter().map(|&i| target_stat(config.criterion, y[i])).sum::<f64>() / n as f64
        };
        let (lo, hi) = idx.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            (lo.min(y[i]), hi.max(y[i]))
        });
        if n > 0 && lo == hi {
            nodes[slot] = Node::Leaf(target_stat(config.criterion, lo));
            continue;
        }
        if n == 0 || config.max_depth.is_some_and(|m| depth >= m) || n < config.min_samples_split.max(2) {
            nodes[slot] = Node::Leaf(mean);
            continue;
        }

        let (sum, sum_sq) = idx.iter().fold((0.0, 0.0), |(s, q), &i| {
            let t = target_stat(config.criterion, y[i]);
            (s + t, q + t * t)
        });
        let parent = weighted_impurity(config.criterion, n as f64, sum, sum_sq);

        let mut best: Option<Candidate> = None;
        let mut consider = |f: usize, best: &mut Option<Candidate>| {
            if let Some(c) = best_threshold(rows, y, &idx, f, config.criterion, parent, &mut buf) {
                if best.map_or(true, |b| c.gain > b.gain) {
                    *best = Some(c);
                }
            }
        };
        if per_node >= d {
            for f in 0..d {
                consider(f, &mut best);
            }
        } else {
            // Sample without replacement; fall through to unsampled features
            // only when none of the drawn ones can split.
            rng.shuffle(&mut features);
            let mut drawn = features[..per_node].to_vec();
            drawn.sort_unstable();
            for &f in &drawn {
                consider(f, &mut best);
            }
            if best.is_none() {
                for &f in &features[per_node..] {
                    consider(f, &mut best);
                    if best.is_some() {
                        break;
                    }
                }
            }
        }

        let Some(split) = best else {
            nodes[slot] = Node::Leaf(mean);
            continue;
        };
        let (left, right): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| rows[i][split.feature] <= split.threshold);
        let l = nodes.len();
        nodes.push(Node::Leaf(0.0));
        nodes.push(Node::Leaf(0.0));
        nodes[slot] = Node::Split(split.feature, split.threshold, l, l + 1);
        stack.push((l + 1, right, depth + 1));
        stack.push((l, left, depth + 1));
    }
    Tree { n_features: d, nodes }
}
