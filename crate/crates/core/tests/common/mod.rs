//! Brute-force oracles, fixture helpers and invariant checks shared by the
//! integration, property and acceptance targets.
#![allow(dead_code)]

use std::path::PathBuf;

use clickbait_core::corpus::{make_folds, read_corpus, LabeledCorpus};
use clickbait_core::eval::{auc, compute_metrics};
use clickbait_core::features::{extract_matrix, FeatureSchema};
use clickbait_core::learn::{
    fit_forest, fit_logistic_with_history, fit_tree, logistic_loss_and_gradient, Criterion,
    ForestConfig, LogisticConfig, MaxFeatures, Tree, TreeConfig,
};
use clickbait_core::rng::SplitMix64;
use clickbait_core::select::{fisher_scores, fisher_scores_with, FeatureRanking, VarianceKind};
use clickbait_core::textkit::{tokenize, Lexicons, TaggerHandle};

pub type Check = Result<(), String>;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn fixture_corpus() -> LabeledCorpus {
    let dir = fixture_dir();
    read_corpus(&dir.join("instances.jsonl"), &dir.join("truth.jsonl"))
        .expect("fixture corpus loads")
        .0
}

// ---------------------------------------------------------------- oracles

/// Fisher score from per-class value lists, summed directly.
pub fn brute_fisher(rows: &[Vec<f64>], labels: &[bool], population: bool) -> Vec<f64> {
    let d = rows[0].len();
    (0..d)
        .map(|j| {
            let class = |c: bool| -> Vec<f64> {
                rows.iter().zip(labels).filter(|(_, &l)| l == c).map(|(r, _)| r[j]).collect()
            };
            let all: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let var = |v: &[f64]| {
                let m = mean(v);
                let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
                if population {
                    ss / v.len() as f64
                } else if v.len() > 1 {
                    ss / (v.len() - 1) as f64
                } else {
                    0.0
                }
            };
            let (c0, c1) = (class(false), class(true));
            let mu = mean(&all);
            let num = c0.len() as f64 * (mean(&c0) - mu).powi(2) + c1.len() as f64 * (mean(&c1) - mu).powi(2);
            let den = c0.len() as f64 * var(&c0) + c1.len() as f64 * var(&c1);
            num / (den + 1e-12)
        })
        .collect()
}

/// AUC by comparing every positive with every negative.
pub fn pairwise_auc(scores: &[f64], classes: &[bool]) -> Option<f64> {
    let mut wins = 0.0;
    let mut pairs = 0usize;
    for (i, &ci) in classes.iter().enumerate() {
        if !ci {
            continue;
        }
        for (j, &cj) in classes.iter().enumerate() {
            if cj {
                continue;
            }
            pairs += 1;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    (pairs > 0).then(|| wins / pairs as f64)
}

/// Central-difference gradient of the regularized logistic loss.
pub fn finite_difference_gradient(
    rows: &[Vec<f64>],
    y: &[bool],
    w: &[f64],
    b: f64,
    l2: f64,
    h: f64,
) -> (Vec<f64>, f64) {
    let loss = |w: &[f64], b: f64| logistic_loss_and_gradient(rows, y, w, b, l2).0;
    let grad = (0..w.len())
        .map(|j| {
            let mut up = w.to_vec();
            let mut dn = w.to_vec();
            up[j] += h;
            dn[j] -= h;
            (loss(&up, b) - loss(&dn, b)) / (2.0 * h)
        })
        .collect();
    (grad, (loss(w, b + h) - loss(w, b - h)) / (2.0 * h))
}

fn impurity(values: &[f64], criterion: Criterion) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    match criterion {
        Criterion::Variance => {
            let m = values.iter().sum::<f64>() / n;
            values.iter().map(|v| (v - m) * (v - m)).sum()
        }
        Criterion::Gini => {
            let p = values.iter().filter(|&&v| v > 0.5).count() as f64 / n;
            n * (1.0 - p * p - (1.0 - p) * (1.0 - p))
        }
    }
}

/// Impurity decrease of splitting all rows on `x[feature] <= threshold`.
pub fn split_gain(rows: &[Vec<f64>], y: &[f64], feature: usize, threshold: f64, criterion: Criterion) -> f64 {
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (r, &v) in rows.iter().zip(y) {
        if r[feature] <= threshold {
            left.push(v);
        } else {
            right.push(v);
        }
    }
    impurity(y, criterion) - impurity(&left, criterion) - impurity(&right, criterion)
}

/// Best `(feature, threshold, gain)` over every midpoint of every feature.
pub fn brute_best_split(rows: &[Vec<f64>], y: &[f64], criterion: Criterion) -> Option<(usize, f64, f64)> {
    let d = rows[0].len();
    let mut best: Option<(usize, f64, f64)> = None;
    for f in 0..d {
        let mut vals: Vec<f64> = rows.iter().map(|r| r[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let g = split_gain(rows, y, f, t, criterion);
            if best.map_or(true, |b| g > b.2) {
                best = Some((f, t, g));
            }
        }
    }
    best
}

// ---------------------------------------------------------------- inputs

/// Seeded generator of small random datasets.
pub struct Gen(pub SplitMix64);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen(SplitMix64::new(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.0.below(hi - lo + 1)
    }

    pub fn matrix(&mut self, n: usize, d: usize) -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..d).map(|_| self.range(-5.0, 5.0)).collect()).collect()
    }

    /// Values on a coarse grid, so ties are common.
    pub fn grid_matrix(&mut self, n: usize, d: usize, levels: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| (0..d).map(|_| self.int(0, levels - 1) as f64).collect())
            .collect()
    }

    /// Labels with at least one of each class (`n >= 2`).
    pub fn labels(&mut self, n: usize) -> Vec<bool> {
        let mut l: Vec<bool> = (0..n).map(|_| self.0.next_u64() & 1 == 1).collect();
        l[0] = true;
        l[n - 1] = false;
        l
    }
}

// ---------------------------------------------------------------- checks

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

pub fn check_fisher_oracle(rows: &[Vec<f64>], labels: &[bool]) -> Check {
    let fast = fisher_scores(rows, labels).map_err(|e| e.to_string())?;
    let slow = brute_fisher(rows, labels, false);
    for (j, (a, b)) in fast.iter().zip(&slow).enumerate() {
        if !close(*a, *b, 1e-9) {
            return Err(format!("feature {j}: {a} vs brute force {b}"));
        }
    }
    Ok(())
}

fn ranking_order(rows: &[Vec<f64>], labels: &[bool]) -> Vec<usize> {
    let names: Vec<String> = (0..rows[0].len()).map(|j| j.to_string()).collect();
    let scores = fisher_scores(rows, labels).expect("two classes");
    FeatureRanking::from_scores(&names, &scores)
        .expect("lengths match")
        .entries
        .iter()
        .map(|e| e.index)
        .collect()
}

/// Score-distinct columns keep their relative order after each column is
/// rescaled and shifted.
pub fn check_fisher_affine(rows: &[Vec<f64>], labels: &[bool], scale: &[f64], shift: &[f64]) -> Check {
    let before = fisher_scores(rows, labels).map_err(|e| e.to_string())?;
    let moved: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().enumerate().map(|(j, v)| v * scale[j] + shift[j]).collect())
        .collect();
    let after = fisher_scores(&moved, labels).map_err(|e| e.to_string())?;
    for (j, (a, b)) in before.iter().zip(&after).enumerate() {
        if !close(*a, *b, 1e-6) {
            return Err(format!("feature {j}: score moved from {a} to {b}"));
        }
    }
    let (o1, o2) = (ranking_order(rows, labels), ranking_order(&moved, labels));
    for w in o1.windows(2) {
        let (p, q) = (w[0], w[1]);
        let gap = (before[p] - before[q]).abs();
        if gap > 1e-6 * before[p].abs().max(1.0) {
            let pos = |x: usize| o2.iter().position(|&i| i == x).unwrap();
            if pos(p) > pos(q) {
                return Err(format!("features {p} and {q} swapped order"));
            }
        }
    }
    Ok(())
}

pub fn check_fisher_duplication(rows: &[Vec<f64>], labels: &[bool]) -> Check {
    let once = fisher_scores_with(rows, labels, VarianceKind::Population).map_err(|e| e.to_string())?;
    let rows2: Vec<Vec<f64>> = rows.iter().chain(rows).cloned().collect();
    let labels2: Vec<bool> = labels.iter().chain(labels).copied().collect();
    let twice = fisher_scores_with(&rows2, &labels2, VarianceKind::Population).map_err(|e| e.to_string())?;
    for (j, (a, b)) in once.iter().zip(&twice).enumerate() {
        if !close(*a, *b, 1e-6) {
            return Err(format!("feature {j}: {a} before duplication, {b} after"));
        }
    }
    Ok(())
}

pub fn check_auc_oracle(scores: &[f64], classes: &[bool]) -> Check {
    let (a, b) = (auc(scores, classes), pairwise_auc(scores, classes));
    match (a, b) {
        (Some(a), Some(b)) if (a - b).abs() <= 1e-12 => Ok(()),
        (None, None) => Ok(()),
        _ => Err(format!("rank AUC {a:?} vs pairwise {b:?}")),
    }
}

pub fn check_auc_monotone(scores: &[f64], classes: &[bool]) -> Check {
    let moved: Vec<f64> = scores.iter().map(|s| 3.0 * s.powi(3) + s + 7.0).collect();
    if auc(scores, classes) != auc(&moved, classes) {
        return Err("AUC changed under an increasing transform".into());
    }
    Ok(())
}

pub fn check_metric_identities(scores: &[f64], targets: &[f64], classes: &[bool], threshold: f64) -> Check {
    let m = compute_metrics(scores, targets, classes, threshold).map_err(|e| e.to_string())?;
    let wrong = scores
        .iter()
        .zip(classes)
        .filter(|(s, &c)| (**s >= threshold) != c)
        .count() as f64
        / scores.len() as f64;
    if (m.accuracy + wrong - 1.0).abs() > 1e-12 {
        return Err(format!("accuracy {} plus error rate {wrong} != 1", m.accuracy));
    }
    let tp = scores.iter().zip(classes).filter(|(s, &c)| **s >= threshold && c).count();
    let predicted = scores.iter().filter(|&&s| s >= threshold).count();
    let actual = classes.iter().filter(|&&c| c).count();
    if predicted > 0 && actual > 0 {
        let (p, r) = (tp as f64 / predicted as f64, tp as f64 / actual as f64);
        if m.f1 < p.min(r) - 1e-12 || m.f1 > p.max(r) + 1e-12 {
            return Err(format!("F1 {} outside [{}, {}]", m.f1, p.min(r), p.max(r)));
        }
    }
    Ok(())
}

pub fn check_logistic_gradient(rows: &[Vec<f64>], y: &[bool], w: &[f64], b: f64, l2: f64) -> Check {
    let (_, grad, grad_b) = logistic_loss_and_gradient(rows, y, w, b, l2);
    let (fd, fd_b) = finite_difference_gradient(rows, y, w, b, l2, 1e-5);
    let diff: f64 = grad.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>() + (grad_b - fd_b).powi(2);
    let norm: f64 = grad.iter().map(|a| a * a).sum::<f64>() + grad_b * grad_b;
    let rel = diff.sqrt() / norm.sqrt().max(1e-6);
    if rel < 1e-4 {
        Ok(())
    } else {
        Err(format!("gradient relative error {rel}"))
    }
}

pub fn check_logistic_descent(rows: &[Vec<f64>], y: &[bool]) -> Check {
    let config = LogisticConfig {
        iterations: 100,
        ..LogisticConfig::default()
    };
    let (_, history) = fit_logistic_with_history(rows, y, &config).map_err(|e| e.to_string())?;
    for (i, w) in history.windows(2).enumerate() {
        if w[1] > w[0] + 1e-12 {
            return Err(format!("loss rose at step {i}: {} -> {}", w[0], w[1]));
        }
    }
    Ok(())
}

fn node_gain_at_root(tree: &Tree, rows: &[Vec<f64>], y: &[f64], criterion: Criterion) -> Option<f64> {
    tree.root_split().map(|(f, t)| split_gain(rows, y, f, t, criterion))
}

pub fn check_root_split(rows: &[Vec<f64>], y: &[f64], criterion: Criterion) -> Check {
    let config = TreeConfig {
        max_depth: Some(1),
        criterion,
        ..TreeConfig::default()
    };
    let tree = fit_tree(rows, y, &config, &mut SplitMix64::new(0));
    let pure = y.iter().all(|v| *v == y[0]);
    match (brute_best_split(rows, y, criterion), node_gain_at_root(&tree, rows, y, criterion)) {
        (None, None) => Ok(()),
        (Some(_), None) if pure => Ok(()),
        (Some((_, _, best)), Some(got)) if (best - got).abs() <= 1e-9 * best.abs().max(1.0) => Ok(()),
        (brute, got) => Err(format!("brute force best {brute:?}, tree root gain {got:?}")),
    }
}

/// Targets are a function of the rows, so every training row is recoverable.
pub fn check_tree_interpolates(rows: &[Vec<f64>], y: &[f64]) -> Check {
    let tree = fit_tree(rows, y, &TreeConfig::default(), &mut SplitMix64::new(0));
    for (i, (r, v)) in rows.iter().zip(y).enumerate() {
        let p = tree.predict(r);
        if p != *v {
            return Err(format!("row {i}: predicted {p}, target {v}"));
        }
    }
    Ok(())
}

pub fn check_forest_equals_tree(rows: &[Vec<f64>], y: &[f64], max_depth: Option<usize>) -> Check {
    let config = ForestConfig {
        n_trees: 1,
        bootstrap: false,
        max_features: MaxFeatures::All,
        max_depth,
        ..ForestConfig::default()
    };
    let forest = fit_forest(rows, y, &config);
    let tree = fit_tree(rows, y, &config.tree_config(rows[0].len()), &mut SplitMix64::new(0));
    for r in rows {
        if forest.predict(r) != tree.predict(r) {
            return Err("single-tree forest disagrees with the tree".into());
        }
    }
    Ok(())
}

pub fn check_forest_mean_and_range(rows: &[Vec<f64>], y: &[f64], probes: &[Vec<f64>], seed: u64) -> Check {
    let config = ForestConfig {
        n_trees: 7,
        max_depth: Some(6),
        seed,
        ..ForestConfig::default()
    };
    let forest = fit_forest(rows, y, &config);
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for x in probes {
        let p = forest.predict(x);
        let mean = forest.trees.iter().map(|t| t.predict(x)).sum::<f64>() / forest.trees.len() as f64;
        if (p - mean).abs() > 1e-12 {
            return Err(format!("forest output {p} is not the tree mean {mean}"));
        }
        if p < lo || p > hi {
            return Err(format!("forest output {p} outside [{lo}, {hi}]"));
        }
    }
    let again = fit_forest(rows, y, &config);
    if serde_json::to_string(&again).unwrap() != serde_json::to_string(&forest).unwrap() {
        return Err("same seed produced different forests".into());
    }
    Ok(())
}

pub fn check_tree_depth(rows: &[Vec<f64>], y: &[f64], max_depth: usize) -> Check {
    let config = TreeConfig {
        max_depth: Some(max_depth),
        ..TreeConfig::default()
    };
    let tree = fit_tree(rows, y, &config, &mut SplitMix64::new(0));
    if tree.depth() > max_depth {
        return Err(format!("depth {} exceeds {max_depth}", tree.depth()));
    }
    Ok(())
}

/// Every record is tested exactly once and never trained on in its own fold.
pub fn check_fold_partition(corpus: &LabeledCorpus, k: usize, seed: u64) -> Check {
    let folds = make_folds(corpus, k, seed).map_err(|e| e.to_string())?;
    let ids: Vec<&str> = corpus.ids().collect();
    let mut tested = vec![0usize; ids.len()];
    for f in 0..k {
        let (train, test) = folds.train_test_indices(f);
        if train.len() + test.len() != ids.len() {
            return Err(format!("fold {f} does not cover the corpus"));
        }
        let train_ids: std::collections::HashSet<&str> = train.iter().map(|&i| ids[i]).collect();
        if let Some(&i) = test.iter().find(|&&i| train_ids.contains(ids[i])) {
            return Err(format!("record {} in both train and test of fold {f}", ids[i]));
        }
        for &i in &test {
            tested[i] += 1;
        }
    }
    if tested.iter().any(|&c| c != 1) {
        return Err("some record is not tested exactly once".into());
    }
    let sizes = folds.fold_sizes();
    let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
    if max - min > 1 {
        return Err(format!("unbalanced fold sizes {sizes:?}"));
    }
    if make_folds(corpus, k, seed).map_err(|e| e.to_string())?.by_index() != folds.by_index() {
        return Err("fold assignment is not reproducible".into());
    }
    Ok(())
}

// ---------------------------------------------------------------- golden files

pub fn tokens_golden_text(corpus: &LabeledCorpus) -> String {
    let mut out = String::new();
    for inst in corpus.instances() {
        out.push_str(&inst.id);
        for t in tokenize(&inst.post_text).iter() {
            out.push('\t');
            out.push_str(t);
        }
        out.push('\n');
    }
    out
}

pub fn features_golden_csv(corpus: &LabeledCorpus) -> String {
    let m = extract_matrix(
        corpus.instances(),
        &FeatureSchema::bundled(),
        &Lexicons::bundled(),
        &TaggerHandle::default(),
    );
    let mut out = Vec::new();
    m.write_csv(&mut out).expect("CSV writes to memory");
    String::from_utf8(out).expect("CSV is UTF-8")
}

/// Compare against a golden file; with `UPDATE_GOLDEN=1` the file is rewritten.
pub fn check_golden(name: &str, actual: &str) -> Check {
    let path = fixture_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .map_or_else(|| "length".to_string(), |i| format!("line {}", i + 1));
        Err(format!("{name} differs at {line}"))
    }
}
