use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use clickbait_core::corpus::{
    make_folds, open_file, read_corpus, read_instances_file, read_truth_file, split_corpus,
    LabeledCorpus, TruthRecord,
};
use clickbait_core::eval::{
    compute_metrics, cross_validate, error_report, CvConfig, ErrorReport, LabeledMatrix, Metrics,
};
use clickbait_core::features::{extract_features, extract_matrix, FeatureMatrix, FeatureSchema};
use clickbait_core::learn::{fit_model, ModelConfig, TrainedModel};
use clickbait_core::select::rank_features;
use clickbait_core::textkit::{Lexicons, TaggerHandle};
use clickbait_core::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// One line of challenge-format predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    #[serde(rename = "clickbaitScore")]
    pub clickbait_score: f64,
}

struct Resources {
    schema: FeatureSchema,
    lexicons: Lexicons,
    tagger: TaggerHandle,
}

impl Resources {
    fn load(cfg: &RunConfig) -> Result<Self> {
        Ok(Self {
            schema: match &cfg.schema {
                Some(p) => FeatureSchema::from_path(p)?,
                None => FeatureSchema::bundled(),
            },
            lexicons: match &cfg.lexicons {
                Some(dir) => Lexicons::from_dir(dir)?,
                None => Lexicons::bundled(),
            },
            tagger: TaggerHandle::load(cfg.tagger.as_deref())?,
        })
    }

    fn matrix(&self, corpus: &LabeledCorpus) -> FeatureMatrix {
        extract_matrix(corpus.instances(), &self.schema, &self.lexicons, &self.tagger)
    }
}

fn with_output<F>(out: Option<&Path>, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn model_config(cfg: &RunConfig) -> ModelConfig {
    let mut m = ModelConfig::new(cfg.model_kind);
    m.forest.n_trees = cfg.trees;
    m.forest.max_depth = Some(cfg.max_depth);
    m.forest.seed = cfg.seed;
    m
}

fn load_corpus(cfg: &RunConfig) -> Result<LabeledCorpus> {
    let (corpus, off_scale) = read_corpus(
        cfg.require(&cfg.instances, "instances")?,
        cfg.require(&cfg.truth, "truth")?,
    )?;
    if off_scale > 0 {
        eprintln!("warning: {off_scale} judgments off the 0/0.3/0.66/1 scale kept as given");
    }
    Ok(corpus)
}

fn training_part(cfg: &RunConfig, corpus: LabeledCorpus) -> Result<LabeledCorpus> {
    if cfg.train_fraction >= 1.0 {
        return Ok(corpus);
    }
    Ok(split_corpus(&corpus, cfg.train_fraction, cfg.seed)?.0)
}

/// Columns eligible for selection: one group or the whole schema.
fn base_columns(cfg: &RunConfig, schema: &FeatureSchema) -> Vec<usize> {
    match cfg.group {
        Some(g) => schema.group_indices(g),
        None => (0..schema.len()).collect(),
    }
}

pub fn extract(cfg: &RunConfig) -> Result<()> {
    let res = Resources::load(cfg)?;
    let instances = read_instances_file(cfg.require(&cfg.instances, "instances")?)?;
    let matrix = extract_matrix(&instances, &res.schema, &res.lexicons, &res.tagger);
    with_output(cfg.out.as_deref(), |w| matrix.write_csv(w))?;
    eprintln!("extracted {} rows x {} features", matrix.n_rows(), matrix.n_cols());
    Ok(())
}

fn labels(corpus: &LabeledCorpus) -> Vec<bool> {
    corpus.truths().map(|t| t.truth_class.is_clickbait()).collect()
}

pub fn rank(cfg: &RunConfig) -> Result<()> {
    let res = Resources::load(cfg)?;
    let mut corpus = load_corpus(cfg)?;
    if !cfg.full_data {
        corpus = training_part(cfg, corpus)?;
    }
    let matrix = res.matrix(&corpus).select_columns(&base_columns(cfg, &res.schema));
    let ranking = rank_features(&matrix, &labels(&corpus))?;
    with_output(cfg.out.as_deref(), |w| ranking.write_csv(w))
}

pub fn train(cfg: &RunConfig) -> Result<()> {
    let out = cfg.require(&cfg.out, "out")?;
    let res = Resources::load(cfg)?;
    let corpus = training_part(cfg, load_corpus(cfg)?)?;
    let base = base_columns(cfg, &res.schema);
    let full = res.matrix(&corpus).select_columns(&base);
    let classes = labels(&corpus);

    let columns: Vec<usize> = if cfg.top_k == 0 || cfg.top_k >= base.len() {
        (0..base.len()).collect()
    } else {
        rank_features(&full, &classes)?.top_k_indices(cfg.top_k)?
    };
    let matrix = full.select_columns(&columns);
    let means: Vec<f64> = corpus.truths().map(|t| t.mean_score).collect();
    let config = model_config(cfg);
    let model = fit_model(&config, &matrix.rows, &means, &classes)?;
    let trained = TrainedModel {
        config,
        schema_checksum: res.schema.checksum(),
        features: matrix.names.clone(),
        model,
    };
    let mut w = BufWriter::new(File::create(out)?);
    trained.write(&mut w)?;
    eprintln!(
        "trained {} on {} records with {} features",
        cfg.model_kind,
        corpus.len(),
        matrix.n_cols()
    );
    Ok(())
}

fn load_model(path: &Path) -> Result<TrainedModel> {
    TrainedModel::read(open_file(path)?)
}

fn predict_instances(cfg: &RunConfig) -> Result<Vec<Prediction>> {
    let res = Resources::load(cfg)?;
    let trained = load_model(cfg.require(&cfg.model, "model")?)?;
    let sub = res.schema.subset(&trained.columns_in(&res.schema)?);
    let instances = read_instances_file(cfg.require(&cfg.instances, "instances")?)?;
    instances
        .par_iter()
        .map(|inst| {
            let v = extract_features(inst, &sub, &res.lexicons, &res.tagger);
            Ok(Prediction {
                id: v.id,
                clickbait_score: trained.model.predict_score(&v.values)?,
            })
        })
        .collect()
}

pub fn predict(cfg: &RunConfig) -> Result<()> {
    let predictions = predict_instances(cfg)?;
    with_output(cfg.out.as_deref(), |w| {
        for p in &predictions {
            let line = serde_json::to_string(p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    })
}

fn read_predictions(path: &Path) -> Result<Vec<Prediction>> {
    let mut out = Vec::new();
    for (i, line) in open_file(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let p: Prediction = serde_json::from_str(&line).map_err(|e| Error::Json {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(p);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct EvaluationReport {
    n: usize,
    threshold: f64,
    metrics: Metrics,
    errors: ErrorReport,
}

pub fn evaluate(cfg: &RunConfig) -> Result<()> {
    let mut truths: HashMap<String, TruthRecord> = read_truth_file(cfg.require(&cfg.truth, "truth")?)?
        .records
        .into_iter()
        .map(|t| (t.id.clone(), t))
        .collect();
    let predictions = match &cfg.predictions {
        Some(p) => read_predictions(p)?,
        None => predict_instances(cfg)?,
    };
    let mut ids = Vec::with_capacity(predictions.len());
    let mut scores = Vec::with_capacity(predictions.len());
    let mut matched = Vec::with_capacity(predictions.len());
    let mut missing = Vec::new();
    for p in predictions {
        match truths.remove(&p.id) {
            Some(t) => {
                scores.push(p.clickbait_score);
                matched.push(t);
                ids.push(p.id);
            }
            None => missing.push(p.id),
        }
    }
    if !missing.is_empty() {
        return Err(Error::OrphanIds {
            instances: missing,
            truths: vec![],
        });
    }
    let means: Vec<f64> = matched.iter().map(|t| t.mean_score).collect();
    let classes: Vec<bool> = matched.iter().map(|t| t.truth_class.is_clickbait()).collect();
    let metrics = compute_metrics(&scores, &means, &classes, cfg.threshold)?;
    let report = EvaluationReport {
        n: scores.len(),
        threshold: cfg.threshold,
        metrics,
        errors: error_report(&ids, &scores, &matched, cfg.threshold),
    };
    let auc = metrics.auc.map_or("n/a".to_string(), |a| format!("{a:.4}"));
    println!(
        "n={} AUC={auc} MSE={:.4} MSE_label={:.4} ACC={:.4} F1={:.4}",
        report.n, metrics.mse, metrics.mse_label, metrics.accuracy, metrics.f1
    );
    println!(
        "misclassified: {}; with mean score in [0.33, 0.66]: {:.4}",
        report.errors.misclassified.len(),
        report.errors.fraction_ambiguous
    );
    if let Some(out) = &cfg.out {
        write_json(out, &report)?;
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn cv(cfg: &RunConfig) -> Result<()> {
    let res = Resources::load(cfg)?;
    let corpus = load_corpus(cfg)?;
    let folds = make_folds(&corpus, cfg.k, cfg.seed)?;
    let data = LabeledMatrix::new(res.matrix(&corpus), corpus.truths().cloned().collect())?;
    let base = base_columns(cfg, &res.schema);
    let config = CvConfig {
        model: model_config(cfg),
        top_k: (cfg.top_k > 0 && cfg.top_k < base.len()).then_some(cfg.top_k),
        columns: cfg.group.map(|_| base.clone()),
        threshold: cfg.threshold,
    };
    let report = cross_validate(&data, &folds, &config)?;
    print!("{}", report.render_table());
    if let Some(out) = &cfg.out {
        write_json(out, &report)?;
    }
    Ok(())
}
