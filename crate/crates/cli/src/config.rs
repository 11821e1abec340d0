use std::path::{Path, PathBuf};

use clap::Args;
use clickbait_core::features::Group;
use clickbait_core::learn::ModelKind;
use clickbait_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Flags shared by every command. Unset flags fall back to the config file,
/// then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with defaults for any of the options below
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration as TOML and exit
    #[arg(long)]
    pub print_config: bool,

    /// Posts in challenge JSONL format
    #[arg(long)]
    pub instances: Option<PathBuf>,
    /// Truth records in challenge JSONL format
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Feature schema manifest (defaults to the bundled 180-feature schema)
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Directory holding stop_words.txt, slang.txt and sentiment.tsv
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// Averaged-perceptron weights file for POS tagging
    #[arg(long)]
    pub tagger: Option<PathBuf>,
    /// Model file to read (predict, evaluate)
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Predictions JSONL to score (evaluate)
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Output file; standard output when omitted (required by train)
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_parser = parse_kind)]
    pub model_kind: Option<ModelKind>,
    #[arg(long)]
    pub trees: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Keep the k best Fisher-ranked features; 0 keeps all
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Number of cross-validation folds
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Training share of the train/test split; 1 trains on everything
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Worker threads (defaults to available cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Restrict to one feature group: post, target or relation
    #[arg(long, value_parser = parse_group)]
    pub group: Option<Group>,
    /// Rank features on the whole corpus instead of the training split
    #[arg(long)]
    pub full_data: bool,
}

fn parse_kind(s: &str) -> std::result::Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_group(s: &str) -> std::result::Result<Group, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub instances: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub schema: Option<PathBuf>,
    pub lexicons: Option<PathBuf>,
    pub tagger: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub model_kind: ModelKind,
    pub trees: usize,
    pub max_depth: usize,
    pub top_k: usize,
    pub k: usize,
    pub seed: u64,
    pub threshold: f64,
    pub train_fraction: f64,
    pub jobs: Option<usize>,
    pub group: Option<Group>,
    pub full_data: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            instances: None,
            truth: None,
            schema: None,
            lexicons: None,
            tagger: None,
            model: None,
            predictions: None,
            out: None,
            model_kind: ModelKind::ForestRegression,
            trees: 400,
            max_depth: 20,
            top_k: 60,
            k: 10,
            seed: 42,
            threshold: 0.5,
            train_fraction: 0.7,
            jobs: None,
            group: None,
            full_data: false,
        }
    }
}

impl RunConfig {
    /// Flags over config file over defaults.
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let mut c = match &flags.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = &flags.$field {
                    c.$field = Some(v.clone());
                }
            )*};
        }
        take!(instances, truth, schema, lexicons, tagger, model, predictions, out, jobs, group);
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = flags.$field {
                    c.$field = v;
                }
            )*};
        }
        set!(model_kind, trees, max_depth, top_k, k, seed, threshold, train_fraction);
        c.full_data |= flags.full_data;
        c.validate()?;
        Ok(c)
    }

    fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_owned()),
            _ => Error::Io(e),
        })?;
        toml::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::InvalidArgument(format!(
                "threshold {} must lie in [0, 1]",
                self.threshold
            )));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "train fraction {} must lie in (0, 1]",
                self.train_fraction
            )));
        }
        if self.trees == 0 {
            return Err(Error::InvalidArgument("--trees must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn require<'a>(&self, value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
        value
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(&Flags::default()).unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(c.top_k, 60);
        assert_eq!(c.threshold, 0.5);
        assert_eq!(c.k, 10);
        assert_eq!(c.model_kind, ModelKind::ForestRegression);
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let dir = std::env::temp_dir().join(format!("clickbait-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "seed = 7\ntop_k = 10\nmodel_kind = \"logistic\"\n").unwrap();
        let flags = Flags {
            config: Some(path),
            top_k: Some(5),
            ..Flags::default()
        };
        let c = RunConfig::resolve(&flags).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.top_k, 5);
        assert_eq!(c.model_kind, ModelKind::Logistic);
        assert_eq!(c.trees, 400);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let c = RunConfig {
            group: Some(Group::Relation),
            instances: Some("a.jsonl".into()),
            ..RunConfig::default()
        };
        let back: RunConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bad_threshold() {
        let flags = Flags {
            threshold: Some(1.5),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&flags).is_err());
    }
}
