//! Challenge corpus ingestion: `instances.jsonl`, `truth.jsonl`, splits and folds.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rng::SplitMix64;
use crate::{Error, Result};

/// The annotation scale judgments are matched against.
pub const JUDGMENT_SCALE: [f64; 4] = [0.0, 0.3, 0.66, 1.0];
/// Distance within which a judgment counts as a scale point (accepts 1/3, 2/3).
pub const JUDGMENT_TOLERANCE: f64 = 0.05;
pub const MIN_JUDGMENTS: usize = 5;
const MEAN_TOLERANCE: f64 = 1e-6;

/// One social-media post plus the extracted fields of the article it links to.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PostInstance {
    pub id: String,
    pub post_text: String,
    pub target_title: String,
    pub target_description: String,
    pub target_keywords: Vec<String>,
    pub target_paragraphs: Vec<String>,
    pub target_captions: Vec<String>,
    pub post_timestamp: String,
    pub post_media: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TruthClass {
    #[serde(rename = "clickbait")]
    Clickbait,
    #[serde(rename = "no-clickbait")]
    NoClickbait,
}

impl TruthClass {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "clickbait" => Some(TruthClass::Clickbait),
            "no-clickbait" => Some(TruthClass::NoClickbait),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TruthClass::Clickbait => "clickbait",
            TruthClass::NoClickbait => "no-clickbait",
        }
    }

    pub fn is_clickbait(self) -> bool {
        self == TruthClass::Clickbait
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRecord {
    pub id: String,
    pub judgments: Vec<f64>,
    pub mean_score: f64,
    /// Taken from the file as-is; the dataset's labels are not a 0.5 cut of
    /// `mean_score`.
    pub truth_class: TruthClass,
}

/// Parsed truth file plus the number of judgments that matched no scale point.
#[derive(Debug, Clone, Default)]
pub struct TruthSet {
    pub records: Vec<TruthRecord>,
    pub off_scale_judgments: usize,
}

#[derive(Debug, Clone, Default)]
pub struct LabeledCorpus {
    pub records: Vec<(PostInstance, TruthRecord)>,
}

impl LabeledCorpus {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|(inst, _)| inst.id.as_str())
    }

    pub fn instances(&self) -> impl Iterator<Item = &PostInstance> {
        self.records.iter().map(|(inst, _)| inst)
    }

    pub fn truths(&self) -> impl Iterator<Item = &TruthRecord> {
        self.records.iter().map(|(_, truth)| truth)
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledCorpus {
        LabeledCorpus {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
        }
    }
}

/// Fold index per record, aligned with the corpus the assignment was made for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    pub k: usize,
    pub assignment: BTreeMap<String, usize>,
    folds: Vec<usize>,
}

impl FoldAssignment {
    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.assignment.get(id).copied()
    }

    /// Fold of each record, in corpus order.
    pub fn by_index(&self) -> &[usize] {
        &self.folds
    }

    /// Record indices (corpus order) of the held-out fold and of the rest.
    pub fn train_test_indices(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let (mut train, mut test) = (Vec::new(), Vec::new());
        for (i, &f) in self.folds.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.folds {
            sizes[f] += 1;
        }
        sizes
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<serde_json::Map<String, Value>> {
    match serde_json::from_str::<Value>(line) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Error::Json {
            line: lineno,
            message: "expected a JSON object".into(),
        }),
        Err(e) => Err(Error::Json {
            line: lineno,
            message: e.to_string(),
        }),
    }
}

fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| !matches!(r, Ok((_, l)) if l.trim().is_empty()))
}

fn id_field(map: &serde_json::Map<String, Value>, line: usize) -> Result<String> {
    let id = match map.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        Some(_) => {
            return Err(Error::InvalidField {
                line,
                field: "id",
                message: "expected a string".into(),
            })
        }
        None => return Err(Error::MissingField { line, field: "id" }),
    };
    if id.is_empty() {
        return Err(Error::InvalidField {
            line,
            field: "id",
            message: "empty id".into(),
        });
    }
    Ok(id)
}

/// A string, or an array of strings joined with single spaces.
fn text_field(
    map: &serde_json::Map<String, Value>,
    field: &'static str,
    line: usize,
) -> Result<String> {
    match map.get(field) {
        None | Some(Value::Null) => Ok(String::new()),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Array(_)) => Ok(list_field(map, field, line)?.join(" ")),
        Some(_) => Err(Error::InvalidField {
            line,
            field,
            message: "expected a string or array of strings".into(),
        }),
    }
}

fn list_field(
    map: &serde_json::Map<String, Value>,
    field: &'static str,
    line: usize,
) -> Result<Vec<String>> {
    match map.get(field) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::String(s)) => Ok(vec![s.clone()]),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.clone()),
                _ => Err(Error::InvalidField {
                    line,
                    field,
                    message: "array elements must be strings".into(),
                }),
            })
            .collect(),
        Some(_) => Err(Error::InvalidField {
            line,
            field,
            message: "expected an array of strings".into(),
        }),
    }
}

/// Comma-separated string or array; entries trimmed, empties dropped, case kept.
fn keywords_field(map: &serde_json::Map<String, Value>, line: usize) -> Result<Vec<String>> {
    let raw = match map.get("targetKeywords") {
        Some(Value::String(s)) => s.split(',').map(str::to_owned).collect(),
        _ => list_field(map, "targetKeywords", line)?,
    };
    Ok(raw
        .iter()
        .map(|k| k.trim())
        .filter(|k| !k.is_empty())
        .map(str::to_owned)
        .collect())
}

pub fn parse_instances<R: BufRead>(reader: R) -> Result<Vec<PostInstance>> {
    let mut out = Vec::new();
    for item in lines(reader) {
        let (line, text) = item?;
        let map = parse_line(&text, line)?;
        out.push(PostInstance {
            id: id_field(&map, line)?,
            post_text: text_field(&map, "postText", line)?,
            target_title: text_field(&map, "targetTitle", line)?,
            target_description: text_field(&map, "targetDescription", line)?,
            target_keywords: keywords_field(&map, line)?,
            target_paragraphs: list_field(&map, "targetParagraphs", line)?,
            target_captions: list_field(&map, "targetCaptions", line)?,
            post_timestamp: text_field(&map, "postTimestamp", line)?,
            post_media: list_field(&map, "postMedia", line)?,
        });
    }
    Ok(out)
}

fn on_scale(j: f64) -> bool {
    JUDGMENT_SCALE
        .iter()
        .any(|p| (j - p).abs() <= JUDGMENT_TOLERANCE)
}

pub fn parse_truth<R: BufRead>(reader: R) -> Result<TruthSet> {
    let mut set = TruthSet::default();
    for item in lines(reader) {
        let (line, text) = item?;
        let map = parse_line(&text, line)?;
        let id = id_field(&map, line)?;

        let judgments: Vec<f64> = match map.get("truthJudgments") {
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_f64().ok_or_else(|| Error::InvalidField {
                        line,
                        field: "truthJudgments",
                        message: "judgments must be numbers".into(),
                    })
                })
                .collect::<Result<_>>()?,
            Some(_) => {
                return Err(Error::InvalidField {
                    line,
                    field: "truthJudgments",
                    message: "expected an array".into(),
                })
            }
            None => {
                return Err(Error::MissingField {
                    line,
                    field: "truthJudgments",
                })
            }
        };
        if judgments.len() < MIN_JUDGMENTS {
            return Err(Error::InvalidField {
                line,
                field: "truthJudgments",
                message: format!(
                    "{} judgments, at least {MIN_JUDGMENTS} required",
                    judgments.len()
                ),
            });
        }
        if let Some(bad) = judgments.iter().find(|j| !(0.0..=1.0).contains(*j)) {
            return Err(Error::InvalidField {
                line,
                field: "truthJudgments",
                message: format!("judgment {bad} outside [0,1]"),
            });
        }
        set.off_scale_judgments += judgments.iter().filter(|&&j| !on_scale(j)).count();

        let computed = judgments.iter().sum::<f64>() / judgments.len() as f64;
        let mean_score = match map.get("truthMean") {
            None | Some(Value::Null) => computed,
            Some(v) => {
                let m = v.as_f64().ok_or_else(|| Error::InvalidField {
                    line,
                    field: "truthMean",
                    message: "expected a number".into(),
                })?;
                if (m - computed).abs() > MEAN_TOLERANCE {
                    return Err(Error::InvalidField {
                        line,
                        field: "truthMean",
                        message: format!("{m} differs from judgment mean {computed}"),
                    });
                }
                m
            }
        };

        let truth_class = match map.get("truthClass") {
            Some(Value::String(s)) => {
                TruthClass::parse(s).ok_or_else(|| Error::UnknownTruthClass {
                    line,
                    value: s.clone(),
                })?
            }
            Some(other) => {
                return Err(Error::UnknownTruthClass {
                    line,
                    value: other.to_string(),
                })
            }
            None => {
                return Err(Error::MissingField {
                    line,
                    field: "truthClass",
                })
            }
        };

        set.records.push(TruthRecord {
            id,
            judgments,
            mean_score,
            truth_class,
        });
    }
    Ok(set)
}

/// Match instances with truth records by id, keeping instance order.
pub fn join_corpus(instances: Vec<PostInstance>, truths: Vec<TruthRecord>) -> Result<LabeledCorpus> {
    let mut seen = HashSet::new();
    for inst in &instances {
        if !seen.insert(inst.id.as_str()) {
            return Err(Error::DuplicateId(inst.id.clone()));
        }
    }
    let mut by_id: HashMap<String, TruthRecord> = HashMap::with_capacity(truths.len());
    let mut truth_order = Vec::with_capacity(truths.len());
    for t in truths {
        truth_order.push(t.id.clone());
        if by_id.insert(t.id.clone(), t).is_some() {
            return Err(Error::DuplicateId(truth_order.pop().unwrap_or_default()));
        }
    }

    let orphan_instances: Vec<String> = instances
        .iter()
        .filter(|i| !by_id.contains_key(&i.id))
        .map(|i| i.id.clone())
        .collect();
    let orphan_truths: Vec<String> = truth_order
        .into_iter()
        .filter(|id| !seen.contains(id.as_str()))
        .collect();
    if !orphan_instances.is_empty() || !orphan_truths.is_empty() {
        return Err(Error::OrphanIds {
            instances: orphan_instances,
            truths: orphan_truths,
        });
    }

    let records = instances
        .into_iter()
        .map(|inst| {
            let truth = by_id.remove(&inst.id).expect("checked above");
            (inst, truth)
        })
        .collect();
    Ok(LabeledCorpus { records })
}

/// Shuffle record indices with SplitMix64 seeded by `seed`.
fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut idx);
    idx
}

/// Train/test split. The first `round(fraction * n)` shuffled records form the
/// training part; both parts keep corpus order.
pub fn split_corpus(
    corpus: &LabeledCorpus,
    train_fraction: f64,
    seed: u64,
) -> Result<(LabeledCorpus, LabeledCorpus)> {
    let (train, test) = split_indices(corpus.len(), train_fraction, seed)?;
    Ok((corpus.subset(&train), corpus.subset(&test)))
}

/// Index form of [`split_corpus`].
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} must lie strictly between 0 and 1"
        )));
    }
    let n_train = (train_fraction * n as f64).round() as usize;
    let idx = shuffled_indices(n, seed);
    let mut train = idx[..n_train].to_vec();
    let mut test = idx[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Seeded shuffle, then round-robin: the i-th shuffled record goes to fold `i % k`.
pub fn make_folds(corpus: &LabeledCorpus, k: usize, seed: u64) -> Result<FoldAssignment> {
    let n = corpus.len();
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "fold count {k} must satisfy 2 <= k <= {n}"
        )));
    }
    let mut folds = vec![0; n];
    for (pos, &i) in shuffled_indices(n, seed).iter().enumerate() {
        folds[i] = pos % k;
    }
    let assignment = corpus
        .ids()
        .zip(&folds)
        .map(|(id, &f)| (id.to_owned(), f))
        .collect();
    Ok(FoldAssignment {
        k,
        assignment,
        folds,
    })
}

/// Open `path` for buffered reading, reporting a missing file as such.
pub fn open_file(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_owned()),
        _ => Error::Io(e),
    })
}

pub fn read_instances_file(path: &Path) -> Result<Vec<PostInstance>> {
    parse_instances(open_file(path)?)
}

pub fn read_truth_file(path: &Path) -> Result<TruthSet> {
    parse_truth(open_file(path)?)
}

/// Read and join an instances file and a truth file. Also returns the
/// number of off-scale judgments seen.
pub fn read_corpus(instances: &Path, truth: &Path) -> Result<(LabeledCorpus, usize)> {
    let inst = read_instances_file(instances)?;
    let truths = read_truth_file(truth)?;
    let corpus = join_corpus(inst, truths.records)?;
    Ok((corpus, truths.off_scale_judgments))
}
