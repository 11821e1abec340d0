use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ops::{PatternId, PostFlag};
use crate::textkit::is_known_tag;
use crate::{Error, Result};

const BUNDLED_MANIFEST: &str = include_str!("../../assets/schema.toml");

/// The sixty top-ranked feature names every full schema must carry.
pub const RANKED_FEATURE_NAMES: [&str; 60] = [
    "Number of NNP",
    "Readability of target paragraphs (1)",
    "Number of tokens",
    "Word length of post text",
    "POS 2-gram NNP NNP",
    "Whether the post start with number",
    "Average length of words in post",
    "Number of IN",
    "POS 2-gram NNP VBZ",
    "POS 2-gram IN NNP",
    "Length of the longest word in post text",
    "Number of WRB",
    "Count POS pattern WRB",
    "Number of NN",
    "Count POS pattern NN",
    "Whether post text start with 5W1H",
    "Whether exist QM",
    "Similarity between post and target title",
    "Count POS pattern this/these NN",
    "Count POS pattern PRP",
    "Number of PRP",
    "Number of VBZ",
    "POS 3-gram NNP NNP VBZ",
    "POS 2-gram NN IN",
    "POS 3-gram NN IN NNP",
    "Ratio of stop words in post text",
    "POS 2-gram NNP .",
    "POS 2-gram PRP VBP",
    "Count POS pattern WP",
    "Number of WP",
    "Count POS pattern DT",
    "Number of DT",
    "POS 2-gram NNP IN",
    "POS 3-gram IN NNP NNP",
    "Number of POS",
    "POS 2-gram IN NN",
    "Match between keywords and post",
    "Number of ','",
    "POS 2-gram NNP NNS",
    "POS 2-gram IN JJ",
    "POS 2-gram NNP POS",
    "Number of WDT",
    "Count POS pattern WDT",
    "POS 2-gram NN NN",
    "POS 2-gram NN NNP",
    "POS 2-gram NNP VBD",
    "Similarity between post and target paragraphs",
    "Count POS pattern RB",
    "Number of RB",
    "POS 3-gram NNP NNP NNP",
    "POS 3-gram NNP NNP NN",
    "Readability of target paragraphs (2)",
    "Number of RBS",
    "Number of VBN",
    "POS 2-gram VBN IN",
    "Whether exist NUMBER NP VB",
    "POS 2-gram JJ NNP",
    "POS 3-gram NNP NN NN",
    "POS 2-gram DT NN",
    "Whether exist EX",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    PostRelated,
    TargetRelated,
    Relation,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::PostRelated => "post_related",
            Group::TargetRelated => "target_related",
            Group::Relation => "relation",
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "post_related" | "post" => Ok(Group::PostRelated),
            "target_related" | "target" => Ok(Group::TargetRelated),
            "relation" => Ok(Group::Relation),
            _ => Err(Error::InvalidArgument(format!("unknown feature group {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Readability {
    /// Flesch-Kincaid grade level.
    Grade,
    /// Flesch reading ease.
    Ease,
}

/// How a feature value is computed. The canonical string form is what the
/// manifest stores, e.g. `tag:NNP`, `ngram:NNP NNP`, `pattern:NUMBER_NP_VB`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extractor {
    Flag(PostFlag),
    Tag(String),
    NGram(Vec<String>),
    Pattern(PatternId),
    Sentiment,
    PostReadability(Readability),
    TargetReadability(Readability),
    TitleSimilarity,
    ParagraphSimilarity,
    KeywordMatch,
}

impl Extractor {
    pub fn group(&self) -> Group {
        match self {
            Extractor::TargetReadability(_) => Group::TargetRelated,
            Extractor::TitleSimilarity | Extractor::ParagraphSimilarity | Extractor::KeywordMatch => {
                Group::Relation
            }
            _ => Group::PostRelated,
        }
    }
}

fn readability(s: &str) -> Option<Readability> {
    match s {
        "grade" => Some(Readability::Grade),
        "ease" => Some(Readability::Ease),
        _ => None,
    }
}

impl FromStr for Extractor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Schema(format!("unknown extractor {s:?}"));
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        Ok(match (kind, arg) {
            ("flag", f) => Extractor::Flag(f.parse()?),
            ("tag", t) if is_known_tag(t) => Extractor::Tag(t.to_owned()),
            ("ngram", g) => {
                let tags: Vec<String> = g.split(' ').map(str::to_owned).collect();
                if !(2..=3).contains(&tags.len()) || !tags.iter().all(|t| is_known_tag(t)) {
                    return Err(bad());
                }
                Extractor::NGram(tags)
            }
            ("pattern", p) => Extractor::Pattern(p.parse()?),
            ("sentiment", "") => Extractor::Sentiment,
            ("readability", r) => match r.split_once(':') {
                Some(("post", v)) => Extractor::PostReadability(readability(v).ok_or_else(bad)?),
                Some(("target", v)) => Extractor::TargetReadability(readability(v).ok_or_else(bad)?),
                _ => return Err(bad()),
            },
            ("similarity", "title") => Extractor::TitleSimilarity,
            ("similarity", "paragraphs") => Extractor::ParagraphSimilarity,
            ("keywords", "match") => Extractor::KeywordMatch,
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Extractor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |r: &Readability| match r {
            Readability::Grade => "grade",
            Readability::Ease => "ease",
        };
        match self {
            Extractor::Flag(flag) => write!(f, "flag:{}", flag.name()),
            Extractor::Tag(t) => write!(f, "tag:{t}"),
            Extractor::NGram(tags) => write!(f, "ngram:{}", tags.join(" ")),
            Extractor::Pattern(p) => write!(f, "pattern:{p}"),
            Extractor::Sentiment => f.write_str("sentiment"),
            Extractor::PostReadability(v) => write!(f, "readability:post:{}", r(v)),
            Extractor::TargetReadability(v) => write!(f, "readability:target:{}", r(v)),
            Extractor::TitleSimilarity => f.write_str("similarity:title"),
            Extractor::ParagraphSimilarity => f.write_str("similarity:paragraphs"),
            Extractor::KeywordMatch => f.write_str("keywords:match"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureEntry {
    pub name: String,
    pub group: Group,
    pub extractor: Extractor,
}

/// Ordered feature entries; a vector's i-th value is the i-th entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSchema {
    pub version: u32,
    pub entries: Vec<FeatureEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    version: u32,
    checksum: String,
    #[serde(rename = "feature", default)]
    features: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    name: String,
    group: Group,
    extractor: String,
}

impl FeatureSchema {
    /// The frozen 180-entry schema shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_manifest(BUNDLED_MANIFEST).expect("bundled schema manifest is valid")
    }

    pub fn bundled_manifest() -> &'static str {
        BUNDLED_MANIFEST
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_owned()),
            _ => Error::Io(e),
        })?;
        Self::from_manifest(&text)
    }

    /// Parse and validate a full manifest: checksum, unique names, extractor
    /// groups, 2 target and 3 relation entries, and every ranked name present.
    pub fn from_manifest(text: &str) -> Result<Self> {
        let manifest: Manifest = toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let mut entries = Vec::with_capacity(manifest.features.len());
        for e in manifest.features {
            let extractor: Extractor = e.extractor.parse()?;
            if extractor.to_string() != e.extractor {
                return Err(Error::Schema(format!("non-canonical extractor {:?}", e.extractor)));
            }
            if extractor.group() != e.group {
                return Err(Error::Schema(format!(
                    "{:?}: extractor {extractor} belongs to group {}",
                    e.name,
                    extractor.group().as_str()
                )));
            }
            entries.push(FeatureEntry {
                name: e.name,
                group: e.group,
                extractor,
            });
        }
        let schema = FeatureSchema {
            version: manifest.version,
            entries,
        };

        let computed = schema.checksum();
        if computed != manifest.checksum {
            return Err(Error::Schema(format!(
                "checksum {} does not match contents ({computed})",
                manifest.checksum
            )));
        }
        let mut names = std::collections::HashSet::new();
        if let Some(dup) = schema.entries.iter().find(|e| !names.insert(e.name.as_str())) {
            return Err(Error::Schema(format!("duplicate feature name {:?}", dup.name)));
        }
        let count = |g| schema.entries.iter().filter(|e| e.group == g).count();
        if count(Group::TargetRelated) != 2 || count(Group::Relation) != 3 {
            return Err(Error::Schema(format!(
                "expected 2 target_related and 3 relation entries, found {} and {}",
                count(Group::TargetRelated),
                count(Group::Relation)
            )));
        }
        if let Some(missing) = RANKED_FEATURE_NAMES.iter().find(|n| !names.contains(*n)) {
            return Err(Error::Schema(format!("missing ranked feature {missing:?}")));
        }
        Ok(schema)
    }

    /// Hex SHA-256 over the version line and one `name\tgroup\textractor` line per entry.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("clickbait-schema v{}\n", self.version));
        for e in &self.entries {
            h.update(format!("{}\t{}\t{}\n", e.name, e.group.as_str(), e.extractor));
        }
        hex::encode(h.finalize())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    /// Entries at `indices`, in the order given.
    pub fn subset(&self, indices: &[usize]) -> FeatureSchema {
        FeatureSchema {
            version: self.version,
            entries: indices.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }

    pub fn group_indices(&self, group: Group) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.group == group)
            .map(|(i, _)| i)
            .collect()
    }
}
