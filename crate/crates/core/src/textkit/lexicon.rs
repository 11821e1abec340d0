use std::collections::{HashMap, HashSet};
use std::path::Path;

#[cfg(test)]
use sha2::{Digest, Sha256};

use super::tokenize::{is_word, Tokens};
use crate::{Error, Result};

const STOP_WORDS: &str = include_str!("../../assets/stop_words.txt");
const SLANG: &str = include_str!("../../assets/slang.txt");
const SENTIMENT: &str = include_str!("../../assets/sentiment.tsv");

/// SHA-256 of the bundled list files, frozen with the lists.
pub const STOP_WORDS_SHA256: &str =
    "019f104ba2ed07436d05f9cdd3383034ad66014edc27fc651f837e1a038b6451";
pub const SLANG_SHA256: &str =
    "9777f16bb07eb3120e31e975f2ba0a622a40576bc910bf682cab6db2ae18f4e3";
pub const SENTIMENT_SHA256: &str =
    "a582f10e1c2de34377b377b617f50f29faa140305a0a611f4c318d7ed271ba7c";

#[cfg(test)]
pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Stop words, internet slang and word sentiment weights, all lowercase.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub stop_words: HashSet<String>,
    pub slang: HashSet<String>,
    pub sentiment: HashMap<String, f64>,
}

fn word_set(src: &str, what: &str) -> Result<HashSet<String>> {
    let set: HashSet<String> = src
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect();
    if set.is_empty() {
        return Err(Error::LexiconLoad(format!("{what} list is empty")));
    }
    Ok(set)
}

fn weight_map(src: &str) -> Result<HashMap<String, f64>> {
    let mut map = HashMap::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim_end();
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, weight) = line.split_once('\t').ok_or_else(|| {
            Error::LexiconLoad(format!("sentiment line {}: expected word<TAB>weight", i + 1))
        })?;
        let weight: f64 = weight
            .trim()
            .parse()
            .ok()
            .filter(|w: &f64| w.is_finite() && (-1.0..=1.0).contains(w))
            .ok_or_else(|| {
                Error::LexiconLoad(format!("sentiment line {}: bad weight {weight:?}", i + 1))
            })?;
        map.insert(word.trim().to_lowercase(), weight);
    }
    if map.is_empty() {
        return Err(Error::LexiconLoad("sentiment lexicon is empty".into()));
    }
    Ok(map)
}

impl Lexicons {
    pub fn bundled() -> Self {
        Self::from_sources(STOP_WORDS, SLANG, SENTIMENT).expect("bundled lexicons are valid")
    }

    pub fn from_sources(stop_words: &str, slang: &str, sentiment: &str) -> Result<Self> {
        Ok(Self {
            stop_words: word_set(stop_words, "stop word")?,
            slang: word_set(slang, "slang")?,
            sentiment: weight_map(sentiment)?,
        })
    }

    /// Load `stop_words.txt`, `slang.txt` and `sentiment.tsv` from a directory.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::FileNotFound(path),
                _ => Error::Io(e),
            })
        };
        Self::from_sources(
            &read("stop_words.txt")?,
            &read("slang.txt")?,
            &read("sentiment.tsv")?,
        )
    }

    pub fn is_stop_word(&self, token: &str) -> bool {
        self.stop_words.contains(&token.to_lowercase())
    }

    pub fn is_slang(&self, token: &str) -> bool {
        self.slang.contains(&token.to_lowercase())
    }

    pub fn sentiment_weight(&self, token: &str) -> Option<f64> {
        self.sentiment.get(&token.to_lowercase()).copied()
    }
}

/// Sum of token weights over `max(1, word count)`, clipped to `[-1, 1]`.
pub fn sentiment_score(tokens: &Tokens, lexicons: &Lexicons) -> f64 {
    let mut words = 0usize;
    let mut total = 0.0;
    for t in tokens.iter() {
        if is_word(t) {
            words += 1;
        }
        total += lexicons.sentiment_weight(t).unwrap_or(0.0);
    }
    (total / words.max(1) as f64).clamp(-1.0, 1.0)
}
