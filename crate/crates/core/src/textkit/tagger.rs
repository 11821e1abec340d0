use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::tokenize::{is_word, Tokens};
use super::{is_known_tag, TaggedTokens};
use crate::{Error, Result};

const POS_LEXICON: &str = include_str!("../../assets/pos_lexicon.tsv");
/// SHA-256 of the bundled POS lexicon.
pub const POS_LEXICON_SHA256: &str =
    "b5ab277ed5ecddf3b68c4a978390763e46525cfdfc46bc8ac030471b18060611";

/// Tag every token. Output length always equals input length.
pub fn pos_tag(tokens: &Tokens, tagger: &TaggerHandle) -> TaggedTokens {
    match tagger {
        TaggerHandle::Fallback(t) => t.tag(tokens),
        TaggerHandle::Perceptron(t) => t.tag(tokens),
    }
}

/// A loaded tagger. Either variant is immutable after construction.
#[derive(Debug, Clone)]
pub enum TaggerHandle {
    Fallback(FallbackTagger),
    Perceptron(PerceptronTagger),
}

impl TaggerHandle {
    /// The perceptron weights at `path` when given, otherwise the bundled
    /// fallback tagger.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Ok(TaggerHandle::Perceptron(PerceptronTagger::from_path(p)?)),
            None => Ok(TaggerHandle::Fallback(FallbackTagger::bundled())),
        }
    }
}

impl Default for TaggerHandle {
    fn default() -> Self {
        TaggerHandle::Fallback(FallbackTagger::bundled())
    }
}

fn punct_tag(c: char, double_open: &mut bool, single_open: &mut bool) -> &'static str {
    match c {
        '.' | '!' | '?' => ".",
        ',' => ",",
        ':' | ';' | '-' | '–' | '—' | '…' => ":",
        '“' => "``",
        '”' => "''",
        '"' => {
            *double_open = !*double_open;
            if *double_open {
                "``"
            } else {
                "''"
            }
        }
        '\'' | '‘' | '’' | '`' => {
            *single_open = !*single_open;
            if *single_open {
                "``"
            } else {
                "''"
            }
        }
        '(' | '[' | '{' => "-LRB-",
        ')' | ']' | '}' => "-RRB-",
        '$' | '£' | '€' | '¥' => "$",
        '#' => "#",
        '&' => "CC",
        '%' => "NN",
        _ => "SYM",
    }
}

fn number_tag(token: &str) -> &'static str {
    let digits_end = token
        .find(|c: char| !(c.is_ascii_digit() || matches!(c, ',' | '.' | ':')))
        .unwrap_or(token.len());
    let suffix = token[digits_end..].to_ascii_lowercase();
    match suffix.as_str() {
        "" | "s" => "CD",
        "st" | "nd" | "rd" | "th" => "JJ",
        s if s.contains('-') => "JJ",
        _ => "CD",
    }
}

fn suffix_tag(lower: &str, after_aux: bool) -> &'static str {
    let n = lower.chars().count();
    const ADJ: [&str; 10] = [
        "ous", "ful", "ive", "able", "ible", "less", "ish", "ical", "ic", "al",
    ];
    if lower.contains('-') {
        "JJ"
    } else if n > 4 && lower.ends_with("ing") {
        "VBG"
    } else if n > 3 && lower.ends_with("ed") {
        if after_aux {
            "VBN"
        } else {
            "VBD"
        }
    } else if n > 3 && lower.ends_with("ly") {
        "RB"
    } else if n > 4 && lower.ends_with("est") {
        "JJS"
    } else if n > 4 && ADJ.iter().any(|s| lower.ends_with(s)) {
        "JJ"
    } else if n > 3
        && lower.ends_with('s')
        && !(lower.ends_with("ss") || lower.ends_with("us") || lower.ends_with("is"))
    {
        "NNS"
    } else {
        "NN"
    }
}

const AUXILIARIES: [&str; 14] = [
    "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "'s", "'ve",
    "get",
];
const EX_FOLLOWERS: [&str; 16] = [
    "is", "are", "was", "were", "'s", "will", "may", "might", "must", "could", "would", "seems",
    "seem", "has", "have", "had",
];

/// Lexicon lookups with a handful of context rules: digits are `CD`,
/// capitalized non-initial words outside the closed classes are `NNP`,
/// base-form verbs become `VBP`/`NN` after subjects/determiners, and unknown
/// words fall back to suffix rules.
#[derive(Debug, Clone)]
pub struct FallbackTagger {
    lexicon: HashMap<String, String>,
}

impl FallbackTagger {
    pub fn bundled() -> Self {
        Self::from_lexicon(POS_LEXICON).expect("bundled POS lexicon is valid")
    }

    /// Parse `word<TAB>tag` lines. Entries containing uppercase letters match
    /// case-sensitively; all others match the lowercased token.
    pub fn from_lexicon(src: &str) -> Result<Self> {
        let mut lexicon = HashMap::new();
        for (i, line) in src.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, tag) = line.split_once('\t').ok_or_else(|| {
                Error::TaggerLoad(format!("lexicon line {}: expected word<TAB>tag", i + 1))
            })?;
            if !is_known_tag(tag) {
                return Err(Error::TaggerLoad(format!(
                    "lexicon line {}: unknown tag {tag:?}",
                    i + 1
                )));
            }
            lexicon.insert(word.to_owned(), tag.to_owned());
        }
        Ok(Self { lexicon })
    }

    pub fn lookup(&self, token: &str) -> Option<&str> {
        if token.chars().any(char::is_uppercase) {
            if let Some(t) = self.lexicon.get(token) {
                return Some(t);
            }
        }
        self.lexicon.get(&token.to_lowercase()).map(String::as_str)
    }

    pub fn tag(&self, tokens: &Tokens) -> TaggedTokens {
        let mut pairs: Vec<(String, String)> = Vec::with_capacity(tokens.len());
        let (mut double_open, mut single_open) = (false, false);
        for (i, token) in tokens.items.iter().enumerate() {
            let prev_tag = pairs.last().map(|(_, t)| t.as_str());
            let prev_lower = pairs.last().map(|(w, _)| w.to_lowercase());
            let next = tokens.items.get(i + 1).map(|s| s.to_lowercase());
            let tag: String = if !is_word(token) {
                let c = token.chars().next().unwrap_or(' ');
                punct_tag(c, &mut double_open, &mut single_open).to_owned()
            } else if token.starts_with(|c: char| c.is_ascii_digit()) {
                number_tag(token).to_owned()
            } else {
                let initial = matches!(prev_tag, None | Some("." | ":" | "``"));
                self.word_tag(
                    token,
                    initial,
                    prev_tag,
                    prev_lower.as_deref(),
                    next.as_deref(),
                )
            };
            pairs.push((token.clone(), tag));
        }
        TaggedTokens { pairs }
    }

    fn word_tag(
        &self,
        token: &str,
        initial: bool,
        prev_tag: Option<&str>,
        prev_lower: Option<&str>,
        next: Option<&str>,
    ) -> String {
        let lower = token.to_lowercase();
        let mut chars = token.chars();
        let first_upper = chars.next().is_some_and(char::is_uppercase);
        let inner_upper = chars.any(char::is_uppercase);
        let capitalized = first_upper && !initial;
        let after_aux = prev_lower.is_some_and(|p| AUXILIARIES.contains(&p));

        if token.chars().any(char::is_uppercase) {
            if let Some(t) = self.lexicon.get(token) {
                return t.clone();
            }
        }
        if let Some(t) = self.lexicon.get(&lower) {
            let t = self.contextual(&lower, t, prev_tag, after_aux, next);
            return match t {
                "NN" if capitalized => "NNP",
                "NNS" if capitalized => "NNPS",
                other => other,
            }
            .to_owned();
        }
        if capitalized || inner_upper {
            return "NNP".to_owned();
        }
        suffix_tag(&lower, after_aux).to_owned()
    }

    fn contextual<'a>(
        &self,
        lower: &str,
        tag: &'a str,
        prev_tag: Option<&str>,
        after_aux: bool,
        next: Option<&str>,
    ) -> &'a str {
        match tag {
            "EX" if lower == "there" => {
                if next.is_some_and(|n| EX_FOLLOWERS.contains(&n)) {
                    "EX"
                } else {
                    "RB"
                }
            }
            "VB" => match prev_tag {
                Some("MD" | "TO") | None => "VB",
                Some("PRP" | "NNS" | "NNPS" | "WDT" | "WP") => "VBP",
                Some("DT" | "JJ" | "JJS" | "JJR" | "PRP$" | "POS") => "NN",
                _ => "VB",
            },
            "VBD" if after_aux => "VBN",
            _ => tag,
        }
    }
}

/// Greedy averaged-perceptron tagger over a flat weights file.
///
/// Each line of the file is `feature<TAB>tag<TAB>weight`. Feature strings use
/// the usual template names (`bias`, `i suffix ing`, `i-1 tag DT`,
/// `i word apple`, ...), so weights exported from a trained model of that
/// family load unchanged. Decoding is left to right, feeding the two previous
/// predicted tags back in.
#[derive(Debug, Clone)]
pub struct PerceptronTagger {
    weights: HashMap<String, HashMap<String, f64>>,
    classes: Vec<String>,
}

const START: [&str; 2] = ["-START-", "-START2-"];
const END: [&str; 2] = ["-END-", "-END2-"];

fn last_chars(s: &str, n: usize) -> &str {
    match s.char_indices().rev().nth(n - 1) {
        Some((i, _)) => &s[i..],
        None => s,
    }
}

impl PerceptronTagger {
    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_owned()),
            _ => Error::TaggerLoad(format!("{}: {e}", path.display())),
        })?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut weights: HashMap<String, HashMap<String, f64>> = HashMap::new();
        let mut classes = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::TaggerLoad(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let lineno = i + 1;
            let fields: Vec<&str> = line.split('\t').collect();
            let [feature, tag, weight] = fields[..] else {
                return Err(Error::TaggerLoad(format!(
                    "line {lineno}: expected feature<TAB>tag<TAB>weight"
                )));
            };
            if !is_known_tag(tag) {
                return Err(Error::TaggerLoad(format!("line {lineno}: unknown tag {tag:?}")));
            }
            let weight: f64 = weight
                .trim()
                .parse()
                .ok()
                .filter(|w: &f64| w.is_finite())
                .ok_or_else(|| Error::TaggerLoad(format!("line {lineno}: bad weight {weight:?}")))?;
            if !classes.iter().any(|c| c == tag) {
                classes.push(tag.to_owned());
            }
            let slot = weights.entry(feature.to_owned()).or_default();
            if slot.insert(tag.to_owned(), weight).is_some() {
                return Err(Error::TaggerLoad(format!(
                    "line {lineno}: duplicate weight for ({feature:?}, {tag})"
                )));
            }
        }
        if classes.is_empty() {
            return Err(Error::TaggerLoad("weights file defines no tags".into()));
        }
        classes.sort();
        Ok(Self { weights, classes })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    fn normalize(word: &str) -> String {
        if word.contains('-') && !word.starts_with('-') {
            "!HYPHEN".into()
        } else if word.len() == 4 && word.chars().all(|c| c.is_ascii_digit()) {
            "!YEAR".into()
        } else if word.starts_with(|c: char| c.is_ascii_digit()) {
            "!DIGITS".into()
        } else {
            word.to_lowercase()
        }
    }

    fn features(i: usize, word: &str, context: &[String], prev: &str, prev2: &str) -> Vec<String> {
        let i = i + START.len();
        let first = word.chars().next().map(String::from).unwrap_or_default();
        vec![
            "bias".to_owned(),
            format!("i suffix {}", last_chars(word, 3)),
            format!("i pref1 {first}"),
            format!("i-1 tag {prev}"),
            format!("i-2 tag {prev2}"),
            format!("i tag+i-2 tag {prev} {prev2}"),
            format!("i word {}", context[i]),
            format!("i-1 tag+i word {prev} {}", context[i]),
            format!("i-1 word {}", context[i - 1]),
            format!("i-1 suffix {}", last_chars(&context[i - 1], 3)),
            format!("i-2 word {}", context[i - 2]),
            format!("i+1 word {}", context[i + 1]),
            format!("i+1 suffix {}", last_chars(&context[i + 1], 3)),
            format!("i+2 word {}", context[i + 2]),
        ]
    }

    fn predict(&self, features: &[String]) -> &str {
        let mut scores: HashMap<&str, f64> = HashMap::new();
        for f in features {
            if let Some(ws) = self.weights.get(f) {
                for (tag, w) in ws {
                    *scores.entry(tag.as_str()).or_default() += w;
                }
            }
        }
        // Highest score; ties go to the lexicographically greatest tag.
        self.classes
            .iter()
            .map(|c| (scores.get(c.as_str()).copied().unwrap_or(0.0), c.as_str()))
            .max_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)))
            .map(|(_, c)| c)
            .expect("classes is non-empty")
    }

    pub fn tag(&self, tokens: &Tokens) -> TaggedTokens {
        let context: Vec<String> = START
            .iter()
            .map(|s| s.to_string())
            .chain(tokens.iter().map(Self::normalize))
            .chain(END.iter().map(|s| s.to_string()))
            .collect();
        let (mut prev, mut prev2) = (START[0].to_owned(), START[1].to_owned());
        let mut pairs = Vec::with_capacity(tokens.len());
        for (i, word) in tokens.iter().enumerate() {
            let feats = Self::features(i, word, &context, &prev, &prev2);
            let tag = self.predict(&feats).to_owned();
            prev2 = std::mem::replace(&mut prev, tag.clone());
            pairs.push((word.to_owned(), tag));
        }
        TaggedTokens { pairs }
    }
}
