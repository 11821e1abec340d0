//! Feature primitives over tokens and tagged tokens.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use crate::textkit::{count_syllables, split_sentences, tokenize, Lexicons, TaggedTokens, Tokens};
use crate::{Error, Result};

/// Interrogative openers.
pub const FIVE_W_ONE_H: [&str; 7] = ["who", "what", "when", "where", "why", "which", "how"];

fn lower_words(tokens: &Tokens) -> Vec<String> {
    tokens.words().map(str::to_lowercase).collect()
}

/// `2 * |A ∩ B| / (|A| + |B|)` over multisets of lowercased word tokens; 0
/// when both sides are empty.
pub fn overlap_similarity(a: &Tokens, b: &Tokens) -> f64 {
    let a = lower_words(a);
    let b = lower_words(b);
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for w in &a {
        *counts.entry(w).or_default() += 1;
    }
    let mut shared = 0usize;
    for w in &b {
        if let Some(c) = counts.get_mut(w.as_str()) {
            if *c > 0 {
                *c -= 1;
                shared += 1;
            }
        }
    }
    2.0 * shared as f64 / (a.len() + b.len()) as f64
}

/// Number of keywords whose token sequence occurs contiguously in the post,
/// case-insensitively. Each keyword counts at most once.
pub fn keyword_match_count(post: &Tokens, keywords: &[String]) -> usize {
    let post: Vec<String> = post.iter().map(str::to_lowercase).collect();
    keywords
        .iter()
        .filter(|kw| {
            let kw: Vec<String> = tokenize(kw).iter().map(str::to_lowercase).collect();
            !kw.is_empty() && post.windows(kw.len()).any(|w| w == kw.as_slice())
        })
        .count()
}

/// Word, sentence and syllable totals behind the readability formulas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TextCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

impl TextCounts {
    pub fn of(text: &str) -> Self {
        let tokens = tokenize(text);
        Self {
            words: tokens.words().count(),
            sentences: split_sentences(text).len(),
            syllables: tokens.words().map(count_syllables).sum(),
        }
    }

    /// Totals over several texts, each of which ends at least one sentence.
    pub fn of_texts<S: AsRef<str>>(texts: &[S]) -> Self {
        texts.iter().fold(Self::default(), |acc, t| {
            let c = Self::of(t.as_ref());
            Self {
                words: acc.words + c.words,
                sentences: acc.sentences + c.sentences,
                syllables: acc.syllables + c.syllables,
            }
        })
    }

    fn ratios(&self) -> Option<(f64, f64)> {
        if self.words == 0 {
            return None;
        }
        let sentences = self.sentences.max(1) as f64;
        Some((
            self.words as f64 / sentences,
            self.syllables as f64 / self.words as f64,
        ))
    }

    pub fn grade(&self) -> f64 {
        self.ratios()
            .map_or(0.0, |(wps, spw)| 0.39 * wps + 11.8 * spw - 15.59)
    }

    pub fn reading_ease(&self) -> f64 {
        self.ratios()
            .map_or(0.0, |(wps, spw)| 206.835 - 1.015 * wps - 84.6 * spw)
    }
}

/// Flesch-Kincaid grade level; 0 for text without words.
pub fn flesch_kincaid_grade(text: &str) -> f64 {
    TextCounts::of(text).grade()
}

/// Flesch reading ease; 0 for text without words.
pub fn flesch_reading_ease(text: &str) -> f64 {
    TextCounts::of(text).reading_ease()
}

/// Sliding-window counts of tag sequences, keyed by space-joined tags.
pub fn pos_ngram_counts(tagged: &TaggedTokens, n: usize) -> Result<BTreeMap<String, usize>> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("n-gram order {n} not in 1..=3")));
    }
    let tags: Vec<&str> = tagged.tags().collect();
    let mut counts = BTreeMap::new();
    for w in tags.windows(n) {
        *counts.entry(w.join(" ")).or_default() += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternId {
    /// Cardinal, noun phrase, verb group.
    NumberNpVb,
    /// Cardinal, noun phrase, then `that`.
    NumberNpThat,
    /// `this`/`these` directly before a noun; counted.
    ThisTheseNn,
    /// Occurrences of one tag.
    TagCount(String),
    /// Existential `there`.
    ExistsEx,
    QuestionMark,
}

impl FromStr for PatternId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "NUMBER_NP_VB" => PatternId::NumberNpVb,
            "NUMBER_NP_THAT" => PatternId::NumberNpThat,
            "THIS_THESE_NN" => PatternId::ThisTheseNn,
            "EXISTS_EX" => PatternId::ExistsEx,
            "QUESTION_MARK" => PatternId::QuestionMark,
            other => match other.strip_prefix("COUNT_") {
                Some(tag) if crate::textkit::is_known_tag(tag) => PatternId::TagCount(tag.to_owned()),
                _ => return Err(Error::UnknownPattern(s.to_owned())),
            },
        })
    }
}

impl std::fmt::Display for PatternId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PatternId::NumberNpVb => f.write_str("NUMBER_NP_VB"),
            PatternId::NumberNpThat => f.write_str("NUMBER_NP_THAT"),
            PatternId::ThisTheseNn => f.write_str("THIS_THESE_NN"),
            PatternId::TagCount(t) => write!(f, "COUNT_{t}"),
            PatternId::ExistsEx => f.write_str("EXISTS_EX"),
            PatternId::QuestionMark => f.write_str("QUESTION_MARK"),
        }
    }
}

fn is_np_tag(tag: &str) -> bool {
    tag.starts_with("JJ") || tag.starts_with("NN")
}

/// Position just past a CD + one-or-more {JJ*, NN*} run starting at `start`.
fn number_np_end(tags: &[&str], start: usize) -> Option<usize> {
    if tags[start] != "CD" {
        return None;
    }
    let np = tags[start + 1..].iter().take_while(|t| is_np_tag(t)).count();
    (np > 0).then_some(start + 1 + np)
}

/// Count (or 0/1 existence) of a tag pattern.
///
/// The noun phrase of the NUMBER patterns is one or more `JJ*`/`NN*` tags. For
/// NUMBER_NP_VB the verb group may open with modals and adverbs before the
/// `VB*` tag, so "10 things Apple will never tell you" matches.
pub fn detect_pos_pattern(tagged: &TaggedTokens, pattern: &PatternId) -> usize {
    let tags: Vec<&str> = tagged.tags().collect();
    let words: Vec<String> = tagged.tokens().map(str::to_lowercase).collect();
    match pattern {
        PatternId::NumberNpVb => (0..tags.len()).any(|i| {
            number_np_end(&tags, i).is_some_and(|end| {
                let aux = tags[end..]
                    .iter()
                    .take_while(|t| **t == "MD" || t.starts_with("RB"))
                    .count();
                tags.get(end + aux).is_some_and(|t| t.starts_with("VB"))
            })
        }) as usize,
        PatternId::NumberNpThat => (0..tags.len()).any(|i| {
            number_np_end(&tags, i).is_some_and(|end| {
                end < tags.len() && words[end] == "that" && matches!(tags[end], "WDT" | "IN")
            })
        }) as usize,
        PatternId::ThisTheseNn => (1..tags.len())
            .filter(|&i| matches!(words[i - 1].as_str(), "this" | "these") && tags[i].starts_with("NN"))
            .count(),
        PatternId::TagCount(tag) => tags.iter().filter(|t| *t == tag).count(),
        PatternId::ExistsEx => tags.contains(&"EX") as usize,
        PatternId::QuestionMark => tagged.tokens().any(|t| t == "?") as usize,
    }
}

/// Surface statistics of a post.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PostFlags {
    pub starts_with_number: bool,
    pub starts_with_5w1h: bool,
    pub has_question_mark: bool,
    pub comma_count: usize,
    pub stop_word_ratio: f64,
    pub slang_count: usize,
    pub token_count: usize,
    pub word_count: usize,
    pub avg_word_length: f64,
    pub longest_word_length: usize,
    /// Non-whitespace characters of the post.
    pub char_length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PostFlag {
    StartsWithNumber,
    StartsWith5w1h,
    HasQuestionMark,
    CommaCount,
    StopWordRatio,
    SlangCount,
    TokenCount,
    WordCount,
    AvgWordLength,
    LongestWordLength,
    CharLength,
}

impl PostFlag {
    pub const ALL: [PostFlag; 11] = [
        PostFlag::StartsWithNumber,
        PostFlag::StartsWith5w1h,
        PostFlag::HasQuestionMark,
        PostFlag::CommaCount,
        PostFlag::StopWordRatio,
        PostFlag::SlangCount,
        PostFlag::TokenCount,
        PostFlag::WordCount,
        PostFlag::AvgWordLength,
        PostFlag::LongestWordLength,
        PostFlag::CharLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PostFlag::StartsWithNumber => "starts_with_number",
            PostFlag::StartsWith5w1h => "starts_with_5w1h",
            PostFlag::HasQuestionMark => "has_question_mark",
            PostFlag::CommaCount => "comma_count",
            PostFlag::StopWordRatio => "stop_word_ratio",
            PostFlag::SlangCount => "slang_count",
            PostFlag::TokenCount => "token_count",
            PostFlag::WordCount => "word_count",
            PostFlag::AvgWordLength => "avg_word_length",
            PostFlag::LongestWordLength => "longest_word_length",
            PostFlag::CharLength => "char_length",
        }
    }
}

impl FromStr for PostFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PostFlag::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown post flag {s:?}")))
    }
}

impl PostFlags {
    pub fn value(&self, flag: PostFlag) -> f64 {
        match flag {
            PostFlag::StartsWithNumber => self.starts_with_number as u8 as f64,
            PostFlag::StartsWith5w1h => self.starts_with_5w1h as u8 as f64,
            PostFlag::HasQuestionMark => self.has_question_mark as u8 as f64,
            PostFlag::CommaCount => self.comma_count as f64,
            PostFlag::StopWordRatio => self.stop_word_ratio,
            PostFlag::SlangCount => self.slang_count as f64,
            PostFlag::TokenCount => self.token_count as f64,
            PostFlag::WordCount => self.word_count as f64,
            PostFlag::AvgWordLength => self.avg_word_length,
            PostFlag::LongestWordLength => self.longest_word_length as f64,
            PostFlag::CharLength => self.char_length as f64,
        }
    }

    pub fn to_map(&self) -> BTreeMap<&'static str, f64> {
        PostFlag::ALL.into_iter().map(|f| (f.name(), self.value(f))).collect()
    }
}

pub fn post_flags(tokens: &Tokens, lexicons: &Lexicons) -> PostFlags {
    let words: Vec<&str> = tokens.words().collect();
    let lengths: Vec<usize> = words.iter().map(|w| w.chars().count()).collect();
    let stop = words.iter().filter(|w| lexicons.is_stop_word(w)).count();
    PostFlags {
        starts_with_number: tokens
            .iter()
            .next()
            .is_some_and(|t| t.starts_with(|c: char| c.is_ascii_digit())),
        starts_with_5w1h: words
            .first()
            .is_some_and(|w| FIVE_W_ONE_H.contains(&w.to_lowercase().as_str())),
        has_question_mark: tokens.iter().any(|t| t.contains('?')),
        comma_count: tokens.iter().filter(|t| *t == ",").count(),
        stop_word_ratio: if words.is_empty() {
            0.0
        } else {
            stop as f64 / words.len() as f64
        },
        slang_count: tokens.iter().filter(|t| lexicons.is_slang(t)).count(),
        token_count: tokens.len(),
        word_count: words.len(),
        avg_word_length: if words.is_empty() {
            0.0
        } else {
            lengths.iter().sum::<usize>() as f64 / words.len() as f64
        },
        longest_word_length: lengths.iter().copied().max().unwrap_or(0),
        char_length: tokens.iter().map(|t| t.chars().count()).sum(),
    }
}
