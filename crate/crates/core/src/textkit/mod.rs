//! Deterministic text primitives shared by every feature extractor.

mod lexicon;
mod syllables;
mod tagger;
mod tokenize;

pub use lexicon::{
    sentiment_score, Lexicons, SENTIMENT_SHA256, SLANG_SHA256, STOP_WORDS_SHA256,
};
pub use syllables::count_syllables;
pub use tagger::{pos_tag, FallbackTagger, PerceptronTagger, TaggerHandle, POS_LEXICON_SHA256};
pub use tokenize::{is_word, split_sentences, tokenize, Tokens};

/// The 36 Penn Treebank word-level tags.
pub const PENN_TAGS: [&str; 36] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP",
    "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB",
    "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB",
];

/// Penn Treebank punctuation tags.
pub const PUNCT_TAGS: [&str; 9] = [".", ",", ":", "``", "''", "-LRB-", "-RRB-", "$", "#"];

pub fn is_known_tag(tag: &str) -> bool {
    PENN_TAGS.contains(&tag) || PUNCT_TAGS.contains(&tag)
}

/// Tokens paired with Penn Treebank tags, same length and order as the input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TaggedTokens {
    pub pairs: Vec<(String, String)>,
}

impl TaggedTokens {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(_, t)| t.as_str())
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(w, _)| w.as_str())
    }
}
