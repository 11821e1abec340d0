use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use super::ops::{
    detect_pos_pattern, keyword_match_count, overlap_similarity, pos_ngram_counts, post_flags,
    PostFlags, TextCounts,
};
use super::schema::{Extractor, FeatureSchema, Readability};
use crate::corpus::PostInstance;
use crate::textkit::{pos_tag, sentiment_score, tokenize, Lexicons, TaggerHandle, Tokens};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub id: String,
    pub values: Vec<f64>,
}

/// Everything derived from an instance once, shared by all extractors.
struct Analysis<'a> {
    instance: &'a PostInstance,
    tokens: Tokens,
    flags: PostFlags,
    tagged: crate::textkit::TaggedTokens,
    unigrams: BTreeMap<String, usize>,
    ngrams: BTreeMap<String, usize>,
    lexicons: &'a Lexicons,
    target: Option<TargetAnalysis>,
}

struct TargetAnalysis {
    counts: TextCounts,
    paragraph_tokens: Tokens,
}

impl<'a> Analysis<'a> {
    fn new(instance: &'a PostInstance, lexicons: &'a Lexicons, tagger: &TaggerHandle) -> Self {
        let tokens = tokenize(&instance.post_text);
        let tagged = pos_tag(&tokens, tagger);
        let mut ngrams = pos_ngram_counts(&tagged, 2).expect("n in range");
        ngrams.extend(pos_ngram_counts(&tagged, 3).expect("n in range"));
        Self {
            flags: post_flags(&tokens, lexicons),
            unigrams: pos_ngram_counts(&tagged, 1).expect("n in range"),
            ngrams,
            tokens,
            tagged,
            instance,
            lexicons,
            target: None,
        }
    }

    fn target(&mut self) -> &TargetAnalysis {
        let paragraphs = &self.instance.target_paragraphs;
        self.target.get_or_insert_with(|| TargetAnalysis {
            counts: TextCounts::of_texts(paragraphs),
            paragraph_tokens: tokenize(&paragraphs.join(" ")),
        })
    }

    fn value(&mut self, extractor: &Extractor) -> f64 {
        match extractor {
            Extractor::Flag(f) => self.flags.value(*f),
            Extractor::Tag(t) => self.unigrams.get(t).copied().unwrap_or(0) as f64,
            Extractor::NGram(tags) => self.ngrams.get(&tags.join(" ")).copied().unwrap_or(0) as f64,
            Extractor::Pattern(p) => detect_pos_pattern(&self.tagged, p) as f64,
            Extractor::Sentiment => sentiment_score(&self.tokens, self.lexicons),
            Extractor::PostReadability(r) => readability(&TextCounts::of(&self.instance.post_text), *r),
            Extractor::TargetReadability(r) => {
                let r = *r;
                readability(&self.target().counts, r)
            }
            Extractor::TitleSimilarity => {
                overlap_similarity(&self.tokens, &tokenize(&self.instance.target_title))
            }
            Extractor::ParagraphSimilarity => {
                let post = self.tokens.clone();
                overlap_similarity(&post, &self.target().paragraph_tokens)
            }
            Extractor::KeywordMatch => {
                keyword_match_count(&self.tokens, &self.instance.target_keywords) as f64
            }
        }
    }
}

fn readability(counts: &TextCounts, r: Readability) -> f64 {
    match r {
        Readability::Grade => counts.grade(),
        Readability::Ease => counts.reading_ease(),
    }
}

/// Dense feature vector in schema order. Empty target fields give 0 for the
/// target and relation features.
pub fn extract_features(
    instance: &PostInstance,
    schema: &FeatureSchema,
    lexicons: &Lexicons,
    tagger: &TaggerHandle,
) -> FeatureVector {
    let mut analysis = Analysis::new(instance, lexicons, tagger);
    let values = schema
        .entries
        .iter()
        .map(|e| {
            let v = analysis.value(&e.extractor);
            debug_assert!(v.is_finite(), "{} = {v}", e.name);
            v
        })
        .collect();
    FeatureVector {
        id: instance.id.clone(),
        values,
    }
}

/// Row-major feature values with their column names and row ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub names: Vec<String>,
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    /// Keep only the given columns, in the order given.
    pub fn select_columns(&self, columns: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            names: columns.iter().map(|&c| self.names[c].clone()).collect(),
            ids: self.ids.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| columns.iter().map(|&c| r[c]).collect())
                .collect(),
        }
    }

    /// CSV with an `id` column followed by one column per feature name.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(std::iter::once("id").chain(self.names.iter().map(String::as_str)))?;
        for (id, row) in self.ids.iter().zip(&self.rows) {
            let mut record = Vec::with_capacity(row.len() + 1);
            record.push(id.clone());
            record.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Extract every instance in parallel; row order follows input order.
pub fn extract_matrix<'a, I>(
    instances: I,
    schema: &FeatureSchema,
    lexicons: &Lexicons,
    tagger: &TaggerHandle,
) -> FeatureMatrix
where
    I: IntoIterator<Item = &'a PostInstance>,
{
    let instances: Vec<&PostInstance> = instances.into_iter().collect();
    let vectors: Vec<FeatureVector> = instances
        .par_iter()
        .map(|inst| extract_features(inst, schema, lexicons, tagger))
        .collect();
    let (ids, rows) = vectors.into_iter().map(|v| (v.id, v.values)).unzip();
    FeatureMatrix {
        names: schema.names(),
        ids,
        rows,
    }
}
