//! The named feature schema and per-instance extraction.

mod extract;
mod ops;
mod schema;

pub use extract::{extract_features, extract_matrix, FeatureMatrix, FeatureVector};
pub use ops::{
    detect_pos_pattern, flesch_kincaid_grade, flesch_reading_ease, keyword_match_count,
    overlap_similarity, pos_ngram_counts, post_flags, PatternId, PostFlag, PostFlags, TextCounts,
    FIVE_W_ONE_H,
};
pub use schema::{Extractor, FeatureEntry, FeatureSchema, Group, Readability, RANKED_FEATURE_NAMES};
