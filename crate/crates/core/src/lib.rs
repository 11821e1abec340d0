//! Clickbait post scoring.
//!
//! The pipeline runs in five stages, each in its own module:
//!
//! - [`corpus`]: read the challenge JSONL files, join posts with their
//!   crowd judgments, and build seeded train/test splits and k-fold partitions.
//! - [`textkit`]: tokenizer, sentence splitter, syllable counter, POS taggers
//!   and the bundled lexicons.
//! - [`features`]: the named feature schema and per-instance extraction.
//! - [`select`]: Fisher-score ranking and top-k selection.
//! - [`learn`]: linear and logistic regression, CART trees and random forests.
//! - [`eval`]: metrics, cross-validation and misclassification reports.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod learn;
pub mod rng;
pub mod select;
pub mod textkit;

pub use error::{Error, Result};
