//! Metrics, k-fold cross-validation and the misclassification report.

mod cv;
mod metrics;
mod report;

pub use cv::{cross_validate, cross_validate_corpus, CvConfig, CvReport, FoldResult, LabeledMatrix};
pub use metrics::{auc, compute_metrics, quantile, Metrics};
pub use report::{ambiguous_fraction, error_report, quartiles, ErrorReport, AMBIGUOUS_BAND};
