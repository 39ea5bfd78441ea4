//! Corpus-level comparison and sample-level binning.

mod binning;
mod compare;
mod sample;

pub use binning::{
    bin_samples, decide, misclassification, BinReport, BinVerdict, Decision, Misclassification,
    PartitionSummary,
};
pub use compare::{compare_reports, compare_splits, ComparisonRow, SplitComparison, Verdict};
pub use sample::{sample_scores, SampleScores, ScoringContext};
