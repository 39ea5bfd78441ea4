//! Data Quality Index (DQI) for natural-language benchmark corpora.
//!
//! A corpus of premise/hypothesis samples is ingested into a [`CorpusIndex`],
//! which the seven component metrics in [`metrics`] read without mutation.
//! The [`analysis`] module compares two corpora component by component and
//! bins individual samples against configured thresholds.
//!
//! ```
//! use dqi_core::{compute_all, CorpusIndex, DqiConfig, Providers, Tagger};
//!
//! let data = r#"{"id":"1","p":"A man sits on a bench.","h":"A person sits.","label":"entailment"}
//! {"id":"2","p":"A dog runs in the park.","h":"The dog is asleep.","label":"contradiction"}
//! "#;
//! let labels = vec!["contradiction".to_string(), "entailment".to_string()];
//! let index = CorpusIndex::ingest(data.as_bytes(), &labels, &Tagger::default()).unwrap();
//! let providers = Providers::default_for(&index);
//! let reports = compute_all(&index, &DqiConfig::default(), &providers).unwrap();
//! assert_eq!(reports.len(), 7);
//! assert!(reports.iter().all(|r| r.verify_identity()));
//! ```

pub mod analysis;
pub mod config;
pub mod corpus;
pub mod error;
pub mod linguistic;
pub mod metrics;
pub mod similarity;
pub mod stats;
pub mod synthetic;

pub use config::DqiConfig;
pub use corpus::{CorpusIndex, Sample};
pub use error::{Error, Result};
pub use linguistic::{Granularity, Tagger};
pub use metrics::{compute_all, Component, ComponentReport};
pub use similarity::Providers;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/similarity.md")]
    mod similarity {}
    #[doc = include_str!("../../../book/src/components.md")]
    mod components {}
    #[doc = include_str!("../../../book/src/configuration.md")]
    mod configuration {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/determinism.md")]
    mod determinism {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
