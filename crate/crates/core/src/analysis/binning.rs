//! Threshold binning of samples and the misclassification summary against
//! external good/bad partition tags.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sample::{sample_scores, SampleScores};
use crate::config::DqiConfig;
use crate::corpus::{CorpusIndex, Partition};
use crate::similarity::Providers;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Retain,
    Remove,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinVerdict {
    pub id: String,
    pub scores: BTreeMap<String, Option<f64>>,
    pub decision: Decision,
    /// Threshold keys whose score fell below the minimum.
    pub failed: Vec<String>,
}

/// Applies the rule `remove iff some score < its threshold`. Undefined
/// scores never fail.
pub fn decide(scores: &SampleScores, thresholds: &BTreeMap<String, f64>) -> BinVerdict {
    let failed: Vec<String> = thresholds
        .iter()
        .filter(|(k, &min)| scores.get(k).is_some_and(|v| v < min))
        .map(|(k, _)| k.clone())
        .collect();
    BinVerdict {
        id: scores.id.clone(),
        scores: scores.scores.clone(),
        decision: if failed.is_empty() {
            Decision::Retain
        } else {
            Decision::Remove
        },
        failed,
    }
}

/// Samples of one partition whose decision contradicts the tag: removed
/// good samples, or retained bad ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub total: usize,
    pub contradicting: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Misclassification {
    pub good: Option<PartitionSummary>,
    pub bad: Option<PartitionSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinReport {
    pub verdicts: Vec<BinVerdict>,
    pub summary: Option<Misclassification>,
    pub flags: Vec<String>,
}

impl BinReport {
    pub fn removed(&self) -> impl Iterator<Item = &BinVerdict> {
        self.verdicts
            .iter()
            .filter(|v| v.decision == Decision::Remove)
    }
}

pub fn misclassification(
    verdicts: &[BinVerdict],
    partitions: &[Partition],
) -> Option<Misclassification> {
    let summarize = |tag: Partition, wrong: Decision| {
        let members: Vec<&BinVerdict> = verdicts
            .iter()
            .zip(partitions)
            .filter(|(_, &p)| p == tag)
            .map(|(v, _)| v)
            .collect();
        if members.is_empty() {
            return None;
        }
        let contradicting = members.iter().filter(|v| v.decision == wrong).count();
        Some(PartitionSummary {
            total: members.len(),
            contradicting,
            fraction: contradicting as f64 / members.len() as f64,
        })
    };
    let good = summarize(Partition::Good, Decision::Remove);
    let bad = summarize(Partition::Bad, Decision::Retain);
    if good.is_none() && bad.is_none() {
        None
    } else {
        Some(Misclassification { good, bad })
    }
}

/// Scores and bins every sample under `cfg.bin`.
pub fn bin_samples(index: &CorpusIndex, cfg: &DqiConfig, providers: &Providers) -> BinReport {
    let verdicts: Vec<BinVerdict> = sample_scores(index, cfg, providers)
        .iter()
        .map(|s| decide(s, &cfg.bin))
        .collect();
    let partitions: Vec<Partition> = index.samples().iter().map(|s| s.partition).collect();
    let summary = misclassification(&verdicts, &partitions);
    let mut flags = Vec::new();
    if summary.is_none() {
        flags.push("no partition tags; misclassification summary skipped".to_string());
    }
    if cfg.bin.is_empty() {
        flags.push("no thresholds configured; every sample retained".to_string());
    }
    BinReport {
        verdicts,
        summary,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BIN_KEYS;
    use crate::linguistic::Tagger;

    fn tagged() -> CorpusIndex {
        let data = r#"{"id":"g1","p":"a b c","h":"d e","label":"x","partition":"good"}
{"id":"g2","p":"f g h","h":"i j","label":"x","partition":"good"}
{"id":"b1","p":"k l m","h":"k l","label":"x","partition":"bad"}
"#;
        CorpusIndex::ingest(data.as_bytes(), &["x".to_string()], &Tagger::default()).unwrap()
    }

    fn all(v: f64) -> BTreeMap<String, f64> {
        BIN_KEYS.iter().map(|k| (k.to_string(), v)).collect()
    }

    #[test]
    fn minus_infinity_retains_everything() {
        let idx = tagged();
        let cfg = DqiConfig {
            bin: all(f64::NEG_INFINITY),
            ..Default::default()
        };
        let r = bin_samples(&idx, &cfg, &Providers::default_for(&idx));
        assert_eq!(r.removed().count(), 0);
        let s = r.summary.unwrap();
        assert_eq!(s.bad.unwrap().fraction, 1.0);
        assert_eq!(s.good.unwrap().fraction, 0.0);
    }

    #[test]
    fn plus_infinity_removes_everything() {
        let idx = tagged();
        let cfg = DqiConfig {
            bin: all(f64::INFINITY),
            ..Default::default()
        };
        let r = bin_samples(&idx, &cfg, &Providers::default_for(&idx));
        assert_eq!(r.removed().count(), 3);
        assert_eq!(r.summary.unwrap().good.unwrap().contradicting, 2);
    }

    #[test]
    fn untagged_corpus_has_no_summary() {
        let data = r#"{"id":"1","p":"a b c","h":"d e","label":"x"}"#;
        let idx =
            CorpusIndex::ingest(data.as_bytes(), &["x".to_string()], &Tagger::default()).unwrap();
        let r = bin_samples(&idx, &DqiConfig::default(), &Providers::default_for(&idx));
        assert!(r.summary.is_none());
        assert!(r.flags.iter().any(|f| f.contains("partition")));
    }

    #[test]
    fn lowering_a_threshold_never_adds_removals() {
        let idx = tagged();
        let providers = Providers::default_for(&idx);
        let scores = sample_scores(&idx, &DqiConfig::default(), &providers);
        for key in BIN_KEYS {
            let mut t = BTreeMap::new();
            for min in [2.0, 1.0, 0.5, 0.0, -1.0] {
                t.insert(key.to_string(), min);
                let now: Vec<bool> = scores
                    .iter()
                    .map(|s| decide(s, &t).decision == Decision::Remove)
                    .collect();
                t.insert(key.to_string(), min - 0.25);
                let lower: Vec<bool> = scores
                    .iter()
                    .map(|s| decide(s, &t).decision == Decision::Remove)
                    .collect();
                assert!(now.iter().zip(&lower).all(|(a, b)| *a || !*b));
            }
        }
    }
}
