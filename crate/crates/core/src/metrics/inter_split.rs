//! c7, Inter-Split STS: how far each test sentence's best train match sits
//! from the target similarity SSIM.

use rayon::prelude::*;

use super::{Component, ComponentReport, Parameter, Term};
use crate::config::DqiConfig;
use crate::corpus::{CorpusIndex, Split};
use crate::error::{Error, Result};
use crate::similarity::Providers;
use crate::stats::{canonical_sum, mean};

/// Sentence ordinals belonging to samples of the given split.
pub(crate) fn split_sentences(index: &CorpusIndex, split: Split) -> Vec<usize> {
    index
        .sentences()
        .iter()
        .enumerate()
        .filter(|(_, e)| index.samples()[e.sample].split == split)
        .map(|(l, _)| l)
        .collect()
}

pub fn inter_split_sts(
    index: &CorpusIndex,
    cfg: &DqiConfig,
    providers: &Providers,
) -> Result<ComponentReport> {
    let train = split_sentences(index, Split::Train);
    let test = split_sentences(index, Split::Test);
    if train.is_empty() || test.is_empty() {
        return Err(Error::SplitAbsent(format!(
            "c7 needs train and test samples, have {} train and {} test",
            index.split_size(Split::Train),
            index.split_size(Split::Test)
        )));
    }
    let ssim = cfg.c7.ssim;
    let maxima: Vec<f64> = test
        .par_iter()
        .map(|&t| {
            train
                .iter()
                .map(|&r| providers.sentence.corpus_sim(t, r))
                .fold(0.0, f64::max)
        })
        .collect();
    let deviations: Vec<f64> = maxima.iter().map(|m| (m - ssim).abs()).collect();
    let deviation_sum = canonical_sum(&deviations);
    let test_samples = index.split_size(Split::Test) as f64;

    let mut report = ComponentReport::new(Component::C7);
    report.value = Some(test_samples / (deviation_sum + 1.0));
    report.terms = vec![
        Term::new("test_samples", test_samples),
        Term::new("test_sentences", test.len() as f64),
        Term::new("deviation_sum", deviation_sum),
        Term::new("mean_max_similarity", mean(&maxima).unwrap_or(0.0)),
    ];
    report.parameters = vec![Parameter::new("SSIM", ssim)];
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linguistic::Tagger;
    use crate::similarity::SentenceSimilarity;

    fn index(rows: &[(&str, &str, &str)]) -> CorpusIndex {
        let data: String = rows
            .iter()
            .enumerate()
            .map(|(i, (p, h, s))| format!("{{\"id\":\"{i}\",\"p\":\"{p}\",\"h\":\"{h}\",\"label\":\"x\",\"split\":\"{s}\"}}\n"))
            .collect();
        CorpusIndex::ingest(data.as_bytes(), &["x".to_string()], &Tagger::default()).unwrap()
    }

    #[test]
    fn missing_split_is_reported() {
        let idx = index(&[("a", "b", "train"), ("c", "d", "train")]);
        let r = inter_split_sts(&idx, &DqiConfig::default(), &Providers::default_for(&idx));
        assert!(matches!(r, Err(Error::SplitAbsent(_))));
    }

    #[test]
    fn identical_splits_with_target_one() {
        let idx = index(&[("a b", "c d", "train"), ("a b", "c d", "test")]);
        let mut cfg = DqiConfig::default();
        cfg.c7.ssim = 1.0;
        let r = inter_split_sts(&idx, &cfg, &Providers::default_for(&idx)).unwrap();
        assert_eq!(r.value, Some(1.0));
    }

    #[test]
    fn disjoint_vocabulary_with_target_zero() {
        let idx = index(&[
            ("a b", "c d", "train"),
            ("e f", "g h", "test"),
            ("i", "j", "test"),
        ]);
        let mut cfg = DqiConfig::default();
        cfg.c7.ssim = 0.0;
        let r = inter_split_sts(&idx, &cfg, &Providers::default_for(&idx)).unwrap();
        assert_eq!(r.value, Some(2.0));
        assert!(r.verify_identity());
    }

    #[test]
    fn hand_matrix() {
        // sentences 0-3 train, 4-7 test
        let idx = index(&[
            ("a", "b", "train"),
            ("c", "d", "train"),
            ("e", "f", "test"),
            ("g", "h", "test"),
        ]);
        let mut text = String::new();
        // best train matches: 4 → 0.9, 5 → 0.3, 6 → 0.1, 7 → 0.5
        for (i, j, s) in [
            (4, 0, 0.9),
            (4, 1, 0.2),
            (5, 2, 0.3),
            (6, 3, 0.1),
            (7, 0, 0.5),
            (7, 3, 0.4),
            (4, 5, 0.95),
        ] {
            text.push_str(&format!("{i} {j} {s}\n"));
        }
        let providers = Providers {
            sentence: SentenceSimilarity::matrix(text.as_bytes(), &idx).unwrap(),
            word: Default::default(),
        };
        let r = inter_split_sts(&idx, &DqiConfig::default(), &providers).unwrap();
        // SSIM 0.3: deviations 0.6 + 0 + 0.2 + 0.2 = 1.0
        assert!((r.term_value("deviation_sum").unwrap() - 1.0).abs() < 1e-12);
        assert!((r.value.unwrap() - 2.0 / 2.0).abs() < 1e-12);
    }
}
