use dqi_core::corpus::{infer_labels, Side};
use dqi_core::similarity::{SentenceSimilarity, WordSimilarity};
use dqi_core::stats::{mean, population_std};
use dqi_core::{CorpusIndex, DqiConfig, Providers, Result, Sample, Tagger};

/// Corpus-wide hypothesis/premise word overlap, used to tell whether a
/// candidate's overlap is unusual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapProfile {
    pub mean: f64,
    pub std: f64,
}

/// Share of hypothesis tokens that also occur in the premise.
pub fn word_overlap(premise: &[&String], hypothesis: &[&String]) -> f64 {
    if hypothesis.is_empty() {
        return 0.0;
    }
    let hits = hypothesis.iter().filter(|u| premise.contains(u)).count();
    hits as f64 / hypothesis.len() as f64
}

/// An immutable, versioned view of the loaded corpus. Requests hold an
/// `Arc<Snapshot>` for their whole evaluation.
#[derive(Debug)]
pub struct Snapshot {
    pub version: u64,
    pub corpus_id: String,
    pub index: CorpusIndex,
    pub cfg: DqiConfig,
    pub providers: Providers,
    pub tagger: Tagger,
    pub overlap: OverlapProfile,
}

impl Snapshot {
    /// Indexes `samples` and fits TF-IDF over them. Labels come from the
    /// config when declared, otherwise from the data.
    pub fn build(
        version: u64,
        corpus_id: &str,
        samples: Vec<Sample>,
        cfg: DqiConfig,
        tagger: Tagger,
        word: WordSimilarity,
    ) -> Result<Self> {
        let labels = cfg
            .corpus
            .labels
            .clone()
            .unwrap_or_else(|| infer_labels(&samples));
        let index = CorpusIndex::from_samples(samples, &labels, &tagger)?;
        let providers = Providers {
            sentence: SentenceSimilarity::tfidf(&index),
            word,
        };
        let overlaps: Vec<f64> = (0..index.size())
            .map(|i| {
                let tokens = |side| -> Vec<&String> {
                    let l = index.layout(i);
                    let r = if side == Side::Premise {
                        l.premise.clone()
                    } else {
                        l.hypothesis.clone()
                    };
                    index.sentences()[r]
                        .iter()
                        .flat_map(|e| e.sentence.tokens())
                        .collect()
                };
                word_overlap(&tokens(Side::Premise), &tokens(Side::Hypothesis))
            })
            .collect();
        let overlap = OverlapProfile {
            mean: mean(&overlaps).unwrap_or(0.0),
            std: population_std(&overlaps).unwrap_or(0.0),
        };
        Ok(Snapshot {
            version,
            corpus_id: corpus_id.to_string(),
            index,
            cfg,
            providers,
            tagger,
            overlap,
        })
    }

    /// The same corpus plus `extra` samples, one version later.
    pub fn refit(&self, extra: &[Sample]) -> Result<Self> {
        let mut samples = self.index.samples().to_vec();
        samples.extend_from_slice(extra);
        Snapshot::build(
            self.version + 1,
            &self.corpus_id,
            samples,
            self.cfg.clone(),
            self.tagger.clone(),
            self.providers.word.clone(),
        )
    }
}
