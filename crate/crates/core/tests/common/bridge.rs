//! Feeds oracle corpora through the library.

#![allow(dead_code)]

use dqi_core::config::Bound;
use dqi_core::linguistic::TagLexicon;
use dqi_core::similarity::{SentenceSimilarity, WordSimilarity};
use dqi_core::{compute_all, CorpusIndex, DqiConfig, Providers, Tagger};

use super::oracle::{labels, lexicon_text, matrix_text, records, OCorpus, OSim, Params};

pub fn config(p: &Params) -> DqiConfig {
    let mut cfg = DqiConfig::default();
    cfg.c1.a = p.a;
    cfg.c1.b = p.b;
    cfg.c2.c = p.c;
    cfg.c2.d = Bound::Quantile(p.d_quantile);
    cfg.c3.sim = p.sim;
    cfg.c3.e = p.e;
    cfg.c4.wsim = p.wsim;
    cfg.c5.isim = p.isim;
    cfg.c6.g = Some(Bound::Quantile(p.g_quantile));
    cfg.c7.ssim = p.ssim;
    cfg
}

pub fn index(c: &OCorpus) -> CorpusIndex {
    let lexicon = TagLexicon::from_reader(lexicon_text().as_bytes()).unwrap();
    CorpusIndex::ingest(records(c).as_bytes(), &labels(c), &Tagger::Lexicon(lexicon)).unwrap()
}

/// Overall values of c1..c7 as computed by the library.
pub fn library(c: &OCorpus, sim: &OSim, p: &Params) -> [Option<f64>; 7] {
    let idx = index(c);
    let sentence = match sim {
        OSim::TfIdf => SentenceSimilarity::tfidf(&idx),
        OSim::Matrix(m) => SentenceSimilarity::matrix(matrix_text(m).as_bytes(), &idx).unwrap(),
    };
    let providers = Providers {
        sentence,
        word: WordSimilarity::ExactMatch,
    };
    let reports = compute_all(&idx, &config(p), &providers).unwrap();
    assert!(reports.iter().all(|r| r.verify_identity()));
    let mut out = [None; 7];
    for r in reports {
        out[r.component.ordinal()] = r.value;
    }
    out
}
