//! Per-sample restrictions of the seven components.
//!
//! Terms that are sums over samples or sentences are evaluated on the
//! sample's own share. Relational terms (neighbor statistics, label counts,
//! best train match) compare the sample against the rest of the corpus.
//! Every score is oriented like its component: higher is better.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::DqiConfig;
use crate::corpus::{CorpusIndex, Split};
use crate::error::{Error, Result};
use crate::linguistic::{Granularity, TokenizedSentence};
use crate::metrics::inter_split::split_sentences;
use crate::metrics::inter_sts::neighbor_stats;
use crate::metrics::intra_sts::ratios;
use crate::metrics::label::{ceiling_value, excess_count};
use crate::metrics::{band_value, neighbor_budget, word_similarity_mass, ResolvedBounds};
use crate::similarity::{Providers, SentenceRef, SparseVector};
use crate::stats::{band_indicator, canonical_sum, mean, population_std};

/// Scores of one sample keyed by component (`c5`) and sub-term (`c5.T6`).
/// `None` when the score is undefined for this sample (c7 without a train split).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleScores {
    pub id: String,
    pub scores: BTreeMap<String, Option<f64>>,
}

impl SampleScores {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.scores.get(key).copied().flatten()
    }
}

/// A sample as seen by the scorer: its sentences, their provider handles and
/// whether it already lives in the index.
struct View<'a> {
    sentences: Vec<&'a TokenizedSentence>,
    refs: Vec<SentenceRef<'a>>,
    premise: usize,
    label: usize,
    /// Corpus ordinals of the sample's own sentences when indexed.
    own: Option<Range<usize>>,
}

impl View<'_> {
    fn is_virtual(&self) -> bool {
        self.own.is_none()
    }

    fn excluded(&self, m: usize) -> bool {
        self.own.as_ref().is_some_and(|r| r.contains(&m))
    }
}

/// Corpus-level quantities resolved once and shared by every sample.
pub struct ScoringContext<'a> {
    index: &'a CorpusIndex,
    cfg: &'a DqiConfig,
    providers: &'a Providers,
    bounds: ResolvedBounds,
    train: Vec<usize>,
}

impl<'a> ScoringContext<'a> {
    pub fn new(index: &'a CorpusIndex, cfg: &'a DqiConfig, providers: &'a Providers) -> Self {
        ScoringContext {
            index,
            cfg,
            providers,
            bounds: ResolvedBounds::new(index, cfg),
            train: split_sentences(index, Split::Train),
        }
    }

    pub fn index(&self) -> &CorpusIndex {
        self.index
    }

    /// Scores sample `i` of the index.
    pub fn score_indexed(&self, i: usize) -> SampleScores {
        let layout = self.index.layout(i);
        let range = layout.sentences();
        let view = View {
            sentences: self.index.sentences()[range.clone()]
                .iter()
                .map(|e| &e.sentence)
                .collect(),
            refs: range.clone().map(SentenceRef::Corpus).collect(),
            premise: layout.premise.len(),
            label: layout.label,
            own: Some(range),
        };
        let id = self.index.samples()[i].id.clone();
        self.score(id, &view)
            .expect("corpus sentences are always resolvable")
    }

    /// Scores a sample that is not part of the index against the frozen
    /// corpus statistics. Fails for providers that cannot encode new text.
    pub fn score_candidate(
        &self,
        id: &str,
        premise: &[TokenizedSentence],
        hypothesis: &[TokenizedSentence],
        label: usize,
    ) -> Result<SampleScores> {
        if premise.is_empty() || hypothesis.is_empty() {
            return Err(Error::EmptySentence);
        }
        let sentences: Vec<&TokenizedSentence> = premise.iter().chain(hypothesis).collect();
        let vectors: Vec<SparseVector> = sentences
            .iter()
            .map(|s| self.providers.sentence.encode(s))
            .collect::<Result<_>>()?;
        let view = View {
            sentences,
            refs: vectors.iter().map(SentenceRef::Encoded).collect(),
            premise: premise.len(),
            label,
            own: None,
        };
        self.score(id.to_string(), &view)
    }

    fn sim(&self, a: SentenceRef<'_>, b: SentenceRef<'_>) -> Result<f64> {
        self.providers.sentence.sim(a, b)
    }

    fn score(&self, id: String, v: &View<'_>) -> Result<SampleScores> {
        let mut s = BTreeMap::new();
        let mut put = |k: &str, x: Option<f64>| {
            s.insert(k.to_string(), x);
        };
        let cfg = self.cfg;
        let own_counts = self.own_counts(v);

        // c1
        let c1 = v
            .sentences
            .iter()
            .map(|t| band_indicator(t.len() as f64, cfg.c1.a, cfg.c1.b))
            .fold(f64::INFINITY, f64::min);
        put("c1", Some(c1));
        put("c1.T3", Some(c1));

        // c2
        let mut band = Vec::new();
        for (&(g, ref el), &own) in &own_counts {
            let nu = self.nu(g, el, own, v, None);
            band.extend(std::iter::repeat_n(
                band_value(nu, self.bounds.c, self.bounds.d[&g], cfg.c2.mode),
                own,
            ));
        }
        let c2 = mean(&band).unwrap_or(0.0);
        put("c2", Some(c2));
        put("c2.T2", Some(c2));

        // c3
        let n = self.index.sentence_count();
        let mut below_total = 0.0;
        let mut neighbor_total = 0.0;
        let mut penalties = Vec::new();
        for (j, &r) in v.refs.iter().enumerate() {
            let mut row = Vec::with_capacity(n + v.refs.len());
            for m in (0..n).filter(|&m| !v.excluded(m)) {
                row.push(self.sim(r, SentenceRef::Corpus(m))?);
            }
            for (k, &o) in v.refs.iter().enumerate() {
                if k != j {
                    row.push(self.sim(r, o)?);
                }
            }
            let k = neighbor_budget(cfg.c3.e, row.len());
            neighbor_total += row.len() as f64;
            let (below, penalty) = neighbor_stats(&mut row, cfg.c3.sim, k);
            below_total += below;
            penalties.push(penalty);
        }
        let c3_t1 = if neighbor_total > 0.0 {
            1.0 - below_total / neighbor_total
        } else {
            1.0
        };
        let c3_t2 = 2.0 / (canonical_sum(&penalties) + 1.0);
        put("c3", Some(c3_t1 + c3_t2));
        put("c3.T1", Some(c3_t1));
        put("c3.T2", Some(c3_t2));

        // c4
        let deviations: Vec<f64> = v
            .sentences
            .iter()
            .map(|t| (word_similarity_mass(t.tokens(), &self.providers.word) - cfg.c4.wsim).abs())
            .collect();
        put(
            "c4",
            Some(v.sentences.len() as f64 / (canonical_sum(&deviations) + 1.0)),
        );

        // c5
        let (p_refs, h_refs) = v.refs.split_at(v.premise);
        let mut sims = Vec::new();
        for &a in p_refs {
            for &b in h_refs {
                sims.push(self.sim(a, b)?);
            }
        }
        let sim_ph = mean(&sims).unwrap_or(0.0);
        let p_tokens: Vec<&String> = v.sentences[..v.premise]
            .iter()
            .flat_map(|t| t.tokens())
            .collect();
        let h_tokens: Vec<&String> = v.sentences[v.premise..]
            .iter()
            .flat_map(|t| t.tokens())
            .collect();
        let gap = (p_tokens.len() as f64 - h_tokens.len() as f64).abs();
        let r = ratios(&p_tokens, &h_tokens, &self.providers.word);
        let c5 = [
            1.0 / ((sim_ph - cfg.c5.isim).abs() + 1.0),
            1.0 / (gap + 1.0),
            r.t5,
            r.t6,
        ];
        put("c5", Some(canonical_sum(&c5)));
        put("c5.T1", Some(c5[0]));
        put("c5.T2", Some(c5[1]));
        put("c5.T5", Some(c5[2]));
        put("c5.T6", Some(c5[3]));

        // c6
        let mut under = Vec::new();
        let mut spreads = Vec::new();
        for (&(g, ref el), &own) in &own_counts {
            let nu = self.nu(g, el, own, v, Some(v.label));
            under.extend(std::iter::repeat_n(
                ceiling_value(nu, self.bounds.g[&g], cfg.c6.mode),
                own,
            ));
            let mut counts: Vec<f64> = self.index.table(g).get(el).map_or_else(
                || vec![0.0; self.index.labels().len()],
                |c| c.samples_by_label.iter().map(|&k| k as f64).collect(),
            );
            if v.is_virtual() {
                counts[v.label] += 1.0;
            }
            let excess: Vec<f64> = counts.iter().map(|&k| excess_count(k)).collect();
            spreads.push(population_std(&excess).unwrap_or(0.0));
        }
        let c6 = [
            mean(&under).unwrap_or(0.0),
            1.0 / (gap + 1.0),
            1.0 / (mean(&spreads).unwrap_or(0.0) + 1.0),
        ];
        put("c6", Some(canonical_sum(&c6)));
        put("c6.T2", Some(c6[0]));
        put("c6.T3", Some(c6[1]));
        put("c6.T5", Some(c6[2]));

        // c7
        let c7 = if self.train.is_empty() {
            None
        } else {
            let mut devs = Vec::new();
            for &r in &v.refs {
                let mut best: Option<f64> = None;
                for &m in self.train.iter().filter(|&&m| !v.excluded(m)) {
                    let x = self.sim(r, SentenceRef::Corpus(m))?;
                    best = Some(best.map_or(x, |b| b.max(x)));
                }
                if let Some(b) = best {
                    devs.push((b - cfg.c7.ssim).abs());
                }
            }
            if devs.is_empty() {
                None
            } else {
                Some(v.refs.len() as f64 / (canonical_sum(&devs) + 1.0))
            }
        };
        put("c7", c7);

        Ok(SampleScores { id, scores: s })
    }

    /// Own occurrence count of every (granularity, element) in the sample.
    fn own_counts(&self, v: &View<'_>) -> BTreeMap<(Granularity, String), usize> {
        let mut out = BTreeMap::new();
        for &g in &self.cfg.corpus.granularities {
            for t in &v.sentences {
                for el in g.elements(t) {
                    *out.entry((g, el)).or_default() += 1;
                }
            }
        }
        out
    }

    /// ν of an element, corpus-wide or under one label. A virtual sample adds
    /// its own occurrences.
    fn nu(&self, g: Granularity, el: &str, own: usize, v: &View<'_>, label: Option<usize>) -> f64 {
        let counts = self.index.table(g).get(el);
        let base = match label {
            None => counts.map_or(0, |c| c.total),
            Some(l) => counts.map_or(0, |c| c.by_label[l]),
        };
        let extra = if v.is_virtual() { own as u64 } else { 0 };
        (base + extra) as f64
    }
}

/// Scores every sample of the index, in sample order.
pub fn sample_scores(
    index: &CorpusIndex,
    cfg: &DqiConfig,
    providers: &Providers,
) -> Vec<SampleScores> {
    let ctx = ScoringContext::new(index, cfg, providers);
    (0..index.size())
        .into_par_iter()
        .map(|i| ctx.score_indexed(i))
        .collect()
}
