//! The seven DQI components and their aggregate.
//!
//! Each component is a pure function of a [`CorpusIndex`], a [`DqiConfig`]
//! and, where similarity is involved, the [`Providers`]. Every function
//! returns a [`ComponentReport`] carrying the overall value together with
//! all of the terms it was combined from.

mod aggregate;
pub(crate) mod inter_split;
pub(crate) mod inter_sts;
pub(crate) mod intra_sts;
pub(crate) mod label;
pub(crate) mod ngram;
mod report;
pub(crate) mod vocabulary;
mod word_sim;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

pub use aggregate::{
    aggregate, aggregate_with, weighted_sum, Aggregate, Combiner, CombinerRegistry, WeightedSum,
};
pub use inter_split::inter_split_sts;
pub use inter_sts::{inter_sample_sts, neighbor_budget};
pub use intra_sts::intra_sample_sts;
pub use label::ngram_per_label;
pub use ngram::inter_sample_ngram;
pub use report::{reports_to_csv, Component, ComponentReport, Parameter, Term};
pub use vocabulary::vocabulary;
pub use word_sim::intra_sample_word_similarity;

use crate::config::{BandMode, Bound, DqiConfig};
use crate::corpus::{CorpusIndex, Side};
use crate::error::{Error, Result};
use crate::linguistic::Granularity;
use crate::similarity::{Providers, WordSimilarity};
use crate::stats::{quantile, sign};

/// Frequency bounds resolved against a corpus, per granularity.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedBounds {
    pub c: f64,
    pub d: BTreeMap<Granularity, f64>,
    pub g: BTreeMap<Granularity, f64>,
}

impl ResolvedBounds {
    pub fn new(index: &CorpusIndex, cfg: &DqiConfig) -> Self {
        let mut d = BTreeMap::new();
        let mut g = BTreeMap::new();
        for gran in Granularity::ALL {
            d.insert(gran, resolve_bound(cfg.c2.d, index, gran));
            g.insert(gran, resolve_bound(cfg.g(), index, gran));
        }
        ResolvedBounds { c: cfg.c2.c, d, g }
    }
}

/// A fixed bound as is; a quantile over the granularity's frequencies ν.
pub fn resolve_bound(bound: Bound, index: &CorpusIndex, granularity: Granularity) -> f64 {
    match bound {
        Bound::Fixed(v) => v,
        Bound::Quantile(q) => {
            let freqs: Vec<f64> = index
                .table(granularity)
                .iter()
                .map(|(_, c)| c.total as f64)
                .collect();
            quantile(&freqs, q).unwrap_or(0.0)
        }
    }
}

/// `sign((ν - lo)(hi - ν))`, or the bare product in raw mode.
pub fn band_value(nu: f64, lo: f64, hi: f64, mode: BandMode) -> f64 {
    match mode {
        BandMode::Indicator => sign((nu - lo) * (hi - nu)),
        BandMode::RawQuadratic => (nu - lo) * (hi - nu),
    }
}

/// Sim_ph: mean Sim over premise-sentence × hypothesis-sentence pairs.
pub fn premise_hypothesis_sim(index: &CorpusIndex, providers: &Providers, sample: usize) -> f64 {
    let layout = index.layout(sample);
    let sims: Vec<f64> = layout
        .premise
        .clone()
        .flat_map(|l| layout.hypothesis.clone().map(move |m| (l, m)))
        .map(|(l, m)| providers.sentence.corpus_sim(l, m))
        .collect();
    crate::stats::mean(&sims).unwrap_or(0.0)
}

/// |s_p - s_h|.
pub fn length_gap(index: &CorpusIndex, sample: usize) -> f64 {
    let sp = index.side_length(sample, Side::Premise) as f64;
    let sh = index.side_length(sample, Side::Hypothesis) as f64;
    (sp - sh).abs()
}

/// Σ over ordered position pairs u ≠ v of WSim, divided by the sentence length.
pub fn word_similarity_mass(tokens: &[String], word: &WordSimilarity) -> f64 {
    let n = tokens.len();
    if n == 0 {
        return 0.0;
    }
    let mut total = 0.0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                total += word.sim(&tokens[u], &tokens[v]);
            }
        }
    }
    total / n as f64
}

/// Number of distinct words occurring exactly once across both sides.
pub fn singleton_count<'a>(tokens: impl IntoIterator<Item = &'a String>) -> usize {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    counts.values().filter(|&&c| c == 1).count()
}

/// Σ over hypothesis tokens u of max over premise tokens v of WSim(u, v).
pub fn max_alignment(hypothesis: &[&String], premise: &[&String], word: &WordSimilarity) -> f64 {
    hypothesis
        .iter()
        .map(|u| premise.iter().map(|v| word.sim(u, v)).fold(0.0, f64::max))
        .sum()
}

/// Computes all seven components. A component whose precondition fails
/// (c7 without a train/test split, c6 with a single label) is reported as
/// skipped instead of failing the whole run.
pub fn compute_all(
    index: &CorpusIndex,
    cfg: &DqiConfig,
    providers: &Providers,
) -> Result<Vec<ComponentReport>> {
    let results: Vec<Result<ComponentReport>> = Component::ALL
        .par_iter()
        .map(|&c| {
            let result = match c {
                Component::C1 => vocabulary(index, cfg),
                Component::C2 => inter_sample_ngram(index, cfg),
                Component::C3 => inter_sample_sts(index, cfg, providers),
                Component::C4 => intra_sample_word_similarity(index, cfg, providers),
                Component::C5 => intra_sample_sts(index, cfg, providers),
                Component::C6 => ngram_per_label(index, cfg),
                Component::C7 => inter_split_sts(index, cfg, providers),
            };
            match result {
                Err(Error::SplitAbsent(reason)) => Ok(ComponentReport::skipped(
                    c,
                    format!("split absent: {reason}"),
                )),
                Err(Error::Precondition { reason, .. }) => Ok(ComponentReport::skipped(c, reason)),
                other => other,
            }
        })
        .collect();
    let reports: Vec<ComponentReport> = results.into_iter().collect::<Result<_>>()?;
    debug_assert!(reports.iter().all(ComponentReport::verify_identity));
    Ok(reports)
}

/// Term-combination rules, usable on bare numbers.
pub mod identities {
    /// c5: the sum of the six terms.
    pub use super::intra_sts::combine as c5;
    /// c2 and c6: `T1 * T2` per granularity.
    pub use super::ngram::contribution as c2;
    /// c1: `T1 + T2 * T3`.
    pub use super::vocabulary::combine as c1;
}
