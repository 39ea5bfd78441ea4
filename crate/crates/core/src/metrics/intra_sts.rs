//! c5, Intra-Sample STS: six additive terms over premise/hypothesis pairs.

use rayon::prelude::*;

use super::{
    length_gap, max_alignment, premise_hypothesis_sim, singleton_count, Component, ComponentReport,
    Parameter, Term,
};
use crate::config::DqiConfig;
use crate::corpus::CorpusIndex;
use crate::error::{Error, Result};
use crate::similarity::{Providers, WordSimilarity};
use crate::stats::{canonical_sum, population_std};

/// Terms below this magnitude are annotated as insignificant.
pub const SIGNIFICANCE: f64 = 1e-3;

/// `T1 + T2 + T3 + T4 + T5 + T6`.
pub fn combine(terms: &[f64; 6]) -> f64 {
    canonical_sum(terms)
}

/// Per-sample T5/T6 ratios. The flags are set when a zero denominator was
/// replaced by 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Ratios {
    pub t5: f64,
    pub t5_guarded: bool,
    pub t6: f64,
    pub t6_guarded: bool,
}

pub(crate) fn ratios(premise: &[&String], hypothesis: &[&String], word: &WordSimilarity) -> Ratios {
    let singles = singleton_count(premise.iter().chain(hypothesis).copied());
    let t5_guarded = singles == 0;
    let t5 =
        (premise.len() + hypothesis.len()) as f64 / if t5_guarded { 1.0 } else { singles as f64 };
    let alignment = max_alignment(hypothesis, premise, word);
    let t6_guarded = alignment <= 0.0;
    let t6 = 1.0 / if t6_guarded { 1.0 } else { alignment };
    Ratios {
        t5,
        t5_guarded,
        t6,
        t6_guarded,
    }
}

/// Tokens of one side of an indexed sample, in order.
pub(crate) fn side_tokens(index: &CorpusIndex, range: std::ops::Range<usize>) -> Vec<&String> {
    index.sentences()[range]
        .iter()
        .flat_map(|e| e.sentence.tokens())
        .collect()
}

struct SampleTerms {
    sim: f64,
    gap: f64,
    ratios: Ratios,
}

pub fn intra_sample_sts(
    index: &CorpusIndex,
    cfg: &DqiConfig,
    providers: &Providers,
) -> Result<ComponentReport> {
    let n = index.size();
    if n == 0 {
        return Err(Error::Precondition {
            component: "c5",
            reason: "empty corpus".into(),
        });
    }
    let isim = cfg.c5.isim;
    let per_sample: Vec<SampleTerms> = (0..n)
        .into_par_iter()
        .map(|i| {
            let layout = index.layout(i);
            let p = side_tokens(index, layout.premise.clone());
            let h = side_tokens(index, layout.hypothesis.clone());
            SampleTerms {
                sim: premise_hypothesis_sim(index, providers, i),
                gap: length_gap(index, i),
                ratios: ratios(&p, &h, &providers.word),
            }
        })
        .collect();

    let size = n as f64;
    let sims: Vec<f64> = per_sample.iter().map(|s| s.sim).collect();
    let gaps: Vec<f64> = per_sample.iter().map(|s| s.gap).collect();
    let sim_dev: Vec<f64> = sims.iter().map(|s| (s - isim).abs()).collect();
    let t5s: Vec<f64> = per_sample.iter().map(|s| s.ratios.t5).collect();
    let t6s: Vec<f64> = per_sample.iter().map(|s| s.ratios.t6).collect();

    let terms = [
        size / (canonical_sum(&sim_dev) + 1.0),
        size / (canonical_sum(&gaps) + 1.0),
        population_std(&gaps).unwrap_or(0.0) / size,
        population_std(&sims).unwrap_or(0.0) / size,
        canonical_sum(&t5s) / size,
        canonical_sum(&t6s) / size,
    ];

    let mut report = ComponentReport::new(Component::C5);
    report.value = Some(combine(&terms));
    for (k, v) in terms.iter().enumerate() {
        let name = format!("T{}", k + 1);
        report.terms.push(Term::new(&name, *v).summand());
        if v.abs() < SIGNIFICANCE {
            report.annotations.push(format!(
                "{name} = {v:e} is below the 1e-3 significance order"
            ));
        }
    }
    report.parameters = vec![Parameter::new("ISIM", isim)];

    let guarded = |f: fn(&Ratios) -> bool| -> Vec<&str> {
        let mut ids: Vec<&str> = per_sample
            .iter()
            .zip(index.samples())
            .filter(|(s, _)| f(&s.ratios))
            .map(|(_, x)| x.id.as_str())
            .collect();
        ids.sort_unstable();
        ids
    };
    let t5_ids = guarded(|r| r.t5_guarded);
    if !t5_ids.is_empty() {
        report.flags.push(format!(
            "T5: no singleton words, denominator set to 1 for samples {}",
            t5_ids.join(", ")
        ));
    }
    let t6_ids = guarded(|r| r.t6_guarded);
    if !t6_ids.is_empty() {
        report.flags.push(format!(
            "T6: zero alignment mass, denominator set to 1 for samples {}",
            t6_ids.join(", ")
        ));
    }
    Ok(report)
}
