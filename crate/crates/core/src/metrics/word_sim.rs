//! c4, Intra-Sample Word Similarity.
//!
//! Each sentence contributes `|Σ_{u≠v} WSim_uv / length - WSIM|`. Sentences
//! with a single token have no pairs and contribute `WSIM`.

use rayon::prelude::*;

use super::{word_similarity_mass, Component, ComponentReport, Parameter, Term};
use crate::config::DqiConfig;
use crate::corpus::CorpusIndex;
use crate::error::{Error, Result};
use crate::similarity::Providers;
use crate::stats::{canonical_sum, mean};

pub fn intra_sample_word_similarity(
    index: &CorpusIndex,
    cfg: &DqiConfig,
    providers: &Providers,
) -> Result<ComponentReport> {
    let n = index.sentence_count();
    if n == 0 {
        return Err(Error::Precondition {
            component: "c4",
            reason: "no sentences".into(),
        });
    }
    let wsim = cfg.c4.wsim;
    let masses: Vec<f64> = index
        .sentences()
        .par_iter()
        .map(|e| word_similarity_mass(e.sentence.tokens(), &providers.word))
        .collect();
    let deviations: Vec<f64> = masses.iter().map(|m| (m - wsim).abs()).collect();
    let deviation_sum = canonical_sum(&deviations);
    let singletons = index
        .sentences()
        .iter()
        .filter(|e| e.sentence.len() == 1)
        .count();

    let mut report = ComponentReport::new(Component::C4);
    report.value = Some(n as f64 / (deviation_sum + 1.0));
    report.terms = vec![
        Term::new("sentences", n as f64),
        Term::new("deviation_sum", deviation_sum),
        Term::new("mean_word_similarity", mean(&masses).unwrap_or(0.0)),
    ];
    report.parameters = vec![Parameter::new("WSIM", wsim)];
    if singletons > 0 {
        report.flags.push(format!(
            "{singletons} single-token sentence(s) contribute |0 - WSIM|"
        ));
    }
    Ok(report)
}
