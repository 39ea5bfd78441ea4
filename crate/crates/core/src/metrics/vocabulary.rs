//! c1, Vocabulary: vocabulary per sample plus the spread of sentence
//! lengths weighted by how many sentences fall inside `(a, b)`.

use super::{Component, ComponentReport, Parameter, Term};
use crate::config::DqiConfig;
use crate::corpus::CorpusIndex;
use crate::error::{Error, Result};
use crate::stats::{band_indicator, canonical_sum, population_std};

/// `T1 + T2 * T3`.
pub fn combine(t1: f64, t2: f64, t3: f64) -> f64 {
    t1 + t2 * t3
}

pub fn vocabulary(index: &CorpusIndex, cfg: &DqiConfig) -> Result<ComponentReport> {
    if index.size() == 0 || index.sentence_count() == 0 {
        return Err(Error::Precondition {
            component: "c1",
            reason: "empty corpus".into(),
        });
    }
    let (a, b) = (cfg.c1.a, cfg.c1.b);
    let lengths: Vec<f64> = index
        .sentences()
        .iter()
        .map(|e| e.sentence.len() as f64)
        .collect();
    let t1 = index.vocabulary() as f64 / index.size() as f64;
    let t2 = population_std(&lengths).unwrap_or(0.0);
    let inside: Vec<f64> = lengths.iter().map(|&s| band_indicator(s, a, b)).collect();
    let t3 = canonical_sum(&inside) / index.sentence_count() as f64;

    let mut report = ComponentReport::new(Component::C1);
    report.value = Some(combine(t1, t2, t3));
    report.terms = vec![
        Term::new("T1", t1),
        Term::new("T2", t2),
        Term::new("T3", t3),
    ];
    report.parameters = vec![Parameter::new("a", a), Parameter::new("b", b)];
    Ok(report)
}
