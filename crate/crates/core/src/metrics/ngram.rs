//! c2, Inter-Sample N-gram Frequency and Relation.
//!
//! For every granularity the inverse spread of the normalized frequency
//! distribution is multiplied by the share of elements whose frequency lies
//! inside `(c, d)`. Sentences additionally get a non-normalized row, which is
//! reported but not added into the overall.

use super::{band_value, Component, ComponentReport, Parameter, ResolvedBounds, Term};
use crate::config::DqiConfig;
use crate::corpus::CorpusIndex;
use crate::error::Result;
use crate::linguistic::Granularity;
use crate::stats::{canonical_sum, population_std};

/// `T1 * T2`.
pub fn contribution(t1: f64, t2: f64) -> f64 {
    t1 * t2
}

/// `1 / σ(values)`, or `None` when the spread is zero or undefined.
pub(crate) fn inverse_spread(values: &[f64]) -> Option<f64> {
    match population_std(values) {
        Some(s) if s > 0.0 => Some(1.0 / s),
        _ => None,
    }
}

pub fn inter_sample_ngram(index: &CorpusIndex, cfg: &DqiConfig) -> Result<ComponentReport> {
    let bounds = ResolvedBounds::new(index, cfg);
    let mut report = ComponentReport::new(Component::C2);
    let mut contributions = Vec::new();
    report.parameters.push(Parameter::new("c", bounds.c));

    for &g in &cfg.corpus.granularities {
        let table = index.table(g);
        let size = table.size();
        let d = bounds.d[&g];
        report.parameters.push(Parameter::at("d", g, d));
        if size == 0 {
            report
                .flags
                .push(format!("{g}: no elements; granularity skipped"));
            report.terms.push(Term::undefined("T1").at(g));
            report.terms.push(Term::undefined("T2").at(g));
            report.terms.push(Term::undefined("contribution").at(g));
            continue;
        }
        let freqs: Vec<f64> = table.iter().map(|(_, c)| c.total as f64).collect();
        let normalized: Vec<f64> = freqs.iter().map(|f| f / size as f64).collect();
        let band: Vec<f64> = freqs
            .iter()
            .map(|&nu| band_value(nu, bounds.c, d, cfg.c2.mode))
            .collect();
        let t2 = canonical_sum(&band) / size as f64;

        let t1 = if size < 2 {
            report.flags.push(format!(
                "{g}: fewer than 2 distinct elements; T1 undefined, granularity excluded"
            ));
            None
        } else {
            let t1 = inverse_spread(&normalized);
            if t1.is_none() {
                report.flags.push(format!(
                    "{g}: all frequencies equal (sigma = 0); T1 undefined, granularity excluded"
                ));
            }
            t1
        };
        report.terms.push(match t1 {
            Some(v) => Term::new("T1", v).at(g),
            None => Term::undefined("T1").at(g),
        });
        report.terms.push(Term::new("T2", t2).at(g));
        match t1 {
            Some(t1) => {
                let c = contribution(t1, t2);
                contributions.push(c);
                report
                    .terms
                    .push(Term::new("contribution", c).at(g).summand());
            }
            None => report.terms.push(Term::undefined("contribution").at(g)),
        }

        if g == Granularity::Sentences {
            match inverse_spread(&freqs) {
                Some(raw) => {
                    report.terms.push(Term::new("T1_not_normalized", raw).at(g));
                    report.terms.push(
                        Term::new("contribution_not_normalized", contribution(raw, t2)).at(g),
                    );
                }
                None => {
                    report
                        .terms
                        .push(Term::undefined("T1_not_normalized").at(g));
                    report
                        .terms
                        .push(Term::undefined("contribution_not_normalized").at(g));
                }
            }
        }
    }
    if contributions.is_empty() {
        report
            .flags
            .push("no granularity produced a defined contribution; overall is 0".into());
    }
    report.value = Some(canonical_sum(&contributions));
    Ok(report)
}
