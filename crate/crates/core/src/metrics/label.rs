//! c6, N-Gram Frequency per Label.
//!
//! Per label, the c2 machinery is re-run on the label's own frequencies
//! (with the ceiling `g` in place of the `(c, d)` band) and the premise /
//! hypothesis length gap is summarized. A corpus-wide T5 per granularity
//! then penalizes elements that recur across many samples of one label.

use super::ngram::{contribution, inverse_spread};
use super::{Component, ComponentReport, Parameter, ResolvedBounds, Term};
use crate::config::{BandMode, DqiConfig};
use crate::corpus::CorpusIndex;
use crate::error::{Error, Result};
use crate::stats::{canonical_sum, negative_part, population_std};

/// Per-element value summed into T2: `1` when `ν ≤ g` in indicator mode,
/// `g - ν` in raw mode.
pub(crate) fn ceiling_value(nu: f64, g: f64, mode: BandMode) -> f64 {
    match mode {
        BandMode::Indicator => {
            if nu <= g {
                1.0
            } else {
                0.0
            }
        }
        BandMode::RawQuadratic => g - nu,
    }
}

/// `(|1 - Count| - (1 - Count)) / 2`, i.e. `max(0, Count - 1)`.
pub fn excess_count(count: f64) -> f64 {
    negative_part(1.0 - count)
}

pub fn ngram_per_label(index: &CorpusIndex, cfg: &DqiConfig) -> Result<ComponentReport> {
    let labels = index.labels();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); labels.len()];
    for (i, layout) in index.layouts().iter().enumerate() {
        members[layout.label].push(i);
    }
    let present = members.iter().filter(|m| !m.is_empty()).count();
    if present < 2 {
        return Err(Error::Precondition {
            component: "c6",
            reason: format!("need samples under at least 2 labels, have {present}"),
        });
    }
    let bounds = ResolvedBounds::new(index, cfg);
    let mut report = ComponentReport::new(Component::C6);
    for &g in &cfg.corpus.granularities {
        report.parameters.push(Parameter::at("g", g, bounds.g[&g]));
    }

    for (li, label) in labels.iter().enumerate() {
        let samples = &members[li];
        report
            .terms
            .push(Term::new("samples", samples.len() as f64).for_label(label));
        if samples.is_empty() {
            report
                .flags
                .push(format!("label {label}: no samples; skipped"));
            continue;
        }
        for &g in &cfg.corpus.granularities {
            let freqs: Vec<f64> = index
                .table(g)
                .iter()
                .map(|(_, c)| c.by_label[li] as f64)
                .filter(|&nu| nu > 0.0)
                .collect();
            let size = freqs.len();
            if size == 0 {
                report
                    .flags
                    .push(format!("label {label}, {g}: no elements; skipped"));
                for name in ["T1", "T2", "contribution"] {
                    report
                        .terms
                        .push(Term::undefined(name).at(g).for_label(label));
                }
                continue;
            }
            let ceiling = bounds.g[&g];
            let values: Vec<f64> = freqs
                .iter()
                .map(|&nu| ceiling_value(nu, ceiling, cfg.c6.mode))
                .collect();
            let t2 = canonical_sum(&values) / size as f64;
            let normalized: Vec<f64> = freqs.iter().map(|f| f / size as f64).collect();
            let t1 = if size < 2 {
                None
            } else {
                inverse_spread(&normalized)
            };
            match t1 {
                Some(t1) => {
                    report
                        .terms
                        .push(Term::new("T1", t1).at(g).for_label(label));
                    report
                        .terms
                        .push(Term::new("T2", t2).at(g).for_label(label));
                    report.terms.push(
                        Term::new("contribution", contribution(t1, t2))
                            .at(g)
                            .for_label(label)
                            .summand(),
                    );
                }
                None => {
                    report.flags.push(format!(
                        "label {label}, {g}: sigma undefined or 0; T1 undefined, excluded"
                    ));
                    report
                        .terms
                        .push(Term::undefined("T1").at(g).for_label(label));
                    report
                        .terms
                        .push(Term::new("T2", t2).at(g).for_label(label));
                    report
                        .terms
                        .push(Term::undefined("contribution").at(g).for_label(label));
                }
            }
        }
        let gaps: Vec<f64> = samples
            .iter()
            .map(|&i| super::length_gap(index, i))
            .collect();
        let n = samples.len() as f64;
        report.terms.push(
            Term::new("T3", n / (canonical_sum(&gaps) + 1.0))
                .for_label(label)
                .summand(),
        );
        report.terms.push(
            Term::new("T4", population_std(&gaps).unwrap_or(0.0) / n)
                .for_label(label)
                .summand(),
        );
    }

    for &g in &cfg.corpus.granularities {
        let table = index.table(g);
        let spreads: Vec<f64> = table
            .iter()
            .map(|(_, c)| {
                let excess: Vec<f64> = c
                    .samples_by_label
                    .iter()
                    .map(|&k| excess_count(k as f64))
                    .collect();
                population_std(&excess).unwrap_or(0.0)
            })
            .collect();
        let t5 = table.size() as f64 / (canonical_sum(&spreads) + 1.0);
        report.terms.push(Term::new("T5", t5).at(g).summand());
    }

    let summands: Vec<f64> = report
        .terms
        .iter()
        .filter(|t| t.summand)
        .filter_map(|t| t.value)
        .collect();
    report.value = Some(canonical_sum(&summands));
    Ok(report)
}
