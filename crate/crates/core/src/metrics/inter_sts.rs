//! c3, Inter-Sample STS.
//!
//! For each sentence `l`, the indicator `sign((|Sim_lm - SIM| - (Sim_lm - SIM)) / 2)`
//! is 1 exactly when `Sim_lm < SIM`. T1 divides `size(S)` by one plus the
//! spread of the per-sentence indicator counts. T2 accumulates
//! `|Sim_lm - SIM| - (Sim_lm - SIM)` over each sentence's `k` most similar
//! neighbors, `k = ceil(e * (size(S) - 1))`.

use rayon::prelude::*;

use super::{Component, ComponentReport, Parameter, Term};
use crate::config::DqiConfig;
use crate::corpus::CorpusIndex;
use crate::error::{Error, Result};
use crate::similarity::Providers;
use crate::stats::{canonical_sum, negative_part, population_std, sign};

/// Number of top neighbors for a fraction `e` of `candidates`. At least one
/// when there are candidates; a small tolerance keeps e.g. `0.33 * 100`
/// from rounding up to 34.
pub fn neighbor_budget(e: f64, candidates: usize) -> usize {
    if candidates == 0 {
        return 0;
    }
    let k = (e * candidates as f64 - 1e-9).ceil().max(1.0) as usize;
    k.min(candidates)
}

/// Below-threshold count and top-k penalty for one row of similarities.
pub(crate) fn neighbor_stats(row: &mut [f64], sim_threshold: f64, k: usize) -> (f64, f64) {
    let below: f64 = row
        .iter()
        .map(|&s| sign(negative_part(s - sim_threshold)))
        .sum();
    row.sort_by(|a, b| b.total_cmp(a));
    let penalty: f64 = row
        .iter()
        .take(k)
        .map(|&s| 2.0 * negative_part(s - sim_threshold))
        .sum();
    (below, penalty)
}

pub fn inter_sample_sts(
    index: &CorpusIndex,
    cfg: &DqiConfig,
    providers: &Providers,
) -> Result<ComponentReport> {
    let n = index.sentence_count();
    if n < 2 {
        return Err(Error::Precondition {
            component: "c3",
            reason: format!("need at least 2 sentences, have {n}"),
        });
    }
    let threshold = cfg.c3.sim;
    let k = neighbor_budget(cfg.c3.e, n - 1);

    let rows: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|l| {
            let mut row: Vec<f64> = (0..n)
                .filter(|&m| m != l)
                .map(|m| providers.sentence.corpus_sim(l, m))
                .collect();
            neighbor_stats(&mut row, threshold, k)
        })
        .collect();
    let counts: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let penalties: Vec<f64> = rows.iter().map(|r| r.1).collect();

    let spread = population_std(&counts).unwrap_or(0.0);
    let penalty = canonical_sum(&penalties);
    let size = n as f64;
    let t1 = size / (spread + 1.0);
    let t2 = 2.0 * size / (penalty + 1.0);

    let mut report = ComponentReport::new(Component::C3);
    report.value = Some(canonical_sum(&[t1, t2]));
    report.terms = vec![
        Term::new("T1", t1).summand(),
        Term::new("T2", t2).summand(),
        Term::new("below_threshold_spread", spread),
        Term::new("top_k_penalty", penalty),
    ];
    report.parameters = vec![
        Parameter::new("SIM", threshold),
        Parameter::new("e", cfg.c3.e),
        Parameter::new("k", k as f64),
    ];
    Ok(report)
}
