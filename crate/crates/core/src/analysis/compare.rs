//! Side-by-side comparison of two corpora, e.g. the retained ("good") and
//! removed ("bad") partitions of an adversarial filter.

use serde::{Deserialize, Serialize};

use crate::config::DqiConfig;
use crate::corpus::CorpusIndex;
use crate::error::Result;
use crate::metrics::{compute_all, Component, ComponentReport};
use crate::similarity::Providers;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    GoodHigher,
    BadHigher,
    Tie,
    /// One side is undefined or skipped.
    Undefined,
}

impl Verdict {
    /// Traffic-light color for renderers.
    pub fn color(self) -> &'static str {
        match self {
            Verdict::GoodHigher => "green",
            Verdict::BadHigher => "red",
            Verdict::Tie => "yellow",
            Verdict::Undefined => "grey",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::GoodHigher => "good-higher",
            Verdict::BadHigher => "bad-higher",
            Verdict::Tie => "tie",
            Verdict::Undefined => "undefined",
        }
    }

    /// Tie when the relative gap is below `tolerance` or both are zero.
    pub fn judge(good: Option<f64>, bad: Option<f64>, tolerance: f64) -> Verdict {
        let (Some(g), Some(b)) = (good, bad) else {
            return Verdict::Undefined;
        };
        let scale = g.abs().max(b.abs());
        if scale == 0.0 || (g - b).abs() / scale < tolerance {
            Verdict::Tie
        } else if g > b {
            Verdict::GoodHigher
        } else {
            Verdict::BadHigher
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub component: Component,
    /// `overall` or a term key such as `T1/words/entailment`.
    pub term: String,
    pub good: Option<f64>,
    pub bad: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitComparison {
    pub rows: Vec<ComparisonRow>,
    pub tolerance: f64,
    pub flags: Vec<String>,
}

impl SplitComparison {
    pub fn row(&self, component: Component, term: &str) -> Option<&ComparisonRow> {
        self.rows
            .iter()
            .find(|r| r.component == component && r.term == term)
    }

    /// `component,term,good,bad,verdict,color`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["component", "term", "good", "bad", "verdict", "color"])
            .expect("in-memory write");
        let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.component.id(),
                r.term.as_str(),
                &fmt(r.good),
                &fmt(r.bad),
                r.verdict.as_str(),
                r.verdict.color(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Pairs two report sets term by term. Every term of either side gets a row.
pub fn compare_reports(
    good: &[ComponentReport],
    bad: &[ComponentReport],
    tolerance: f64,
) -> SplitComparison {
    let mut rows = Vec::new();
    for c in Component::ALL {
        let g = good.iter().find(|r| r.component == c);
        let b = bad.iter().find(|r| r.component == c);
        rows.push(ComparisonRow {
            component: c,
            term: "overall".into(),
            good: g.and_then(|r| r.value),
            bad: b.and_then(|r| r.value),
            verdict: Verdict::judge(g.and_then(|r| r.value), b.and_then(|r| r.value), tolerance),
        });
        let mut keys: Vec<String> = Vec::new();
        for t in g.iter().chain(b.iter()).flat_map(|r| &r.terms) {
            let k = t.key();
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        let lookup = |r: Option<&ComponentReport>, k: &str| {
            r.and_then(|r| r.terms.iter().find(|t| t.key() == k))
                .and_then(|t| t.value)
        };
        for k in keys {
            let (gv, bv) = (lookup(g, &k), lookup(b, &k));
            rows.push(ComparisonRow {
                component: c,
                term: k,
                good: gv,
                bad: bv,
                verdict: Verdict::judge(gv, bv, tolerance),
            });
        }
    }
    SplitComparison {
        rows,
        tolerance,
        flags: Vec::new(),
    }
}

/// Computes every component on both corpora and compares them. c7 is
/// skipped on both sides unless both carry a train/test split.
pub fn compare_splits(
    good: &CorpusIndex,
    good_providers: &Providers,
    bad: &CorpusIndex,
    bad_providers: &Providers,
    cfg: &DqiConfig,
) -> Result<SplitComparison> {
    let mut g = compute_all(good, cfg, good_providers)?;
    let mut b = compute_all(bad, cfg, bad_providers)?;
    let mut flags = Vec::new();
    if !(good.has_train_test() && bad.has_train_test()) {
        let reason = "c7 skipped: both corpora need a train/test split".to_string();
        for reports in [&mut g, &mut b] {
            if let Some(r) = reports.iter_mut().find(|r| r.component == Component::C7) {
                *r = ComponentReport::skipped(Component::C7, reason.clone());
            }
        }
        flags.push(reason);
    }
    let mut cmp = compare_reports(&g, &b, cfg.compare.tie_tolerance);
    cmp.flags = flags;
    Ok(cmp)
}
