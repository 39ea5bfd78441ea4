//! Hyperparameters for every component, the aggregate weights and the
//! binning thresholds.
//!
//! The file format is sectioned `key = value` text (TOML). Unknown keys are
//! rejected so that a misspelled hyperparameter never falls back to its
//! default silently.
//!
//! ```toml
//! [c1]
//! a = 3
//! b = 30
//!
//! [c2]
//! c = 1
//! d = "q0.95"        # a number, or a quantile of the granularity's frequencies
//!
//! [c3]
//! sim = 0.4
//! e = 0.5
//!
//! [bin]
//! c1 = 0
//! "c5.T6" = 0.5
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linguistic::Granularity;

/// Threshold keys accepted in `[bin]`: component scores and per-sample sub-terms.
pub const BIN_KEYS: &[&str] = &[
    "c1", "c1.T3", "c2", "c2.T2", "c3", "c3.T1", "c3.T2", "c4", "c5", "c5.T1", "c5.T2", "c5.T5",
    "c5.T6", "c6", "c6.T2", "c6.T3", "c6.T5", "c7",
];

/// A frequency bound: a fixed value, or a quantile of the granularity's
/// frequency distribution resolved per granularity at compute time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundRepr", into = "BoundRepr")]
pub enum Bound {
    Fixed(f64),
    Quantile(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<BoundRepr> for Bound {
    type Error = String;

    fn try_from(repr: BoundRepr) -> std::result::Result<Self, String> {
        match repr {
            BoundRepr::Number(v) => Ok(Bound::Fixed(v)),
            BoundRepr::Text(t) => {
                let q = t
                    .strip_prefix('q')
                    .and_then(|q| q.parse::<f64>().ok())
                    .ok_or_else(|| format!("bound `{t}` is neither a number nor `q<fraction>`"))?;
                Ok(Bound::Quantile(q))
            }
        }
    }
}

impl From<Bound> for BoundRepr {
    fn from(b: Bound) -> Self {
        match b {
            Bound::Fixed(v) => BoundRepr::Number(v),
            Bound::Quantile(q) => BoundRepr::Text(format!("q{q}")),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Fixed(v) => write!(f, "{v}"),
            Bound::Quantile(q) => write!(f, "q{q}"),
        }
    }
}

/// How the frequency-band term is evaluated in c2 and c6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandMode {
    /// Fraction of elements inside the band (signed indicator).
    #[default]
    Indicator,
    /// The unsigned polynomial, averaged over elements.
    RawQuadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusParams {
    /// Declared label set; inferred from the data when absent.
    pub labels: Option<Vec<String>>,
    pub granularities: Vec<Granularity>,
}

impl Default for CorpusParams {
    fn default() -> Self {
        Self {
            labels: None,
            granularities: Granularity::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VocabularyParams {
    pub a: f64,
    pub b: f64,
}

impl Default for VocabularyParams {
    fn default() -> Self {
        Self { a: 3.0, b: 30.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NgramParams {
    pub c: f64,
    pub d: Bound,
    pub mode: BandMode,
}

impl Default for NgramParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            d: Bound::Quantile(0.95),
            mode: BandMode::Indicator,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterStsParams {
    pub sim: f64,
    pub e: f64,
}

impl Default for InterStsParams {
    fn default() -> Self {
        Self { sim: 0.4, e: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WordSimParams {
    pub wsim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntraStsParams {
    pub isim: f64,
}

impl Default for IntraStsParams {
    fn default() -> Self {
        Self { isim: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelParams {
    /// Per-label frequency ceiling; defaults to the c2 upper bound `d`.
    pub g: Option<Bound>,
    pub mode: BandMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitParams {
    pub ssim: f64,
}

impl Default for SplitParams {
    fn default() -> Self {
        Self { ssim: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AggregateParams {
    /// Name of a registered combiner.
    pub combiner: String,
    pub weights: Vec<f64>,
}

impl Default for AggregateParams {
    fn default() -> Self {
        Self {
            combiner: "weighted-sum".into(),
            weights: vec![1.0; 7],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareParams {
    pub tie_tolerance: f64,
}

impl Default for CompareParams {
    fn default() -> Self {
        Self {
            tie_tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DqiConfig {
    pub corpus: CorpusParams,
    pub c1: VocabularyParams,
    pub c2: NgramParams,
    pub c3: InterStsParams,
    pub c4: WordSimParams,
    pub c5: IntraStsParams,
    pub c6: LabelParams,
    pub c7: SplitParams,
    pub aggregate: AggregateParams,
    /// Minimum per-sample scores, keyed by component (`c5`) or sub-term (`c5.T6`).
    #[serde(deserialize_with = "de_thresholds")]
    pub bin: BTreeMap<String, f64>,
    pub compare: CompareParams,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ThresholdEntry {
    Value(f64),
    Nested(BTreeMap<String, f64>),
}

// Accepts both `"c5.T6" = 0.5` and `[bin.c5]\nT6 = 0.5`.
fn de_thresholds<'de, D: serde::Deserializer<'de>>(
    de: D,
) -> std::result::Result<BTreeMap<String, f64>, D::Error> {
    let raw: BTreeMap<String, ThresholdEntry> = BTreeMap::deserialize(de)?;
    let mut out = BTreeMap::new();
    for (key, entry) in raw {
        match entry {
            ThresholdEntry::Value(v) => {
                out.insert(key, v);
            }
            ThresholdEntry::Nested(inner) => {
                for (sub, v) in inner {
                    out.insert(format!("{key}.{sub}"), v);
                }
            }
        }
    }
    Ok(out)
}

impl DqiConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: DqiConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// The per-label ceiling, falling back to `d`.
    pub fn g(&self) -> Bound {
        self.c6.g.unwrap_or(self.c2.d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let unit = |name: &str, v: f64| -> Result<()> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {v} must lie in [0, 1]")))
            }
        };
        let VocabularyParams { a, b } = self.c1;
        if !(0.0 <= a && a < b) {
            return bad(format!("c1: need 0 <= a < b, got a = {a}, b = {b}"));
        }
        if self.c2.c < 0.0 {
            return bad(format!("c2: c = {} must be non-negative", self.c2.c));
        }
        match self.c2.d {
            Bound::Fixed(d) if d <= self.c2.c => {
                return bad(format!("c2: need c < d, got c = {}, d = {d}", self.c2.c))
            }
            Bound::Quantile(q) if !(q > 0.0 && q <= 1.0) => {
                return bad(format!("c2: quantile {q} outside (0, 1]"))
            }
            _ => {}
        }
        match self.g() {
            Bound::Fixed(g) if g < 1.0 => return bad(format!("c6: g = {g} must be at least 1")),
            Bound::Quantile(q) if !(q > 0.0 && q <= 1.0) => {
                return bad(format!("c6: quantile {q} outside (0, 1]"))
            }
            _ => {}
        }
        unit("c3.sim", self.c3.sim)?;
        if !(self.c3.e > 0.0 && self.c3.e <= 1.0) {
            return bad(format!("c3: e = {} must lie in (0, 1]", self.c3.e));
        }
        unit("c4.wsim", self.c4.wsim)?;
        unit("c5.isim", self.c5.isim)?;
        unit("c7.ssim", self.c7.ssim)?;
        if self.aggregate.weights.len() != 7 {
            return bad(format!(
                "aggregate: expected 7 weights, got {}",
                self.aggregate.weights.len()
            ));
        }
        if self.aggregate.weights.iter().any(|w| !w.is_finite()) {
            return bad("aggregate: weights must be finite".into());
        }
        if self.compare.tie_tolerance.is_nan() || self.compare.tie_tolerance < 0.0 {
            return bad("compare: tie_tolerance must be non-negative".into());
        }
        if self.corpus.granularities.is_empty() {
            return bad("corpus: at least one granularity is required".into());
        }
        if let Some(labels) = &self.corpus.labels {
            if labels.is_empty() {
                return bad("corpus: labels must not be empty".into());
            }
        }
        for key in self.bin.keys() {
            if !BIN_KEYS.contains(&key.as_str()) {
                return bad(format!(
                    "bin: unknown threshold key `{key}` (expected one of {})",
                    BIN_KEYS.join(", ")
                ));
            }
        }
        Ok(())
    }
}
