//! The overall DQI as a pluggable combination of the seven component values.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Component, ComponentReport};
use crate::config::DqiConfig;
use crate::error::{Error, Result};
use crate::stats::canonical_sum;

/// A strategy turning component values into one number. `values` is indexed
/// by [`Component::ordinal`]; `None` marks a missing or skipped component.
pub trait Combiner: Send + Sync {
    fn name(&self) -> &str;
    fn combine(&self, values: &[Option<f64>], weights: &[f64]) -> Result<f64>;
}

/// `Σ weight_k · value_k`; missing components contribute 0.
pub fn weighted_sum(values: &[Option<f64>], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::WeightMismatch {
            expected: values.len(),
            got: weights.len(),
        });
    }
    let parts: Vec<f64> = values
        .iter()
        .zip(weights)
        .map(|(v, w)| v.map_or(0.0, |v| v * w))
        .collect();
    Ok(canonical_sum(&parts))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WeightedSum;

impl Combiner for WeightedSum {
    fn name(&self) -> &str {
        "weighted-sum"
    }

    fn combine(&self, values: &[Option<f64>], weights: &[f64]) -> Result<f64> {
        weighted_sum(values, weights)
    }
}

/// Combiners by name. `default()` holds `weighted-sum`.
pub struct CombinerRegistry {
    combiners: BTreeMap<String, Box<dyn Combiner>>,
}

impl CombinerRegistry {
    pub fn empty() -> Self {
        CombinerRegistry {
            combiners: BTreeMap::new(),
        }
    }

    /// Adds or replaces a combiner under its own name.
    pub fn register(&mut self, combiner: Box<dyn Combiner>) {
        self.combiners.insert(combiner.name().to_string(), combiner);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Combiner> {
        self.combiners.get(name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.combiners.keys().map(String::as_str)
    }
}

impl Default for CombinerRegistry {
    fn default() -> Self {
        let mut r = CombinerRegistry::empty();
        r.register(Box::new(WeightedSum));
        r
    }
}

impl fmt::Debug for CombinerRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub value: f64,
    pub combiner: String,
    pub flags: Vec<String>,
}

/// Combines reports with the combiner named in the config, looked up in the
/// default registry.
pub fn aggregate(reports: &[ComponentReport], cfg: &DqiConfig) -> Result<Aggregate> {
    aggregate_with(&CombinerRegistry::default(), reports, cfg)
}

pub fn aggregate_with(
    registry: &CombinerRegistry,
    reports: &[ComponentReport],
    cfg: &DqiConfig,
) -> Result<Aggregate> {
    let weights = &cfg.aggregate.weights;
    if weights.len() != Component::ALL.len() {
        return Err(Error::WeightMismatch {
            expected: Component::ALL.len(),
            got: weights.len(),
        });
    }
    let name = &cfg.aggregate.combiner;
    let combiner = registry
        .get(name)
        .ok_or_else(|| Error::Config(format!("unknown combiner {name:?}")))?;
    let mut values = vec![None; Component::ALL.len()];
    for r in reports {
        values[r.component.ordinal()] = r.value;
    }
    let flags = Component::ALL
        .iter()
        .filter(|c| values[c.ordinal()].is_none())
        .map(|c| format!("{c} missing or skipped; contributes 0"))
        .collect();
    Ok(Aggregate {
        value: combiner.combine(&values, weights)?,
        combiner: name.clone(),
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reports(values: [Option<f64>; 7]) -> Vec<ComponentReport> {
        Component::ALL
            .iter()
            .zip(values)
            .map(|(&c, v)| {
                let mut r = ComponentReport::new(c);
                r.value = v;
                r
            })
            .collect()
    }

    #[test]
    fn unit_weights_sum() {
        let rs = reports([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0].map(Some));
        let a = aggregate(&rs, &DqiConfig::default()).unwrap();
        assert_eq!(a.value, 28.0);
        assert!(a.flags.is_empty());
    }

    #[test]
    fn zero_weights() {
        let rs = reports([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0].map(Some));
        let mut cfg = DqiConfig::default();
        cfg.aggregate.weights = vec![0.0; 7];
        assert_eq!(aggregate(&rs, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn projection_onto_c1() {
        let rs = reports([7.6578, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0].map(Some));
        let mut cfg = DqiConfig::default();
        cfg.aggregate.weights = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(aggregate(&rs, &cfg).unwrap().value, 7.6578);
    }

    #[test]
    fn missing_c7_is_flagged() {
        let rs = reports([
            Some(1.0),
            Some(1.0),
            Some(1.0),
            Some(1.0),
            Some(1.0),
            Some(1.0),
            None,
        ]);
        let a = aggregate(&rs[..6], &DqiConfig::default()).unwrap();
        assert_eq!(a.value, 6.0);
        assert_eq!(a.flags.len(), 1);
        assert_eq!(aggregate(&rs, &DqiConfig::default()).unwrap().value, 6.0);
    }

    #[test]
    fn weight_mismatch() {
        let mut cfg = DqiConfig::default();
        cfg.aggregate.weights = vec![1.0; 6];
        assert!(matches!(
            aggregate(&[], &cfg),
            Err(Error::WeightMismatch {
                expected: 7,
                got: 6
            })
        ));
        assert!(weighted_sum(&[Some(1.0)], &[1.0, 2.0]).is_err());
    }

    struct Max;
    impl Combiner for Max {
        fn name(&self) -> &str {
            "max"
        }
        fn combine(&self, values: &[Option<f64>], _: &[f64]) -> Result<f64> {
            Ok(values
                .iter()
                .flatten()
                .fold(f64::NEG_INFINITY, |a, &b| a.max(b)))
        }
    }

    #[test]
    fn custom_combiner() {
        let mut reg = CombinerRegistry::default();
        reg.register(Box::new(Max));
        let mut cfg = DqiConfig::default();
        cfg.aggregate.combiner = "max".into();
        let rs = reports([1.0, 9.0, 3.0, 4.0, 5.0, 6.0, 7.0].map(Some));
        assert_eq!(aggregate_with(&reg, &rs, &cfg).unwrap().value, 9.0);
        assert!(aggregate(&rs, &cfg).is_err());
    }
}
