use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linguistic::Granularity;
use crate::stats::canonical_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl Component {
    pub const ALL: [Component; 7] = [
        Component::C1,
        Component::C2,
        Component::C3,
        Component::C4,
        Component::C5,
        Component::C6,
        Component::C7,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Component::C1 => "c1",
            Component::C2 => "c2",
            Component::C3 => "c3",
            Component::C4 => "c4",
            Component::C5 => "c5",
            Component::C6 => "c6",
            Component::C7 => "c7",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Component::C1 => "Vocabulary",
            Component::C2 => "Inter-Sample N-gram Frequency and Relation",
            Component::C3 => "Inter-Sample STS",
            Component::C4 => "Intra-Sample Word Similarity",
            Component::C5 => "Intra-Sample STS",
            Component::C6 => "N-Gram Frequency per Label",
            Component::C7 => "Inter-Split STS",
        }
    }

    /// Position in `ALL`.
    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn from_id(id: &str) -> Option<Component> {
        Component::ALL.into_iter().find(|c| c.id() == id)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One row of a component breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub granularity: Option<Granularity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// `None` when the term is undefined (degenerate denominator, too few elements).
    pub value: Option<f64>,
    /// Whether the value is added into the overall.
    pub summand: bool,
}

impl Term {
    pub fn new(name: &str, value: f64) -> Self {
        Term {
            name: name.into(),
            granularity: None,
            label: None,
            value: Some(value),
            summand: false,
        }
    }

    pub fn undefined(name: &str) -> Self {
        Term {
            name: name.into(),
            granularity: None,
            label: None,
            value: None,
            summand: false,
        }
    }

    pub fn summand(mut self) -> Self {
        self.summand = true;
        self
    }

    pub fn at(mut self, granularity: Granularity) -> Self {
        self.granularity = Some(granularity);
        self
    }

    pub fn for_label(mut self, label: &str) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `name`, `name/granularity`, `name/label` or `name/granularity/label`.
    pub fn key(&self) -> String {
        let mut key = self.name.clone();
        if let Some(g) = self.granularity {
            key.push('/');
            key.push_str(g.name());
        }
        if let Some(l) = &self.label {
            key.push('/');
            key.push_str(l);
        }
        key
    }
}

/// A resolved hyperparameter echoed into a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub granularity: Option<Granularity>,
    pub value: f64,
}

impl Parameter {
    pub fn new(name: &str, value: f64) -> Self {
        Parameter {
            name: name.into(),
            granularity: None,
            value,
        }
    }

    pub fn at(name: &str, granularity: Granularity, value: f64) -> Self {
        Parameter {
            name: name.into(),
            granularity: Some(granularity),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub component: Component,
    pub title: String,
    /// `None` only when the component was skipped.
    pub value: Option<f64>,
    pub terms: Vec<Term>,
    pub parameters: Vec<Parameter>,
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
}

impl ComponentReport {
    pub fn new(component: Component) -> Self {
        ComponentReport {
            component,
            title: component.title().into(),
            value: None,
            terms: Vec::new(),
            parameters: Vec::new(),
            flags: Vec::new(),
            annotations: Vec::new(),
        }
    }

    /// A placeholder for a component that could not be computed.
    pub fn skipped(component: Component, reason: String) -> Self {
        let mut r = ComponentReport::new(component);
        r.flags.push(format!("skipped: {reason}"));
        r
    }

    pub fn is_skipped(&self) -> bool {
        self.value.is_none()
    }

    /// First term matching name, granularity and label.
    pub fn term(
        &self,
        name: &str,
        granularity: Option<Granularity>,
        label: Option<&str>,
    ) -> Option<&Term> {
        self.terms
            .iter()
            .find(|t| t.name == name && t.granularity == granularity && t.label.as_deref() == label)
    }

    pub fn term_value(&self, name: &str) -> Option<f64> {
        self.term(name, None, None).and_then(|t| t.value)
    }

    /// Recombines the overall from the terms. `None` for skipped reports.
    pub fn recombine(&self) -> Option<f64> {
        self.value?;
        let v = |name: &str| self.term_value(name).unwrap_or(f64::NAN);
        Some(match self.component {
            Component::C1 => super::vocabulary::combine(v("T1"), v("T2"), v("T3")),
            Component::C4 => v("sentences") / (v("deviation_sum") + 1.0),
            Component::C7 => v("test_samples") / (v("deviation_sum") + 1.0),
            _ => {
                let parts: Vec<f64> = self
                    .terms
                    .iter()
                    .filter(|t| t.summand)
                    .filter_map(|t| t.value)
                    .collect();
                canonical_sum(&parts)
            }
        })
    }

    /// Checks the overall against its terms (1e-9 relative), and for c2/c6
    /// every contribution against `T1 * T2`.
    pub fn verify_identity(&self) -> bool {
        let Some(value) = self.value else { return true };
        let close =
            |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300) || a == b;
        let Some(r) = self.recombine() else {
            return false;
        };
        if !close(value, r) {
            return false;
        }
        if matches!(self.component, Component::C2 | Component::C6) {
            for t in self
                .terms
                .iter()
                .filter(|t| t.name == "contribution" && t.value.is_some())
            {
                let (Some(c), Some(t1), Some(t2)) = (
                    t.value,
                    self.term("T1", t.granularity, t.label.as_deref())
                        .and_then(|x| x.value),
                    self.term("T2", t.granularity, t.label.as_deref())
                        .and_then(|x| x.value),
                ) else {
                    return false;
                };
                if !close(c, super::ngram::contribution(t1, t2)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Flat CSV `component,term,granularity,label,value`. The first row of each
/// component is its overall.
pub fn reports_to_csv(reports: &[ComponentReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["component", "term", "granularity", "label", "value"])
        .expect("in-memory write");
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in reports {
        w.write_record([r.component.id(), "overall", "", "", &fmt(r.value)])
            .expect("in-memory write");
        for t in &r.terms {
            w.write_record([
                r.component.id(),
                t.name.as_str(),
                t.granularity.map(|g| g.name()).unwrap_or(""),
                t.label.as_deref().unwrap_or(""),
                &fmt(t.value),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
