//! Validation and scoring of candidate samples.

use std::collections::BTreeMap;

use dqi_core::analysis::{decide, Decision, ScoringContext};
use dqi_core::linguistic::TokenizedSentence;
use dqi_core::Error;
use serde::Serialize;
use serde_json::Value;

use crate::snapshot::{word_overlap, Snapshot};

/// A rejected request, reported as `{"error": ..., "field": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationError {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl ValidationError {
    pub fn new(field: &str, error: impl Into<String>) -> Self {
        ValidationError {
            error: error.into(),
            field: Some(field.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackRequest {
    pub p: String,
    pub h: String,
    pub label: String,
    pub session_corpus: Option<String>,
}

impl FeedbackRequest {
    /// Parses a JSON body, naming the offending field on failure.
    pub fn parse(body: &[u8]) -> Result<Self, ValidationError> {
        let value: Value = serde_json::from_slice(body)
            .map_err(|e| ValidationError::new("body", format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| ValidationError::new("body", "expected a JSON object"))?;
        let text = |key: &str| -> Result<String, ValidationError> {
            match obj.get(key) {
                Some(Value::String(s)) if !s.trim().is_empty() => Ok(s.clone()),
                Some(Value::String(_)) => Err(ValidationError::new(
                    key,
                    format!("`{key}` must not be empty"),
                )),
                Some(_) => Err(ValidationError::new(
                    key,
                    format!("`{key}` must be a string"),
                )),
                None => Err(ValidationError::new(key, format!("missing `{key}`"))),
            }
        };
        let session_corpus = match obj.get("sessionCorpus") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                return Err(ValidationError::new(
                    "sessionCorpus",
                    "`sessionCorpus` must be a string",
                ))
            }
        };
        Ok(FeedbackRequest {
            p: text("p")?,
            h: text("h")?,
            label: text("label")?,
            session_corpus,
        })
    }
}

/// A request resolved against a snapshot.
pub struct Validated {
    pub premise: Vec<TokenizedSentence>,
    pub hypothesis: Vec<TokenizedSentence>,
    pub label: usize,
}

pub fn validate(req: &FeedbackRequest, snapshot: &Snapshot) -> Result<Validated, ValidationError> {
    if let Some(id) = &req.session_corpus {
        if *id != snapshot.corpus_id {
            return Err(ValidationError::new(
                "sessionCorpus",
                format!("unknown corpus `{id}`"),
            ));
        }
    }
    let label = snapshot.index.label_index(&req.label).ok_or_else(|| {
        ValidationError::new(
            "label",
            format!(
                "unknown label `{}` (expected one of {:?})",
                req.label,
                snapshot.index.labels()
            ),
        )
    })?;
    let analyze = |field: &str, text: &str| {
        snapshot.tagger.analyze(text).map_err(|e| match e {
            Error::EmptySentence => ValidationError::new(field, format!("`{field}` has no tokens")),
            other => ValidationError::new(field, other.to_string()),
        })
    };
    Ok(Validated {
        premise: analyze("p", &req.p)?,
        hypothesis: analyze("h", &req.h)?,
        label,
    })
}

/// Something about the candidate worth pointing a writer at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub kind: String,
    pub message: String,
    /// Tokens to highlight, if any.
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FeedbackResponse {
    pub snapshot_version: u64,
    pub scores: BTreeMap<String, Option<f64>>,
    /// Score minus threshold for every configured threshold.
    pub margins: BTreeMap<String, Option<f64>>,
    pub verdict: Decision,
    pub failed: Vec<String>,
    pub artifacts: Vec<Artifact>,
}

/// Scores a candidate as a virtual addition to the frozen snapshot.
pub fn evaluate_candidate(
    req: &FeedbackRequest,
    snapshot: &Snapshot,
) -> Result<FeedbackResponse, ValidationError> {
    let v = validate(req, snapshot)?;
    let ctx = ScoringContext::new(&snapshot.index, &snapshot.cfg, &snapshot.providers);
    let scores = ctx
        .score_candidate("candidate", &v.premise, &v.hypothesis, v.label)
        .map_err(|e| ValidationError {
            error: e.to_string(),
            field: None,
        })?;
    let verdict = decide(&scores, &snapshot.cfg.bin);
    let margins = snapshot
        .cfg
        .bin
        .iter()
        .map(|(k, &min)| (k.clone(), scores.get(k).map(|s| s - min)))
        .collect();

    let mut artifacts = Vec::new();
    let p: Vec<&String> = v.premise.iter().flat_map(|s| s.tokens()).collect();
    let h: Vec<&String> = v.hypothesis.iter().flat_map(|s| s.tokens()).collect();
    let overlap = word_overlap(&p, &h);
    let profile = snapshot.overlap;
    if overlap > 0.0 && overlap > profile.mean + profile.std {
        let mut tokens: Vec<String> = h
            .iter()
            .filter(|u| p.contains(u))
            .map(|u| u.to_string())
            .collect();
        tokens.sort();
        tokens.dedup();
        artifacts.push(Artifact {
            kind: "word-overlap".into(),
            message: format!(
                "hypothesis word overlap {overlap:.2} exceeds profile {:.2}",
                profile.mean + profile.std
            ),
            tokens,
        });
    }
    let (a, b) = (snapshot.cfg.c1.a, snapshot.cfg.c1.b);
    for (side, sentences) in [("p", &v.premise), ("h", &v.hypothesis)] {
        for s in sentences.iter() {
            let n = s.len() as f64;
            if !(a < n && n < b) {
                artifacts.push(Artifact {
                    kind: "length".into(),
                    message: format!("{side}: sentence of {} tokens outside ({a}, {b})", s.len()),
                    tokens: Vec::new(),
                });
            }
        }
    }
    for key in &verdict.failed {
        let score = scores.get(key).unwrap_or(f64::NAN);
        artifacts.push(Artifact {
            kind: "threshold".into(),
            message: format!(
                "{key} = {score:.4} is below the minimum {}",
                snapshot.cfg.bin[key]
            ),
            tokens: Vec::new(),
        });
    }

    Ok(FeedbackResponse {
        snapshot_version: snapshot.version,
        scores: scores.scores,
        margins,
        verdict: verdict.decision,
        failed: verdict.failed,
        artifacts,
    })
}
