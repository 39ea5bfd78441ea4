//! Dataset ingestion and the immutable corpus snapshot.
//!
//! Records are line-delimited JSON objects with string values:
//!
//! ```text
//! {"id": "s1", "p": "A man runs.", "h": "A man moves.", "label": "entailment", "split": "train", "partition": "good"}
//! ```
//!
//! `id`, `p`, `h` and `label` are required; `split` (`train`/`test`) and
//! `partition` (`good`/`bad`) are optional. Other keys are ignored.
//!
//! Each side of a sample is segmented into sentences on terminal
//! punctuation. All sentences of all samples are pooled into `S` in sample
//! order, duplicates included; the Sentences granularity counts each distinct
//! sentence once with its frequency.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::BufRead;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linguistic::{Granularity, Tagger, TokenizedSentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
    #[default]
    Unsplit,
}

/// Externally supplied filter verdict for a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Good,
    Bad,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub p: String,
    pub h: String,
    pub label: String,
    #[serde(default)]
    pub split: Split,
    #[serde(default)]
    pub partition: Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Premise,
    Hypothesis,
}

/// One entry of `S`.
#[derive(Debug, Clone)]
pub struct SentenceEntry {
    pub sample: usize,
    pub side: Side,
    pub sentence: TokenizedSentence,
}

/// Occurrence counts of one granularity element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementCounts {
    /// ν: total occurrences.
    pub total: u64,
    /// Occurrences per label, in label-set order.
    pub by_label: Vec<u64>,
    /// Count_label: samples of each label containing the element.
    pub samples_by_label: Vec<u64>,
}

/// Frequency table of one granularity, keyed by space-joined element.
#[derive(Debug, Clone, Default)]
pub struct GranularityTable {
    elements: BTreeMap<String, ElementCounts>,
    occurrences: u64,
}

impl GranularityTable {
    /// size(i): number of distinct elements.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Total occurrences scanned.
    pub fn occurrences(&self) -> u64 {
        self.occurrences
    }

    pub fn get(&self, element: &str) -> Option<&ElementCounts> {
        self.elements.get(element)
    }

    /// Elements in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &ElementCounts)> {
        self.elements.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn add(&mut self, element: String, label: usize, labels: usize, first_in_sample: bool) {
        let entry = self
            .elements
            .entry(element)
            .or_insert_with(|| ElementCounts {
                total: 0,
                by_label: vec![0; labels],
                samples_by_label: vec![0; labels],
            });
        entry.total += 1;
        entry.by_label[label] += 1;
        if first_in_sample {
            entry.samples_by_label[label] += 1;
        }
        self.occurrences += 1;
    }
}

/// Sentence ordinals and label of one sample.
#[derive(Debug, Clone)]
pub struct SampleLayout {
    pub premise: Range<usize>,
    pub hypothesis: Range<usize>,
    pub label: usize,
}

impl SampleLayout {
    pub fn sentences(&self) -> Range<usize> {
        self.premise.start..self.hypothesis.end
    }
}

/// Immutable snapshot of an ingested dataset.
#[derive(Debug, Clone)]
pub struct CorpusIndex {
    labels: Vec<String>,
    samples: Vec<Sample>,
    layouts: Vec<SampleLayout>,
    sentences: Vec<SentenceEntry>,
    vocabulary: usize,
    tables: BTreeMap<Granularity, GranularityTable>,
}

/// Parses one record line. `line` is 1-based and only used for messages.
pub fn parse_record(text: &str, line: usize) -> Result<Sample> {
    let malformed = |reason: String| Error::MalformedRecord { line, reason };
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let map = value
        .as_object()
        .ok_or_else(|| malformed("expected a JSON object".into()))?;
    let field = |key: &str, required: bool| -> Result<Option<String>> {
        match map.get(key) {
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(malformed(format!("field `{key}` must be a string"))),
            None if required => Err(malformed(format!("missing field `{key}`"))),
            None => Ok(None),
        }
    };
    let id = field("id", true)?.unwrap_or_default();
    let p = field("p", true)?.unwrap_or_default();
    let h = field("h", true)?.unwrap_or_default();
    let label = field("label", true)?.unwrap_or_default();
    let split = match field("split", false)?.as_deref() {
        None | Some("") | Some("unsplit") => Split::Unsplit,
        Some("train") => Split::Train,
        Some("test") => Split::Test,
        Some(other) => {
            return Err(malformed(format!(
                "split `{other}` (expected train or test)"
            )))
        }
    };
    let partition = match field("partition", false)?.as_deref() {
        None | Some("") | Some("unknown") => Partition::Unknown,
        Some("good") => Partition::Good,
        Some("bad") => Partition::Bad,
        Some(other) => {
            return Err(malformed(format!(
                "partition `{other}` (expected good or bad)"
            )))
        }
    };
    Ok(Sample {
        id,
        p,
        h,
        label,
        split,
        partition,
    })
}

/// Reads all records from a line-delimited stream. Blank lines are skipped.
pub fn read_records<R: BufRead>(reader: R) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_record(&line, i + 1)?);
    }
    Ok(out)
}

/// Distinct labels in lexicographic order. Used when no label set is
/// declared, so that the order does not depend on record order.
pub fn infer_labels(samples: &[Sample]) -> Vec<String> {
    samples
        .iter()
        .map(|s| s.label.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

impl CorpusIndex {
    /// Ingests a record stream in a single order-preserving pass.
    pub fn ingest<R: BufRead>(reader: R, labels: &[String], tagger: &Tagger) -> Result<Self> {
        let mut builder = Builder::new(labels)?;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let sample = parse_record(&line, i + 1)?;
            builder.push(sample, i + 1, tagger)?;
        }
        builder.finish()
    }

    /// Builds an index from already parsed samples. Line numbers in errors
    /// are 1-based positions in `samples`.
    pub fn from_samples(samples: Vec<Sample>, labels: &[String], tagger: &Tagger) -> Result<Self> {
        let mut builder = Builder::new(labels)?;
        for (i, sample) in samples.into_iter().enumerate() {
            builder.push(sample, i + 1, tagger)?;
        }
        builder.finish()
    }

    /// Declared label set, in order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn layout(&self, sample: usize) -> &SampleLayout {
        &self.layouts[sample]
    }

    pub fn layouts(&self) -> &[SampleLayout] {
        &self.layouts
    }

    /// size(X).
    pub fn size(&self) -> usize {
        self.samples.len()
    }

    /// S, in sample order.
    pub fn sentences(&self) -> &[SentenceEntry] {
        &self.sentences
    }

    /// size(S).
    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    /// v(X): distinct word tokens.
    pub fn vocabulary(&self) -> usize {
        self.vocabulary
    }

    pub fn table(&self, granularity: Granularity) -> &GranularityTable {
        &self.tables[&granularity]
    }

    /// ν of an element given as a token sequence; 0 when unseen.
    pub fn frequency<S: AsRef<str>>(&self, granularity: Granularity, element: &[S]) -> u64 {
        self.table(granularity)
            .get(&join(element))
            .map_or(0, |c| c.total)
    }

    /// Count_label of an element: for each label, the number of samples
    /// with that label containing it. All zeros when unseen.
    pub fn label_vector<S: AsRef<str>>(&self, granularity: Granularity, element: &[S]) -> Vec<u64> {
        self.table(granularity).get(&join(element)).map_or_else(
            || vec![0; self.labels.len()],
            |c| c.samples_by_label.clone(),
        )
    }

    /// Samples with the given split tag.
    pub fn split_size(&self, split: Split) -> usize {
        self.samples.iter().filter(|s| s.split == split).count()
    }

    pub fn has_train_test(&self) -> bool {
        self.split_size(Split::Train) > 0 && self.split_size(Split::Test) > 0
    }

    /// Token count of one side of a sample (s_p or s_h).
    pub fn side_length(&self, sample: usize, side: Side) -> usize {
        let layout = &self.layouts[sample];
        let range = match side {
            Side::Premise => layout.premise.clone(),
            Side::Hypothesis => layout.hypothesis.clone(),
        };
        self.sentences[range].iter().map(|e| e.sentence.len()).sum()
    }
}

fn join<S: AsRef<str>>(element: &[S]) -> String {
    element
        .iter()
        .map(|s| s.as_ref())
        .collect::<Vec<_>>()
        .join(" ")
}

struct Builder {
    labels: Vec<String>,
    samples: Vec<Sample>,
    layouts: Vec<SampleLayout>,
    sentences: Vec<SentenceEntry>,
    ids: HashSet<String>,
    words: BTreeSet<String>,
    tables: BTreeMap<Granularity, GranularityTable>,
}

impl Builder {
    fn new(labels: &[String]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        Ok(Self {
            labels: labels.to_vec(),
            samples: Vec::new(),
            layouts: Vec::new(),
            sentences: Vec::new(),
            ids: HashSet::new(),
            words: BTreeSet::new(),
            tables: Granularity::ALL
                .into_iter()
                .map(|g| (g, GranularityTable::default()))
                .collect(),
        })
    }

    fn push(&mut self, sample: Sample, line: usize, tagger: &Tagger) -> Result<()> {
        let label = self
            .labels
            .iter()
            .position(|l| *l == sample.label)
            .ok_or_else(|| Error::UnknownLabel {
                id: sample.id.clone(),
                line,
                label: sample.label.clone(),
            })?;
        if !self.ids.insert(sample.id.clone()) {
            return Err(Error::DuplicateId {
                id: sample.id,
                line,
            });
        }
        let analyze = |text: &str, field: &'static str| {
            tagger.analyze(text).map_err(|e| match e {
                Error::EmptySentence => Error::EmptyField {
                    id: sample.id.clone(),
                    field,
                },
                other => other,
            })
        };
        let premise = analyze(&sample.p, "p")?;
        let hypothesis = analyze(&sample.h, "h")?;

        let index = self.samples.len();
        let start = self.sentences.len();
        let p_end = start + premise.len();
        let h_end = p_end + hypothesis.len();
        let labels = self.labels.len();
        let mut seen: HashSet<(Granularity, String)> = HashSet::new();
        for (side, sentences) in [(Side::Premise, premise), (Side::Hypothesis, hypothesis)] {
            for sentence in sentences {
                for g in Granularity::ALL {
                    let table = self.tables.get_mut(&g).expect("all granularities present");
                    for element in g.elements(&sentence) {
                        let first = seen.insert((g, element.clone()));
                        table.add(element, label, labels, first);
                    }
                }
                self.words.extend(sentence.tokens().iter().cloned());
                self.sentences.push(SentenceEntry {
                    sample: index,
                    side,
                    sentence,
                });
            }
        }
        self.layouts.push(SampleLayout {
            premise: start..p_end,
            hypothesis: p_end..h_end,
            label,
        });
        self.samples.push(sample);
        Ok(())
    }

    fn finish(self) -> Result<CorpusIndex> {
        if self.samples.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(CorpusIndex {
            labels: self.labels,
            samples: self.samples,
            layouts: self.layouts,
            sentences: self.sentences,
            vocabulary: self.words.len(),
            tables: self.tables,
        })
    }
}
