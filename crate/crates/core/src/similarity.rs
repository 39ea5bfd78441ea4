//! Sentence similarity (`Sim`) and word similarity (`WSim`) providers.
//!
//! The default sentence provider is a TF-IDF unigram cosine fitted on the
//! corpus sentences. Term weights are `tf * idf` with raw term counts and
//! the smoothed inverse document frequency
//!
//! ```text
//! idf(t) = ln((1 + N) / (1 + df(t))) + 1
//! ```
//!
//! where `N` is the number of sentences and `df(t)` the number of sentences
//! containing `t`. Unseen terms get `df = 0`. Alternatively a precomputed
//! all-pairs matrix over sentence ordinals can be loaded.
//!
//! Word similarity is exact match by default, or a clamped cosine over
//! L2-normalized embeddings. Out-of-vocabulary words fall back to exact match.
//!
//! All-pairs work is `O(|S|²)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use rayon::prelude::*;

use crate::corpus::CorpusIndex;
use crate::error::{Error, Result};
use crate::linguistic::TokenizedSentence;

/// TF-IDF weights of one sentence, sorted by term.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    terms: Vec<(String, f64)>,
    norm: f64,
}

impl SparseVector {
    pub fn terms(&self) -> &[(String, f64)] {
        &self.terms
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Cosine similarity clamped to `[0, 1]`. Identical vectors give exactly 1.
    pub fn cosine(&self, other: &SparseVector) -> f64 {
        if self.norm == 0.0 || other.norm == 0.0 {
            return 0.0;
        }
        if self.terms == other.terms {
            return 1.0;
        }
        let (mut i, mut j, mut dot) = (0, 0, 0.0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    dot += self.terms[i].1 * other.terms[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        (dot / (self.norm * other.norm)).clamp(0.0, 1.0)
    }
}

/// Corpus-fitted TF-IDF model.
#[derive(Debug, Clone)]
pub struct TfIdfModel {
    documents: usize,
    df: BTreeMap<String, u64>,
    vectors: Vec<SparseVector>,
}

impl TfIdfModel {
    /// Fits document frequencies over the corpus sentences and encodes each.
    pub fn fit(index: &CorpusIndex) -> Self {
        let mut df: BTreeMap<String, u64> = BTreeMap::new();
        for entry in index.sentences() {
            let distinct: BTreeSet<&String> = entry.sentence.tokens().iter().collect();
            for t in distinct {
                *df.entry(t.clone()).or_default() += 1;
            }
        }
        let mut model = TfIdfModel {
            documents: index.sentence_count(),
            df,
            vectors: Vec::new(),
        };
        model.vectors = index
            .sentences()
            .par_iter()
            .map(|e| model.encode(&e.sentence))
            .collect();
        model
    }

    pub fn documents(&self) -> usize {
        self.documents
    }

    pub fn document_frequency(&self, term: &str) -> u64 {
        self.df.get(term).copied().unwrap_or(0)
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.documents as f64;
        let df = self.document_frequency(term) as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    }

    /// Encodes a sentence against the frozen document frequencies.
    pub fn encode(&self, sentence: &TokenizedSentence) -> SparseVector {
        let mut tf: BTreeMap<&str, u32> = BTreeMap::new();
        for t in sentence.tokens() {
            *tf.entry(t.as_str()).or_default() += 1;
        }
        let terms: Vec<(String, f64)> = tf
            .into_iter()
            .map(|(t, c)| (t.to_string(), c as f64 * self.idf(t)))
            .collect();
        let norm = terms.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        SparseVector { terms, norm }
    }

    pub fn vector(&self, ordinal: usize) -> &SparseVector {
        &self.vectors[ordinal]
    }
}

/// Dense precomputed similarity matrix over sentence ordinals.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Reads `i j sim` lines for a corpus of `n` sentences. Each entry sets
    /// both `(i, j)` and `(j, i)`; unlisted off-diagonal pairs are 0 and the
    /// diagonal is 1.
    pub fn from_reader<R: BufRead>(reader: R, n: usize) -> Result<Self> {
        let mut values = vec![f64::NAN; n * n];
        for (k, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = k + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::SimilarityMatrix {
                line: lineno,
                reason,
            };
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!(
                    "expected `i j sim`, found {} fields",
                    fields.len()
                )));
            }
            let i: usize = fields[0]
                .parse()
                .map_err(|_| err(format!("bad ordinal `{}`", fields[0])))?;
            let j: usize = fields[1]
                .parse()
                .map_err(|_| err(format!("bad ordinal `{}`", fields[1])))?;
            let sim: f64 = fields[2]
                .parse()
                .map_err(|_| err(format!("non-numeric similarity `{}`", fields[2])))?;
            if i >= n || j >= n {
                return Err(err(format!("ordinal out of range for {n} sentences")));
            }
            if !(0.0..=1.0).contains(&sim) {
                return Err(err(format!("similarity {sim} outside [0, 1]")));
            }
            if i == j && sim != 1.0 {
                return Err(err(format!("self-similarity of sentence {i} must be 1")));
            }
            for (a, b) in [(i, j), (j, i)] {
                let slot = &mut values[a * n + b];
                if !slot.is_nan() && *slot != sim {
                    return Err(err(format!("conflicting value for pair ({i}, {j})")));
                }
                *slot = sim;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let slot = &mut values[i * n + j];
                if slot.is_nan() {
                    *slot = if i == j { 1.0 } else { 0.0 };
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// A sentence as seen by a provider: a corpus ordinal or an encoded
/// sentence from outside the corpus.
#[derive(Debug, Clone, Copy)]
pub enum SentenceRef<'a> {
    Corpus(usize),
    Encoded(&'a SparseVector),
}

#[derive(Debug, Clone)]
pub enum SentenceSimilarity {
    TfIdf(TfIdfModel),
    Matrix(SimilarityMatrix),
}

impl SentenceSimilarity {
    pub fn tfidf(index: &CorpusIndex) -> Self {
        SentenceSimilarity::TfIdf(TfIdfModel::fit(index))
    }

    pub fn matrix<R: BufRead>(reader: R, index: &CorpusIndex) -> Result<Self> {
        Ok(SentenceSimilarity::Matrix(SimilarityMatrix::from_reader(
            reader,
            index.sentence_count(),
        )?))
    }

    pub fn method(&self) -> &'static str {
        match self {
            SentenceSimilarity::TfIdf(_) => "tfidf-cosine",
            SentenceSimilarity::Matrix(_) => "external-matrix",
        }
    }

    /// Encodes a sentence that is not part of the corpus.
    pub fn encode(&self, sentence: &TokenizedSentence) -> Result<SparseVector> {
        if sentence.is_empty() {
            return Err(Error::EmptySentence);
        }
        match self {
            SentenceSimilarity::TfIdf(model) => Ok(model.encode(sentence)),
            SentenceSimilarity::Matrix(_) => Err(Error::UnindexedSentence),
        }
    }

    /// Sim between two corpus sentences.
    pub fn corpus_sim(&self, l: usize, m: usize) -> f64 {
        match self {
            SentenceSimilarity::TfIdf(model) => model.vector(l).cosine(model.vector(m)),
            SentenceSimilarity::Matrix(matrix) => matrix.get(l, m),
        }
    }

    pub fn sim(&self, a: SentenceRef<'_>, b: SentenceRef<'_>) -> Result<f64> {
        match (self, a, b) {
            (_, SentenceRef::Corpus(l), SentenceRef::Corpus(m)) => Ok(self.corpus_sim(l, m)),
            (SentenceSimilarity::TfIdf(model), a, b) => {
                let va = match a {
                    SentenceRef::Corpus(i) => model.vector(i),
                    SentenceRef::Encoded(v) => v,
                };
                let vb = match b {
                    SentenceRef::Corpus(i) => model.vector(i),
                    SentenceRef::Encoded(v) => v,
                };
                Ok(va.cosine(vb))
            }
            (SentenceSimilarity::Matrix(_), _, _) => Err(Error::UnindexedSentence),
        }
    }

    /// Similarities of corpus sentence `l` to every corpus sentence.
    pub fn row(&self, l: usize, n: usize) -> Vec<f64> {
        (0..n).map(|m| self.corpus_sim(l, m)).collect()
    }

    /// Full `n × n` matrix, rows computed in parallel.
    pub fn all_pairs(&self, n: usize) -> Vec<Vec<f64>> {
        (0..n).into_par_iter().map(|l| self.row(l, n)).collect()
    }
}

/// L2-normalized word vectors.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dims: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    /// Reads the word-vector text format: a `count dims` header followed by
    /// `word v1 ... vdims` lines. Words are lowercased; the first vector of a
    /// word wins.
    pub fn from_reader<R: BufRead>(reader: R, dims: usize) -> Result<Self> {
        if dims == 0 {
            return Err(Error::Embeddings {
                line: 0,
                reason: "dimension must be positive".into(),
            });
        }
        let mut lines = reader.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, l)) => {
                    let l = l?;
                    if !l.trim().is_empty() {
                        break l;
                    }
                }
                None => {
                    return Err(Error::Embeddings {
                        line: 1,
                        reason: "missing `count dims` header".into(),
                    })
                }
            }
        };
        let head: Vec<&str> = header.split_whitespace().collect();
        let header_err = |reason: String| Error::Embeddings { line: 1, reason };
        if head.len() != 2 {
            return Err(header_err("expected `count dims` header".into()));
        }
        let count: usize = head[0]
            .parse()
            .map_err(|_| header_err(format!("bad count `{}`", head[0])))?;
        let file_dims: usize = head[1]
            .parse()
            .map_err(|_| header_err(format!("bad dims `{}`", head[1])))?;
        if file_dims != dims {
            return Err(header_err(format!(
                "file declares {file_dims} dimensions, expected {dims}"
            )));
        }

        let mut vectors = HashMap::new();
        let mut seen = 0usize;
        for (k, line) in lines {
            let line = line?;
            let lineno = k + 1;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let err = |reason: String| Error::Embeddings {
                line: lineno,
                reason,
            };
            let mut fields = text.split_whitespace();
            let word = fields.next().expect("non-empty line").to_lowercase();
            let values: Vec<f64> = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| err(format!("non-numeric field `{f}`")))
                })
                .collect::<Result<_>>()?;
            if values.len() != dims {
                return Err(err(format!(
                    "`{word}` has {} values, expected {dims}",
                    values.len()
                )));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(err(format!("`{word}` has a non-finite value")));
            }
            let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(err(format!(
                    "`{word}` is a zero vector and cannot be normalized"
                )));
            }
            seen += 1;
            vectors
                .entry(word)
                .or_insert_with(|| values.iter().map(|v| v / norm).collect());
        }
        if seen != count {
            return Err(Error::Embeddings {
                line: 1,
                reason: format!("header declares {count} vectors, found {seen}"),
            });
        }
        Ok(Self { dims, vectors })
    }

    /// Like [`from_reader`](Self::from_reader), taking the dimension from
    /// the file's own header.
    pub fn load<R: BufRead>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        let dims = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .and_then(|h| h.split_whitespace().nth(1))
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Embeddings {
                line: 1,
                reason: "missing or malformed `count dims` header".into(),
            })?;
        Self::from_reader(text.as_bytes(), dims)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, Default)]
pub enum WordSimilarity {
    #[default]
    ExactMatch,
    Embedding(EmbeddingTable),
}

impl WordSimilarity {
    pub fn method(&self) -> &'static str {
        match self {
            WordSimilarity::ExactMatch => "exact-match",
            WordSimilarity::Embedding(_) => "embedding-cosine",
        }
    }

    /// WSim in `[0, 1]`; negative cosines clamp to 0.
    pub fn sim(&self, u: &str, v: &str) -> f64 {
        if u == v {
            return 1.0;
        }
        match self {
            WordSimilarity::ExactMatch => 0.0,
            WordSimilarity::Embedding(table) => match (table.get(u), table.get(v)) {
                (Some(a), Some(b)) => {
                    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    dot.clamp(0.0, 1.0)
                }
                _ => 0.0,
            },
        }
    }
}

/// The pair of providers consumed by the metric layer.
#[derive(Debug, Clone)]
pub struct Providers {
    pub sentence: SentenceSimilarity,
    pub word: WordSimilarity,
}

impl Providers {
    /// TF-IDF sentence similarity and exact-match word similarity.
    pub fn default_for(index: &CorpusIndex) -> Self {
        Self {
            sentence: SentenceSimilarity::tfidf(index),
            word: WordSimilarity::ExactMatch,
        }
    }
}
