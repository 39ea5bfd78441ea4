//! Tokenization, part-of-speech classing and n-gram extraction.
//!
//! The tokenizer is deliberately simple and fully deterministic: text is
//! lowercased, split on whitespace, and each chunk loses its leading and
//! trailing punctuation. Apostrophes and hyphens inside a word survive, so
//! `don't` and `well-known` stay single tokens.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coarse part-of-speech class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Other,
}

impl Pos {
    /// Parses a class label. Accepts the lexicon names (`NOUN`, `VERB`,
    /// `ADJ`, `ADV`) and the Penn Treebank prefixes used by most taggers.
    pub fn from_tag(tag: &str) -> Pos {
        let t = tag.to_ascii_uppercase();
        match t.as_str() {
            "NOUN" | "PROPN" => Pos::Noun,
            "VERB" | "AUX" => Pos::Verb,
            "ADJ" => Pos::Adjective,
            "ADV" => Pos::Adverb,
            _ if t.starts_with("NN") => Pos::Noun,
            _ if t.starts_with("VB") => Pos::Verb,
            _ if t.starts_with("JJ") => Pos::Adjective,
            _ if t.starts_with("RB") => Pos::Adverb,
            _ => Pos::Other,
        }
    }
}

/// Word to POS class mapping. Lookup is total: unknown words are `Other`.
#[derive(Debug, Clone, Default)]
pub struct TagLexicon {
    entries: HashMap<String, Pos>,
}

impl TagLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, word: &str, pos: Pos) {
        self.entries.insert(word.to_lowercase(), pos);
    }

    pub fn lookup(&self, word: &str) -> Pos {
        self.entries.get(word).copied().unwrap_or(Pos::Other)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads `word<TAB>CLASS` lines with CLASS one of NOUN, VERB, ADJ, ADV.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut lexicon = TagLexicon::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let trimmed = line.trim_end_matches(['\r', '\n']);
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (word, class) = trimmed.split_once('\t').ok_or_else(|| Error::Lexicon {
                line: lineno,
                reason: "expected `word<TAB>CLASS`".into(),
            })?;
            let pos = match class.trim() {
                "NOUN" => Pos::Noun,
                "VERB" => Pos::Verb,
                "ADJ" => Pos::Adjective,
                "ADV" => Pos::Adverb,
                other => {
                    return Err(Error::Lexicon {
                        line: lineno,
                        reason: format!(
                            "unknown class `{other}` (expected NOUN, VERB, ADJ or ADV)"
                        ),
                    })
                }
            };
            let word = word.trim();
            if word.is_empty() {
                return Err(Error::Lexicon {
                    line: lineno,
                    reason: "empty word".into(),
                });
            }
            lexicon.insert(word, pos);
        }
        Ok(lexicon)
    }
}

/// A token sequence with a parallel POS sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedSentence {
    tokens: Vec<String>,
    tags: Vec<Pos>,
}

impl TokenizedSentence {
    /// Builds a sentence from tokens, all tagged `Other`.
    pub fn untagged(tokens: Vec<String>) -> Self {
        let tags = vec![Pos::Other; tokens.len()];
        Self { tokens, tags }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn tags(&self) -> &[Pos] {
        &self.tags
    }

    /// Token count.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens joined by single spaces; the Sentences-granularity element.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

fn normalize_chunk(chunk: &str) -> Option<String> {
    let word = chunk.trim_matches(|c: char| !c.is_alphanumeric());
    if word.is_empty() {
        None
    } else {
        Some(word.to_lowercase())
    }
}

/// Splits text into lowercase word tokens.
pub fn tokenize(text: &str) -> Result<TokenizedSentence> {
    let tokens: Vec<String> = text
        .split_whitespace()
        .filter_map(normalize_chunk)
        .collect();
    if tokens.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(TokenizedSentence::untagged(tokens))
}

/// Tokenizes text whose tokens carry their tag as a `word_TAG` suffix.
/// Chunks without an underscore are tagged `Other`.
pub fn tokenize_pretagged(text: &str) -> Result<TokenizedSentence> {
    let mut tokens = Vec::new();
    let mut tags = Vec::new();
    for chunk in text.split_whitespace() {
        let (word, pos) = match chunk.rsplit_once('_') {
            Some((w, t)) if !w.is_empty() => (w, Pos::from_tag(t)),
            _ => (chunk, Pos::Other),
        };
        if let Some(w) = normalize_chunk(word) {
            tokens.push(w);
            tags.push(pos);
        }
    }
    if tokens.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(TokenizedSentence { tokens, tags })
}

/// Assigns each token its lexicon class.
pub fn tag(sentence: TokenizedSentence, lexicon: &TagLexicon) -> TokenizedSentence {
    let tags = sentence.tokens.iter().map(|t| lexicon.lookup(t)).collect();
    TokenizedSentence {
        tokens: sentence.tokens,
        tags,
    }
}

/// Contiguous n-grams in order. Yields nothing when the sentence is shorter
/// than `n` or when `n` is zero.
pub fn ngrams(tokens: &[String], n: usize) -> impl Iterator<Item = &[String]> {
    let windows = if n == 0 || tokens.len() < n {
        None
    } else {
        Some(tokens.windows(n))
    };
    windows.into_iter().flatten()
}

/// Splits text into sentence strings after `.`, `!` or `?` when followed by
/// whitespace or the end of the text. Segments are trimmed; empty ones dropped.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') {
            let boundary = match chars.peek() {
                None => true,
                Some((_, next)) => next.is_whitespace(),
            };
            if boundary {
                let end = i + c.len_utf8();
                let seg = text[start..end].trim();
                if !seg.is_empty() {
                    out.push(seg);
                }
                start = end;
            }
        }
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest);
    }
    out
}

/// How raw text becomes tagged sentences.
#[derive(Debug, Clone)]
pub enum Tagger {
    Lexicon(TagLexicon),
    /// Tokens arrive as `word_TAG`.
    PreTagged,
}

impl Default for Tagger {
    fn default() -> Self {
        Tagger::Lexicon(TagLexicon::new())
    }
}

impl Tagger {
    /// Segments, tokenizes and tags one side of a sample. Segments that carry
    /// no tokens (stray punctuation) are dropped; an all-empty text is an error.
    pub fn analyze(&self, text: &str) -> Result<Vec<TokenizedSentence>> {
        let mut out = Vec::new();
        for seg in split_sentences(text) {
            let sentence = match self {
                Tagger::Lexicon(lexicon) => match tokenize(seg) {
                    Ok(s) => tag(s, lexicon),
                    Err(Error::EmptySentence) => continue,
                    Err(e) => return Err(e),
                },
                Tagger::PreTagged => match tokenize_pretagged(seg) {
                    Ok(s) => s,
                    Err(Error::EmptySentence) => continue,
                    Err(e) => return Err(e),
                },
            };
            out.push(sentence);
        }
        if out.is_empty() {
            return Err(Error::EmptySentence);
        }
        Ok(out)
    }
}

/// Element classes counted over a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Words,
    Verbs,
    Adjectives,
    Nouns,
    Adverbs,
    Bigrams,
    Trigrams,
    Sentences,
}

impl Granularity {
    pub const ALL: [Granularity; 8] = [
        Granularity::Words,
        Granularity::Verbs,
        Granularity::Adjectives,
        Granularity::Nouns,
        Granularity::Adverbs,
        Granularity::Bigrams,
        Granularity::Trigrams,
        Granularity::Sentences,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Granularity::Words => "words",
            Granularity::Verbs => "verbs",
            Granularity::Adjectives => "adjectives",
            Granularity::Nouns => "nouns",
            Granularity::Adverbs => "adverbs",
            Granularity::Bigrams => "bigrams",
            Granularity::Trigrams => "trigrams",
            Granularity::Sentences => "sentences",
        }
    }

    /// Elements of this granularity occurring in `sentence`, in order, as
    /// space-joined keys.
    pub fn elements(self, sentence: &TokenizedSentence) -> Vec<String> {
        let pos_filter = |want: Pos| -> Vec<String> {
            sentence
                .tokens
                .iter()
                .zip(&sentence.tags)
                .filter(|(_, &t)| t == want)
                .map(|(w, _)| w.clone())
                .collect()
        };
        match self {
            Granularity::Words => sentence.tokens.clone(),
            Granularity::Verbs => pos_filter(Pos::Verb),
            Granularity::Adjectives => pos_filter(Pos::Adjective),
            Granularity::Nouns => pos_filter(Pos::Noun),
            Granularity::Adverbs => pos_filter(Pos::Adverb),
            Granularity::Bigrams => ngrams(&sentence.tokens, 2).map(|g| g.join(" ")).collect(),
            Granularity::Trigrams => ngrams(&sentence.tokens, 3).map(|g| g.join(" ")).collect(),
            Granularity::Sentences => vec![sentence.text()],
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Granularity::ALL
            .into_iter()
            .find(|g| g.name() == s || g.name().trim_end_matches('s') == s)
            .ok_or_else(|| Error::Config(format!("unknown granularity `{s}`")))
    }
}
