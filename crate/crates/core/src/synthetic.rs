//! Seeded synthetic corpora for benchmarks, property tests and demos.
//!
//! Words are built from syllables and drawn with a skewed rank
//! distribution, so a few words dominate the way function words do in real
//! text. Every generated word is assigned a part of speech by its rank,
//! and [`lexicon`] returns the matching tag table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Partition, Sample, Split};
use crate::linguistic::{Pos, TagLexicon};

const SYLLABLES: [&str; 16] = [
    "ka", "lo", "mi", "ne", "pu", "ra", "si", "to", "vu", "ze", "ba", "do", "fe", "gi", "hu", "ja",
];

pub const LABELS: [&str; 3] = ["contradiction", "entailment", "neutral"];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub samples: usize,
    pub seed: u64,
    /// Distinct words to draw from.
    pub vocabulary: usize,
    /// Probability that a sample copies an earlier sample's text.
    pub duplication: f64,
    /// Tag roughly one sample in five as `test`, the rest as `train`.
    pub splits: bool,
    /// Tag samples `good` or `bad` at random.
    pub partitions: bool,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            samples: 100,
            seed: 7,
            vocabulary: 400,
            duplication: 0.0,
            splits: true,
            partitions: false,
        }
    }
}

/// The word at a given rank.
pub fn word(rank: usize) -> String {
    let mut r = rank;
    let mut w = String::new();
    loop {
        w.push_str(SYLLABLES[r % SYLLABLES.len()]);
        r /= SYLLABLES.len();
        if r == 0 {
            break;
        }
    }
    w
}

fn pos_of(rank: usize) -> Pos {
    match rank % 5 {
        0 => Pos::Noun,
        1 => Pos::Verb,
        2 => Pos::Adjective,
        3 => Pos::Adverb,
        _ => Pos::Other,
    }
}

/// Tags for every word the generator can emit under `spec`.
pub fn lexicon(spec: &SyntheticSpec) -> TagLexicon {
    let mut lex = TagLexicon::new();
    for rank in 0..spec.vocabulary {
        lex.insert(&word(rank), pos_of(rank));
    }
    lex
}

fn sentence(rng: &mut ChaCha8Rng, vocabulary: usize, min: usize, max: usize) -> String {
    let n = rng.random_range(min..=max);
    let words: Vec<String> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            word(((u * u) * vocabulary as f64) as usize % vocabulary)
        })
        .collect();
    let mut s = words.join(" ");
    if let Some(first) = s.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    s.push('.');
    s
}

pub fn generate(spec: &SyntheticSpec) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let vocabulary = spec.vocabulary.max(1);
    let mut out: Vec<Sample> = Vec::with_capacity(spec.samples);
    for i in 0..spec.samples {
        let (p, h) = if !out.is_empty() && rng.random_bool(spec.duplication.clamp(0.0, 1.0)) {
            let src = &out[rng.random_range(0..out.len())];
            (src.p.clone(), src.h.clone())
        } else {
            let premise_sentences = rng.random_range(1..=2);
            let p: Vec<String> = (0..premise_sentences)
                .map(|_| sentence(&mut rng, vocabulary, 5, 14))
                .collect();
            (p.join(" "), sentence(&mut rng, vocabulary, 3, 9))
        };
        let label = LABELS[rng.random_range(0..LABELS.len())].to_string();
        let split = match (spec.splits, rng.random_range(0..5)) {
            (false, _) => Split::Unsplit,
            (true, 0) => Split::Test,
            (true, _) => Split::Train,
        };
        let partition = match (spec.partitions, rng.random_bool(0.5)) {
            (false, _) => Partition::Unknown,
            (true, true) => Partition::Good,
            (true, false) => Partition::Bad,
        };
        out.push(Sample {
            id: format!("syn-{i:05}"),
            p,
            h,
            label,
            split,
            partition,
        });
    }
    out
}

/// One JSON record per line, ending with a newline.
pub fn to_records(samples: &[Sample]) -> String {
    let mut s = String::new();
    for sample in samples {
        s.push_str(&serde_json::to_string(sample).expect("sample serializes"));
        s.push('\n');
    }
    s
}
