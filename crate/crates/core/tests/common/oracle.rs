//! Straight-loop reference implementation of the seven components.
//!
//! Deliberately naive: no indexes, no sorting tricks, no shared helpers
//! with the library. Corpora are given pre-tokenized so the reference only
//! exercises the formulas.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;

pub const VOCAB: [(&str, &str); 8] = [
    ("ant", "NOUN"),
    ("bee", "VERB"),
    ("cat", "ADJ"),
    ("dog", "ADV"),
    ("eel", "NOUN"),
    ("fox", "VERB"),
    ("gnu", "-"),
    ("hen", "-"),
];

#[derive(Debug, Clone)]
pub struct OSample {
    pub p: Vec<Vec<String>>,
    pub h: Vec<Vec<String>>,
    pub label: usize,
    /// 0 unsplit, 1 train, 2 test.
    pub split: u8,
}

#[derive(Debug, Clone)]
pub struct OCorpus {
    pub samples: Vec<OSample>,
    pub labels: usize,
}

#[derive(Debug, Clone)]
pub enum OSim {
    TfIdf,
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d_quantile: f64,
    pub sim: f64,
    pub e: f64,
    pub wsim: f64,
    pub isim: f64,
    pub g_quantile: f64,
    pub ssim: f64,
}

fn tag_of(word: &str) -> &'static str {
    VOCAB
        .iter()
        .find(|(w, _)| *w == word)
        .map(|(_, t)| *t)
        .unwrap_or("-")
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn std(v: &[f64]) -> f64 {
    if v.iter().all(|&x| x == v[0]) {
        return 0.0;
    }
    let n = v.len() as f64;
    let mut s = 0.0;
    for x in v {
        s += x;
    }
    let m = s / n;
    let mut q = 0.0;
    for x in v {
        q += (x - m) * (x - m);
    }
    (q / n).sqrt()
}

fn quantile(v: &[f64], q: f64) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

/// (sample, tokens) for every sentence, premise before hypothesis.
fn sentences(c: &OCorpus) -> Vec<(usize, &Vec<String>)> {
    let mut out = Vec::new();
    for (i, s) in c.samples.iter().enumerate() {
        for t in s.p.iter().chain(&s.h) {
            out.push((i, t));
        }
    }
    out
}

fn elements(g: usize, t: &[String]) -> Vec<String> {
    let pos = |want: &str| {
        t.iter()
            .filter(|w| tag_of(w) == want)
            .cloned()
            .collect::<Vec<_>>()
    };
    match g {
        0 => t.to_vec(),
        1 => pos("VERB"),
        2 => pos("ADJ"),
        3 => pos("NOUN"),
        4 => pos("ADV"),
        5 | 6 => {
            let n = if g == 5 { 2 } else { 3 };
            let mut out = Vec::new();
            if t.len() >= n {
                for i in 0..=t.len() - n {
                    out.push(t[i..i + n].join(" "));
                }
            }
            out
        }
        _ => vec![t.join(" ")],
    }
}

struct Freq {
    total: f64,
    by_label: Vec<f64>,
    samples_by_label: Vec<f64>,
}

fn frequencies(c: &OCorpus, g: usize) -> BTreeMap<String, Freq> {
    let mut out: BTreeMap<String, Freq> = BTreeMap::new();
    for s in &c.samples {
        let mut seen = HashSet::new();
        for t in s.p.iter().chain(&s.h) {
            for el in elements(g, t) {
                let f = out.entry(el.clone()).or_insert(Freq {
                    total: 0.0,
                    by_label: vec![0.0; c.labels],
                    samples_by_label: vec![0.0; c.labels],
                });
                f.total += 1.0;
                f.by_label[s.label] += 1.0;
                if seen.insert(el) {
                    f.samples_by_label[s.label] += 1.0;
                }
            }
        }
    }
    out
}

fn tfidf_matrix(c: &OCorpus) -> Vec<Vec<f64>> {
    let sents = sentences(c);
    let n = sents.len() as f64;
    let mut df: HashMap<&String, f64> = HashMap::new();
    for (_, t) in &sents {
        let distinct: HashSet<&String> = t.iter().collect();
        for w in distinct {
            *df.entry(w).or_default() += 1.0;
        }
    }
    let vecs: Vec<HashMap<&String, f64>> = sents
        .iter()
        .map(|(_, t)| {
            let mut v: HashMap<&String, f64> = HashMap::new();
            for w in t.iter() {
                *v.entry(w).or_default() += 1.0;
            }
            for (w, x) in v.iter_mut() {
                *x *= ((1.0 + n) / (1.0 + df[w])).ln() + 1.0;
            }
            v
        })
        .collect();
    let norm = |v: &HashMap<&String, f64>| v.values().map(|x| x * x).sum::<f64>().sqrt();
    let mut m = vec![vec![0.0; sents.len()]; sents.len()];
    for i in 0..sents.len() {
        for j in 0..sents.len() {
            let mut dot = 0.0;
            for (w, x) in &vecs[i] {
                if let Some(y) = vecs[j].get(w) {
                    dot += x * y;
                }
            }
            m[i][j] = (dot / (norm(&vecs[i]) * norm(&vecs[j]))).clamp(0.0, 1.0);
        }
    }
    m
}

fn len(side: &[Vec<String>]) -> f64 {
    side.iter().map(|t| t.len()).sum::<usize>() as f64
}

/// Overall value of c1..c7; `None` where the component is not defined.
pub fn oracle(c: &OCorpus, sim: &OSim, p: &Params) -> [Option<f64>; 7] {
    oracle_with_scale(c, sim, p).map(|x| x.map(|(v, _)| v))
}

/// Overall values paired with the sum of the absolute values of their
/// additive parts. Signed T2 terms can cancel to zero, so agreement is
/// measured relative to that magnitude.
pub fn oracle_with_scale(c: &OCorpus, sim: &OSim, p: &Params) -> [Option<(f64, f64)>; 7] {
    let sents = sentences(c);
    let n_s = sents.len();
    let size = c.samples.len() as f64;
    let m = match sim {
        OSim::TfIdf => tfidf_matrix(c),
        OSim::Matrix(m) => m.clone(),
    };
    let mut out: [Option<(f64, f64)>; 7] = [None; 7];
    let plain = |v: f64| Some((v, v.abs()));

    // c1
    let mut vocab = HashSet::new();
    let mut lengths = Vec::new();
    for (_, t) in &sents {
        for w in t.iter() {
            vocab.insert(w.clone());
        }
        lengths.push(t.len() as f64);
    }
    let mut t3 = 0.0;
    for s in &lengths {
        t3 += sgn((s - p.a) * (p.b - s));
    }
    out[0] = plain(vocab.len() as f64 / size + std(&lengths) * (t3 / n_s as f64));

    // c2
    let (mut c2, mut c2_abs) = (0.0, 0.0);
    for g in 0..8 {
        let f = frequencies(c, g);
        if f.is_empty() {
            continue;
        }
        let k = f.len() as f64;
        let nus: Vec<f64> = f.values().map(|x| x.total).collect();
        let d = quantile(&nus, p.d_quantile);
        let mut t2 = 0.0;
        for nu in &nus {
            t2 += sgn((nu - p.c) * (d - nu));
        }
        let sd = std(&nus.iter().map(|x| x / k).collect::<Vec<_>>());
        if f.len() >= 2 && sd > 0.0 {
            c2 += (1.0 / sd) * (t2 / k);
            c2_abs += ((1.0 / sd) * (t2 / k)).abs();
        }
    }
    out[1] = Some((c2, c2_abs));

    // c3
    if n_s >= 2 {
        let mut counts = Vec::new();
        let mut penalty = 0.0;
        let k = ((p.e * (n_s - 1) as f64 - 1e-9).ceil().max(1.0) as usize).min(n_s - 1);
        for l in 0..n_s {
            let mut count = 0.0;
            let mut row = Vec::new();
            for mm in 0..n_s {
                if mm != l {
                    let x = m[l][mm] - p.sim;
                    count += sgn((x.abs() - x) / 2.0);
                    row.push(m[l][mm]);
                }
            }
            counts.push(count);
            row.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for s in row.iter().take(k) {
                let x = s - p.sim;
                penalty += x.abs() - x;
            }
        }
        out[2] = plain(n_s as f64 / (std(&counts) + 1.0) + 2.0 * n_s as f64 / (penalty + 1.0));
    }

    // c4
    let mut dev = 0.0;
    for (_, t) in &sents {
        let mut s = 0.0;
        for u in 0..t.len() {
            for v in 0..t.len() {
                if u != v && t[u] == t[v] {
                    s += 1.0;
                }
            }
        }
        dev += (s / t.len() as f64 - p.wsim).abs();
    }
    out[3] = plain(n_s as f64 / (dev + 1.0));

    // c5
    let mut first = 0;
    let (mut sim_dev, mut gap_sum, mut t5, mut t6) = (0.0, 0.0, 0.0, 0.0);
    let (mut gaps, mut sims) = (Vec::new(), Vec::new());
    for s in &c.samples {
        let (np, nh) = (s.p.len(), s.h.len());
        let mut total = 0.0;
        for i in 0..np {
            for j in 0..nh {
                total += m[first + i][first + np + j];
            }
        }
        first += np + nh;
        let sim_ph = total / (np * nh) as f64;
        sims.push(sim_ph);
        sim_dev += (sim_ph - p.isim).abs();
        let gap = (len(&s.p) - len(&s.h)).abs();
        gaps.push(gap);
        gap_sum += gap;

        let words: Vec<&String> = s.p.iter().chain(&s.h).flatten().collect();
        let mut singles = 0.0;
        let mut distinct: Vec<&String> = words.clone();
        distinct.sort();
        distinct.dedup();
        for q in distinct {
            let nu = words.iter().filter(|w| **w == q).count() as f64;
            if sgn(2.0 - nu) > 0.0 {
                singles += 1.0;
            }
        }
        t5 += (len(&s.p) + len(&s.h)) / if singles == 0.0 { 1.0 } else { singles };
        let mut align = 0.0;
        for u in s.h.iter().flatten() {
            let mut best: f64 = 0.0;
            for v in s.p.iter().flatten() {
                best = best.max(if u == v { 1.0 } else { 0.0 });
            }
            align += best;
        }
        t6 += 1.0 / if align == 0.0 { 1.0 } else { align };
    }
    out[4] = plain(
        size / (sim_dev + 1.0)
            + size / (gap_sum + 1.0)
            + std(&gaps) / size
            + std(&sims) / size
            + t5 / size
            + t6 / size,
    );

    // c6
    let present = (0..c.labels)
        .filter(|&l| c.samples.iter().any(|s| s.label == l))
        .count();
    if present >= 2 {
        let (mut c6, mut c6_abs) = (0.0, 0.0);
        for l in 0..c.labels {
            let members: Vec<&OSample> = c.samples.iter().filter(|s| s.label == l).collect();
            if members.is_empty() {
                continue;
            }
            for g in 0..8 {
                let f = frequencies(c, g);
                let all: Vec<f64> = f.values().map(|x| x.total).collect();
                let nus: Vec<f64> = f
                    .values()
                    .map(|x| x.by_label[l])
                    .filter(|&x| x > 0.0)
                    .collect();
                if nus.is_empty() {
                    continue;
                }
                let k = nus.len() as f64;
                let ceiling = quantile(&all, p.g_quantile);
                let under = nus.iter().filter(|&&nu| nu <= ceiling).count() as f64;
                let sd = std(&nus.iter().map(|x| x / k).collect::<Vec<_>>());
                if nus.len() >= 2 && sd > 0.0 {
                    c6 += (1.0 / sd) * (under / k);
                    c6_abs += (1.0 / sd) * (under / k);
                }
            }
            let gaps: Vec<f64> = members
                .iter()
                .map(|s| (len(&s.p) - len(&s.h)).abs())
                .collect();
            let nl = members.len() as f64;
            c6 += nl / (gaps.iter().sum::<f64>() + 1.0) + std(&gaps) / nl;
            c6_abs += nl / (gaps.iter().sum::<f64>() + 1.0) + std(&gaps) / nl;
        }
        for g in 0..8 {
            let f = frequencies(c, g);
            let mut pen = 0.0;
            for x in f.values() {
                let ex: Vec<f64> = x
                    .samples_by_label
                    .iter()
                    .map(|cnt| ((1.0 - cnt).abs() - (1.0 - cnt)) / 2.0)
                    .collect();
                pen += std(&ex);
            }
            c6 += f.len() as f64 / (pen + 1.0);
            c6_abs += f.len() as f64 / (pen + 1.0);
        }
        out[5] = Some((c6, c6_abs));
    }

    // c7
    let train: Vec<usize> = (0..n_s)
        .filter(|&i| c.samples[sents[i].0].split == 1)
        .collect();
    let test: Vec<usize> = (0..n_s)
        .filter(|&i| c.samples[sents[i].0].split == 2)
        .collect();
    if !train.is_empty() && !test.is_empty() {
        let mut d = 0.0;
        for &t in &test {
            let mut best: f64 = 0.0;
            for &r in &train {
                best = best.max(m[t][r]);
            }
            d += (best - p.ssim).abs();
        }
        let test_samples = c.samples.iter().filter(|s| s.split == 2).count() as f64;
        out[6] = plain(test_samples / (d + 1.0));
    }
    out
}

fn random_sentence<R: Rng>(rng: &mut R) -> Vec<String> {
    let n = rng.random_range(1..=5);
    (0..n)
        .map(|_| VOCAB[rng.random_range(0..VOCAB.len())].0.to_string())
        .collect()
}

/// A corpus of at most six sentences over two labels.
pub fn random_corpus<R: Rng>(rng: &mut R) -> OCorpus {
    let mut samples = Vec::new();
    let mut budget = 6;
    let wanted = rng.random_range(1..=3);
    while samples.len() < wanted && budget >= 2 {
        let np = if budget >= 3 && rng.random_bool(0.3) {
            2
        } else {
            1
        };
        budget -= np + 1;
        samples.push(OSample {
            p: (0..np).map(|_| random_sentence(rng)).collect(),
            h: vec![random_sentence(rng)],
            label: rng.random_range(0..2),
            split: rng.random_range(0..3),
        });
    }
    OCorpus { samples, labels: 2 }
}

pub fn random_params<R: Rng>(rng: &mut R) -> Params {
    let a = rng.random_range(0..3) as f64;
    Params {
        a,
        b: a + rng.random_range(2..6) as f64,
        c: rng.random_range(0..2) as f64,
        d_quantile: rng.random_range(0.5..=1.0),
        sim: rng.random_range(0.05..0.95),
        e: [0.25, 0.33, 0.5, 1.0][rng.random_range(0..4)],
        wsim: rng.random_range(0.0..1.0),
        isim: rng.random_range(0.0..1.0),
        g_quantile: rng.random_range(0.5..=1.0),
        ssim: rng.random_range(0.0..1.0),
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x: f64 = rng.random();
            m[i][j] = x;
            m[j][i] = x;
        }
    }
    m
}

/// Records in the library's line format.
pub fn records(c: &OCorpus) -> String {
    let text = |side: &[Vec<String>]| {
        side.iter()
            .map(|t| format!("{}.", t.join(" ")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    for (i, s) in c.samples.iter().enumerate() {
        let split = ["", "train", "test"][s.split as usize];
        out.push_str(&format!(
            "{{\"id\":\"o{i}\",\"p\":\"{}\",\"h\":\"{}\",\"label\":\"l{}\",\"split\":\"{split}\"}}\n",
            text(&s.p),
            text(&s.h),
            s.label
        ));
    }
    out
}

pub fn labels(c: &OCorpus) -> Vec<String> {
    (0..c.labels).map(|l| format!("l{l}")).collect()
}

/// Tag lexicon lines for the words that carry a class.
pub fn lexicon_text() -> String {
    VOCAB
        .iter()
        .filter(|(_, t)| *t != "-")
        .map(|(w, t)| format!("{w}\t{t}\n"))
        .collect()
}

/// `i j sim` lines for the upper triangle.
pub fn matrix_text(m: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            out.push_str(&format!("{i} {j} {}\n", m[i][j]));
        }
    }
    out
}

/// Agreement to 1e-9 relative to `scale`.
pub fn close(a: f64, b: f64, scale: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * scale.max(a.abs()).max(b.abs())
}
