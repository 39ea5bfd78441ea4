mod common;

use common::bridge::library;
use common::oracle::{close, oracle_with_scale, random_corpus, random_matrix, random_params, OSim};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check(seed: u64, matrix: bool) -> [bool; 7] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = random_corpus(&mut rng);
    let params = random_params(&mut rng);
    let n: usize = corpus.samples.iter().map(|s| s.p.len() + s.h.len()).sum();
    assert!(n <= 6);
    let sim = if matrix {
        OSim::Matrix(random_matrix(&mut rng, n))
    } else {
        OSim::TfIdf
    };
    let want = oracle_with_scale(&corpus, &sim, &params);
    let got = library(&corpus, &sim, &params);
    for k in 0..7 {
        match (want[k], got[k]) {
            (Some((a, scale)), Some(b)) => assert!(
                close(a, b, scale),
                "seed {seed} c{}: oracle {a} library {b}\n{corpus:?}\n{params:?}",
                k + 1
            ),
            (None, None) => {}
            (a, b) => panic!("seed {seed} c{}: oracle {a:?} library {b:?}", k + 1),
        }
    }
    got.map(|v| v.is_some())
}

fn run(seeds: std::ops::Range<u64>, matrix: bool) {
    let mut defined = [0; 7];
    for seed in seeds {
        for (k, d) in check(seed, matrix).iter().enumerate() {
            defined[k] += usize::from(*d);
        }
    }
    // every component, including the conditional c6 and c7, was exercised
    assert!(defined.iter().all(|&n| n >= 20), "{defined:?}");
}

#[test]
fn tfidf_corpora_match_reference() {
    run(0..200, false);
}

#[test]
fn matrix_corpora_match_reference() {
    run(1000..1200, true);
}
