use dqi_core::metrics::{compute_all, inter_sample_sts, Component, ComponentReport};
use dqi_core::stats::{band_indicator, negative_part};
use dqi_core::synthetic::{generate, lexicon, SyntheticSpec};
use dqi_core::{CorpusIndex, DqiConfig, Providers, Sample, Tagger};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn reports(samples: Vec<Sample>, spec: &SyntheticSpec) -> Vec<ComponentReport> {
    let labels = dqi_core::corpus::infer_labels(&samples);
    let idx = CorpusIndex::from_samples(samples, &labels, &Tagger::Lexicon(lexicon(spec))).unwrap();
    compute_all(&idx, &DqiConfig::default(), &Providers::default_for(&idx)).unwrap()
}

#[test]
fn reports_are_bit_exact_under_sample_shuffles() {
    let spec = SyntheticSpec {
        samples: 50,
        seed: 11,
        ..Default::default()
    };
    let samples = generate(&spec);
    let base = reports(samples.clone(), &spec);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let mut shuffled = samples.clone();
        shuffled.shuffle(&mut rng);
        let other = reports(shuffled, &spec);
        for (a, b) in base.iter().zip(&other) {
            assert_eq!(
                a.value.map(f64::to_bits),
                b.value.map(f64::to_bits),
                "{}",
                a.component
            );
            assert_eq!(a, b);
        }
    }
}

#[test]
fn duplicating_every_sample_halves_c1_t1() {
    let spec = SyntheticSpec {
        samples: 20,
        ..Default::default()
    };
    let samples = generate(&spec);
    let mut doubled = samples.clone();
    doubled.extend(samples.iter().cloned().map(|mut s| {
        s.id.push_str("-dup");
        s
    }));
    let t1 = |r: &[ComponentReport]| r[Component::C1.ordinal()].term_value("T1").unwrap();
    let once = reports(samples, &spec);
    let twice = reports(doubled, &spec);
    assert_eq!(t1(&twice), t1(&once) / 2.0);
}

#[test]
fn raising_sim_never_lowers_below_threshold_spread_source() {
    let spec = SyntheticSpec {
        samples: 15,
        ..Default::default()
    };
    let samples = generate(&spec);
    let labels = dqi_core::corpus::infer_labels(&samples);
    let idx = CorpusIndex::from_samples(samples, &labels, &Tagger::default()).unwrap();
    let providers = Providers::default_for(&idx);
    let n = idx.sentence_count();
    let below = |sim: f64| -> Vec<usize> {
        (0..n)
            .map(|l| {
                (0..n)
                    .filter(|&m| m != l && providers.sentence.corpus_sim(l, m) < sim)
                    .count()
            })
            .collect()
    };
    let mut last = below(0.0);
    for step in 1..=10 {
        let sim = step as f64 / 10.0;
        let now = below(sim);
        assert!(now.iter().zip(&last).all(|(a, b)| a >= b));
        last = now;
        let mut cfg = DqiConfig::default();
        cfg.c3.sim = sim;
        assert!(inter_sample_sts(&idx, &cfg, &providers)
            .unwrap()
            .verify_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn negative_part_is_max_zero_minus_x(x in -1e6f64..1e6) {
        prop_assert_eq!(negative_part(x), (-x).max(0.0));
    }

    #[test]
    fn band_indicator_is_one_exactly_inside(s in -50i32..50, a in -50i32..50, w in 1i32..40) {
        let (s, a, b) = (s as f64, a as f64, (a + w) as f64);
        let v = band_indicator(s, a, b);
        prop_assert!(v == -1.0 || v == 0.0 || v == 1.0);
        prop_assert_eq!(v == 1.0, a < s && s < b);
        prop_assert_eq!(v == 0.0, s == a || s == b);
    }
}
