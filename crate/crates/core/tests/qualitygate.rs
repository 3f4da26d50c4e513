mod common;

use curate_core::qualitygate::{
    betr_score_corpus, build_betr_training_set, cosine, gate, gate_verdict, sweep, BetrScore, Bin, BinThresholds,
    GateDecision, LabeledExample, NgramScorerModel, ScoredDoc, TrainConfig,
};
use curate_core::synth::{SynthConfig, SynthCorpus};
use curate_core::{Document, Verdict};
use proptest::prelude::*;

use common::two_class;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn or_rule_truth_table() {
    let th = BinThresholds::new(0.5, 0.5);
    let levels = [(0.4, false), (0.5, true), (0.6, true)];
    for (d, d_in) in levels {
        for (b, b_in) in levels {
            let g = GateDecision::from_scores(d, b, &th);
            assert_eq!(g.accepted, d_in || b_in, "dclm {d} betr {b}");
            assert_eq!(g.bins.contains(&Bin::Dclm), d_in);
            assert_eq!(g.bins.contains(&Bin::Betr), b_in);
        }
    }
}

#[test]
fn scorer_errors_and_out_of_range_scores_reject() {
    let doc = Document::new("d", "", "text");
    let th = BinThresholds::default();
    let ok = |_: &Document| 0.9;
    let bad = |_: &Document| 1.5;
    let nan = |_: &Document| f64::NAN;
    assert_eq!(gate_verdict(&gate(&doc, &ok, &ok, &th)), Verdict::Keep);
    assert_eq!(
        gate_verdict(&gate(&doc, &bad, &ok, &th)).criterion(),
        Some("ScorerError")
    );
    assert_eq!(
        gate_verdict(&gate(&doc, &ok, &nan, &th)).criterion(),
        Some("ScorerError")
    );
    let low = |_: &Document| 0.0;
    assert_eq!(
        gate_verdict(&gate(&doc, &low, &low, &th)).criterion(),
        Some("BelowThresholds")
    );
}

#[test]
fn default_thresholds() {
    let th = BinThresholds::default();
    assert_eq!((th.tau_dclm, th.tau_betr), (0.025119, 0.76));
}

#[test]
fn sweep_counts_match_per_document_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let scored: Vec<ScoredDoc> = (0..2000)
        .map(|_| ScoredDoc {
            s_dclm: rng.random(),
            s_betr: rng.random(),
            tokens: rng.random_range(1..500),
        })
        .collect();
    let pairs: Vec<BinThresholds> = [(0.1, 0.9), (0.5, 0.5), (1.0, 1.0), (0.0, 0.3)]
        .map(|(a, b)| BinThresholds::new(a, b))
        .to_vec();
    let rows = sweep(&scored, &pairs);
    for (row, th) in rows.iter().zip(&pairs) {
        let acc: Vec<&ScoredDoc> = scored
            .iter()
            .filter(|d| GateDecision::from_scores(d.s_dclm, d.s_betr, th).accepted)
            .collect();
        assert_eq!(row.docs_accepted, acc.len() as u64);
        assert_eq!(row.tokens_accepted, acc.iter().map(|d| d.tokens).sum::<u64>());
    }
    assert_eq!(rows[3].docs_accepted, 2000);
}

#[test]
fn cosine_edge_cases() {
    assert!((cosine(&[1.0, 0.0], &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
    assert!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap().abs() < 1e-12);
    assert!(cosine(&[1.0], &[1.0, 2.0]).is_err());
    assert!(cosine(&[0.0, 0.0], &[1.0, 2.0]).is_err());
}

fn random_vectors(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

#[test]
fn betr_score_is_brute_force_max() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let examples = random_vectors(&mut rng, 10, 16);
    let docs: Vec<(String, Vec<f64>)> = random_vectors(&mut rng, 100, 16)
        .into_iter()
        .enumerate()
        .map(|(i, v)| (format!("d{i}"), v))
        .collect();
    let got = betr_score_corpus(&docs, &examples).unwrap();
    for ((id, v), s) in docs.iter().zip(&got) {
        let want = examples
            .iter()
            .map(|e| cosine(v, e).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(&s.id, id);
        assert!((s.max_cosine - want).abs() < 1e-9);
    }
}

#[test]
fn training_set_balance_and_membership() {
    let corpus = SynthCorpus::new(SynthConfig::clean(2)).documents(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let scores: Vec<BetrScore> = corpus
        .iter()
        .map(|d| BetrScore {
            id: d.id.clone(),
            max_cosine: (rng.random_range(0..50) as f64) / 50.0,
        })
        .collect();
    let set = build_betr_training_set(&scores, &corpus, 200, 9).unwrap();
    let pos: Vec<&LabeledExample> = set.iter().filter(|e| e.label).collect();
    assert_eq!(pos.len(), 100);
    assert_eq!(set.len(), 200);
    // The top decile with ties broken by id.
    let mut order: Vec<&BetrScore> = scores.iter().collect();
    order.sort_by(|a, b| b.max_cosine.total_cmp(&a.max_cosine).then_with(|| a.id.cmp(&b.id)));
    let top: Vec<&str> = order[..100].iter().map(|s| s.id.as_str()).collect();
    for p in &pos {
        assert!(top.contains(&p.id.as_str()));
    }
    for n in set.iter().filter(|e| !e.label) {
        assert!(!top.contains(&n.id.as_str()));
    }
    assert_eq!(set, build_betr_training_set(&scores, &corpus, 200, 9).unwrap());
    assert!(build_betr_training_set(&scores, &corpus, 201, 9).is_err());
}

#[test]
fn model_separates_two_classes_and_roundtrips() {
    let data = two_class(1200, 21);
    let (train, test) = data.split_at(2000);
    let model = NgramScorerModel::train(train, &TrainConfig::default()).unwrap();
    let correct = test
        .iter()
        .filter(|e| (model.score_text(&e.text) >= 0.5) == e.label)
        .count();
    assert!(correct as f64 / test.len() as f64 >= 0.99, "{correct}/{}", test.len());
    let bytes = model.to_bytes();
    let back = NgramScorerModel::read_from(bytes.as_slice()).unwrap();
    assert_eq!(back.to_bytes(), bytes);
    for e in test.iter().take(50) {
        assert_eq!(back.score_text(&e.text), model.score_text(&e.text));
    }
    let again = NgramScorerModel::train(train, &TrainConfig::default()).unwrap();
    assert_eq!(again.to_bytes(), bytes);
}

#[test]
fn corrupt_model_is_rejected() {
    let model = NgramScorerModel::train(&two_class(20, 1), &TrainConfig::default()).unwrap();
    let mut bytes = model.to_bytes();
    bytes[0] = b'X';
    assert!(NgramScorerModel::read_from(bytes.as_slice()).is_err());
    let bytes = model.to_bytes();
    assert!(NgramScorerModel::read_from(&bytes[..bytes.len() - 3]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    /// Raising either score never turns an accept into a reject; raising
    /// either threshold never turns a reject into an accept.
    #[test]
    fn gate_is_monotone(
        d in 0.0f64..=1.0, b in 0.0f64..=1.0, td in 0.0f64..=1.0, tb in 0.0f64..=1.0,
        dd in 0.0f64..=1.0, db in 0.0f64..=1.0,
    ) {
        let th = BinThresholds::new(td, tb);
        let base = GateDecision::from_scores(d, b, &th).accepted;
        let up = GateDecision::from_scores((d + dd).min(1.0), (b + db).min(1.0), &th).accepted;
        prop_assert!(!base || up);
        let stricter = BinThresholds::new((td + dd).min(1.0), (tb + db).min(1.0));
        let tight = GateDecision::from_scores(d, b, &stricter).accepted;
        prop_assert!(base || !tight);
        prop_assert_eq!(base, d >= td || b >= tb);
    }
}
