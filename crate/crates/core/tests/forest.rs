#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proxsim::learn::{
    argmax, auc, evaluate, grouped_split, predict_proba, roc_curve, train_forest, ForestModel, ForestParams,
};
use proxsim::rng::seeded;
use proxsim::Error;
use rand::Rng;
use rand_distr::{Distribution, Normal};

fn names(prefix: &str, k: usize) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

/// Two Gaussian blobs per class laid out as an XOR pattern, plus noise columns.
fn xor_blobs(n: usize, seed: u64) -> (Vec<f64>, Vec<usize>) {
    let mut rng = seeded(seed);
    let jitter = Normal::new(0.0, 0.35).unwrap();
    let mut x = Vec::with_capacity(n * 4);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let (a, b) = (rng.random_bool(0.5), rng.random_bool(0.5));
        let cx = if a { 2.0 } else { -2.0 };
        let cy = if b { 2.0 } else { -2.0 };
        x.push(cx + jitter.sample(&mut rng));
        x.push(cy + jitter.sample(&mut rng));
        x.push(rng.random_range(-1.0..1.0));
        x.push(rng.random_range(-1.0..1.0));
        y.push(usize::from(a != b));
    }
    (x, y)
}

#[test]
fn xor_blobs_are_learned() {
    let (x, y) = xor_blobs(1200, 1);
    let (xt, yt) = xor_blobs(600, 2);
    let params = ForestParams { n_trees: 30, ..ForestParams::default() };
    let cols = names("f", 4);
    let model = train_forest(&x, &y, &cols, &names("c", 2), &params).unwrap();
    let proba = predict_proba(&model, &xt, &cols).unwrap();
    let m = evaluate(&yt, &proba, &names("c", 2)).unwrap();
    assert!(m.accuracy >= 0.95, "accuracy {}", m.accuracy);
    assert!(m.macro_auroc.unwrap() >= 0.95);
}

#[test]
fn training_is_deterministic_across_thread_counts() {
    let (x, y) = xor_blobs(400, 3);
    let params = ForestParams { n_trees: 12, ..ForestParams::default() };
    let cols = names("f", 4);
    let train = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| train_forest(&x, &y, &cols, &names("c", 2), &params).unwrap())
    };
    let a = train(1);
    assert_eq!(a, train(3));
    let other = train_forest(&x, &y, &cols, &names("c", 2), &ForestParams { seed: 8, ..params }).unwrap();
    assert_ne!(a, other);
}

#[test]
fn model_round_trips_through_json() {
    let (x, y) = xor_blobs(300, 4);
    let cols = names("f", 4);
    let model =
        train_forest(&x, &y, &cols, &names("c", 2), &ForestParams { n_trees: 5, ..Default::default() }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save(&path).unwrap();
    let back = ForestModel::load(&path).unwrap();
    assert_eq!(back, model);
    assert_eq!(predict_proba(&back, &x, &cols).unwrap(), predict_proba(&model, &x, &cols).unwrap());

    let text = std::fs::read_to_string(&path).unwrap().replace("proxsim-forest-v1", "other-v9");
    std::fs::write(&path, text).unwrap();
    assert!(matches!(ForestModel::load(&path), Err(Error::Schema(_))));
}

#[test]
fn one_tree_forest_returns_its_leaf() {
    let (x, y) = xor_blobs(300, 5);
    let cols = names("f", 4);
    let model =
        train_forest(&x, &y, &cols, &names("c", 2), &ForestParams { n_trees: 1, ..Default::default() }).unwrap();
    let proba = predict_proba(&model, &x, &cols).unwrap();
    for (i, p) in proba.iter().enumerate() {
        assert_eq!(p.as_slice(), model.trees[0].leaf_proba(&x[i * 4..(i + 1) * 4], 2));
    }
    assert!(model.trees[0].depth() <= 16);
}

#[test]
fn depth_and_leaf_limits_hold() {
    let (x, y) = xor_blobs(500, 6);
    let cols = names("f", 4);
    let params =
        ForestParams { n_trees: 4, max_depth: 3, min_samples_leaf: 20, bootstrap: false, ..Default::default() };
    let model = train_forest(&x, &y, &cols, &names("c", 2), &params).unwrap();
    for t in &model.trees {
        assert!(t.depth() <= 3);
        assert!(t.n_nodes() <= 15);
    }
}

fn instance() -> impl Strategy<Value = (Vec<usize>, Vec<Vec<f64>>)> {
    (2usize..5).prop_flat_map(|k| {
        prop::collection::vec((0..k, prop::collection::vec(0u8..5, k)), 1..80).prop_map(move |rows| {
            let (y, raw): (Vec<usize>, Vec<Vec<u8>>) = rows.into_iter().unzip();
            let p = raw
                .into_iter()
                .map(|r| {
                    let s = r.iter().map(|v| f64::from(*v)).sum::<f64>().max(1.0);
                    r.iter().map(|v| f64::from(*v) / s).collect()
                })
                .collect();
            (y, p)
        })
    })
}

proptest! {
    #[test]
    fn confusion_trace_is_accuracy((y, p) in instance()) {
        let k = p[0].len();
        let m = evaluate(&y, &p, &names("c", k)).unwrap();
        let trace: u64 = (0..k).map(|i| m.confusion[i][i]).sum();
        prop_assert_eq!(trace as f64 / y.len() as f64, m.accuracy);
        prop_assert_eq!(m.confusion.iter().flatten().sum::<u64>(), y.len() as u64);
        for c in &m.per_class {
            prop_assert!((0.0..=1.0).contains(&c.f1));
            if let Some(a) = c.auroc {
                prop_assert!((0.0..=1.0).contains(&a));
            }
        }
    }

    #[test]
    fn macro_f1_invariant_to_relabeling((y, p) in instance(), seed: u64) {
        let k = p[0].len();
        let mut perm: Vec<usize> = (0..k).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut seeded(seed));
        // Break ties so that argmax follows the relabeling.
        let p: Vec<Vec<f64>> =
            p.iter().map(|r| r.iter().enumerate().map(|(c, v)| v + 1e-6 * c as f64).collect()).collect();
        prop_assert!(p.iter().all(|r| r.iter().filter(|v| **v == r[argmax(r)]).count() == 1));
        let y2: Vec<usize> = y.iter().map(|c| perm[*c]).collect();
        let p2: Vec<Vec<f64>> = p
            .iter()
            .map(|r| {
                let mut out = vec![0.0; k];
                for (c, v) in r.iter().enumerate() {
                    out[perm[c]] = *v;
                }
                out
            })
            .collect();
        let a = evaluate(&y, &p, &names("c", k)).unwrap();
        let b = evaluate(&y2, &p2, &names("c", k)).unwrap();
        prop_assert!((a.macro_f1 - b.macro_f1).abs() < 1e-12);
        prop_assert_eq!(a.accuracy, b.accuracy);
        for c in 0..k {
            prop_assert_eq!(a.per_class[c].recall, b.per_class[perm[c]].recall);
        }
    }

    #[test]
    fn duplicating_rows_keeps_rates((y, p) in instance()) {
        let k = p[0].len();
        let a = evaluate(&y, &p, &names("c", k)).unwrap();
        let y2: Vec<usize> = y.iter().chain(&y).copied().collect();
        let p2: Vec<Vec<f64>> = p.iter().chain(&p).cloned().collect();
        let b = evaluate(&y2, &p2, &names("c", k)).unwrap();
        prop_assert_eq!(a.accuracy, b.accuracy);
        for (x, z) in a.per_class.iter().zip(&b.per_class) {
            prop_assert_eq!(x.recall, z.recall);
            prop_assert_eq!(x.precision, z.precision);
            prop_assert_eq!(x.auroc.map(|v| (v * 1e9).round()), z.auroc.map(|v| (v * 1e9).round()));
        }
    }

    #[test]
    fn auroc_complements_under_score_negation(scores in prop::collection::vec(0u8..10, 2..60), labels in prop::collection::vec(any::<bool>(), 60)) {
        let s: Vec<f64> = scores.iter().map(|v| f64::from(*v)).collect();
        let l = &labels[..s.len()];
        let Some(c) = roc_curve(&s, l) else { return Ok(()) };
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        let a = auc(&c);
        prop_assert!((a + auc(&roc_curve(&neg, l).unwrap()) - 1.0).abs() < 1e-12);
        let first = c.first().unwrap();
        let last = c.last().unwrap();
        prop_assert_eq!((first.fpr, first.tpr, last.fpr, last.tpr), (0.0, 0.0, 1.0, 1.0));
        prop_assert!(c.windows(2).all(|w| w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr));
    }

    #[test]
    fn grouped_split_keeps_scenarios_whole(per_class in prop::collection::vec(2usize..30, 1..4), rows in 1usize..6, frac in 0.05..0.95f64, seed: u64) {
        let mut groups = Vec::new();
        let mut labels = Vec::new();
        let mut g = 0u64;
        for (c, n) in per_class.iter().enumerate() {
            for _ in 0..*n {
                for _ in 0..rows {
                    groups.push(g);
                    labels.push(c);
                }
                g += 1;
            }
        }
        let s = grouped_split(&groups, &labels, frac, seed).unwrap();
        prop_assert_eq!(s.train.len() + s.test.len(), groups.len());
        let train_groups: BTreeSet<u64> = s.train.iter().map(|&i| groups[i]).collect();
        prop_assert!(train_groups.is_disjoint(&s.test_groups));
        for (c, n) in per_class.iter().enumerate() {
            let held = s.test_groups.iter().filter(|g| labels[groups.iter().position(|x| x == *g).unwrap()] == c).count();
            let want = ((frac * *n as f64).round() as usize).clamp(1, n - 1);
            prop_assert_eq!(held, want);
        }
        prop_assert_eq!(s.clone(), grouped_split(&groups, &labels, frac, seed).unwrap());
    }
}
