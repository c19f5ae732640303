//! Property tests for the structural invariants of the matrix, scoring
//! and evaluation layers.

// oracles below are written in index form to mirror their defining sums
#![allow(clippy::needless_range_loop)]

use std::collections::HashSet;

use proptest::prelude::*;

use lexent::balapinc::{apinc, balapinc, lin};
use lexent::datasets::LabeledPair;
use lexent::eval::{fisher_exact, make_folds, metrics, ConfusionMatrix, EvalSetup};
use lexent::pair_features::{convecs_features, simdiffs_features, ReferenceSet};
use lexent::vsm::{
    cosine, count_cooccurrences, parse_tagged_line, ppmi, project, truncated_svd_sparse,
    ContextPolicy, Embedding, FeatureSet, SpaceKind, Vocabulary,
};
use lexent::Mat;

fn feature_set_strategy(universe: usize, max_len: usize) -> impl Strategy<Value = FeatureSet> {
    prop::collection::btree_map(0..universe, 0.01f64..10.0, 0..=max_len)
        .prop_map(|m| FeatureSet::from_weights("w", m.into_iter().collect()).unwrap())
}

fn count_matrix_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1..6usize, 1..6usize).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0u64..20, c..=c), r..=r)
    })
}

fn embedding_from_rows(rows: Vec<Vec<f64>>) -> Embedding {
    let terms: Vec<String> = (0..rows.len()).map(|i| format!("w{i}")).collect();
    Embedding::from_vectors(
        SpaceKind::General,
        Vocabulary::new(terms).unwrap(),
        Mat::from_rows(rows),
        1.0,
    )
    .unwrap()
}

/// Direct enumeration of the APinc sums, used as the random-pair oracle.
fn apinc_direct(fu: &FeatureSet, fv: &FeatureSet) -> f64 {
    if fu.is_empty() {
        return 0.0;
    }
    let fu_cols: Vec<usize> = fu.features().iter().map(|f| f.col).collect();
    let fv_cols: Vec<usize> = fv.features().iter().map(|f| f.col).collect();
    let mut total = 0.0;
    for r in 1..=fu_cols.len() {
        let inc = fu_cols[..r].iter().filter(|c| fv_cols.contains(c)).count();
        let rel = match fv_cols.iter().position(|&c| c == fu_cols[r - 1]) {
            Some(pos) => 1.0 - (pos + 1) as f64 / (fv_cols.len() as f64 + 1.0),
            None => 0.0,
        };
        total += (inc as f64 / r as f64) * rel;
    }
    total / fu_cols.len() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ppmi_weights_positive_and_zero_preserving(counts in count_matrix_strategy()) {
        let rows: Vec<String> = (0..counts.len()).map(|i| format!("w{i}")).collect();
        let vocab = Vocabulary::new(rows).unwrap();
        // express the counts as a corpus of repeated two-token sentences
        let mut lines = Vec::new();
        for (i, row) in counts.iter().enumerate() {
            for (j, &n) in row.iter().enumerate() {
                for _ in 0..n {
                    lines.push(format!("w{i} c{j}"));
                }
            }
        }
        let sentences: Vec<_> = lines.iter().map(|l| parse_tagged_line(l)).collect();
        let (matrix, _) = count_cooccurrences(&sentences, &vocab, 1, ContextPolicy::General).unwrap();
        prop_assume!(matrix.total() > 0);
        let x = ppmi(&matrix).unwrap();
        for r in 0..x.n_rows() {
            for &(c, w) in x.row(r) {
                prop_assert!(w > 0.0, "stored weight {w} not positive");
                // zero counts stay absent
                prop_assert!(matrix.count(r, c) > 0, "weight appeared where count was zero");
            }
        }
    }

    #[test]
    fn balapinc_measures_stay_in_range(
        fu in feature_set_strategy(30, 12),
        fv in feature_set_strategy(30, 12),
    ) {
        for v in [apinc(&fu, &fv), lin(&fu, &fv), balapinc(&fu, &fv)] {
            prop_assert!((0.0..=1.0).contains(&v), "measure out of range: {v}");
        }
    }

    #[test]
    fn balapinc_identity_on_nonempty_sets(fs in feature_set_strategy(30, 12)) {
        prop_assume!(!fs.is_empty());
        prop_assert!((balapinc(&fs, &fs) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn apinc_matches_direct_enumeration(
        fu in feature_set_strategy(12, 8),
        fv in feature_set_strategy(12, 8),
    ) {
        let a = apinc(&fu, &fv);
        let b = apinc_direct(&fu, &fv);
        prop_assert!((a - b).abs() <= 1e-12, "apinc {a} vs direct {b}");
    }

    #[test]
    fn truncation_never_grows_feature_sets(
        fs in feature_set_strategy(30, 12),
        cap in 0..15usize,
    ) {
        prop_assert!(fs.truncated(cap).len() <= fs.len());
        prop_assert!(fs.truncated(cap).len() <= cap);
    }

    #[test]
    fn cosine_is_symmetric(
        rows in prop::collection::vec(
            prop::collection::vec(-3.0f64..3.0, 4..=4), 2..6),
        a in 0..6usize,
        b in 0..6usize,
    ) {
        let emb = embedding_from_rows(rows);
        let n = emb.vocabulary().len();
        let (a, b) = (a % n, b % n);
        let ta = format!("w{a}");
        let tb = format!("w{b}");
        let ab = cosine(&emb, &ta, &tb).unwrap();
        let ba = cosine(&emb, &tb, &ta).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&ab));
    }

    #[test]
    fn convecs_halves_have_unit_or_zero_norm(
        rows in prop::collection::vec(
            prop::collection::vec(-3.0f64..3.0, 3..=3), 2..5),
        a in 0..5usize,
        b in 0..5usize,
    ) {
        let emb = embedding_from_rows(rows);
        let n = emb.vocabulary().len();
        let v = convecs_features(&emb, &format!("w{}", a % n), &format!("w{}", b % n)).unwrap();
        let k = v.values.len() / 2;
        for half in [&v.values[..k], &v.values[k..]] {
            let norm: f64 = half.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!(norm < 1e-12 || (norm - 1.0).abs() < 1e-12, "half norm {norm}");
        }
    }

    #[test]
    fn simdiffs_values_bounded_and_antisymmetric(
        rows in prop::collection::vec(
            prop::collection::vec(-2.0f64..2.0, 3..=3), 4..=4),
    ) {
        let dom = embedding_from_rows(rows.clone());
        let fun = embedding_from_rows(rows.into_iter().rev().collect());
        let refs = ReferenceSet::new(["w2", "w3"]).unwrap();
        let ab = simdiffs_features(&dom, &fun, &refs, "w0", "w1").unwrap();
        let ba = simdiffs_features(&dom, &fun, &refs, "w1", "w0").unwrap();
        let m = refs.len();
        for &v in &ab.values {
            prop_assert!((-2.0 - 1e-9..=2.0 + 1e-9).contains(&v), "value {v} out of [-2, 2]");
        }
        for r in 0..m {
            prop_assert!((ab.values[r] + ba.values[r]).abs() < 1e-12);
            prop_assert!((ab.values[m + r] + ba.values[m + r]).abs() < 1e-12);
            prop_assert!((ab.values[2 * m + r] + ba.values[3 * m + r]).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_error_nonincreasing_in_k(
        dense in prop::collection::vec(
            prop::collection::vec(-2.0f64..2.0, 6..=6), 8..=8),
    ) {
        let rows: Vec<Vec<(usize, f64)>> = dense
            .iter()
            .map(|r| r.iter().enumerate().map(|(j, &v)| (j, v)).collect())
            .collect();
        let mut last = f64::INFINITY;
        for k in 1..=6 {
            let f = truncated_svd_sparse(&rows, 6, k, 5).unwrap();
            let recon = f.reconstruct();
            let mut err = 0.0;
            for i in 0..8 {
                for j in 0..6 {
                    err += (recon.at(i, j) - dense[i][j]).powi(2);
                }
            }
            let err = err.sqrt();
            prop_assert!(err <= last + 1e-9, "error grew with k: {last} -> {err}");
            last = err;
        }
    }

    #[test]
    fn projection_scales_columns_elementwise(p in 0.0f64..1.0) {
        let rows = vec![vec![(0usize, 3.0)], vec![(1usize, 2.0)], vec![(2usize, 1.0)]];
        let f = truncated_svd_sparse(&rows, 3, 3, 2).unwrap();
        let vocab = Vocabulary::new(["a", "b", "c"]).unwrap();
        let emb = project(&f, p, SpaceKind::General, vocab).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = f.u().at(i, j) * f.sigma()[j].powf(p);
                prop_assert!((emb.row(i)[j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn folds_partition_without_duplicates(
        n in 4..60usize,
        k in 2..8usize,
        seed in any::<u64>(),
    ) {
        prop_assume!(k <= n);
        let data: Vec<LabeledPair> = (0..n)
            .map(|i| LabeledPair::new(format!("a{}", i / 3), format!("b{i}"), (i % 2) as u8))
            .collect();
        for setup in [EvalSetup::Standard, EvalSetup::Clustered] {
            let plan = make_folds(&data, setup, k, seed).unwrap();
            let mut seen = HashSet::new();
            for fold in &plan.folds {
                for &i in fold {
                    prop_assert!(seen.insert(i), "{setup}: index {i} twice");
                }
            }
            prop_assert_eq!(seen.len(), n, "{} does not cover the dataset", setup);
        }
        // balanced folds never duplicate and always balance
        let plan = make_folds(&data, EvalSetup::Balanced, k, seed).unwrap();
        let mut seen = HashSet::new();
        for fold in &plan.folds {
            let ones = fold.iter().filter(|&&i| data[i].label == 1).count();
            prop_assert_eq!(2 * ones, fold.len());
            for &i in fold {
                prop_assert!(seen.insert(i));
            }
        }
    }

    #[test]
    fn weighted_recall_equals_accuracy_when_errors_balance(
        c00 in 0u64..50,
        c11 in 0u64..50,
        err in 1u64..30,
    ) {
        let confusion = ConfusionMatrix::new(c00, err, err, c11);
        let report = metrics(&confusion).unwrap();
        prop_assert!((report.rec - report.acc / 100.0).abs() < 1e-12);
    }

    #[test]
    fn fisher_is_symmetric_under_row_swap(
        na in 1u64..20,
        nb in 1u64..20,
        ca_frac in 0.0f64..=1.0,
        cb_frac in 0.0f64..=1.0,
    ) {
        let ca = (na as f64 * ca_frac).floor() as u64;
        let cb = (nb as f64 * cb_frac).floor() as u64;
        let p1 = fisher_exact(ca, na, cb, nb);
        let p2 = fisher_exact(cb, nb, ca, na);
        prop_assert!((p1 - p2).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&p1));
    }
}
