//! Cross-validation and train/test evaluation drivers.

use crate::datasets::LabeledPair;
use crate::error::{Error, Result};
use crate::par;

use super::folds::{make_folds, EvalSetup, FoldPlan};
use super::metrics::{metrics, ConfusionMatrix, MetricsReport};
use super::ranking::RankedList;

/// A fitted scorer. `score` returns `None` for pairs it cannot resolve
/// (e.g. out-of-vocabulary terms under a supervised representation); such
/// pairs are excluded from the confusion matrix and counted in the report.
pub trait PairScorer: Send + Sync {
    fn score(&self, a: &str, b: &str) -> Option<f64>;
    fn classify(&self, score: f64) -> u8;
}

/// Pooled and per-fold results of one evaluation run. `pair_scores` maps
/// dataset indices (test-set indices for the different protocol) to the
/// score each pair received when it was in a test split.
#[derive(Debug, Clone)]
pub struct CrossValReport {
    pub pooled: MetricsReport,
    pub folds: Vec<MetricsReport>,
    pub leaked_terms: usize,
    pub skipped_pairs: usize,
    pub pair_scores: Vec<(usize, f64)>,
}

struct FoldOutcome {
    confusion: ConfusionMatrix,
    scored: Vec<(f64, u8)>,
    indexed: Vec<(usize, f64)>,
    skipped: usize,
}

fn evaluate_on<S: PairScorer>(scorer: &S, test: &[(usize, &LabeledPair)]) -> FoldOutcome {
    let mut confusion = ConfusionMatrix::default();
    let mut scored = Vec::with_capacity(test.len());
    let mut indexed = Vec::with_capacity(test.len());
    let mut skipped = 0;
    for (idx, pair) in test {
        match scorer.score(&pair.a, &pair.b) {
            Some(score) => {
                confusion.add(pair.label, scorer.classify(score));
                scored.push((score, pair.label));
                indexed.push((*idx, score));
            }
            None => skipped += 1,
        }
    }
    FoldOutcome {
        confusion,
        scored,
        indexed,
        skipped,
    }
}

fn report_with_ap(confusion: &ConfusionMatrix, scored: &[(f64, u8)]) -> Result<MetricsReport> {
    let mut report = metrics(confusion)?;
    let ranked = RankedList::from_scores(scored);
    report.ap0 = ranked.ap0();
    report.ap1 = ranked.ap1();
    Ok(report)
}

/// Run a `k`-fold cross-validation under the given setup. The factory is
/// fitted on each training split (so classifier-internal tuning sees only
/// training data); folds are evaluated independently and pooled in fold
/// order. AP values are computed on the pooled ranked list (scores are
/// assumed comparable across folds) as well as per fold.
pub fn cross_validate<S, F>(
    dataset: &[LabeledPair],
    factory: F,
    setup: EvalSetup,
    k: usize,
    seed: u64,
) -> Result<CrossValReport>
where
    S: PairScorer,
    F: Fn(&[LabeledPair]) -> Result<S> + Sync,
{
    let plan: FoldPlan = make_folds(dataset, setup, k, seed)?;
    let retained: Vec<usize> = plan.folds.iter().flatten().copied().collect();

    let outcomes: Vec<Result<FoldOutcome>> = par::map_range(plan.folds.len(), |fold_idx| {
        let test_idx = &plan.folds[fold_idx];
        let train: Vec<LabeledPair> = retained
            .iter()
            .filter(|i| !test_idx.contains(i))
            .map(|&i| dataset[i].clone())
            .collect();
        let test: Vec<(usize, &LabeledPair)> = test_idx.iter().map(|&i| (i, &dataset[i])).collect();
        let scorer = factory(&train)?;
        Ok(evaluate_on(&scorer, &test))
    });

    let mut pooled_confusion = ConfusionMatrix::default();
    let mut pooled_scored = Vec::new();
    let mut pair_scores = Vec::new();
    let mut fold_reports = Vec::with_capacity(plan.folds.len());
    let mut skipped = 0;
    for (fold_idx, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        if outcome.confusion.total() == 0 {
            return Err(Error::Input(format!(
                "every test pair of fold {fold_idx} was skipped"
            )));
        }
        fold_reports.push(report_with_ap(&outcome.confusion, &outcome.scored)?);
        pooled_confusion.merge(&outcome.confusion);
        pooled_scored.extend(outcome.scored);
        pair_scores.extend(outcome.indexed);
        skipped += outcome.skipped;
    }
    pair_scores.sort_by_key(|&(i, _)| i);

    Ok(CrossValReport {
        pooled: report_with_ap(&pooled_confusion, &pooled_scored)?,
        folds: fold_reports,
        leaked_terms: plan.leaked_terms,
        skipped_pairs: skipped,
        pair_scores,
    })
}

/// Train once on `train` and evaluate once on `test` (the transfer
/// protocol between qualitatively different datasets).
pub fn different_evaluation<S, F>(
    train: &[LabeledPair],
    test: &[LabeledPair],
    factory: F,
) -> Result<CrossValReport>
where
    S: PairScorer,
    F: Fn(&[LabeledPair]) -> Result<S>,
{
    if train.is_empty() || test.is_empty() {
        return Err(Error::Input("train and test sets must be nonempty".into()));
    }
    let scorer = factory(train)?;
    let test_refs: Vec<(usize, &LabeledPair)> = test.iter().enumerate().collect();
    let outcome = evaluate_on(&scorer, &test_refs);
    if outcome.confusion.total() == 0 {
        return Err(Error::Input("every test pair was skipped".into()));
    }
    let report = report_with_ap(&outcome.confusion, &outcome.scored)?;
    Ok(CrossValReport {
        folds: vec![report.clone()],
        pooled: report,
        leaked_terms: 0,
        skipped_pairs: outcome.skipped,
        pair_scores: outcome.indexed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scorer that replays the true label of pairs named `p<i>:<label>`.
    struct OracleScorer;

    impl PairScorer for OracleScorer {
        fn score(&self, _a: &str, b: &str) -> Option<f64> {
            Some(if b.ends_with('1') { 0.9 } else { 0.1 })
        }

        fn classify(&self, score: f64) -> u8 {
            u8::from(score >= 0.5)
        }
    }

    struct ConstantScorer(f64);

    impl PairScorer for ConstantScorer {
        fn score(&self, _a: &str, _b: &str) -> Option<f64> {
            Some(self.0)
        }

        fn classify(&self, score: f64) -> u8 {
            u8::from(score >= 0.5)
        }
    }

    fn dataset(n: usize) -> Vec<LabeledPair> {
        (0..n)
            .map(|i| {
                let label = (i % 2) as u8;
                LabeledPair::new(format!("w{i}"), format!("p{i}:{label}"), label)
            })
            .collect()
    }

    #[test]
    fn oracle_scorer_is_perfect_in_every_setup() {
        let data = dataset(40);
        for setup in [
            EvalSetup::Standard,
            EvalSetup::Clustered,
            EvalSetup::Balanced,
        ] {
            let report = cross_validate(&data, |_| Ok(OracleScorer), setup, 5, 7).unwrap();
            assert!((report.pooled.acc - 100.0).abs() < 1e-12, "setup {setup}");
            assert_eq!(report.folds.len(), 5);
            assert_eq!(report.skipped_pairs, 0);
        }
    }

    #[test]
    fn constant_scorer_matches_majority_rate() {
        let data = dataset(30); // 15 ones, 15 zeros
        let report = cross_validate(
            &data,
            |_| Ok(ConstantScorer(0.9)),
            EvalSetup::Standard,
            5,
            3,
        )
        .unwrap();
        assert!((report.pooled.acc - 50.0).abs() < 1e-12);
    }

    #[test]
    fn seed_changes_standard_folds_but_not_clustered_leaks() {
        let data = dataset(24);
        let a = cross_validate(&data, |_| Ok(OracleScorer), EvalSetup::Clustered, 4, 1).unwrap();
        let b = cross_validate(&data, |_| Ok(OracleScorer), EvalSetup::Clustered, 4, 99).unwrap();
        assert_eq!(a.leaked_terms, b.leaked_terms);
    }

    #[test]
    fn different_evaluation_runs_once() {
        let train = dataset(10);
        let test = dataset(6);
        let report = different_evaluation(&train, &test, |_| Ok(OracleScorer)).unwrap();
        assert_eq!(report.folds.len(), 1);
        assert!((report.pooled.acc - 100.0).abs() < 1e-12);
    }

    #[test]
    fn factory_sees_only_training_pairs() {
        let data = dataset(20);
        let report = cross_validate(
            &data,
            |train| {
                assert_eq!(train.len(), 16);
                Ok(OracleScorer)
            },
            EvalSetup::Standard,
            5,
            0,
        )
        .unwrap();
        assert_eq!(report.pooled.confusion.total(), 20);
    }
}
