//! Fitted pair scorers wiring the representations to the learners.

use std::sync::Arc;

use crate::balapinc::{tune_threshold, BalapincParams, BalapincScorer, FeatureCache};
use crate::datasets::LabeledPair;
use crate::error::{Error, Result};
use crate::eval::PairScorer;
use crate::pair_features::{
    batch_features, convecs_features, simdiffs_features, FeatureResources, ReferenceSet,
};
use crate::svm::{predict_prob, train, Kernel, SvmModel, TrainConfig};
use crate::vsm::Embedding;

/// How a word pair becomes a feature vector for the SVM.
#[derive(Clone)]
pub enum PairRepresentation {
    ConVecs {
        emb: Arc<Embedding>,
    },
    SimDiffs {
        dom: Arc<Embedding>,
        fun: Arc<Embedding>,
        refs: Arc<ReferenceSet>,
    },
}

impl PairRepresentation {
    fn featurize(&self, a: &str, b: &str) -> Result<Vec<f64>> {
        match self {
            PairRepresentation::ConVecs { emb } => Ok(convecs_features(emb, a, b)?.values),
            PairRepresentation::SimDiffs { dom, fun, refs } => {
                Ok(simdiffs_features(dom, fun, refs, a, b)?.values)
            }
        }
    }

    fn resources(&self) -> FeatureResources<'_> {
        match self {
            PairRepresentation::ConVecs { emb } => FeatureResources::ConVecs { emb },
            PairRepresentation::SimDiffs { dom, fun, refs } => {
                FeatureResources::SimDiffs { dom, fun, refs }
            }
        }
    }
}

/// A trained SVM plus the representation it was trained under. Scores are
/// calibrated probabilities of class 1; pairs with unknown terms score
/// `None`.
pub struct SvmScorer {
    model: SvmModel,
    repr: PairRepresentation,
    skipped_train_pairs: usize,
}

impl SvmScorer {
    pub fn model(&self) -> &SvmModel {
        &self.model
    }

    /// Training pairs dropped because they could not be featurized.
    pub fn skipped_train_pairs(&self) -> usize {
        self.skipped_train_pairs
    }
}

impl PairScorer for SvmScorer {
    fn score(&self, a: &str, b: &str) -> Option<f64> {
        let x = self.repr.featurize(a, b).ok()?;
        predict_prob(&self.model, &x).ok()
    }

    fn classify(&self, score: f64) -> u8 {
        u8::from(score >= 0.5)
    }
}

/// Featurize the training pairs and train the SVM. Unresolvable training
/// pairs are dropped (their count is kept on the scorer).
pub fn train_svm_scorer(
    repr: &PairRepresentation,
    training: &[LabeledPair],
    kernel: Kernel,
    config: &TrainConfig,
) -> Result<SvmScorer> {
    let pairs: Vec<(String, String)> = training
        .iter()
        .map(|p| (p.a.clone(), p.b.clone()))
        .collect();
    let (vectors, skipped) = batch_features(&pairs, &repr.resources());
    if vectors.is_empty() {
        return Err(Error::Training(
            "no training pair could be featurized".into(),
        ));
    }
    // align labels with the surviving vectors
    let mut labels = Vec::with_capacity(vectors.len());
    let mut cursor = 0usize;
    for v in &vectors {
        while training[cursor].a != v.a || training[cursor].b != v.b {
            cursor += 1;
        }
        labels.push(training[cursor].label);
        cursor += 1;
    }
    let x: Vec<Vec<f64>> = vectors.into_iter().map(|v| v.values).collect();
    let model = train(&x, &labels, kernel, config)?;
    Ok(SvmScorer {
        model,
        repr: repr.clone(),
        skipped_train_pairs: skipped.len(),
    })
}

/// Fit a balAPinc scorer on a training split: score the split through the
/// shared feature cache and tune the threshold on it.
pub fn fit_balapinc_scorer(
    cache: &Arc<FeatureCache>,
    training: &[LabeledPair],
) -> Result<BalapincScorer> {
    let scores: Vec<f64> = training.iter().map(|p| cache.score(&p.a, &p.b)).collect();
    let labels: Vec<u8> = training.iter().map(|p| p.label).collect();
    let t = tune_threshold(&scores, &labels)?.clamp(0.0, 1.0);
    Ok(BalapincScorer::new(
        Arc::clone(cache),
        BalapincParams::new(cache.max_f(), t)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::vsm::{SpaceKind, Vocabulary};

    fn toy_embedding() -> Arc<Embedding> {
        // two tight clusters on opposite axes
        let terms = ["n0", "n1", "n2", "n3", "m0", "m1", "m2", "m3"];
        let rows = (0..8)
            .map(|i| {
                let wiggle = 0.05 * (i % 4) as f64;
                if i < 4 {
                    vec![1.0, wiggle]
                } else {
                    vec![wiggle, 1.0]
                }
            })
            .collect();
        Arc::new(
            Embedding::from_vectors(
                SpaceKind::General,
                Vocabulary::new(terms.iter().copied()).unwrap(),
                Mat::from_rows(rows),
                1.0,
            )
            .unwrap(),
        )
    }

    fn cluster_dataset() -> Vec<LabeledPair> {
        // label 1 when both words come from the same cluster
        let mut data = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    data.push(LabeledPair::new(format!("n{i}"), format!("n{j}"), 1));
                    data.push(LabeledPair::new(format!("n{i}"), format!("m{j}"), 0));
                }
            }
        }
        data
    }

    #[test]
    fn convecs_scorer_learns_cluster_membership() {
        let emb = toy_embedding();
        let repr = PairRepresentation::ConVecs { emb };
        let data = cluster_dataset();
        let scorer = train_svm_scorer(
            &repr,
            &data,
            Kernel::Polynomial { degree: 2 },
            &TrainConfig::default(),
        )
        .unwrap();
        let correct = data
            .iter()
            .filter(|p| {
                let s = scorer.score(&p.a, &p.b).unwrap();
                scorer.classify(s) == p.label
            })
            .count();
        assert!(correct as f64 / data.len() as f64 > 0.9);
        assert_eq!(scorer.skipped_train_pairs(), 0);
    }

    #[test]
    fn unknown_terms_score_none() {
        let emb = toy_embedding();
        let repr = PairRepresentation::ConVecs { emb };
        let data = cluster_dataset();
        let scorer = train_svm_scorer(
            &repr,
            &data,
            Kernel::Polynomial { degree: 1 },
            &TrainConfig::default(),
        )
        .unwrap();
        assert!(scorer.score("n0", "ghost").is_none());
        assert!(scorer.score("n0", "m1").is_some());
    }

    #[test]
    fn training_pairs_with_unknown_terms_are_dropped_not_fatal() {
        let emb = toy_embedding();
        let repr = PairRepresentation::ConVecs { emb };
        let mut data = cluster_dataset();
        data.push(LabeledPair::new("ghost", "n0", 1));
        let scorer = train_svm_scorer(
            &repr,
            &data,
            Kernel::Polynomial { degree: 1 },
            &TrainConfig::default(),
        )
        .unwrap();
        assert_eq!(scorer.skipped_train_pairs(), 1);
    }
}
