//! Parameter tuning on the two development splits.

use std::sync::Arc;

use crate::balapinc::{tune_threshold, BalapincParams, FeatureCache};
use crate::datasets::LabeledPair;
use crate::error::{Error, Result};
use crate::pair_features::ReferenceSet;
use crate::scorers::{train_svm_scorer, PairRepresentation};
use crate::svm::{Kernel, TrainConfig};
use crate::vsm::{project, truncated_svd, PpmiMatrix, SpaceKind};

use super::metrics::{weighted_f, ConfusionMatrix};
use super::PairScorer;

/// Learner settings shared by every grid point.
#[derive(Debug, Clone)]
pub struct SvmSettings {
    pub kernel: Kernel,
    pub config: TrainConfig,
}

/// Which representation the SVD grid search builds per `(k, p)` point.
pub enum GridScheme<'a> {
    ConVecs {
        ppmi: &'a PpmiMatrix,
    },
    SimDiffs {
        domain: &'a PpmiMatrix,
        function: &'a PpmiMatrix,
        references: &'a ReferenceSet,
    },
}

fn weighted_f_of<S: PairScorer>(scorer: &S, pairs: &[LabeledPair]) -> f64 {
    let mut confusion = ConfusionMatrix::default();
    for p in pairs {
        if let Some(score) = scorer.score(&p.a, &p.b) {
            confusion.add(p.label, scorer.classify(score));
        }
    }
    weighted_f(&confusion)
}

/// Tune the feature cap and threshold:
/// for each cap in the grid, T is set to optimize F on `dev1`; the cap with
/// the best F on `dev2` wins, and T is then re-tuned on the union of both
/// dev sets.
pub fn tune_balapinc(
    dev1: &[LabeledPair],
    dev2: &[LabeledPair],
    matrix: &PpmiMatrix,
    max_f_grid: &[usize],
) -> Result<BalapincParams> {
    if dev1.is_empty() || dev2.is_empty() {
        return Err(Error::Input("both dev sets must be nonempty".into()));
    }
    if max_f_grid.is_empty() {
        return Err(Error::Parameter("max_f grid is empty".into()));
    }
    let words: Vec<&str> = dev1
        .iter()
        .chain(dev2)
        .flat_map(|p| [p.a.as_str(), p.b.as_str()])
        .collect();
    let full_cache = FeatureCache::build(matrix, words, None);

    let mut best: Option<(usize, f64)> = None;
    for &max_f in max_f_grid {
        let cache = full_cache.truncated(Some(max_f));
        let scores1: Vec<f64> = dev1.iter().map(|p| cache.score(&p.a, &p.b)).collect();
        let labels1: Vec<u8> = dev1.iter().map(|p| p.label).collect();
        let t = tune_threshold(&scores1, &labels1)?;

        let mut confusion = ConfusionMatrix::default();
        for p in dev2 {
            let score = cache.score(&p.a, &p.b);
            confusion.add(p.label, u8::from(score >= t));
        }
        let f2 = weighted_f(&confusion);
        if best.is_none_or(|(_, bf)| f2 > bf) {
            best = Some((max_f, f2));
        }
    }
    let (max_f, _) = best.expect("grid is nonempty");

    // final threshold on the union of both dev sets
    let cache = full_cache.truncated(Some(max_f));
    let union: Vec<&LabeledPair> = dev1.iter().chain(dev2).collect();
    let scores: Vec<f64> = union.iter().map(|p| cache.score(&p.a, &p.b)).collect();
    let labels: Vec<u8> = union.iter().map(|p| p.label).collect();
    // sentinel candidates may land outside [0, 1]; scores never do, so
    // clamping yields the same classifications
    let t = tune_threshold(&scores, &labels)?.clamp(0.0, 1.0);
    BalapincParams::new(Some(max_f), t)
}

/// Grid search over `(k, p)`: train on `dev1`, pick the pair maximizing
/// the weighted F on `dev2`, ties toward smaller `k` then smaller `p`.
/// SimDiffs ties its two spaces to the same `(k, p)`. One factorization
/// per space is computed at the largest `k` and sliced per grid point.
pub fn tune_svd_grid(
    dev1: &[LabeledPair],
    dev2: &[LabeledPair],
    scheme: &GridScheme,
    ks: &[usize],
    ps: &[f64],
    svm: &SvmSettings,
    svd_seed: u64,
) -> Result<(usize, f64)> {
    if dev1.is_empty() || dev2.is_empty() {
        return Err(Error::Input("both dev sets must be nonempty".into()));
    }
    if ks.is_empty() || ps.is_empty() {
        return Err(Error::Parameter("empty (k, p) grid".into()));
    }
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut ps = ps.to_vec();
    ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ps.dedup();
    let k_max = *ks.last().unwrap();

    // one factorization per space at the largest requested rank
    let spaces: Vec<(&PpmiMatrix, SpaceKind)> = match scheme {
        GridScheme::ConVecs { ppmi } => vec![(*ppmi, SpaceKind::General)],
        GridScheme::SimDiffs {
            domain, function, ..
        } => vec![
            (*domain, SpaceKind::Domain),
            (*function, SpaceKind::Function),
        ],
    };
    let factors: Vec<_> = spaces
        .iter()
        .map(|(m, _)| truncated_svd(m, k_max, svd_seed))
        .collect::<Result<_>>()?;

    let mut best: Option<(usize, f64, f64)> = None; // (k, p, f)
    for &k in &ks {
        let sliced: Vec<_> = factors
            .iter()
            .map(|f| f.truncate(k))
            .collect::<Result<_>>()?;
        for &p in &ps {
            let embeddings: Vec<Arc<_>> = sliced
                .iter()
                .zip(&spaces)
                .map(|(f, (m, kind))| project(f, p, *kind, m.vocabulary().clone()).map(Arc::new))
                .collect::<Result<_>>()?;
            let repr = match scheme {
                GridScheme::ConVecs { .. } => PairRepresentation::ConVecs {
                    emb: Arc::clone(&embeddings[0]),
                },
                GridScheme::SimDiffs { references, .. } => {
                    let (kept, _) = references.restricted_to(&[&embeddings[0], &embeddings[1]]);
                    PairRepresentation::SimDiffs {
                        dom: Arc::clone(&embeddings[0]),
                        fun: Arc::clone(&embeddings[1]),
                        refs: Arc::new(kept),
                    }
                }
            };
            let scorer = train_svm_scorer(&repr, dev1, svm.kernel, &svm.config)?;
            let f = weighted_f_of(&scorer, dev2);
            if best.is_none_or(|(_, _, bf)| f > bf) {
                best = Some((k, p, f));
            }
        }
    }
    let (k, p, _) = best.expect("grid is nonempty");
    Ok((k, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vsm::{count_cooccurrences, parse_tagged_line, ppmi, ContextPolicy, Vocabulary};

    /// Corpus where n-words share contexts with their o-partner and the
    /// narrow side's contexts are a subset of the broad side's.
    fn toy_matrix() -> PpmiMatrix {
        let mut lines = Vec::new();
        for g in 0..6 {
            for r in 0..6 {
                lines.push(format!("n{g}_NN c{g}a_NN c{g}b_VB"));
                lines.push(format!("o{g}_NN c{g}a_NN c{g}b_VB c{g}x{r}_NN shared_VB"));
            }
        }
        let sentences: Vec<_> = lines.iter().map(|l| parse_tagged_line(l)).collect();
        let terms: Vec<String> = (0..6)
            .flat_map(|g| [format!("n{g}"), format!("o{g}")])
            .collect();
        let vocab = Vocabulary::new(terms).unwrap();
        let (counts, _) =
            count_cooccurrences(&sentences, &vocab, 4, ContextPolicy::General).unwrap();
        ppmi(&counts).unwrap()
    }

    fn toy_pairs() -> (Vec<LabeledPair>, Vec<LabeledPair>) {
        let mut pairs = Vec::new();
        for g in 0..6 {
            pairs.push(LabeledPair::new(format!("n{g}"), format!("o{g}"), 1));
            pairs.push(LabeledPair::new(
                format!("n{g}"),
                format!("o{}", (g + 3) % 6),
                0,
            ));
        }
        let dev1 = pairs[..6].to_vec();
        let dev2 = pairs[6..].to_vec();
        (dev1, dev2)
    }

    #[test]
    fn balapinc_tuning_returns_grid_point() {
        let matrix = toy_matrix();
        let (dev1, dev2) = toy_pairs();
        let params = tune_balapinc(&dev1, &dev2, &matrix, &[2, 4, 8]).unwrap();
        assert!([2, 4, 8].contains(&params.max_f.unwrap()));
        assert!((0.0..=1.0).contains(&params.t));
    }

    #[test]
    fn single_point_grid_is_that_point() {
        let matrix = toy_matrix();
        let (dev1, dev2) = toy_pairs();
        let params = tune_balapinc(&dev1, &dev2, &matrix, &[5]).unwrap();
        assert_eq!(params.max_f, Some(5));
    }

    #[test]
    fn svd_grid_degenerate_single_point() {
        let matrix = toy_matrix();
        let (dev1, dev2) = toy_pairs();
        let svm = SvmSettings {
            kernel: Kernel::Polynomial { degree: 2 },
            config: TrainConfig::default(),
        };
        let scheme = GridScheme::ConVecs { ppmi: &matrix };
        let (k, p) = tune_svd_grid(&dev1, &dev2, &scheme, &[3], &[0.5], &svm, 0).unwrap();
        assert_eq!((k, p), (3, 0.5));
    }

    #[test]
    fn svd_grid_prefers_smaller_k_on_ties() {
        let matrix = toy_matrix();
        let (dev1, dev2) = toy_pairs();
        let svm = SvmSettings {
            kernel: Kernel::Polynomial { degree: 2 },
            config: TrainConfig::default(),
        };
        let scheme = GridScheme::ConVecs { ppmi: &matrix };
        // both points see separable data; the tie must go to k = 2
        let (k, _p) = tune_svd_grid(&dev1, &dev2, &scheme, &[2, 3], &[1.0], &svm, 0).unwrap();
        let (k2, _) = tune_svd_grid(&dev1, &dev2, &scheme, &[3, 2], &[1.0], &svm, 0).unwrap();
        assert_eq!(k, k2, "grid order must not matter");
    }
}
