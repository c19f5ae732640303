//! Performance measures, statistical tests, fold construction and the
//! parameter-tuning procedures.

mod crossval;
mod fisher;
mod folds;
pub mod metrics;
mod ranking;
mod tune;
mod wilson;

pub use crossval::{cross_validate, different_evaluation, CrossValReport, PairScorer};
pub use fisher::fisher_exact;
pub use folds::{make_folds, EvalSetup, FoldPlan};
pub use metrics::{metrics, ConfusionMatrix, MetricsReport};
pub use ranking::{average_precision, RankedList, ScanDirection};
pub use tune::{tune_balapinc, tune_svd_grid, GridScheme, SvmSettings};
pub use wilson::{normal_quantile, wilson_interval};
