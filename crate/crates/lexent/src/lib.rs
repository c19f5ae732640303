//! Recognizing lexical entailment with word-context vector space models.
//!
//! The crate builds sparse PPMI word-context matrices from tagged text and
//! offers three ways to decide whether one word entails another:
//!
//! * **balAPinc** — an asymmetric similarity measure over ranked feature
//!   sets, thresholded into a classifier;
//! * **ConVecs** — an SVM over concatenated truncated-SVD embeddings of
//!   the two words;
//! * **SimDiffs** — an SVM over differences of the words' similarities to
//!   a reference vocabulary, measured in a noun-context (domain) and a
//!   verb-context (function) space.
//!
//! The [`eval`] module carries the ranking and classification measures,
//! the statistical tests, the fold-construction protocols and the tuning
//! procedures used to compare the three methods; [`datasets`] holds the
//! relation-taxonomy pipeline that produces entailment datasets from
//! rated relation instances.
//!
//! The default `parallel` feature fans batch scoring, featurization,
//! counting and fold evaluation out over rayon; without it everything
//! runs sequentially with identical results.

pub mod balapinc;
pub mod datasets;
mod error;
pub mod eval;
mod linalg;
pub mod pair_features;
mod par;
pub mod scorers;
pub mod svm;
pub mod vsm;

pub use error::{Error, Result};
pub use linalg::Mat;
