//! Word-context vector space models.
//!
//! Builds sparse co-occurrence matrices from tagged text, reweights them
//! with positive pointwise mutual information, factorizes them with a
//! truncated SVD, and exposes the ranked per-word feature sets and dense
//! embeddings the scoring methods consume.

mod corpus;
mod count;
mod embed;
pub mod io;
mod ppmi;
mod ranked;
mod svd;
mod vocab;

pub use corpus::{parse_tagged_line, read_tagged_corpus, Sentence, TaggedToken};
pub use count::{count_cooccurrences, CoMatrix, ContextPolicy, CountSummary};
pub use embed::{cosine, project, Embedding, SpaceKind};
pub use ppmi::{ppmi, PpmiMatrix};
pub use ranked::{row_features, FeatureSet, RankedFeature};
pub use svd::{truncated_svd, truncated_svd_sparse, SvdFactors};
pub use vocab::{ContextKey, PosClass, Side, Vocabulary};
