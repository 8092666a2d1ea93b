//! Detection of administrated ERC20 tokens in Solidity source corpora, and an
//! executable model of trustee-governed administration with deferred
//! maintenance and bounded pausing.
//!
//! The analysis pipeline runs in nine steps:
//!
//! 1. normalize sources ([`corpus::ingest`]): flatten multi-part JSON, strip comments, dedupe by content hash
//! 2. size and draw a labeling sample ([`corpus::slovin`], [`corpus::select_sample`])
//! 3. extract the nine syntactic features for the sample ([`features::extract_features`])
//! 4. cross-validate candidate classifiers ([`classify::evaluate`])
//! 5. pick the best one ([`classify::select_best`])
//! 6. extract features for the whole corpus
//! 7. train the chosen classifier on the labeled sample ([`classify::train`])
//! 8. classify every contract ([`classify::classify_corpus`])
//! 9. summarize prevalence ([`report::summarize`])
//!
//! The [`governance`] module is independent of the pipeline.

pub mod classify;
pub mod corpus;
pub mod features;
pub mod governance;
pub mod report;

pub use classify::{Label, LabeledSample, ModelKind, TrainedModel};
pub use corpus::{CorpusManifest, SourceUnit};
pub use features::FeatureVector;
pub use governance::GovernanceState;
pub use report::CorpusReport;
