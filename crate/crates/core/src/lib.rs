//! Offline API usage pattern search.
//!
//! The crate indexes client source files, extracts per-method API call
//! sequences, and answers "how is this method typically used?" queries by
//! mining frequent closed call sequences and ranking consolidated patterns.
//!
//! Building blocks, bottom up:
//!
//! * [`extractor`] — fault-tolerant source analysis producing [`CallSequence`]s
//! * [`similarity`] — n-gram sets and the length-weighted Jaccard measure
//! * [`clustering`] — agglomerative complete-linkage clustering
//! * [`miner`] — frequent closed sequential pattern mining plus a brute-force
//!   verification oracle
//! * [`recommender`] — pattern consolidation, representative selection, ranking
//! * [`repository`] — persistent XML-backed store with an inverted method index
//! * [`pipeline`] — the end-to-end search over a loaded repository

pub mod clustering;
pub mod extractor;
pub mod miner;
pub mod pipeline;
pub mod rational;
pub mod recommender;
pub mod repository;
pub mod similarity;
pub mod synth;
pub mod types;

pub use rational::Rational;
pub use types::{
    ApiCall, CallSequence, DiagnosticKind, ExtractionDiagnostic, MethodQuery, SequenceId,
};
