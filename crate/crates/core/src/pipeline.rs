//! End-to-end search over a loaded repository: look the query up, gather the
//! matching cached sequences, cluster them, mine each cluster for closed
//! patterns, consolidate the pool, and rank.

use thiserror::Error;

use num_traits::One;

use crate::clustering::{cluster_sequences, ClusteringError};
use crate::miner::{mine_closed, MinerError, MiningConfig, Pattern};
use crate::rational::Rational;
use crate::recommender::{consolidate, rank, Recommendation};
use crate::repository::RepositoryIndex;
use crate::types::{ApiCall, CallSequence, MethodQuery, SequenceId};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("query must be a non-empty dotted method name")]
    EmptyQuery,
    #[error("{0} must lie in [0, 1]")]
    ThresholdOutOfRange(&'static str),
    #[error("top_k must be at least 1")]
    InvalidTopK,
    #[error(transparent)]
    Mining(#[from] MinerError),
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
}

/// Search thresholds. Defaults: min_sup 1/2, tau1 0.7, tau2 0.15, top 10,
/// min pattern length 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    /// Minimum support inside each cluster, over the cluster's own size.
    pub min_sup: Rational,
    /// Stage-1 clustering stop threshold, a distance.
    pub tau1: Rational,
    /// Stage-2 consolidation threshold, a similarity.
    pub tau2_sim: Rational,
    pub top_k: usize,
    pub min_pattern_length: usize,
}

impl Default for SearchParams {
    fn default() -> SearchParams {
        SearchParams {
            min_sup: Rational::new(1, 2),
            tau1: Rational::new(7, 10),
            tau2_sim: Rational::new(3, 20),
            top_k: 10,
            min_pattern_length: 2,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.tau1 > Rational::one() {
            return Err(PipelineError::ThresholdOutOfRange("tau1"));
        }
        if self.tau2_sim > Rational::one() {
            return Err(PipelineError::ThresholdOutOfRange("tau2"));
        }
        MiningConfig::new(self.min_sup, self.min_pattern_length)?;
        if self.top_k == 0 {
            return Err(PipelineError::InvalidTopK);
        }
        Ok(())
    }
}

/// A finished search: the sequences the query matched and the ranked index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub matched_sequences: Vec<CallSequence>,
    pub recommendations: Vec<Recommendation>,
}

pub fn run_search(
    index: &RepositoryIndex,
    query: &str,
    params: &SearchParams,
) -> Result<SearchOutcome, PipelineError> {
    params.validate()?;
    let parsed = MethodQuery::parse(query).ok_or(PipelineError::EmptyQuery)?;

    let matched_sequences: Vec<CallSequence> = index
        .lookup_query(&parsed)
        .into_iter()
        .flat_map(|entry| &entry.sequences)
        .filter(|seq| seq.calls.iter().any(|c| parsed.matches(c)))
        .cloned()
        .collect();
    if matched_sequences.is_empty() {
        return Ok(SearchOutcome { matched_sequences, recommendations: Vec::new() });
    }

    let items: Vec<(SequenceId, Vec<ApiCall>)> =
        matched_sequences.iter().map(|s| (s.id.clone(), s.calls.clone())).collect();
    let clusters = cluster_sequences(&items, params.tau1)?;

    let cfg = MiningConfig::new(params.min_sup, params.min_pattern_length)?;
    let mut pool: Vec<Pattern<SequenceId, ApiCall>> = Vec::new();
    for cluster in &clusters {
        let members: Vec<(SequenceId, Vec<ApiCall>)> = items
            .iter()
            .filter(|(id, _)| cluster.member_ids.contains(id))
            .cloned()
            .collect();
        pool.extend(mine_closed(&members, &cfg));
    }

    let groups = consolidate(&pool, params.tau2_sim)?;
    let mut recommendations = rank(groups, &matched_sequences);
    recommendations.truncate(params.top_k);
    Ok(SearchOutcome { matched_sequences, recommendations })
}
