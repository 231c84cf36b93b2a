//! Consolidation of mined patterns into groups and ranked recommendations.
//!
//! Patterns mined from different clusters often restate one another. A second
//! complete-linkage clustering over the patterns themselves folds similar
//! ones into a group fronted by a single representative; groups are then
//! ranked by how many of the query-matched sequences contain that
//! representative.

use num_traits::One;

use crate::clustering::{cluster_sequences, ClusteringError};
use crate::miner::{is_subsequence, Pattern};
use crate::rational::Rational;
use crate::similarity::ngram_set;
use crate::types::{ApiCall, CallSequence, SequenceId};

/// Patterns folded together as near-restatements, fronted by a representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGroup<I, T> {
    pub members: Vec<Pattern<I, T>>,
    pub representative: Pattern<I, T>,
}

/// Where a pattern was seen: file, enclosing class, enclosing method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OriginRef {
    pub file: String,
    pub owner: String,
    pub method: String,
}

/// One entry of the final ranked index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recommendation {
    /// 1-based, consecutive.
    pub rank: usize,
    pub group: PatternGroup<SequenceId, ApiCall>,
    /// Number of query-matched sequences containing the representative.
    pub coverage_count: usize,
    /// Up to three places the representative occurs, for orientation.
    pub example_origins: Vec<OriginRef>,
}

/// Picks the group's face: longest pattern, then highest support, then the
/// lexicographically smallest call list.
pub fn select_representative<I, T: Ord>(members: &[Pattern<I, T>]) -> Option<&Pattern<I, T>> {
    members.iter().max_by(|a, b| {
        a.calls
            .len()
            .cmp(&b.calls.len())
            .then_with(|| a.support.cmp(&b.support))
            .then_with(|| b.calls.cmp(&a.calls))
    })
}

/// Groups patterns whose pairwise similarity reaches `tau2_sim` via complete
/// linkage at distance `1 - tau2_sim`, then keeps merging groups until no two
/// representatives are at or above `tau2_sim` similarity. Exact duplicates
/// always land in one group. Empty input yields empty output.
pub fn consolidate<I, T>(
    patterns: &[Pattern<I, T>],
    tau2_sim: Rational,
) -> Result<Vec<PatternGroup<I, T>>, ClusteringError>
where
    I: Clone + Ord,
    T: Clone + Ord,
{
    if patterns.is_empty() {
        return Ok(Vec::new());
    }
    if tau2_sim > Rational::one() {
        return Err(ClusteringError::InvalidThreshold);
    }

    // Canonical order first so grouping is independent of input order.
    let mut sorted: Vec<Pattern<I, T>> = patterns.to_vec();
    sorted.sort();
    sorted.dedup();

    let items: Vec<(usize, Vec<T>)> =
        sorted.iter().enumerate().map(|(i, p)| (i, p.calls.clone())).collect();
    let clusters = cluster_sequences(&items, Rational::one() - tau2_sim)?;

    let mut groups: Vec<PatternGroup<I, T>> = clusters
        .into_iter()
        .map(|c| {
            let members: Vec<Pattern<I, T>> =
                c.member_ids.iter().map(|&i| sorted[i].clone()).collect();
            let representative =
                select_representative(&members).expect("cluster is never empty").clone();
            PatternGroup { members, representative }
        })
        .collect();

    // Complete linkage bounds cluster diameters, not distances between the
    // chosen representatives of different clusters; fold groups until no two
    // representatives restate each other at tau2 similarity.
    loop {
        let mut merge: Option<(usize, usize)> = None;
        'outer: for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let sim = ngram_set(&groups[a].representative.calls)
                    .expect("patterns are non-empty")
                    .weighted_jaccard(
                        &ngram_set(&groups[b].representative.calls)
                            .expect("patterns are non-empty"),
                    );
                if sim >= tau2_sim {
                    merge = Some((a, b));
                    break 'outer;
                }
            }
        }
        let Some((a, b)) = merge else { break };
        let absorbed = groups.remove(b);
        groups[a].members.extend(absorbed.members);
        groups[a].members.sort();
        groups[a].representative =
            select_representative(&groups[a].members).expect("group is never empty").clone();
    }

    groups.sort_by(|x, y| x.members[0].cmp(&y.members[0]));
    Ok(groups)
}

/// Ranks groups by coverage over the query-matched sequences, longest
/// representative first among ties, then call order. Examples are the first
/// three matched sequences containing the representative, in input order.
pub fn rank(
    groups: Vec<PatternGroup<SequenceId, ApiCall>>,
    matched_sequences: &[CallSequence],
) -> Vec<Recommendation> {
    let mut scored: Vec<(PatternGroup<SequenceId, ApiCall>, usize)> = groups
        .into_iter()
        .map(|g| {
            let coverage = matched_sequences
                .iter()
                .filter(|s| is_subsequence(&g.representative.calls, &s.calls))
                .count();
            (g, coverage)
        })
        .collect();

    scored.sort_by(|(ga, ca), (gb, cb)| {
        cb.cmp(ca)
            .then_with(|| gb.representative.calls.len().cmp(&ga.representative.calls.len()))
            .then_with(|| ga.representative.calls.cmp(&gb.representative.calls))
            .then_with(|| ga.members.cmp(&gb.members))
    });

    scored
        .into_iter()
        .enumerate()
        .map(|(i, (group, coverage_count))| {
            let example_origins = matched_sequences
                .iter()
                .filter(|s| is_subsequence(&group.representative.calls, &s.calls))
                .take(3)
                .map(|s| OriginRef {
                    file: s.origin_file.clone(),
                    owner: s.origin_owner.clone(),
                    method: s.origin_method.clone(),
                })
                .collect();
            Recommendation { rank: i + 1, group, coverage_count, example_origins }
        })
        .collect()
}
