//! Agglomerative complete-linkage clustering over sequences.
//!
//! Distance between sequences is `1 - seqsim`; the distance between clusters
//! is the largest pairwise member distance. Merging runs while the smallest
//! cluster distance stays at or below the stop threshold, so every output
//! cluster has diameter bounded by that threshold.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;
use crate::similarity::{ngram_set, SimilarityError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ClusteringError {
    #[error("cannot cluster an empty input")]
    EmptyInput,
    #[error("distance threshold must lie in [0, 1]")]
    InvalidThreshold,
    #[error("input ids must be unique")]
    DuplicateId,
    #[error("cannot cluster an empty sequence")]
    EmptySequence,
    #[error("distance table is missing a member pair")]
    MissingPair,
}

impl From<SimilarityError> for ClusteringError {
    fn from(_: SimilarityError) -> ClusteringError {
        ClusteringError::EmptySequence
    }
}

/// A cluster of sequence ids. Clusters returned by [`cluster_sequences`]
/// partition the input ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster<I> {
    pub member_ids: BTreeSet<I>,
}

impl<I: Ord> Cluster<I> {
    pub fn smallest_id(&self) -> &I {
        self.member_ids.iter().next().expect("cluster is never empty")
    }
}

/// Symmetric pairwise distance table keyed by id.
#[derive(Debug, Clone, Default)]
pub struct DistanceTable<I: Ord> {
    map: std::collections::BTreeMap<(I, I), Rational>,
}

impl<I: Clone + Ord> DistanceTable<I> {
    pub fn new() -> DistanceTable<I> {
        DistanceTable { map: std::collections::BTreeMap::new() }
    }

    pub fn insert(&mut self, a: I, b: I, distance: Rational) {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.map.insert(key, distance);
    }

    /// Distance between two ids; identical ids are distance zero.
    pub fn get(&self, a: &I, b: &I) -> Option<Rational> {
        if a == b {
            return Some(Rational::zero());
        }
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.map.get(&key).copied()
    }
}

/// Complete linkage: the largest pairwise distance across two clusters.
/// With `c1 == c2` this is the cluster's diameter.
pub fn complete_linkage<I: Clone + Ord>(
    c1: &Cluster<I>,
    c2: &Cluster<I>,
    distances: &DistanceTable<I>,
) -> Result<Rational, ClusteringError> {
    let mut max = Rational::zero();
    for a in &c1.member_ids {
        for b in &c2.member_ids {
            let d = distances.get(a, b).ok_or(ClusteringError::MissingPair)?;
            if d > max {
                max = d;
            }
        }
    }
    Ok(max)
}

/// Clusters `(id, sequence)` pairs with complete linkage, merging while the
/// smallest linkage is at most `tau`. Ties between merges prefer the union
/// with the lexicographically smallest sorted id list, which makes the
/// partition independent of input order. Output is sorted by smallest member.
pub fn cluster_sequences<I, T>(
    items: &[(I, Vec<T>)],
    tau: Rational,
) -> Result<Vec<Cluster<I>>, ClusteringError>
where
    I: Clone + Ord,
    T: Clone + Ord,
{
    if items.is_empty() {
        return Err(ClusteringError::EmptyInput);
    }
    if tau > Rational::one() {
        return Err(ClusteringError::InvalidThreshold);
    }
    let ids: BTreeSet<&I> = items.iter().map(|(id, _)| id).collect();
    if ids.len() != items.len() {
        return Err(ClusteringError::DuplicateId);
    }

    let gram_sets = items
        .iter()
        .map(|(_, seq)| ngram_set(seq))
        .collect::<Result<Vec<_>, _>>()?;

    let n = items.len();
    let mut dist = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = Rational::one() - gram_sets[i].weighted_jaccard(&gram_sets[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    // Each cluster keeps its member item indices plus its ids sorted, for
    // tie-breaking. Cluster-to-cluster distances are maintained with the
    // complete-linkage update max(d(a,c), d(b,c)) as clusters merge.
    struct Node<I> {
        members: Vec<usize>,
        sorted_ids: Vec<I>,
    }
    let mut nodes: Vec<Node<I>> = (0..n)
        .map(|i| Node { members: vec![i], sorted_ids: vec![items[i].0.clone()] })
        .collect();
    let mut cdist = dist;

    loop {
        let mut best: Option<(Rational, Vec<I>, usize, usize)> = None;
        for a in 0..nodes.len() {
            for b in a + 1..nodes.len() {
                let d = cdist[nodes[a].members[0]][nodes[b].members[0]];
                if d > tau {
                    continue;
                }
                if let Some((bd, _, _, _)) = &best {
                    if d > *bd {
                        continue;
                    }
                }
                let union = merge_sorted(&nodes[a].sorted_ids, &nodes[b].sorted_ids);
                let better = match &best {
                    None => true,
                    Some((bd, bu, _, _)) => d < *bd || (d == *bd && union < *bu),
                };
                if better {
                    best = Some((d, union, a, b));
                }
            }
        }
        let Some((_, union, a, b)) = best else { break };

        // Complete-linkage update, keyed off each node's first member index.
        let ra = nodes[a].members[0];
        let rb = nodes[b].members[0];
        for (k, node) in nodes.iter().enumerate() {
            if k == a || k == b {
                continue;
            }
            let rk = node.members[0];
            let d = cdist[ra][rk].max(cdist[rb][rk]);
            cdist[ra][rk] = d;
            cdist[rk][ra] = d;
        }
        let moved = nodes.remove(b);
        nodes[a].members.extend(moved.members);
        nodes[a].sorted_ids = union;
    }

    let mut clusters: Vec<Cluster<I>> = nodes
        .into_iter()
        .map(|node| Cluster {
            member_ids: node.members.iter().map(|&i| items[i].0.clone()).collect(),
        })
        .collect();
    clusters.sort_by(|x, y| x.smallest_id().cmp(y.smallest_id()));
    Ok(clusters)
}

fn merge_sorted<I: Clone + Ord>(a: &[I], b: &[I]) -> Vec<I> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::seqsim;
    use proptest::prelude::*;

    fn items(entries: &[(&str, &str)]) -> Vec<(String, Vec<char>)> {
        entries.iter().map(|(id, s)| (id.to_string(), s.chars().collect())).collect()
    }

    fn partition_ids(clusters: &[Cluster<String>]) -> Vec<String> {
        let mut all: Vec<String> =
            clusters.iter().flat_map(|c| c.member_ids.iter().cloned()).collect();
        all.sort();
        all
    }

    #[test]
    fn single_sequence_is_one_singleton() {
        let clusters = cluster_sequences(&items(&[("s1", "abc")]), Rational::new(7, 10)).unwrap();
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].member_ids.len(), 1);
    }

    #[test]
    fn paper_pair_merges_at_07_but_not_05() {
        let input = items(&[("s1", "abc"), ("s2", "cab"), ("s3", "pqr")]);
        // d(abc, cab) = 1 - 1/3 = 2/3; d to pqr = 1.
        let at_07 = cluster_sequences(&input, Rational::new(7, 10)).unwrap();
        assert_eq!(at_07.len(), 2);
        assert_eq!(
            at_07[0].member_ids,
            ["s1", "s2"].iter().map(|s| s.to_string()).collect()
        );

        let at_05 = cluster_sequences(&input, Rational::new(1, 2)).unwrap();
        assert_eq!(at_05.len(), 3);
    }

    #[test]
    fn duplicates_co_cluster_at_any_tau() {
        let input = items(&[("s1", "xy"), ("s2", "xy"), ("s3", "zw")]);
        let clusters = cluster_sequences(&input, Rational::zero()).unwrap();
        assert_eq!(clusters.len(), 2);
        assert!(clusters[0].member_ids.contains("s1") && clusters[0].member_ids.contains("s2"));
    }

    #[test]
    fn empty_input_is_an_error() {
        let empty: Vec<(String, Vec<char>)> = Vec::new();
        assert_eq!(cluster_sequences(&empty, Rational::zero()), Err(ClusteringError::EmptyInput));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let input = items(&[("s1", "ab"), ("s1", "cd")]);
        assert_eq!(
            cluster_sequences(&input, Rational::zero()),
            Err(ClusteringError::DuplicateId)
        );
    }

    #[test]
    fn complete_linkage_examples() {
        let mut table = DistanceTable::new();
        table.insert("x", "y", Rational::new(1, 4));
        let cx = Cluster { member_ids: ["x"].into_iter().collect() };
        let cy = Cluster { member_ids: ["y"].into_iter().collect() };
        assert_eq!(complete_linkage(&cx, &cy, &table).unwrap(), Rational::new(1, 4));

        let mut table = DistanceTable::new();
        table.insert("a", "b", Rational::new(1, 5));
        table.insert("a", "c", Rational::new(9, 10));
        table.insert("b", "c", Rational::new(1, 2));
        let c1 = Cluster { member_ids: ["a"].into_iter().collect() };
        let c2 = Cluster { member_ids: ["b", "c"].into_iter().collect() };
        assert_eq!(complete_linkage(&c1, &c2, &table).unwrap(), Rational::new(9, 10));

        // Linkage of a cluster with itself is its diameter.
        let c3 = Cluster { member_ids: ["a", "b", "c"].into_iter().collect() };
        assert_eq!(complete_linkage(&c3, &c3, &table).unwrap(), Rational::new(9, 10));
    }

    #[test]
    fn complete_linkage_missing_pair() {
        let table: DistanceTable<&str> = DistanceTable::new();
        let c1 = Cluster { member_ids: ["a"].into_iter().collect() };
        let c2 = Cluster { member_ids: ["b"].into_iter().collect() };
        assert_eq!(complete_linkage(&c1, &c2, &table), Err(ClusteringError::MissingPair));
    }

    fn arb_instance() -> impl Strategy<Value = (Vec<(String, Vec<char>)>, Rational)> {
        let seqs = proptest::collection::vec(proptest::collection::vec(0u8..5, 1..=6), 1..=8);
        let tau = (0u64..=10).prop_map(|n| Rational::new(n, 10));
        (seqs, tau).prop_map(|(seqs, tau)| {
            let items: Vec<(String, Vec<char>)> = seqs
                .into_iter()
                .enumerate()
                .map(|(i, s)| {
                    (format!("s{i}"), s.into_iter().map(|c| (b'a' + c) as char).collect())
                })
                .collect();
            (items, tau)
        })
    }

    proptest! {
        #[test]
        fn partition_diameter_and_permutation_invariance((input, tau) in arb_instance()) {
            let clusters = cluster_sequences(&input, tau).unwrap();

            // Partition: every id in exactly one cluster.
            let mut expected: Vec<String> = input.iter().map(|(id, _)| id.clone()).collect();
            expected.sort();
            prop_assert_eq!(partition_ids(&clusters), expected);

            // Diameter bound.
            let by_id: std::collections::BTreeMap<&String, &Vec<char>> =
                input.iter().map(|(id, s)| (id, s)).collect();
            for c in &clusters {
                for a in &c.member_ids {
                    for b in &c.member_ids {
                        let d = Rational::one() - seqsim(by_id[a], by_id[b]).unwrap();
                        prop_assert!(d <= tau, "cluster diameter exceeded tau");
                    }
                }
            }

            // Permutation invariance: reversing the input yields the same partition.
            let mut reversed = input.clone();
            reversed.reverse();
            let again = cluster_sequences(&reversed, tau).unwrap();
            prop_assert_eq!(clusters, again);
        }

        #[test]
        fn cluster_count_monotone_in_tau((input, tau) in arb_instance()) {
            let looser = (tau + Rational::new(1, 10)).min(Rational::one());
            let tight = cluster_sequences(&input, tau).unwrap();
            let loose = cluster_sequences(&input, looser).unwrap();
            prop_assert!(loose.len() <= tight.len());
        }
    }
}
