//! Frequent closed sequential pattern mining.
//!
//! A pattern is an ordered item list contained, with gaps allowed, in some of
//! the input sequences. Its support is the fraction of sequences containing
//! it. A frequent pattern is closed when no longer pattern has the same
//! support; reporting only closed patterns keeps every implied shorter
//! pattern without listing it.
//!
//! [`mine_closed`] grows patterns item by item with bi-directional closure
//! checks and scan-backward pruning, never materialising a candidate set.
//! [`oracle_closed`] brute-forces the same answer on small instances and
//! exists to cross-check the miner.

mod bide;
mod oracle;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MinerError {
    #[error("support is undefined for an empty candidate")]
    EmptyCandidate,
    #[error("support is undefined over an empty sequence set")]
    EmptySequenceSet,
    #[error("minimum support must lie in (0, 1]")]
    InvalidSupport,
    #[error("minimum pattern length must be at least 1")]
    InvalidLength,
    #[error("oracle instance too large: {items} items over {alphabet} distinct values (limits 48/8)")]
    InstanceTooLarge { items: usize, alphabet: usize },
}

/// A frequent closed sequence with its support over the mining run's input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pattern<I, T> {
    pub calls: Vec<T>,
    pub support: Rational,
    pub supporting_ids: BTreeSet<I>,
}

/// Mining thresholds: minimum support fraction and minimum pattern length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningConfig {
    min_sup: Rational,
    min_pattern_length: usize,
}

impl MiningConfig {
    pub fn new(min_sup: Rational, min_pattern_length: usize) -> Result<MiningConfig, MinerError> {
        if min_sup.is_zero() || min_sup > Rational::one() {
            return Err(MinerError::InvalidSupport);
        }
        if min_pattern_length == 0 {
            return Err(MinerError::InvalidLength);
        }
        Ok(MiningConfig { min_sup, min_pattern_length })
    }

    pub fn min_sup(&self) -> Rational {
        self.min_sup
    }

    pub fn min_pattern_length(&self) -> usize {
        self.min_pattern_length
    }

    /// Smallest sequence count that reaches `min_sup` out of `total`.
    fn min_count(&self, total: usize) -> usize {
        let needed = (self.min_sup * Rational::from_integer(total as u64)).ceil().to_integer();
        (needed as usize).max(1)
    }
}

impl Default for MiningConfig {
    /// Support 1/2 and length 2: single-call patterns carry no ordering
    /// information, so they are excluded by default.
    fn default() -> MiningConfig {
        MiningConfig::new(Rational::new(1, 2), 2).expect("default config is valid")
    }
}

/// True when `needle` occurs in `hay` in order, gaps allowed.
pub fn is_subsequence<T: PartialEq>(needle: &[T], hay: &[T]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

/// Fraction of `sequences` containing `candidate` as a gapped subsequence.
/// Each sequence counts once regardless of how often the candidate embeds.
pub fn support_of<T: PartialEq>(
    candidate: &[T],
    sequences: &[Vec<T>],
) -> Result<Rational, MinerError> {
    if candidate.is_empty() {
        return Err(MinerError::EmptyCandidate);
    }
    if sequences.is_empty() {
        return Err(MinerError::EmptySequenceSet);
    }
    let count = sequences.iter().filter(|s| is_subsequence(candidate, s)).count();
    Ok(Rational::new(count as u64, sequences.len() as u64))
}

/// Mines every frequent closed pattern of at least the configured length.
/// Output is sorted by support descending, then length descending, then item
/// order.
pub fn mine_closed<I, T>(sequences: &[(I, Vec<T>)], cfg: &MiningConfig) -> Vec<Pattern<I, T>>
where
    I: Clone + Ord,
    T: Clone + Ord,
{
    if sequences.is_empty() {
        return Vec::new();
    }
    let (alphabet, encoded) = intern(sequences);
    let min_count = cfg.min_count(sequences.len());
    let raw = bide::mine(&encoded, alphabet.len(), min_count, cfg.min_pattern_length);

    let total = sequences.len() as u64;
    let mut patterns: Vec<Pattern<I, T>> = raw
        .into_iter()
        .map(|found| Pattern {
            calls: found.items.iter().map(|&e| alphabet[e as usize].clone()).collect(),
            support: Rational::new(found.supporting.len() as u64, total),
            supporting_ids: found.supporting.iter().map(|&i| sequences[i].0.clone()).collect(),
        })
        .collect();
    sort_patterns(&mut patterns);
    patterns
}

/// Exhaustive reference miner for small instances: enumerates every distinct
/// subsequence, filters by support, and drops non-closed patterns pairwise.
/// Guarded to at most 48 total items over at most 8 distinct values.
pub fn oracle_closed<I, T>(
    sequences: &[(I, Vec<T>)],
    cfg: &MiningConfig,
) -> Result<Vec<Pattern<I, T>>, MinerError>
where
    I: Clone + Ord,
    T: Clone + Ord,
{
    oracle::mine(sequences, cfg)
}

pub(crate) fn sort_patterns<I: Ord, T: Ord>(patterns: &mut [Pattern<I, T>]) {
    patterns.sort_by(|p, q| {
        q.support
            .cmp(&p.support)
            .then_with(|| q.calls.len().cmp(&p.calls.len()))
            .then_with(|| p.calls.cmp(&q.calls))
            .then_with(|| p.supporting_ids.cmp(&q.supporting_ids))
    });
}

/// Maps items to dense codes; the alphabet is sorted so code order matches
/// item order.
fn intern<I, T: Clone + Ord>(sequences: &[(I, Vec<T>)]) -> (Vec<T>, Vec<Vec<u32>>) {
    let distinct: BTreeSet<&T> = sequences.iter().flat_map(|(_, s)| s.iter()).collect();
    let alphabet: Vec<T> = distinct.into_iter().cloned().collect();
    let encoded = sequences
        .iter()
        .map(|(_, s)| {
            s.iter()
                .map(|item| alphabet.binary_search(item).expect("interned item") as u32)
                .collect()
        })
        .collect();
    (alphabet, encoded)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(texts: &[&str]) -> Vec<(usize, Vec<char>)> {
        texts.iter().enumerate().map(|(i, s)| (i, s.chars().collect())).collect()
    }

    fn plain(texts: &[&str]) -> Vec<Vec<char>> {
        texts.iter().map(|s| s.chars().collect()).collect()
    }

    fn shape<I, T: Clone>(patterns: &[Pattern<I, T>]) -> Vec<(Vec<T>, Rational)> {
        patterns.iter().map(|p| (p.calls.clone(), p.support)).collect()
    }

    #[test]
    fn support_examples() {
        let set = plain(&["xy", "xyz", "xyt"]);
        assert_eq!(support_of(&['x', 'y'], &set).unwrap(), Rational::one());
        assert_eq!(support_of(&['x', 'y', 'z'], &set).unwrap(), Rational::new(1, 3));
        let single = plain(&["abc"]);
        assert_eq!(support_of(&['a', 'b', 'c'], &single).unwrap(), Rational::one());
    }

    #[test]
    fn support_error_cases() {
        let set = plain(&["xy"]);
        assert_eq!(support_of::<char>(&[], &set), Err(MinerError::EmptyCandidate));
        assert_eq!(support_of(&['x'], &[]), Err(MinerError::EmptySequenceSet));
    }

    #[test]
    fn subsequence_is_gapped() {
        let hay: Vec<char> = "axbyc".chars().collect();
        assert!(is_subsequence(&['a', 'b', 'c'], &hay));
        assert!(is_subsequence(&['x', 'c'], &hay));
        assert!(!is_subsequence(&['b', 'a'], &hay));
    }

    #[test]
    fn config_validation() {
        assert!(MiningConfig::new(Rational::new(0, 1), 1).is_err());
        assert!(MiningConfig::new(Rational::new(3, 2), 1).is_err());
        assert!(MiningConfig::new(Rational::one(), 0).is_err());
        let cfg = MiningConfig::default();
        assert_eq!(cfg.min_sup(), Rational::new(1, 2));
        assert_eq!(cfg.min_pattern_length(), 2);
    }

    #[test]
    fn min_count_rounds_up() {
        let cfg = MiningConfig::new(Rational::new(1, 2), 1).unwrap();
        assert_eq!(cfg.min_count(3), 2);
        assert_eq!(cfg.min_count(4), 2);
        let strict = MiningConfig::new(Rational::new(2, 3), 1).unwrap();
        assert_eq!(strict.min_count(4), 3);
    }

    #[test]
    fn mine_closed_xy_example() {
        // x and y alone are frequent but absorbed by xy at equal support.
        let cfg = MiningConfig::new(Rational::new(1, 2), 1).unwrap();
        let got = mine_closed(&seqs(&["xy", "xyz", "xyt"]), &cfg);
        assert_eq!(shape(&got), vec![(vec!['x', 'y'], Rational::one())]);
        assert_eq!(got[0].supporting_ids, [0, 1, 2].into_iter().collect());
    }

    #[test]
    fn mine_closed_empty_input() {
        let cfg = MiningConfig::default();
        assert!(mine_closed::<usize, char>(&[], &cfg).is_empty());
    }

    #[test]
    fn mine_closed_three_way_example() {
        let cfg = MiningConfig::new(Rational::new(3, 5), 1).unwrap();
        let input = seqs(&["abcd", "acd", "bcd"]);
        let got = mine_closed(&input, &cfg);
        let expected = vec![
            (vec!['c', 'd'], Rational::one()),
            (vec!['a', 'c', 'd'], Rational::new(2, 3)),
            (vec!['b', 'c', 'd'], Rational::new(2, 3)),
        ];
        assert_eq!(shape(&got), expected);
        // Oracle agrees in full, ids included.
        assert_eq!(got, oracle_closed(&input, &cfg).unwrap());
    }

    #[test]
    fn oracle_single_sequence_collapses_to_itself() {
        let cfg = MiningConfig::new(Rational::one(), 1).unwrap();
        let got = oracle_closed(&seqs(&["abc"]), &cfg).unwrap();
        assert_eq!(shape(&got), vec![(vec!['a', 'b', 'c'], Rational::one())]);
    }

    #[test]
    fn oracle_disjoint_sequences_under_strict_support() {
        let cfg = MiningConfig::new(Rational::new(99, 100), 1).unwrap();
        assert!(oracle_closed(&seqs(&["ab", "cd"]), &cfg).unwrap().is_empty());
    }

    #[test]
    fn oracle_guards_instance_size() {
        let long = "abcdefgh".repeat(7); // 56 items
        let err = oracle_closed(&seqs(&[&long]), &MiningConfig::default()).unwrap_err();
        assert!(matches!(err, MinerError::InstanceTooLarge { .. }));

        let wide = seqs(&["abcdefghi"]); // 9 distinct
        assert!(oracle_closed(&wide, &MiningConfig::default()).is_err());
    }

    #[test]
    fn duplicates_raise_support() {
        let cfg = MiningConfig::new(Rational::new(2, 3), 2).unwrap();
        let got = mine_closed(&seqs(&["ab", "ab", "cd"]), &cfg);
        assert_eq!(shape(&got), vec![(vec!['a', 'b'], Rational::new(2, 3))]);
    }

    #[test]
    fn soundness_and_closedness_posthoc() {
        let input = seqs(&["abcab", "bca", "acb", "abc"]);
        let raw: Vec<Vec<char>> = input.iter().map(|(_, s)| s.clone()).collect();
        let cfg = MiningConfig::new(Rational::new(1, 2), 1).unwrap();
        let got = mine_closed(&input, &cfg);
        for p in &got {
            let sup = support_of(&p.calls, &raw).unwrap();
            assert_eq!(sup, p.support);
            assert!(sup >= cfg.min_sup());
        }
        for p in &got {
            for q in &got {
                if p.calls != q.calls && is_subsequence(&p.calls, &q.calls) {
                    assert!(p.support > q.support, "{:?} not closed under {:?}", p.calls, q.calls);
                }
            }
        }
    }
}
