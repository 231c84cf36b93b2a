//! Brute-force reference for closed-pattern mining.
//!
//! Enumerates every distinct gapped subsequence of every input sequence via a
//! next-occurrence table (each subsequence is visited once, at its leftmost
//! embedding), measures supports by direct containment scans, and filters
//! closedness by pairwise comparison. Deliberately shares no code with the
//! grower it verifies.

use std::collections::{BTreeMap, BTreeSet};

use crate::rational::Rational;

use super::{is_subsequence, sort_patterns, MinerError, MiningConfig, Pattern};

const MAX_TOTAL_ITEMS: usize = 48;
const MAX_ALPHABET: usize = 8;

pub(crate) fn mine<I, T>(
    sequences: &[(I, Vec<T>)],
    cfg: &MiningConfig,
) -> Result<Vec<Pattern<I, T>>, MinerError>
where
    I: Clone + Ord,
    T: Clone + Ord,
{
    let total_items: usize = sequences.iter().map(|(_, s)| s.len()).sum();
    let alphabet: BTreeSet<&T> = sequences.iter().flat_map(|(_, s)| s.iter()).collect();
    if total_items > MAX_TOTAL_ITEMS || alphabet.len() > MAX_ALPHABET {
        return Err(MinerError::InstanceTooLarge { items: total_items, alphabet: alphabet.len() });
    }
    if sequences.is_empty() {
        return Ok(Vec::new());
    }

    let mut candidates: BTreeSet<Vec<T>> = BTreeSet::new();
    for (_, s) in sequences {
        enumerate_distinct_subsequences(s, &mut candidates);
    }

    let min_count = cfg.min_count(sequences.len());
    let total = sequences.len() as u64;

    let frequent: Vec<(Vec<T>, Vec<usize>)> = candidates
        .into_iter()
        .map(|c| {
            let supporters: Vec<usize> = sequences
                .iter()
                .enumerate()
                .filter(|(_, (_, s))| is_subsequence(&c, s))
                .map(|(i, _)| i)
                .collect();
            (c, supporters)
        })
        .filter(|(_, sup)| sup.len() >= min_count)
        .collect();

    let mut patterns: Vec<Pattern<I, T>> = frequent
        .iter()
        .filter(|(calls, supporters)| {
            // Closed: no strictly longer frequent pattern with equal support
            // contains this one. A super-sequence at equal support is itself
            // frequent, so scanning the frequent set is exhaustive.
            !frequent.iter().any(|(other, other_sup)| {
                other.len() > calls.len()
                    && other_sup.len() == supporters.len()
                    && is_subsequence(calls, other)
            })
        })
        .filter(|(calls, _)| calls.len() >= cfg.min_pattern_length())
        .map(|(calls, supporters)| Pattern {
            calls: calls.clone(),
            support: Rational::new(supporters.len() as u64, total),
            supporting_ids: supporters.iter().map(|&i| sequences[i].0.clone()).collect(),
        })
        .collect();
    sort_patterns(&mut patterns);
    Ok(patterns)
}

fn enumerate_distinct_subsequences<T: Clone + Ord>(s: &[T], out: &mut BTreeSet<Vec<T>>) {
    // next[i] maps each item to its first occurrence at or after position i.
    let mut next: Vec<BTreeMap<&T, usize>> = vec![BTreeMap::new(); s.len() + 1];
    for i in (0..s.len()).rev() {
        next[i] = next[i + 1].clone();
        next[i].insert(&s[i], i);
    }

    fn walk<T: Clone + Ord>(
        next: &[BTreeMap<&T, usize>],
        from: usize,
        path: &mut Vec<T>,
        out: &mut BTreeSet<Vec<T>>,
    ) {
        let steps: Vec<(T, usize)> = next[from].iter().map(|(t, &p)| ((*t).clone(), p)).collect();
        for (item, pos) in steps {
            path.push(item);
            out.insert(path.clone());
            walk(next, pos + 1, path, out);
            path.pop();
        }
    }

    let mut path = Vec::new();
    walk(&next, 0, &mut path, out);
}
