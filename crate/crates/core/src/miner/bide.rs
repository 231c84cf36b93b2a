//! Closed-pattern search by prefix growth with bi-directional closure checks.
//!
//! A grown prefix is emitted only when no single item extends it forward or
//! backward at the same support. The backward check looks for an item present
//! in the prefix's i-th maximum period of every supporting sequence; the same
//! scan over the narrower semi-maximum periods prunes whole subtrees whose
//! closed patterns are reachable from a shifted prefix instead.

/// A mined pattern over interned items, with supporting sequence indices.
pub(crate) struct Found {
    pub items: Vec<u32>,
    pub supporting: Vec<usize>,
}

pub(crate) fn mine(
    sequences: &[Vec<u32>],
    alphabet_len: usize,
    min_count: usize,
    min_len: usize,
) -> Vec<Found> {
    debug_assert!(min_count >= 1);
    let mut out = Vec::new();
    if alphabet_len == 0 {
        return out;
    }

    let mut per_item = vec![0usize; alphabet_len];
    for s in sequences {
        let mut seen = vec![false; alphabet_len];
        for &e in s {
            if !seen[e as usize] {
                seen[e as usize] = true;
                per_item[e as usize] += 1;
            }
        }
    }

    let mut prefix = Vec::new();
    for e in 0..alphabet_len as u32 {
        if per_item[e as usize] < min_count {
            continue;
        }
        let projection: Vec<(usize, usize)> = sequences
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.iter().position(|&x| x == e).map(|p| (i, p + 1)))
            .collect();
        prefix.push(e);
        grow(sequences, alphabet_len, min_count, min_len, &mut prefix, &projection, &mut out);
        prefix.pop();
    }
    out
}

/// `projection` holds, per supporting sequence, the offset just past the
/// first (earliest-ending) embedding of the prefix.
fn grow(
    sequences: &[Vec<u32>],
    alphabet_len: usize,
    min_count: usize,
    min_len: usize,
    prefix: &mut Vec<u32>,
    projection: &[(usize, usize)],
    out: &mut Vec<Found>,
) {
    let support = projection.len();

    if has_common_period_item(sequences, prefix, projection, Period::SemiMaximum) {
        return;
    }

    let mut forward = vec![0usize; alphabet_len];
    for &(si, start) in projection {
        let mut seen = vec![false; alphabet_len];
        for &e in &sequences[si][start..] {
            if !seen[e as usize] {
                seen[e as usize] = true;
                forward[e as usize] += 1;
            }
        }
    }

    let forward_extension = forward.contains(&support);
    if prefix.len() >= min_len
        && !forward_extension
        && !has_common_period_item(sequences, prefix, projection, Period::Maximum)
    {
        out.push(Found {
            items: prefix.clone(),
            supporting: projection.iter().map(|&(si, _)| si).collect(),
        });
    }

    for e in 0..alphabet_len as u32 {
        if forward[e as usize] < min_count {
            continue;
        }
        let next: Vec<(usize, usize)> = projection
            .iter()
            .filter_map(|&(si, start)| {
                sequences[si][start..].iter().position(|&x| x == e).map(|p| (si, start + p + 1))
            })
            .collect();
        prefix.push(e);
        grow(sequences, alphabet_len, min_count, min_len, prefix, &next, out);
        prefix.pop();
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Period {
    /// Up to the i-th item of the first (earliest) embedding.
    SemiMaximum,
    /// Up to the i-th item of the last (latest) embedding.
    Maximum,
}

/// True when some item occurs in the i-th period of the prefix in every
/// supporting sequence, for any position i. Period i spans from just past
/// item i-1 of the first embedding (or the sequence start for i = 0) to just
/// before item i of the first or last embedding.
fn has_common_period_item(
    sequences: &[Vec<u32>],
    prefix: &[u32],
    projection: &[(usize, usize)],
    period: Period,
) -> bool {
    for i in 0..prefix.len() {
        let mut common: Option<Vec<u32>> = None;
        for &(si, _) in projection {
            let s = &sequences[si];
            let first = first_embedding(s, prefix);
            let hi = match period {
                Period::SemiMaximum => first[i],
                Period::Maximum => last_embedding(s, prefix)[i],
            };
            let lo = if i == 0 { 0 } else { first[i - 1] + 1 };
            let mut items: Vec<u32> = s[lo..hi].to_vec();
            items.sort_unstable();
            items.dedup();
            common = Some(match common {
                None => items,
                Some(prev) => intersect_sorted(&prev, &items),
            });
            if common.as_ref().is_some_and(Vec::is_empty) {
                break;
            }
        }
        if common.is_some_and(|c| !c.is_empty()) {
            return true;
        }
    }
    false
}

/// Leftmost-greedy positions of `prefix` in `s`; the embedding that ends
/// earliest.
fn first_embedding(s: &[u32], prefix: &[u32]) -> Vec<usize> {
    let mut positions = Vec::with_capacity(prefix.len());
    let mut from = 0usize;
    for &e in prefix {
        let p = s[from..].iter().position(|&x| x == e).expect("prefix occurs in sequence") + from;
        positions.push(p);
        from = p + 1;
    }
    positions
}

/// Rightmost-greedy positions of `prefix` in `s`; the embedding that starts
/// latest.
fn last_embedding(s: &[u32], prefix: &[u32]) -> Vec<usize> {
    let mut positions = vec![0usize; prefix.len()];
    let mut bound = s.len();
    for (i, &e) in prefix.iter().enumerate().rev() {
        let p = s[..bound].iter().rposition(|&x| x == e).expect("prefix occurs in sequence");
        positions[i] = p;
        bound = p;
    }
    positions
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
