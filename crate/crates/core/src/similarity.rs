//! n-gram sets and the length-weighted Jaccard similarity between sequences.
//!
//! The gram set of a sequence is every contiguous run of it, deduplicated.
//! Similarity is the weight of the shared grams over the weight of all grams,
//! where a gram weighs its length in items. Sequences that order the same
//! calls differently keep partial credit through their shared short runs.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SimilarityError {
    #[error("similarity is undefined for an empty sequence")]
    EmptySequence,
}

/// All contiguous runs of a source sequence, deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramSet<T> {
    grams: BTreeSet<Vec<T>>,
}

impl<T: Clone + Ord> NGramSet<T> {
    pub fn grams(&self) -> &BTreeSet<Vec<T>> {
        &self.grams
    }

    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    /// Sum of gram lengths.
    pub fn total_weight(&self) -> u64 {
        self.grams.iter().map(|g| g.len() as u64).sum()
    }

    /// Length-weighted Jaccard ratio between two gram sets, exact.
    pub fn weighted_jaccard(&self, other: &NGramSet<T>) -> Rational {
        let (small, large) = if self.grams.len() <= other.grams.len() {
            (&self.grams, &other.grams)
        } else {
            (&other.grams, &self.grams)
        };
        let shared: u64 =
            small.iter().filter(|g| large.contains(*g)).map(|g| g.len() as u64).sum();
        let union = self.total_weight() + other.total_weight() - shared;
        if union == 0 {
            return Rational::zero();
        }
        Rational::new(shared, union)
    }
}

/// Builds the deduplicated set of all contiguous runs of `items`.
pub fn ngram_set<T: Clone + Ord>(items: &[T]) -> Result<NGramSet<T>, SimilarityError> {
    if items.is_empty() {
        return Err(SimilarityError::EmptySequence);
    }
    let mut grams = BTreeSet::new();
    for start in 0..items.len() {
        for end in start + 1..=items.len() {
            grams.insert(items[start..end].to_vec());
        }
    }
    Ok(NGramSet { grams })
}

/// Length-weighted Jaccard similarity of two sequences' gram sets, in [0, 1].
pub fn seqsim<T: Clone + Ord>(a: &[T], b: &[T]) -> Result<Rational, SimilarityError> {
    Ok(ngram_set(a)?.weighted_jaccard(&ngram_set(b)?))
}
