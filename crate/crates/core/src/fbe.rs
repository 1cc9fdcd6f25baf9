//! Frequency-based encoding: the most frequent terms get the smallest IDs.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::ingest::Term;
use crate::sketch::{sort_estimates, FrequencyEstimate};

/// Frequent terms with IDs `0..len`, most frequent first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequentDictionary {
    entries: Vec<FrequencyEstimate>,
    index: HashMap<Term, u64>,
}

impl FrequentDictionary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn id_of(&self, term: &Term) -> Option<u64> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &Term) -> bool {
        self.index.contains_key(term)
    }

    pub fn term_of(&self, id: u64) -> Option<&Term> {
        self.entries.get(usize::try_from(id).ok()?).map(|e| &e.term)
    }

    /// Largest assigned ID, `None` when empty.
    pub fn max_id(&self) -> Option<u64> {
        self.entries.len().checked_sub(1).map(|m| m as u64)
    }

    /// First ID available to the infrequent terms.
    pub fn next_id(&self) -> u64 {
        self.entries.len() as u64
    }

    /// Entries in ID order, with the estimates that ranked them.
    pub fn entries(&self) -> &[FrequencyEstimate] {
        &self.entries
    }
}

/// Keeps the `k` best estimates (estimate descending, term ascending) and
/// numbers them from 0.
pub fn build_frequent_dictionary(
    estimates: &[FrequencyEstimate],
    k: usize,
) -> Result<FrequentDictionary> {
    let mut seen = HashSet::with_capacity(estimates.len());
    if let Some(dup) = estimates.iter().find(|e| !seen.insert(&e.term)) {
        return Err(Error::invalid(format!(
            "duplicate term in frequency estimates: {}",
            dup.term
        )));
    }
    let mut sorted = estimates.to_vec();
    sort_estimates(&mut sorted);
    sorted.truncate(k);
    let index = sorted
        .iter()
        .enumerate()
        .map(|(id, e)| (e.term.clone(), id as u64))
        .collect();
    Ok(FrequentDictionary {
        entries: sorted,
        index,
    })
}
