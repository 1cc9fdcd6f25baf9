//! Reference encoders: appearance order, hashing, and lexical sorting.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::dictionary::Dictionary;
use crate::error::Result;
use crate::ingest::{term_occurrences, Term, Triple};
use crate::sketch::HashFamily;

/// IDs in order of first appearance, starting at 0.
pub fn order_based_encode(triples: &[Triple]) -> Result<Dictionary> {
    let mut seen: HashSet<&Term> = HashSet::new();
    let mut terms = Vec::new();
    for term in triples.iter().flat_map(term_occurrences) {
        if seen.insert(term) {
            terms.push(term.clone());
        }
    }
    Dictionary::from_terms(terms, 0)
}

/// A hash-based dictionary and the number of collisions resolved.
#[derive(Clone, Debug)]
pub struct HashEncoding {
    pub dictionary: Dictionary,
    pub collisions: u64,
}

/// ID = seeded 64-bit hash of the term. A taken ID is resolved by linear
/// probing (`id + 1`, wrapping). Terms are placed in first-appearance order.
pub fn hash_based_encode(triples: &[Triple], seed: u64) -> Result<HashEncoding> {
    let family = HashFamily::new(1, seed)?;
    let mut ids: HashMap<&Term, u64> = HashMap::new();
    let mut taken: HashSet<u64> = HashSet::new();
    let mut collisions = 0u64;
    for term in triples.iter().flat_map(term_occurrences) {
        if ids.contains_key(term) {
            continue;
        }
        let mut id = family.hash(term, 0);
        while !taken.insert(id) {
            collisions += 1;
            id = id.wrapping_add(1);
        }
        ids.insert(term, id);
    }
    if collisions > 0 {
        log::info!("hash-based encoding resolved {collisions} collisions");
    }
    let entries = ids.into_iter().map(|(t, id)| (id, t.clone())).collect();
    Ok(HashEncoding {
        dictionary: Dictionary::from_entries(entries, 0)?,
        collisions,
    })
}

/// Distinct terms sorted lexically, numbered from 0.
pub fn syntactic_encode(triples: &[Triple]) -> Result<Dictionary> {
    let terms: BTreeSet<&Term> = triples.iter().flat_map(term_occurrences).collect();
    Dictionary::from_terms(terms.into_iter().cloned().collect(), 0)
}
