//! Measured effects of an encoding: output size and join locality.

use std::collections::{BTreeSet, HashMap};

use crate::codec::{body_size, EncodedTriple};
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::ingest::{Term, Triple};

/// Encodes every triple with `dictionary` and returns the varint body size
/// in bytes.
pub fn measure_compression(triples: &[Triple], dictionary: &Dictionary) -> Result<u64> {
    let encoded = encode_all(triples, dictionary)?;
    Ok(body_size(&encoded))
}

pub fn encode_all(triples: &[Triple], dictionary: &Dictionary) -> Result<Vec<EncodedTriple>> {
    triples.iter().map(|t| dictionary.encode_triple(t)).collect()
}

/// Sorted distinct subject IDs per predicate ID.
fn subject_indexes(encoded: &[EncodedTriple]) -> HashMap<u64, Vec<u64>> {
    let mut sets: HashMap<u64, BTreeSet<u64>> = HashMap::new();
    for [s, p, _] in encoded {
        sets.entry(*p).or_default().insert(*s);
    }
    sets.into_iter()
        .map(|(p, s)| (p, s.into_iter().collect()))
        .collect()
}

/// Fraction of `index` between the first and last position holding a key.
fn covered_fraction(index: &[u64], keys: &BTreeSet<u64>) -> f64 {
    let first = index.iter().position(|id| keys.contains(id));
    let last = index.iter().rposition(|id| keys.contains(id));
    match (first, last) {
        (Some(a), Some(b)) => (b - a + 1) as f64 / index.len() as f64,
        _ => 0.0,
    }
}

/// Span ratio of a subject-subject join between `p1` and `p2`.
///
/// Each predicate's distinct subject IDs form a sorted index. The join keys
/// are the IDs present in both. Per side, the ratio is the index span from
/// the first to the last key over the index length; the result is the mean
/// of both sides. 0 when no subject is shared.
pub fn measure_join_locality(
    encoded: &[EncodedTriple],
    dictionary: &Dictionary,
    p1: &Term,
    p2: &Term,
) -> Result<f64> {
    let indexes = subject_indexes(encoded);
    let lookup = |p: &Term| {
        dictionary
            .id_of(p)
            .and_then(|id| indexes.get(&id))
            .ok_or_else(|| Error::AbsentPredicate(p.to_string()))
    };
    let (left, right) = (lookup(p1)?, lookup(p2)?);
    let left_keys: BTreeSet<u64> = left.iter().copied().collect();
    let keys: BTreeSet<u64> = right.iter().copied().filter(|id| left_keys.contains(id)).collect();
    if keys.is_empty() {
        return Ok(0.0);
    }
    Ok((covered_fraction(left, &keys) + covered_fraction(right, &keys)) / 2.0)
}
