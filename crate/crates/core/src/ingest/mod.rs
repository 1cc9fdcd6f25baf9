//! Reading N-Triples input and splitting it between workers.

mod ntriples;
mod term;

pub use ntriples::{
    open_input, parse_ntriples, sniff_gzip, write_ntriples, ErrorPolicy, NTriplesReader,
    ParseError, Parsed,
};
pub use term::{term_occurrences, Term, TermKind, Triple};

use crate::error::{Error, Result};

/// Splits `items` into `m` round-robin partitions: item `i` goes to
/// partition `i % m`. Partitions borrow from the input.
pub fn partition<T>(items: &[T], m: usize) -> Result<Vec<Vec<&T>>> {
    if m == 0 {
        return Err(Error::invalid("partition count must be at least 1"));
    }
    let mut parts: Vec<Vec<&T>> = (0..m)
        .map(|p| Vec::with_capacity(items.len() / m + usize::from(p < items.len() % m)))
        .collect();
    for (i, item) in items.iter().enumerate() {
        parts[i % m].push(item);
    }
    Ok(parts)
}

/// Iterates partition `part` of `m` without materializing it.
pub(crate) fn partition_iter<T>(items: &[T], part: usize, m: usize) -> impl Iterator<Item = &T> {
    items.iter().skip(part).step_by(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_robin() {
        let items: Vec<usize> = (0..6).collect();
        let parts = partition(&items, 2).unwrap();
        assert_eq!(parts[0], vec![&0, &2, &4]);
        assert_eq!(parts[1], vec![&1, &3, &5]);
    }

    #[test]
    fn single_partition_is_identity() {
        let items: Vec<usize> = (0..5).collect();
        let parts = partition(&items, 1).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].iter().map(|x| **x).collect::<Vec<_>>(), items);
    }

    #[test]
    fn uneven_sizes() {
        let items: Vec<usize> = (0..10).collect();
        let sizes: Vec<usize> = partition(&items, 3).unwrap().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 3, 3]);
    }

    #[test]
    fn zero_partitions_rejected() {
        assert!(matches!(partition(&[1, 2], 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn iter_matches_partition() {
        let items: Vec<usize> = (0..17).collect();
        let parts = partition(&items, 4).unwrap();
        for (p, part) in parts.iter().enumerate() {
            let lazy: Vec<&usize> = partition_iter(&items, p, 4).collect();
            assert_eq!(&lazy, part);
        }
    }
}
