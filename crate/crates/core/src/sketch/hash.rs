use xxhash_rust::xxh3::xxh3_64_with_seed;

use crate::error::{Error, Result};
use crate::ingest::Term;

/// `n` independently seeded 64-bit hash functions over terms.
///
/// Function `j` is XXH3 seeded with `seeds[j]`, applied to the term's kind
/// tag followed by its lexical bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashFamily {
    seeds: Vec<u64>,
}

impl HashFamily {
    /// Derives `n` distinct seeds from `master` with SplitMix64.
    pub fn new(n: usize, master: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("hash family needs at least one function"));
        }
        let mut state = master;
        let mut seeds = Vec::with_capacity(n);
        while seeds.len() < n {
            let s = splitmix64(&mut state);
            if !seeds.contains(&s) {
                seeds.push(s);
            }
        }
        Ok(HashFamily { seeds })
    }

    pub fn from_seeds(seeds: Vec<u64>) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::invalid("hash family needs at least one function"));
        }
        for (i, s) in seeds.iter().enumerate() {
            if seeds[..i].contains(s) {
                return Err(Error::invalid(format!("duplicate hash seed {s:#x}")));
            }
        }
        Ok(HashFamily { seeds })
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    pub fn hash(&self, term: &Term, j: usize) -> u64 {
        with_key_bytes(term, |bytes| xxh3_64_with_seed(bytes, self.seeds[j]))
    }

    /// All `n` hashes of `term`, reusing one key buffer.
    pub fn hashes(&self, term: &Term, out: &mut Vec<u64>) {
        out.clear();
        with_key_bytes(term, |bytes| {
            out.extend(self.seeds.iter().map(|&s| xxh3_64_with_seed(bytes, s)));
        });
    }
}

fn with_key_bytes<R>(term: &Term, f: impl FnOnce(&[u8]) -> R) -> R {
    let lex = term.lexical().as_bytes();
    let mut stack = [0u8; 256];
    if lex.len() < stack.len() {
        stack[0] = term.kind().tag();
        stack[1..=lex.len()].copy_from_slice(lex);
        f(&stack[..=lex.len()])
    } else {
        let mut heap = Vec::with_capacity(lex.len() + 1);
        heap.push(term.kind().tag());
        heap.extend_from_slice(lex);
        f(&heap)
    }
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let fam = HashFamily::new(3, 42).unwrap();
        let again = HashFamily::new(3, 42).unwrap();
        assert_eq!(fam, again);
        let t = Term::iri("http://example.org/a");
        assert_eq!(fam.hash(&t, 1), again.hash(&t, 1));
        assert_ne!(fam.hash(&t, 0), fam.hash(&t, 1));
        let mut all = Vec::new();
        fam.hashes(&t, &mut all);
        assert_eq!(all, (0..3).map(|j| fam.hash(&t, j)).collect::<Vec<_>>());
    }

    #[test]
    fn kind_is_part_of_the_key() {
        let fam = HashFamily::new(1, 7).unwrap();
        assert_ne!(fam.hash(&Term::iri("x"), 0), fam.hash(&Term::blank("x"), 0));
    }

    #[test]
    fn long_terms_hash_like_short_ones() {
        let fam = HashFamily::new(2, 1).unwrap();
        let long = "a".repeat(1000);
        let t = Term::literal(format!("\"{long}\""));
        let mut key = vec![t.kind().tag()];
        key.extend_from_slice(t.lexical().as_bytes());
        assert_eq!(fam.hash(&t, 1), xxh3_64_with_seed(&key, fam.seeds()[1]));
    }

    #[test]
    fn rejects_bad_seeds() {
        assert!(HashFamily::new(0, 1).is_err());
        assert!(HashFamily::from_seeds(vec![]).is_err());
        assert!(HashFamily::from_seeds(vec![5, 5]).is_err());
    }
}
