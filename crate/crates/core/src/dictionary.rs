//! Bijective term <-> ID mapping and its on-disk formats.
//!
//! The text format is canonical: one `id<TAB>kind<TAB>lexical` line per
//! term in ascending ID order, preceded by a `#frequent<TAB>n` header line
//! giving the size of the frequent part. Kinds are `iri`, `literal` and
//! `bnode`. The binary companion holds the same data for faster loading.

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use crate::binio::{Reader, Writer};
use crate::codec::EncodedTriple;
use crate::error::{Error, Result};
use crate::ingest::{Term, TermKind, Triple};

const BIN_MAGIC: &[u8; 8] = b"KGEDICT1";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dictionary {
    /// Sorted by ID.
    entries: Vec<(u64, Term)>,
    index: HashMap<Term, u64>,
    /// The first `frequent` entries came from frequency-based encoding.
    frequent: usize,
    /// IDs are exactly `0..len`.
    dense: bool,
}

impl Dictionary {
    /// Builds a dictionary from `(id, term)` pairs, rejecting duplicate
    /// terms or IDs. The `frequent` smallest IDs form the frequent part.
    pub fn from_entries(mut entries: Vec<(u64, Term)>, frequent: usize) -> Result<Self> {
        if frequent > entries.len() {
            return Err(Error::invalid("frequent part larger than the dictionary"));
        }
        entries.sort_by_key(|(id, _)| *id);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid(format!("duplicate ID {}", w[0].0)));
        }
        let mut index = HashMap::with_capacity(entries.len());
        for (id, term) in &entries {
            if index.insert(term.clone(), *id).is_some() {
                return Err(Error::invalid(format!("duplicate term {term}")));
            }
        }
        let dense = entries.last().is_none_or(|(id, _)| *id + 1 == entries.len() as u64);
        Ok(Dictionary {
            entries,
            index,
            frequent,
            dense,
        })
    }

    /// Dense dictionary: term `i` gets ID `i`.
    pub fn from_terms(terms: Vec<Term>, frequent: usize) -> Result<Self> {
        Self::from_entries(
            terms.into_iter().enumerate().map(|(i, t)| (i as u64, t)).collect(),
            frequent,
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn frequent_len(&self) -> usize {
        self.frequent
    }

    pub fn id_of(&self, term: &Term) -> Option<u64> {
        self.index.get(term).copied()
    }

    pub fn term_of(&self, id: u64) -> Option<&Term> {
        if self.dense {
            return self.entries.get(usize::try_from(id).ok()?).map(|(_, t)| t);
        }
        let i = self.entries.binary_search_by_key(&id, |(i, _)| *i).ok()?;
        Some(&self.entries[i].1)
    }

    /// All entries in ascending ID order.
    pub fn entries(&self) -> &[(u64, Term)] {
        &self.entries
    }

    pub fn frequent_entries(&self) -> &[(u64, Term)] {
        &self.entries[..self.frequent]
    }

    pub fn infrequent_entries(&self) -> &[(u64, Term)] {
        &self.entries[self.frequent..]
    }

    pub fn encode_triple(&self, t: &Triple) -> Result<EncodedTriple> {
        let id = |term: &Term| {
            self.id_of(term)
                .ok_or_else(|| Error::MissingTerm(term.to_string()))
        };
        Ok([id(t.subject())?, id(t.predicate())?, id(t.object())?])
    }

    pub fn decode_triple(&self, t: &EncodedTriple) -> Result<Triple> {
        let term = |id: u64| self.term_of(id).cloned().ok_or(Error::UnknownId(id));
        Triple::new(term(t[0])?, term(t[1])?, term(t[2])?)
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#frequent\t{}", self.frequent)?;
        for (id, term) in &self.entries {
            writeln!(out, "{id}\t{}\t{}", term.kind().name(), term.lexical())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        const WHAT: &str = "dictionary text file";
        let mut entries = Vec::new();
        let mut frequent = 0usize;
        let mut offset = 0u64;
        for line in input.split(b'\n') {
            let raw = line?;
            let at = offset;
            offset += raw.len() as u64 + 1;
            let line = std::str::from_utf8(&raw).map_err(|_| Error::format(WHAT, at, "not UTF-8"))?;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#frequent\t") {
                frequent = rest
                    .parse()
                    .map_err(|_| Error::format(WHAT, at, "bad #frequent header"))?;
                continue;
            }
            let mut fields = line.splitn(3, '\t');
            let (Some(id), Some(kind), Some(lexical)) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(Error::format(WHAT, at, "expected id, kind and lexical fields"));
            };
            let id: u64 = id.parse().map_err(|_| Error::format(WHAT, at, "bad ID"))?;
            let kind = TermKind::from_name(kind)
                .ok_or_else(|| Error::format(WHAT, at, format!("unknown kind {kind:?}")))?;
            let term = Term::new(kind, lexical).map_err(|_| Error::format(WHAT, at, "empty term"))?;
            entries.push((id, term));
        }
        Self::from_entries(entries, frequent)
    }

    pub fn write_binary<W: Write>(&self, out: W) -> Result<()> {
        let mut w = Writer::new(out);
        w.bytes(BIN_MAGIC)?;
        w.u64(self.entries.len() as u64)?;
        w.u64(self.frequent as u64)?;
        for (id, term) in &self.entries {
            w.u64(*id)?;
            w.term(term)?;
        }
        w.into_inner().flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(input: R) -> Result<Self> {
        let mut r = Reader::new(input, "dictionary binary file");
        r.magic(BIN_MAGIC)?;
        let count = r.u64()?;
        let frequent = r.u64()? as usize;
        let mut entries = Vec::with_capacity(count.min(1 << 24) as usize);
        for _ in 0..count {
            let id = r.u64()?;
            entries.push((id, r.term()?));
        }
        r.end()?;
        Self::from_entries(entries, frequent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dictionary {
        Dictionary::from_terms(
            vec![
                Term::iri("http://a"),
                Term::literal("\"tab\there\"@en"),
                Term::blank("_:b1"),
                Term::literal("\"5\"^^<http://www.w3.org/2001/XMLSchema#int>"),
            ],
            1,
        )
        .unwrap()
    }

    #[test]
    fn text_format_is_canonical() {
        let mut out = Vec::new();
        sample().write_text(&mut out).unwrap();
        let text = String::from_utf8(out.clone()).unwrap();
        assert!(text.starts_with("#frequent\t1\n0\tiri\thttp://a\n1\tliteral\t\"tab\there\"@en\n"));
        assert_eq!(Dictionary::read_text(&out[..]).unwrap(), sample());
    }

    #[test]
    fn binary_round_trip() {
        let mut out = Vec::new();
        sample().write_binary(&mut out).unwrap();
        assert_eq!(Dictionary::read_binary(&out[..]).unwrap(), sample());
        out.truncate(out.len() - 2);
        assert!(matches!(Dictionary::read_binary(&out[..]), Err(Error::Format { .. })));
    }

    #[test]
    fn bijection_enforced() {
        let a = Term::iri("a");
        assert!(Dictionary::from_entries(vec![(0, a.clone()), (1, a.clone())], 0).is_err());
        assert!(Dictionary::from_entries(vec![(0, a), (0, Term::iri("b"))], 0).is_err());
    }

    #[test]
    fn sparse_ids() {
        let d = Dictionary::from_entries(vec![(900, Term::iri("x")), (7, Term::iri("y"))], 0).unwrap();
        assert_eq!(d.term_of(7), Some(&Term::iri("y")));
        assert_eq!(d.term_of(900), Some(&Term::iri("x")));
        assert_eq!(d.term_of(8), None);
        assert_eq!(d.entries()[0].0, 7);
    }

    #[test]
    fn unknown_id_and_missing_term() {
        let d = sample();
        assert!(matches!(d.decode_triple(&[0, 0, 99]), Err(Error::UnknownId(99))));
        let t = Triple::new(Term::iri("http://a"), Term::iri("http://zz"), Term::iri("http://a")).unwrap();
        assert!(matches!(d.encode_triple(&t), Err(Error::MissingTerm(_))));
    }
}
