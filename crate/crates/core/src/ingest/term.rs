use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The syntactic category of an RDF term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Iri,
    Literal,
    BlankNode,
}

impl TermKind {
    /// Stable one-byte tag used by hashing and the binary file formats.
    pub fn tag(self) -> u8 {
        match self {
            TermKind::Iri => 0,
            TermKind::Literal => 1,
            TermKind::BlankNode => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(TermKind::Iri),
            1 => Some(TermKind::Literal),
            2 => Some(TermKind::BlankNode),
            _ => None,
        }
    }

    /// Name used in the text dictionary format.
    pub fn name(self) -> &'static str {
        match self {
            TermKind::Iri => "iri",
            TermKind::Literal => "literal",
            TermKind::BlankNode => "bnode",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "iri" => Some(TermKind::Iri),
            "literal" => Some(TermKind::Literal),
            "bnode" => Some(TermKind::BlankNode),
            _ => None,
        }
    }
}

/// An RDF term, kept in its exact lexical form.
///
/// IRIs are stored without the enclosing angle brackets, literals with their
/// quotes and any language tag or datatype suffix, and blank nodes with their
/// `_:` prefix. The lexical string is shared, so cloning a term is cheap.
///
/// Terms order by lexical bytes first and kind second; this is the "lexical
/// order" used for every tie-break in the encoder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    kind: TermKind,
    lexical: Arc<str>,
}

impl Term {
    pub fn new(kind: TermKind, lexical: impl Into<Arc<str>>) -> Result<Self> {
        let lexical = lexical.into();
        if lexical.is_empty() {
            return Err(Error::invalid("term lexical form must be non-empty"));
        }
        Ok(Term { kind, lexical })
    }

    /// Panics if `iri` is empty.
    pub fn iri(iri: impl Into<Arc<str>>) -> Self {
        Self::new(TermKind::Iri, iri).expect("empty IRI")
    }

    /// `lexical` is the full literal form, e.g. `"chat"@fr`. Panics if empty.
    pub fn literal(lexical: impl Into<Arc<str>>) -> Self {
        Self::new(TermKind::Literal, lexical).expect("empty literal")
    }

    /// `label` includes the `_:` prefix. Panics if empty.
    pub fn blank(label: impl Into<Arc<str>>) -> Self {
        Self::new(TermKind::BlankNode, label).expect("empty blank node label")
    }

    pub(crate) fn from_shared(kind: TermKind, lexical: Arc<str>) -> Self {
        debug_assert!(!lexical.is_empty());
        Term { kind, lexical }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }

    pub fn is_iri_eq(&self, iri: &str) -> bool {
        self.kind == TermKind::Iri && &*self.lexical == iri
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lexical
            .as_bytes()
            .cmp(other.lexical.as_bytes())
            .then(self.kind.cmp(&other.kind))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Writes the N-Triples form of the term.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => write!(f, "<{}>", self.lexical),
            TermKind::Literal | TermKind::BlankNode => f.write_str(&self.lexical),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    /// Rejects literal subjects and non-IRI predicates.
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self> {
        if subject.kind == TermKind::Literal {
            return Err(Error::invalid(format!("literal in subject position: {subject}")));
        }
        if predicate.kind != TermKind::Iri {
            return Err(Error::invalid(format!("predicate is not an IRI: {predicate}")));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_terms(self) -> [Term; 3] {
        [self.subject, self.predicate, self.object]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// The three term occurrences of a triple, in subject, predicate, object
/// order. A term repeated inside the triple is counted once per position.
pub fn term_occurrences(triple: &Triple) -> [&Term; 3] {
    [&triple.subject, &triple.predicate, &triple.object]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_lexical_is_rejected() {
        assert!(Term::new(TermKind::Iri, "").is_err());
    }

    #[test]
    fn equality_needs_kind_and_lexical() {
        let a = Term::iri("x");
        assert_eq!(a, Term::iri("x"));
        assert_ne!(a, Term::blank("x"));
        assert!(Term::iri("a") < Term::iri("b"));
        assert!(Term::iri("x") < Term::literal("x"));
    }

    #[test]
    fn triple_position_rules() {
        let lit = Term::literal("\"x\"");
        let p = Term::iri("http://p");
        assert!(Triple::new(lit.clone(), p.clone(), lit.clone()).is_err());
        assert!(Triple::new(Term::blank("_:b"), Term::blank("_:p"), lit.clone()).is_err());
        assert!(Triple::new(Term::blank("_:b"), p, lit).is_ok());
    }

    #[test]
    fn occurrences_keep_repeats() {
        let a = Term::iri("a");
        let p = Term::iri("p");
        let t = Triple::new(a.clone(), p.clone(), a.clone()).unwrap();
        assert_eq!(term_occurrences(&t), [&a, &p, &a]);
        let b = Term::iri("b");
        let t = Triple::new(a.clone(), p.clone(), b.clone()).unwrap();
        assert_eq!(term_occurrences(&t), [&a, &p, &b]);
    }

    #[test]
    fn display_is_ntriples() {
        let t = Triple::new(
            Term::iri("http://a"),
            Term::iri("http://p"),
            Term::literal("\"x\"@en"),
        )
        .unwrap();
        assert_eq!(t.to_string(), "<http://a> <http://p> \"x\"@en .");
    }
}
