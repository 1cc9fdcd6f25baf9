//! Locality-based encoding of the infrequent terms.
//!
//! Each term is annotated with the classes it is an instance of, taken from
//! `rdf:type` statements and from the domain and range of the predicates it
//! appears with. Terms without a class get the taxonomy's sentinel. Every
//! term keeps its smallest class ID, and IDs are handed out in
//! (class ID, term) order, continuing after the frequent terms. Instances of
//! one class thus get a contiguous ID range, and classes that are close in
//! the taxonomy get nearby ranges.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fbe::FrequentDictionary;
use crate::ingest::{Term, Triple};
use crate::taxonomy::{vocab, ClassTaxonomy, SchemaIndex};

/// A term paired with a candidate class ID (or the sentinel).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Annotation {
    pub term: Term,
    pub class_id: u64,
}

impl Annotation {
    pub fn new(term: Term, class_id: u64) -> Self {
        Annotation { term, class_id }
    }
}

/// Calls `emit` for every annotation of one triple.
fn annotations_of<'a>(
    triple: &'a Triple,
    taxonomy: &ClassTaxonomy,
    schema: &SchemaIndex,
    mut emit: impl FnMut(&'a Term, u64),
) {
    let sentinel = taxonomy.max_sentinel();
    let (s, p, o) = (triple.subject(), triple.predicate(), triple.object());
    emit(s, sentinel);
    emit(p, sentinel);
    emit(o, sentinel);
    if p.is_iri_eq(vocab::RDF_TYPE) {
        emit(s, taxonomy.class_id(o));
    }
    for c in schema.domains(p) {
        emit(s, taxonomy.class_id(c));
    }
    for c in schema.ranges(p) {
        emit(o, taxonomy.class_id(c));
    }
}

/// All annotations, one or more per term occurrence.
pub fn annotate<'a>(
    triples: impl IntoIterator<Item = &'a Triple>,
    taxonomy: &ClassTaxonomy,
    schema: &SchemaIndex,
) -> Vec<Annotation> {
    let mut out = Vec::new();
    for t in triples {
        annotations_of(t, taxonomy, schema, |term, c| out.push(Annotation::new(term.clone(), c)));
    }
    out
}

/// Drops annotations of terms that already have a frequent ID.
pub fn filter_frequent(annotations: Vec<Annotation>, frequent: &FrequentDictionary) -> Vec<Annotation> {
    if frequent.is_empty() {
        return annotations;
    }
    annotations
        .into_iter()
        .filter(|a| !frequent.contains(&a.term))
        .collect()
}

/// One annotation per term, carrying its smallest class ID; sorted by term.
pub fn reduce_min_class(annotations: Vec<Annotation>) -> Vec<Annotation> {
    let mut best: HashMap<Term, u64> = HashMap::new();
    for a in annotations {
        best.entry(a.term)
            .and_modify(|c| *c = (*c).min(a.class_id))
            .or_insert(a.class_id);
    }
    let mut out: Vec<Annotation> = best.into_iter().map(|(t, c)| Annotation::new(t, c)).collect();
    out.sort_by(|a, b| a.term.cmp(&b.term));
    out
}

/// Infrequent terms with IDs `start..start + len`, in assignment order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InfrequentDictionary {
    start: u64,
    terms: Vec<Term>,
    classes: Vec<u64>,
}

impl InfrequentDictionary {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(id, term, class_id)` in ID order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &Term, u64)> {
        self.terms
            .iter()
            .zip(&self.classes)
            .enumerate()
            .map(move |(i, (t, c))| (self.start + i as u64, t, *c))
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }
}

/// Sorts by (class ID, term) and numbers from `start_id`.
pub fn assign_infrequent_ids(reduced: &[Annotation], start_id: u64) -> Result<InfrequentDictionary> {
    let mut sorted: Vec<&Annotation> = reduced.iter().collect();
    sorted.sort_by(|a, b| a.class_id.cmp(&b.class_id).then_with(|| a.term.cmp(&b.term)));
    let mut seen = std::collections::HashSet::with_capacity(sorted.len());
    if let Some(dup) = sorted.iter().find(|a| !seen.insert(&a.term)) {
        return Err(Error::invalid(format!(
            "term {} annotated more than once; reduce annotations first",
            dup.term
        )));
    }
    Ok(InfrequentDictionary {
        start: start_id,
        terms: sorted.iter().map(|a| a.term.clone()).collect(),
        classes: sorted.iter().map(|a| a.class_id).collect(),
    })
}

/// Smallest class ID per infrequent term, built incrementally.
///
/// Equivalent to [`annotate`], [`filter_frequent`] and [`reduce_min_class`]
/// in sequence without materializing the annotation multiset. Partial
/// results from different partitions combine with [`merge`](Self::merge).
pub(crate) struct MinClassMap<'a> {
    best: HashMap<&'a Term, u64>,
}

impl<'a> MinClassMap<'a> {
    pub fn new() -> Self {
        MinClassMap { best: HashMap::new() }
    }

    pub fn observe(
        &mut self,
        triple: &'a Triple,
        taxonomy: &ClassTaxonomy,
        schema: &SchemaIndex,
        frequent: &FrequentDictionary,
    ) {
        let best = &mut self.best;
        annotations_of(triple, taxonomy, schema, |term, c| {
            if frequent.contains(term) {
                return;
            }
            best.entry(term).and_modify(|cur| *cur = (*cur).min(c)).or_insert(c);
        });
    }

    pub fn merge(&mut self, other: MinClassMap<'a>) {
        if self.best.len() < other.best.len() {
            let mine = std::mem::replace(&mut self.best, other.best);
            return self.merge(MinClassMap { best: mine });
        }
        for (term, c) in other.best {
            self.best.entry(term).and_modify(|cur| *cur = (*cur).min(c)).or_insert(c);
        }
    }

    pub fn into_annotations(self) -> Vec<Annotation> {
        self.best
            .into_iter()
            .map(|(t, c)| Annotation::new(t.clone(), c))
            .collect()
    }
}
