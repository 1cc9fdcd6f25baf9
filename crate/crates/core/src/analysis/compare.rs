//! Side-by-side comparison of the pipeline's encoding with the baselines.

use std::collections::{HashMap, HashSet};
use std::io::Write;

use serde::Serialize;

use super::baselines::{hash_based_encode, order_based_encode, syntactic_encode};
use super::metrics::{encode_all, measure_join_locality};
use super::space::{s_fix, BlockModel, FrequencyTable};
use crate::codec::body_size;
use crate::dictionary::Dictionary;
use crate::error::Result;
use crate::ingest::{term_occurrences, Term, Triple};
use crate::pipeline::{encode, EncodeConfig};
use crate::sketch::exact_counts;
use crate::taxonomy::vocab;

/// One line of the comparison report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub encoder: String,
    pub dict_entries: usize,
    pub encoded_bytes: u64,
    pub s_fix_bits: u64,
    pub s_kog_bits: u64,
    pub locality_ratio: f64,
}

/// Block-model bits when terms are ranked by their ID in `dictionary`
/// instead of by frequency. For a frequency-ordered dictionary this equals
/// the frequency-ranked model.
pub fn s_kog_by_id(dictionary: &Dictionary, counts: &HashMap<Term, u64>) -> u64 {
    let model = BlockModel::new(dictionary.len() as u64);
    if model.is_degenerate() {
        return 0;
    }
    let selector = u64::from(model.selector_bits());
    dictionary
        .entries()
        .iter()
        .enumerate()
        .map(|(rank, (_, term))| {
            let block = u64::from(BlockModel::block_of_rank(rank as u64 + 1));
            (block + selector) * counts.get(term).copied().unwrap_or(0)
        })
        .sum()
}

/// The pair of ordinary predicates sharing the most subjects, ties broken
/// lexically. Schema predicates are skipped.
pub fn default_join_pair(triples: &[Triple]) -> Option<(Term, Term)> {
    let schema = [vocab::RDF_TYPE, vocab::RDFS_SUBCLASS_OF, vocab::RDFS_DOMAIN, vocab::RDFS_RANGE];
    let mut subjects: HashMap<&Term, HashSet<&Term>> = HashMap::new();
    for t in triples {
        if !schema.iter().any(|s| t.predicate().is_iri_eq(s)) {
            subjects.entry(t.predicate()).or_default().insert(t.subject());
        }
    }
    let mut preds: Vec<&Term> = subjects.keys().copied().collect();
    preds.sort();
    let mut best: Option<(usize, (&Term, &Term))> = None;
    for (i, a) in preds.iter().enumerate() {
        for b in &preds[i + 1..] {
            let shared = subjects[a].intersection(&subjects[b]).count();
            if shared > 0 && best.is_none_or(|(n, _)| shared > n) {
                best = Some((shared, (a, b)));
            }
        }
    }
    best.map(|(_, (a, b))| (a.clone(), b.clone()))
}

/// Runs every encoder over `triples`.
///
/// Rows come in the order kognac, order, hash, syntactic. `join` selects
/// the predicate pair for the locality column; without it
/// [`default_join_pair`] is used, and the column is 0 if no pair exists.
pub fn compare_encoders(
    triples: &[Triple],
    config: &EncodeConfig,
    hash_seed: u64,
    join: Option<(Term, Term)>,
) -> Result<Vec<CompareRow>> {
    let counts = exact_counts(triples.iter().flat_map(term_occurrences));
    let fix = s_fix(&FrequencyTable::from_counts(counts.values().copied()));
    let join = join.or_else(|| default_join_pair(triples));

    let encoders: Vec<(&str, Dictionary)> = vec![
        ("kognac", encode(triples, config)?.dictionary),
        ("order", order_based_encode(triples)?),
        ("hash", hash_based_encode(triples, hash_seed)?.dictionary),
        ("syntactic", syntactic_encode(triples)?),
    ];
    let mut rows = Vec::with_capacity(encoders.len());
    for (name, dictionary) in encoders {
        let encoded = encode_all(triples, &dictionary)?;
        let locality = match &join {
            Some((p1, p2)) => measure_join_locality(&encoded, &dictionary, p1, p2)?,
            None => 0.0,
        };
        rows.push(CompareRow {
            encoder: name.to_string(),
            dict_entries: dictionary.len(),
            encoded_bytes: body_size(&encoded),
            s_fix_bits: fix,
            s_kog_bits: s_kog_by_id(&dictionary, &counts),
            locality_ratio: locality,
        });
    }
    Ok(rows)
}

/// Writes the rows as CSV with a header line.
pub fn write_compare_csv<W: Write>(rows: &[CompareRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> crate::error::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => crate::error::Error::Internal(format!("CSV serialization failed: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::SketchConfig;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s), Term::iri(p), Term::iri(o)).unwrap()
    }

    #[test]
    fn four_rows_and_header() {
        let mut triples = Vec::new();
        for i in 0..30 {
            triples.push(t(&format!("e{i}"), "p", "hub"));
            if i % 3 == 0 {
                triples.push(t(&format!("e{i}"), "q", "other"));
            }
        }
        let cfg = EncodeConfig {
            sketch: SketchConfig {
                k: 3,
                width: 1 << 10,
                ..SketchConfig::default()
            },
            ..EncodeConfig::default()
        };
        let rows = compare_encoders(&triples, &cfg, 1, None).unwrap();
        let names: Vec<&str> = rows.iter().map(|r| r.encoder.as_str()).collect();
        assert_eq!(names, vec!["kognac", "order", "hash", "syntactic"]);
        for r in &rows {
            assert_eq!(r.dict_entries, 34);
            assert!((0.0..=1.0).contains(&r.locality_ratio));
        }
        assert!(rows[0].encoded_bytes <= rows[2].encoded_bytes);
        let mut out = Vec::new();
        write_compare_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("encoder,dict_entries,encoded_bytes,s_fix_bits,s_kog_bits,locality_ratio\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn join_pair_choice() {
        let triples = vec![
            t("a", "p", "x"),
            t("b", "p", "x"),
            t("a", "q", "x"),
            t("b", "q", "x"),
            t("a", "r", "x"),
            t("a", vocab::RDF_TYPE, "C"),
        ];
        assert_eq!(default_join_pair(&triples), Some((Term::iri("p"), Term::iri("q"))));
        assert_eq!(default_join_pair(&triples[..2]), None);
    }

    #[test]
    fn frequency_order_matches_block_model() {
        let counts: HashMap<Term, u64> = [("a", 8u64), ("b", 4), ("c", 2), ("d", 1)]
            .into_iter()
            .map(|(t, c)| (Term::iri(t), c))
            .collect();
        let d = Dictionary::from_terms(["a", "b", "c", "d"].map(Term::iri).to_vec(), 0).unwrap();
        assert_eq!(s_kog_by_id(&d, &counts), 33);
        let rev = Dictionary::from_terms(["d", "c", "b", "a"].map(Term::iri).to_vec(), 0).unwrap();
        assert!(s_kog_by_id(&rev, &counts) > 33);
    }
}
