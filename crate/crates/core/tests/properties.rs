use std::collections::{HashMap, HashSet};

use kge_core::analysis::{hash_based_encode, measure_compression, order_based_encode, syntactic_encode};
use kge_core::codec::{body_size, varint_len};
use kge_core::sketch::{FrequencyMethod, SketchConfig};
use kge_core::taxonomy::vocab;
use kge_core::{decode, encode, Dictionary, EncodeConfig, Term, Triple};
use proptest::prelude::*;

const NS: &str = "http://ex.org/";

fn entity(i: u16) -> Term {
    match i % 7 {
        5 => Term::blank(format!("_:b{i}")),
        _ => Term::iri(format!("{NS}e{i}")),
    }
}

fn object(i: u16) -> Term {
    match i % 5 {
        3 => Term::literal(format!("\"v{i}\"")),
        4 => Term::literal(format!("\"v{i}\"@en")),
        _ => entity(i),
    }
}

fn class(i: u8) -> Term {
    Term::iri(format!("{NS}C{i}"))
}

/// Small graphs with instance data, typing and a little schema.
fn graph() -> impl Strategy<Value = Vec<Triple>> {
    let data = prop::collection::vec((0u16..400, 0u8..6, 0u16..400), 0..300);
    let types = prop::collection::vec((0u16..400, 0u8..8), 0..40);
    let subclass = prop::collection::vec((0u8..8, 0u8..8), 0..8);
    let domains = prop::collection::vec((0u8..6, 0u8..8), 0..4);
    (data, types, subclass, domains).prop_map(|(data, types, subclass, domains)| {
        let pred = |p: u8| Term::iri(format!("{NS}p{p}"));
        let mut out = Vec::new();
        for (a, b) in subclass {
            out.push(Triple::new(class(a), Term::iri(vocab::RDFS_SUBCLASS_OF), class(b)).unwrap());
        }
        for (p, c) in domains {
            out.push(Triple::new(pred(p), Term::iri(vocab::RDFS_DOMAIN), class(c)).unwrap());
        }
        for (s, c) in types {
            out.push(Triple::new(entity(s), Term::iri(vocab::RDF_TYPE), class(c)).unwrap());
        }
        for (s, p, o) in data {
            out.push(Triple::new(entity(s), pred(p), object(o)).unwrap());
        }
        out
    })
}

fn config(k: usize, partitions: usize, workers: usize) -> EncodeConfig {
    EncodeConfig {
        sketch: SketchConfig {
            k,
            width: 512,
            ..SketchConfig::default()
        },
        workers,
        partitions,
        method: FrequencyMethod::Cmmg,
    }
}

fn distinct_terms(triples: &[Triple]) -> HashSet<Term> {
    triples
        .iter()
        .flat_map(|t| [t.subject().clone(), t.predicate().clone(), t.object().clone()])
        .collect()
}

fn exact(triples: &[Triple]) -> HashMap<Term, u64> {
    let mut counts = HashMap::new();
    for t in triples {
        for term in [t.subject(), t.predicate(), t.object()] {
            *counts.entry(term.clone()).or_insert(0) += 1;
        }
    }
    counts
}

fn assert_bijection(dict: &Dictionary, terms: &HashSet<Term>) {
    assert_eq!(dict.len(), terms.len());
    for term in terms {
        let id = dict.id_of(term).expect("every input term has an ID");
        assert_eq!(dict.term_of(id), Some(term));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dictionary_is_a_contiguous_bijection(triples in graph(), k in 1usize..20) {
        let encoded = encode(&triples, &config(k, 3, 1)).unwrap();
        let dict = &encoded.dictionary;
        assert_bijection(dict, &distinct_terms(&triples));
        let d1 = dict.frequent_len() as u64;
        prop_assert!(dict.frequent_entries().iter().map(|(id, _)| *id).eq(0..d1));
        prop_assert!(dict.infrequent_entries().iter().map(|(id, _)| *id).eq(d1..dict.len() as u64));
        let frequent: HashSet<&Term> = dict.frequent_entries().iter().map(|(_, t)| t).collect();
        prop_assert!(dict.infrequent_entries().iter().all(|(_, t)| !frequent.contains(t)));
    }

    #[test]
    fn encode_then_decode_is_identity(triples in graph(), k in 1usize..20) {
        let encoded = encode(&triples, &config(k, 2, 1)).unwrap();
        prop_assert_eq!(decode(&encoded.triples, &encoded.dictionary).unwrap(), triples);
    }

    #[test]
    fn output_depends_on_partitions_not_workers(triples in graph(), workers in 2usize..5) {
        let a = encode(&triples, &config(8, 4, 1)).unwrap();
        let b = encode(&triples, &config(8, 4, workers)).unwrap();
        prop_assert_eq!(a.dictionary.entries(), b.dictionary.entries());
        prop_assert_eq!(a.triples, b.triples);
    }

    #[test]
    fn exact_method_orders_frequent_ids_by_count(triples in graph(), k in 1usize..20) {
        let cfg = EncodeConfig { method: FrequencyMethod::Exact, ..config(k, 1, 1) };
        let encoded = encode(&triples, &cfg).unwrap();
        let counts = exact(&triples);
        let d1: Vec<u64> = encoded.dictionary.frequent_entries().iter().map(|(_, t)| counts[t]).collect();
        prop_assert!(d1.windows(2).all(|w| w[0] >= w[1]));
        if let Some(&least) = d1.last() {
            prop_assert!(encoded.dictionary.infrequent_entries().iter().all(|(_, t)| counts[t] <= least));
        }
    }

    #[test]
    fn baselines_are_bijections(triples in graph(), seed in any::<u64>()) {
        let terms = distinct_terms(&triples);
        assert_bijection(&order_based_encode(&triples).unwrap(), &terms);
        assert_bijection(&hash_based_encode(&triples, seed).unwrap().dictionary, &terms);
        let syntactic = syntactic_encode(&triples).unwrap();
        assert_bijection(&syntactic, &terms);
        prop_assert!(syntactic.entries().windows(2).all(|w| w[0].1 < w[1].1));
    }

    #[test]
    fn frequency_order_never_loses_to_baselines(triples in graph(), seed in any::<u64>()) {
        let counts = exact(&triples);
        let mut ranked: Vec<Term> = counts.keys().cloned().collect();
        ranked.sort_by(|a, b| counts[b].cmp(&counts[a]).then_with(|| a.cmp(b)));
        let best = measure_compression(&triples, &Dictionary::from_terms(ranked, 0).unwrap()).unwrap();
        for other in [
            order_based_encode(&triples).unwrap(),
            hash_based_encode(&triples, seed).unwrap().dictionary,
            syntactic_encode(&triples).unwrap(),
        ] {
            prop_assert!(best <= measure_compression(&triples, &other).unwrap());
        }
    }

    #[test]
    fn varint_length_is_monotone(a in any::<u64>(), b in any::<u64>()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(varint_len(lo) <= varint_len(hi));
    }

    #[test]
    fn body_size_matches_measured_bytes(triples in graph()) {
        let encoded = encode(&triples, &config(5, 1, 1)).unwrap();
        let measured = measure_compression(&triples, &encoded.dictionary).unwrap();
        prop_assert_eq!(body_size(&encoded.triples), measured);
    }
}
