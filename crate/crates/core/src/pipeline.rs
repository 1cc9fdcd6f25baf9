//! End-to-end encoding.
//!
//! Pass 1 counts term occurrences (CM+MG by default) and collects schema
//! statements, in parallel over partitions. The frequent dictionary and the
//! class taxonomy are built from the merged results. Pass 2 computes each
//! infrequent term's smallest class, again in parallel, before IDs are
//! assigned sequentially. A final parallel pass rewrites the triples.

use std::time::Instant;

use serde::Serialize;

use crate::codec::EncodedTriple;
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::fbe::{build_frequent_dictionary, FrequentDictionary};
use crate::ingest::{partition_iter, term_occurrences, Triple};
use crate::lbe::{assign_infrequent_ids, MinClassMap};
use crate::parallel::run_partitions;
use crate::sketch::{frequent_terms, FrequencyMethod, HybridSketchState, MergedSketch, SketchConfig};
use crate::taxonomy::{ClassTaxonomy, SchemaIndex};

#[derive(Clone, Debug, PartialEq)]
pub struct EncodeConfig {
    pub sketch: SketchConfig,
    /// Worker threads.
    pub workers: usize,
    /// Input partitions. Results depend on this, never on `workers`.
    pub partitions: usize,
    pub method: FrequencyMethod,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        EncodeConfig {
            sketch: SketchConfig::default(),
            workers: 1,
            partitions: 1,
            method: FrequencyMethod::Cmmg,
        }
    }
}

impl EncodeConfig {
    pub fn validate(&self) -> Result<()> {
        self.sketch.validate()?;
        if self.workers == 0 || self.partitions == 0 {
            return Err(Error::invalid("workers and partitions must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EncodeStats {
    pub triples: usize,
    pub frequent_terms: usize,
    pub infrequent_terms: usize,
    pub classes: usize,
    pub ignored_non_iri_classes: u64,
    pub workers: usize,
    pub partitions: usize,
    pub frequency_method: String,
    pub pass1_ms: f64,
    pub pass2_ms: f64,
    pub rewrite_ms: f64,
}

#[derive(Clone, Debug)]
pub struct Encoded {
    pub dictionary: Dictionary,
    pub triples: Vec<EncodedTriple>,
    pub taxonomy: ClassTaxonomy,
    pub stats: EncodeStats,
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn merge_schemas(parts: Vec<SchemaIndex>) -> SchemaIndex {
    let mut schema = SchemaIndex::new();
    for part in parts {
        schema.merge(part);
    }
    schema
}

/// Pass 1 with CM+MG counting fused into the schema scan.
fn count_and_collect(triples: &[Triple], config: &EncodeConfig) -> Result<(MergedSketch, SchemaIndex)> {
    let p = config.partitions;
    let proto = config.sketch.new_count_min()?;
    let (count_mins, per_partition) = run_partitions(
        p,
        config.workers,
        || (proto.clone(), Vec::new()),
        |(cm, scratch), part| {
            let mut mg = config.sketch.new_summary();
            let mut schema = SchemaIndex::new();
            for t in partition_iter(triples, part, p) {
                schema.observe(t);
                for term in term_occurrences(t) {
                    cm.add_with(term, 1, scratch);
                    mg.update(term);
                }
            }
            (mg, schema)
        },
    );
    let (summaries, schemas): (Vec<_>, Vec<_>) = per_partition.into_iter().unzip();
    let merged = HybridSketchState::new(
        config.sketch.k,
        count_mins.into_iter().map(|(cm, _)| cm).collect(),
        summaries,
    )
    .merge()?;
    Ok((merged, merge_schemas(schemas)))
}

fn collect_schema_parallel(triples: &[Triple], config: &EncodeConfig) -> SchemaIndex {
    let p = config.partitions;
    let (_, schemas) = run_partitions(p, config.workers, || (), |_, part| {
        let mut schema = SchemaIndex::new();
        for t in partition_iter(triples, part, p) {
            schema.observe(t);
        }
        schema
    });
    merge_schemas(schemas)
}

/// Encodes `triples` with frequency-based IDs for the frequent terms and
/// locality-based IDs for the rest.
pub fn encode(triples: &[Triple], config: &EncodeConfig) -> Result<Encoded> {
    config.validate()?;
    let started = Instant::now();
    let (frequent, schema) = if config.sketch.k == 0 {
        (FrequentDictionary::default(), collect_schema_parallel(triples, config))
    } else if config.method == FrequencyMethod::Cmmg {
        let (sketch, schema) = count_and_collect(triples, config)?;
        (build_frequent_dictionary(&sketch.top_k()?, config.sketch.k)?, schema)
    } else {
        let schema = collect_schema_parallel(triples, config);
        let estimates = frequent_terms(
            triples,
            config.method,
            &config.sketch,
            config.partitions,
            config.workers,
        )?;
        (build_frequent_dictionary(&estimates, config.sketch.k)?, schema)
    };
    let pass1_ms = elapsed_ms(started);
    finish(triples, config, frequent, schema, pass1_ms)
}

/// Like [`encode`], but the frequent terms come from a previously saved
/// CM+MG sketch; pass 1 only collects the schema.
pub fn encode_with_sketch(
    triples: &[Triple],
    config: &EncodeConfig,
    sketch: &MergedSketch,
) -> Result<Encoded> {
    config.validate()?;
    let started = Instant::now();
    let frequent = build_frequent_dictionary(&sketch.top_k()?, sketch.k)?;
    let schema = collect_schema_parallel(triples, config);
    let pass1_ms = elapsed_ms(started);
    finish(triples, config, frequent, schema, pass1_ms)
}

fn finish(
    triples: &[Triple],
    config: &EncodeConfig,
    frequent: FrequentDictionary,
    schema: SchemaIndex,
    pass1_ms: f64,
) -> Result<Encoded> {
    let started = Instant::now();
    let taxonomy = ClassTaxonomy::from_schema(&schema);
    let p = config.partitions;
    let (_, maps) = run_partitions(p, config.workers, || (), |_, part| {
        let mut map = MinClassMap::new();
        for t in partition_iter(triples, part, p) {
            map.observe(t, &taxonomy, &schema, &frequent);
        }
        map
    });
    let mut maps = maps.into_iter();
    let mut merged = maps.next().unwrap_or_else(MinClassMap::new);
    for m in maps {
        merged.merge(m);
    }
    let infrequent = assign_infrequent_ids(&merged.into_annotations(), frequent.next_id())?;
    let stats_frequent = frequent.len();
    let stats_infrequent = infrequent.len();
    let mut terms: Vec<_> = frequent.entries().iter().map(|e| e.term.clone()).collect();
    terms.extend(infrequent.into_terms());
    let dictionary = Dictionary::from_terms(terms, stats_frequent)
        .map_err(|e| Error::Internal(format!("frequent and infrequent parts overlap: {e}")))?;
    let pass2_ms = elapsed_ms(started);

    let started = Instant::now();
    let encoded = rewrite(triples, &dictionary, config)?;
    let rewrite_ms = elapsed_ms(started);

    let stats = EncodeStats {
        triples: triples.len(),
        frequent_terms: stats_frequent,
        infrequent_terms: stats_infrequent,
        classes: taxonomy.len(),
        ignored_non_iri_classes: schema.ignored_non_iri(),
        workers: config.workers,
        partitions: config.partitions,
        frequency_method: config.method.name().to_string(),
        pass1_ms,
        pass2_ms,
        rewrite_ms,
    };
    log::info!(
        "pass 1 {pass1_ms:.1} ms, pass 2 {pass2_ms:.1} ms, rewrite {rewrite_ms:.1} ms; {} frequent, {} infrequent",
        stats_frequent,
        stats_infrequent
    );
    log::debug!("{} classes in the taxonomy", taxonomy.len());
    Ok(Encoded {
        dictionary,
        triples: encoded,
        taxonomy,
        stats,
    })
}

/// Rewrites triples as ID triples, contiguous chunks in parallel.
fn rewrite(triples: &[Triple], dictionary: &Dictionary, config: &EncodeConfig) -> Result<Vec<EncodedTriple>> {
    let chunks = config.workers.max(1);
    let bounds = |c: usize| c * triples.len() / chunks;
    let (_, parts) = run_partitions(chunks, config.workers, || (), |_, c| {
        triples[bounds(c)..bounds(c + 1)]
            .iter()
            .map(|t| dictionary.encode_triple(t))
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(triples.len());
    for part in parts {
        match part {
            Ok(p) => out.extend(p),
            Err(Error::MissingTerm(t)) => {
                return Err(Error::Internal(format!("term {t} has no ID after encoding")))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Maps ID triples back to terms.
pub fn decode(encoded: &[EncodedTriple], dictionary: &Dictionary) -> Result<Vec<Triple>> {
    encoded.iter().map(|t| dictionary.decode_triple(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Term;
    use crate::taxonomy::vocab;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s), Term::iri(p), Term::iri(o)).unwrap()
    }

    fn small_config(k: usize) -> EncodeConfig {
        EncodeConfig {
            sketch: SketchConfig {
                k,
                width: 1 << 12,
                ..SketchConfig::default()
            },
            ..EncodeConfig::default()
        }
    }

    #[test]
    fn empty_graph() {
        let out = encode(&[], &small_config(50)).unwrap();
        assert!(out.dictionary.is_empty());
        assert!(out.triples.is_empty());
    }

    #[test]
    fn schemaless_graph_is_lexical() {
        let triples = vec![t("c", "p", "a"), t("b", "q", "c")];
        let out = encode(&triples, &small_config(0)).unwrap();
        let order: Vec<&str> = out.dictionary.entries().iter().map(|(_, t)| t.lexical()).collect();
        assert_eq!(order, vec!["a", "b", "c", "p", "q"]);
    }

    #[test]
    fn round_trip_and_partition_independence() {
        let mut triples = Vec::new();
        for i in 0..200 {
            triples.push(t(&format!("e{i}"), vocab::RDF_TYPE, &format!("C{}", i % 4)));
            triples.push(t(&format!("e{i}"), "knows", &format!("e{}", (i * 7) % 200)));
        }
        let base = encode(&triples, &small_config(5)).unwrap();
        assert_eq!(decode(&base.triples, &base.dictionary).unwrap(), triples);
        for method in [FrequencyMethod::Exact, FrequencyMethod::CountMin, FrequencyMethod::MisraGries] {
            let cfg = EncodeConfig {
                method,
                ..small_config(5)
            };
            let out = encode(&triples, &cfg).unwrap();
            assert_eq!(decode(&out.triples, &out.dictionary).unwrap(), triples);
        }
        for workers in [2, 3] {
            let cfg = EncodeConfig {
                workers,
                partitions: 4,
                ..small_config(5)
            };
            let reference = encode(&triples, &EncodeConfig { workers: 1, ..cfg.clone() }).unwrap();
            let out = encode(&triples, &cfg).unwrap();
            assert_eq!(out.dictionary, reference.dictionary);
            assert_eq!(out.triples, reference.triples);
        }
    }

    #[test]
    fn saved_sketch_gives_same_dictionary() {
        let triples: Vec<Triple> = (0..100)
            .map(|i| t(&format!("s{}", i % 10), "p", &format!("o{}", i % 3)))
            .collect();
        let cfg = small_config(4);
        let direct = encode(&triples, &cfg).unwrap();
        let (sketch, _) = count_and_collect(&triples, &cfg).unwrap();
        let via = encode_with_sketch(&triples, &cfg, &sketch).unwrap();
        assert_eq!(via.dictionary, direct.dictionary);
    }
}
