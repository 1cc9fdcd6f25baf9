//! Alternative ways of finding frequent terms, for comparison with CM+MG.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hybrid::{count_hybrid, sort_estimates, FrequencyEstimate, SketchConfig};
use super::misra_gries::MisraGries;
use crate::error::{Error, Result};
use crate::ingest::{partition_iter, term_occurrences, Term, Triple};
use crate::parallel::run_partitions;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrequencyMethod {
    /// Misra-Gries candidates, Count-Min estimates and threshold.
    Cmmg,
    /// Count-Min only, with a second scan over all distinct terms.
    CountMin,
    /// Misra-Gries counts only.
    MisraGries,
    /// Uniform triple sampling at the given rate, scaled by `1 / rate`.
    Sample { rate: f64 },
    /// Exact hash-table counting.
    Exact,
}

impl FrequencyMethod {
    pub fn name(&self) -> &'static str {
        match self {
            FrequencyMethod::Cmmg => "cmmg",
            FrequencyMethod::CountMin => "countmin",
            FrequencyMethod::MisraGries => "misragries",
            FrequencyMethod::Sample { .. } => "sample",
            FrequencyMethod::Exact => "exact",
        }
    }
}

/// Exact occurrence counts.
pub fn exact_counts<'a>(occurrences: impl IntoIterator<Item = &'a Term>) -> HashMap<Term, u64> {
    let mut counts: HashMap<Term, u64> = HashMap::new();
    for term in occurrences {
        match counts.get_mut(term) {
            Some(c) => *c += 1,
            None => {
                counts.insert(term.clone(), 1);
            }
        }
    }
    counts
}

fn triple_terms(triples: &[Triple]) -> impl Iterator<Item = &Term> {
    triples.iter().flat_map(term_occurrences)
}

/// Estimates from a seeded Bernoulli sample of triples: each triple is kept
/// with probability `rate`, and sampled counts are scaled by `1 / rate`.
pub fn sample_frequencies(triples: &[Triple], rate: f64, seed: u64) -> Result<Vec<FrequencyEstimate>> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid(format!("sampling rate {rate} must lie in (0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: HashMap<&Term, u64> = HashMap::new();
    for triple in triples {
        if rate < 1.0 && !rng.gen_bool(rate) {
            continue;
        }
        for term in term_occurrences(triple) {
            *counts.entry(term).or_default() += 1;
        }
    }
    let mut out: Vec<FrequencyEstimate> = counts
        .into_iter()
        .map(|(term, c)| FrequencyEstimate::new(term.clone(), (c as f64 / rate).round() as u64))
        .collect();
    sort_estimates(&mut out);
    Ok(out)
}

/// Frequent-term candidates for the dictionary under `method`.
///
/// CM+MG returns every term above its threshold; the other methods return
/// their `k` best terms. Either way the result is sorted by estimate
/// descending, then term ascending.
pub fn frequent_terms(
    triples: &[Triple],
    method: FrequencyMethod,
    config: &SketchConfig,
    partitions: usize,
    workers: usize,
) -> Result<Vec<FrequencyEstimate>> {
    config.validate()?;
    if partitions == 0 {
        return Err(Error::invalid("partition count must be at least 1"));
    }
    let source = |p: usize| partition_iter(triples, p, partitions).flat_map(term_occurrences);
    let mut out = match method {
        FrequencyMethod::Cmmg => {
            return count_hybrid(config, partitions, workers, source)?.top_k();
        }
        FrequencyMethod::CountMin => {
            let sketch = count_hybrid(config, partitions, workers, source)?.count_min;
            let distinct: HashSet<&Term> = triple_terms(triples).collect();
            distinct
                .into_iter()
                .map(|t| FrequencyEstimate::new(t.clone(), sketch.estimate(t)))
                .collect()
        }
        FrequencyMethod::MisraGries => {
            let (_, summaries) = run_partitions(partitions, workers, || (), |_, p| {
                let mut mg = config.new_summary();
                for term in source(p) {
                    mg.update(term);
                }
                mg
            });
            MisraGries::merge(&summaries)?
                .entries()
                .into_iter()
                .map(|(term, c)| FrequencyEstimate::new(term, c))
                .collect()
        }
        FrequencyMethod::Sample { rate } => sample_frequencies(triples, rate, config.seed)?,
        FrequencyMethod::Exact => exact_counts(triple_terms(triples))
            .into_iter()
            .map(|(term, c)| FrequencyEstimate::new(term, c))
            .collect(),
    };
    sort_estimates(&mut out);
    out.truncate(config.k);
    Ok(out)
}
