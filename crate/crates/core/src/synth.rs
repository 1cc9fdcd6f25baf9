//! Seeded synthetic knowledge graphs and term streams with skewed
//! frequencies.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::analysis::{zipf_frequencies, ZipfLaw};
use crate::error::{Error, Result};
use crate::ingest::{Term, Triple};
use crate::taxonomy::vocab;

const NS: &str = "http://example.org/gen/";
const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

/// Draws 0-based ranks from a truncated Zipf law.
#[derive(Clone, Debug)]
pub struct RankSampler {
    law: ZipfLaw,
    n: usize,
    s: f64,
    power: Option<rand_distr::Zipf<f64>>,
}

impl RankSampler {
    pub fn new(law: ZipfLaw, s: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("Zipf law needs at least one rank"));
        }
        let power = match law {
            ZipfLaw::Geometric if s <= 1.0 => {
                return Err(Error::invalid("geometric law needs skew > 1"));
            }
            ZipfLaw::Geometric => None,
            ZipfLaw::PowerLaw => Some(
                rand_distr::Zipf::new(n as u64, s)
                    .map_err(|e| Error::invalid(format!("bad Zipf parameters: {e}")))?,
            ),
        };
        Ok(RankSampler { law, n, s, power })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        match (&self.law, &self.power) {
            (ZipfLaw::PowerLaw, Some(z)) => (z.sample(rng) as usize - 1).min(self.n - 1),
            _ => {
                // Inverse CDF of P(k) proportional to q^k on 0..n.
                let q = 1.0 / self.s;
                let u: f64 = rng.gen();
                let mass = 1.0 - q.powi(self.n.min(i32::MAX as usize) as i32);
                let k = ((1.0 - u * mass).ln() / q.ln()).floor();
                (k.max(0.0) as usize).min(self.n - 1)
            }
        }
    }
}

/// A stream of `occurrences` IRIs over `distinct` ranks. The term of rank
/// `r` is shuffled so that frequency is unrelated to lexical order.
pub fn zipf_stream(law: ZipfLaw, s: f64, distinct: usize, occurrences: usize, seed: u64) -> Result<Vec<Term>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = RankSampler::new(law, s, distinct)?;
    let mut names: Vec<usize> = (0..distinct).collect();
    names.shuffle(&mut rng);
    let pool: Vec<Term> = names.iter().map(|i| Term::iri(format!("{NS}t{i}"))).collect();
    Ok((0..occurrences).map(|_| pool[sampler.sample(&mut rng)].clone()).collect())
}

/// A stream with exact per-rank quotas (see [`quota_sequence`]): every one
/// of the `distinct` terms occurs at least once when `occurrences` allows.
pub fn quota_stream(law: ZipfLaw, s: f64, distinct: usize, occurrences: usize, seed: u64) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names: Vec<usize> = (0..distinct).collect();
    names.shuffle(&mut rng);
    let pool: Vec<Term> = names.iter().map(|i| Term::iri(format!("{NS}t{i}"))).collect();
    quota_sequence(law, s, distinct, occurrences, &mut rng)
        .into_iter()
        .map(|r| pool[r].clone())
        .collect()
}

/// Uniformly distributed stream, for comparison.
pub fn uniform_stream(distinct: usize, occurrences: usize, seed: u64) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<Term> = (0..distinct).map(|i| Term::iri(format!("{NS}t{i}"))).collect();
    (0..occurrences).map(|_| pool[rng.gen_range(0..distinct)].clone()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    /// Size of the term pool for subjects and objects.
    pub distinct: usize,
    pub skew: f64,
    /// Target number of term occurrences (three per triple).
    pub occurrences: u64,
    pub classes: usize,
    /// Levels of the class hierarchy.
    pub depth: usize,
    pub predicates: usize,
    pub law: ZipfLaw,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            distinct: 10_000,
            skew: 2.0,
            occurrences: 300_000,
            classes: 20,
            depth: 3,
            predicates: 10,
            law: ZipfLaw::Geometric,
            seed: 1,
        }
    }
}

fn class_term(i: usize) -> Term {
    Term::iri(format!("{NS}Class{i}"))
}

/// Pool entries cycle through IRIs, blank nodes and literals.
fn pool_term(i: usize) -> Term {
    match i % 10 {
        7 => Term::literal(format!("\"label {i}\"@en")),
        8 => Term::literal(format!("\"{i}\"^^<{XSD_INTEGER}>")),
        9 => Term::blank(format!("_:b{i}")),
        _ => Term::iri(format!("{NS}e{i}")),
    }
}

fn triple(s: Term, p: Term, o: Term) -> Triple {
    Triple::new(s, p, o).expect("generated triples are well formed")
}

/// A sequence of length `len` over ranks `0..min(n, len)`: every rank
/// occurs once, and the remaining `len - n` positions are split between
/// ranks by the law's weights. Rounding slack goes to rank 0. The order is
/// shuffled.
pub fn quota_sequence<R: Rng>(law: ZipfLaw, s: f64, n: usize, len: usize, rng: &mut R) -> Vec<usize> {
    let n = n.min(len);
    if n == 0 {
        return Vec::new();
    }
    let extra = (len - n) as f64;
    let mut counts: Vec<usize> = zipf_frequencies(law, s, n, extra)
        .into_iter()
        .map(|f| 1 + f.round() as usize)
        .collect();
    let sum: usize = counts.iter().sum();
    if sum > len {
        let mut excess = sum - len;
        for c in counts.iter_mut() {
            let cut = excess.min(*c - 1);
            *c -= cut;
            excess -= cut;
            if excess == 0 {
                break;
            }
        }
    } else {
        counts[0] += len - sum;
    }
    let mut seq = Vec::with_capacity(len);
    for (rank, &c) in counts.iter().enumerate() {
        seq.extend(std::iter::repeat_n(rank, c));
    }
    seq.shuffle(rng);
    seq
}

/// Generates a knowledge graph with `round(occurrences / 3)` triples.
///
/// Schema triples come first: `rdfs:subClassOf` edges forming a hierarchy
/// of `depth` levels, then one `rdfs:domain` per predicate and one
/// `rdfs:range` for every other predicate. Data triples follow. Subjects
/// are drawn from the non-literal part of the term pool, objects from the
/// whole pool and predicates from the predicate list, each with
/// frequencies following the configured law and every candidate used at
/// least once while room remains. An entity's `rdf:type` triple is emitted
/// just before its first use as a subject. With `classes = 0` there are no
/// schema or type triples.
pub fn generate(config: &GenConfig) -> Result<Vec<Triple>> {
    if config.distinct == 0 || config.predicates == 0 {
        return Err(Error::invalid("need at least one term and one predicate"));
    }
    RankSampler::new(config.law, config.skew, 1)?;
    let budget = ((config.occurrences as f64) / 3.0).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(budget);

    let depth = config.depth.max(1).min(config.classes.max(1));
    let level = |i: usize| i * depth / config.classes.max(1);
    let mut level_start = vec![0usize; depth + 1];
    for i in (0..config.classes).rev() {
        level_start[level(i)] = i;
    }
    let predicates: Vec<Term> = (0..config.predicates).map(|j| Term::iri(format!("{NS}p{j}"))).collect();
    if config.classes > 0 {
        let sub = Term::iri(vocab::RDFS_SUBCLASS_OF);
        for i in 0..config.classes {
            let l = level(i);
            if l > 0 {
                let parent = rng.gen_range(level_start[l - 1]..level_start[l]);
                out.push(triple(class_term(i), sub.clone(), class_term(parent)));
            }
        }
        for (j, p) in predicates.iter().enumerate() {
            let c = rng.gen_range(0..config.classes);
            out.push(triple(p.clone(), Term::iri(vocab::RDFS_DOMAIN), class_term(c)));
            if j % 2 == 1 {
                let c = rng.gen_range(0..config.classes);
                out.push(triple(p.clone(), Term::iri(vocab::RDFS_RANGE), class_term(c)));
            }
        }
    }
    out.truncate(budget);

    let mut entities: Vec<usize> = (0..config.distinct).filter(|i| i % 10 != 7 && i % 10 != 8).collect();
    if entities.is_empty() {
        entities.push(0);
    }
    entities.shuffle(&mut rng);
    let mut pool: Vec<usize> = (0..config.distinct).collect();
    pool.shuffle(&mut rng);
    let class_of: Vec<usize> = if config.classes > 0 {
        (0..entities.len()).map(|_| rng.gen_range(0..config.classes)).collect()
    } else {
        Vec::new()
    };

    let remaining = budget - out.len();
    let (subjects, data) = if config.classes > 0 {
        let n = entities.len().min(remaining / 2);
        (n, remaining - n)
    } else {
        (entities.len().min(remaining), remaining)
    };
    let law = config.law;
    let subj_seq = quota_sequence(law, config.skew, subjects.max(1), data, &mut rng);
    let obj_seq = quota_sequence(law, config.skew, pool.len(), data, &mut rng);
    let pred_seq = quota_sequence(law, config.skew, predicates.len(), data, &mut rng);

    let rdf_type = Term::iri(vocab::RDF_TYPE);
    let mut typed = vec![false; entities.len()];
    let mut types_left = if config.classes > 0 { subjects } else { 0 };
    for i in 0..data {
        let s = subj_seq[i];
        let subject = pool_term(entities[s]);
        if types_left > 0 && !typed[s] {
            typed[s] = true;
            types_left -= 1;
            out.push(triple(subject.clone(), rdf_type.clone(), class_term(class_of[s])));
        }
        out.push(triple(subject, predicates[pred_seq[i]].clone(), pool_term(pool[obj_seq[i]])));
    }
    debug_assert_eq!(out.len(), budget);
    Ok(out)
}
