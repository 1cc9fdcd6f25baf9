//! CM+MG top-k detection.
//!
//! Counting runs in parallel: each worker thread owns one Count-Min sketch,
//! and each input partition feeds its own Misra-Gries summary. Afterwards
//! the Count-Min sketches are summed and the summaries merged in partition
//! order. The `k`-th largest counter of the first merged row becomes the
//! frequency threshold, and every summary candidate whose Count-Min
//! estimate is strictly above it is reported.
//!
//! Summing counters is order-independent, so merged Count-Min state is
//! identical for any worker count. The merged summary depends only on the
//! partition count, which is why partition and worker counts are separate.

use serde::{Deserialize, Serialize};

use super::count_min::CountMinSketch;
use super::hash::HashFamily;
use super::misra_gries::MisraGries;
use crate::error::{Error, Result};
use crate::ingest::Term;
use crate::parallel::run_partitions;

pub const DEFAULT_K: usize = 50;
pub const DEFAULT_HASHES: usize = 3;
pub const DEFAULT_WIDTH: usize = 1 << 20;
pub const DEFAULT_SEED: u64 = 0x6b67_655f_7365_6564;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchConfig {
    /// Number of frequent terms to detect.
    pub k: usize,
    /// Count-Min rows.
    pub hashes: usize,
    /// Counters per Count-Min row.
    pub width: usize,
    pub seed: u64,
}

impl Default for SketchConfig {
    fn default() -> Self {
        SketchConfig {
            k: DEFAULT_K,
            hashes: DEFAULT_HASHES,
            width: DEFAULT_WIDTH,
            seed: DEFAULT_SEED,
        }
    }
}

impl SketchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hashes == 0 {
            return Err(Error::invalid("at least one hash function is required"));
        }
        if self.width == 0 || self.width < self.k {
            return Err(Error::invalid(format!(
                "counter width {} must be positive and at least k = {}",
                self.width, self.k
            )));
        }
        Ok(())
    }

    pub fn hash_family(&self) -> Result<HashFamily> {
        HashFamily::new(self.hashes, self.seed)
    }

    pub fn new_count_min(&self) -> Result<CountMinSketch> {
        CountMinSketch::new(self.hash_family()?, self.width)
    }

    /// Misra-Gries summaries always get at least one counter.
    pub fn new_summary(&self) -> MisraGries<Term> {
        MisraGries::new(self.k.max(1)).expect("capacity is positive")
    }
}

/// A term with its estimated number of occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrequencyEstimate {
    pub term: Term,
    pub estimate: u64,
}

impl FrequencyEstimate {
    pub fn new(term: Term, estimate: u64) -> Self {
        FrequencyEstimate { term, estimate }
    }
}

/// Orders by estimate descending, then term ascending.
pub fn sort_estimates(estimates: &mut [FrequencyEstimate]) {
    estimates.sort_by(|a, b| b.estimate.cmp(&a.estimate).then_with(|| a.term.cmp(&b.term)));
}

/// Per-worker Count-Min sketches and per-partition summaries, before merging.
#[derive(Clone, Debug)]
pub struct HybridSketchState {
    k: usize,
    count_mins: Vec<CountMinSketch>,
    summaries: Vec<MisraGries<Term>>,
}

impl HybridSketchState {
    pub fn new(k: usize, count_mins: Vec<CountMinSketch>, summaries: Vec<MisraGries<Term>>) -> Self {
        HybridSketchState {
            k,
            count_mins,
            summaries,
        }
    }

    pub fn count_mins(&self) -> &[CountMinSketch] {
        &self.count_mins
    }

    pub fn summaries(&self) -> &[MisraGries<Term>] {
        &self.summaries
    }

    /// Second phase: sum counters, merge summaries in partition order.
    pub fn merge(self) -> Result<MergedSketch> {
        let count_min = CountMinSketch::merge_all(self.count_mins)?;
        let summary = if self.summaries.is_empty() {
            MisraGries::new(self.k.max(1))?
        } else {
            MisraGries::merge(&self.summaries)?
        };
        Ok(MergedSketch {
            k: self.k,
            count_min,
            summary,
        })
    }
}

/// Merged CM+MG state, read-only after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedSketch {
    pub k: usize,
    pub count_min: CountMinSketch,
    pub summary: MisraGries<Term>,
}

impl MergedSketch {
    pub fn threshold(&self) -> Result<u64> {
        cmmg_threshold(&self.count_min, self.k)
    }

    pub fn top_k(&self) -> Result<Vec<FrequencyEstimate>> {
        cmmg_topk(&self.summary, &self.count_min, self.k)
    }
}

/// The `k`-th largest counter value in row 0.
pub fn cmmg_threshold(count_min: &CountMinSketch, k: usize) -> Result<u64> {
    let width = count_min.width();
    if k == 0 || k > width {
        return Err(Error::invalid(format!(
            "threshold rank k = {k} must lie in 1..={width}"
        )));
    }
    let mut row = count_min.row(0).to_vec();
    let (_, kth, _) = row.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
    Ok(*kth)
}

/// Summary candidates whose Count-Min estimate is strictly above the
/// threshold, ordered by estimate descending and term ascending. May return
/// fewer than `k` terms, or none for `k = 0`.
pub fn cmmg_topk(
    summary: &MisraGries<Term>,
    count_min: &CountMinSketch,
    k: usize,
) -> Result<Vec<FrequencyEstimate>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let threshold = cmmg_threshold(count_min, k)?;
    let mut out: Vec<FrequencyEstimate> = summary
        .keys()
        .filter_map(|term| {
            let estimate = count_min.estimate(term);
            (estimate > threshold).then(|| FrequencyEstimate::new(term.clone(), estimate))
        })
        .collect();
    sort_estimates(&mut out);
    Ok(out)
}

/// Counts a partitioned stream of term occurrences with CM+MG.
///
/// `source(p)` yields the occurrences of partition `p`; the stream is read
/// once.
pub fn count_hybrid<'a, F, I>(
    config: &SketchConfig,
    partitions: usize,
    workers: usize,
    source: F,
) -> Result<MergedSketch>
where
    F: Fn(usize) -> I + Sync,
    I: Iterator<Item = &'a Term>,
{
    config.validate()?;
    if partitions == 0 {
        return Err(Error::invalid("partition count must be at least 1"));
    }
    let proto = config.new_count_min()?;
    let (count_mins, summaries) = run_partitions(
        partitions,
        workers,
        || (proto.clone(), Vec::new()),
        |(cm, scratch), p| {
            let mut mg = config.new_summary();
            for term in source(p) {
                cm.add_with(term, 1, scratch);
                mg.update(term);
            }
            mg
        },
    );
    HybridSketchState::new(config.k, count_mins.into_iter().map(|(cm, _)| cm).collect(), summaries)
        .merge()
}
