//! Bit-count model comparing fixed-width IDs with frequency-ranked blocks.
//!
//! The functions are generic over the count type: integer tables give exact
//! bit totals, floating-point tables evaluate the model on real-valued
//! (e.g. ideal Zipf) frequencies.

use std::fmt::Debug;

use num_traits::{Float, Num, NumCast};

use crate::ingest::Triple;
use crate::sketch::exact_counts;

/// A number usable as an occurrence count.
pub trait Count: Num + NumCast + Copy + PartialOrd + Debug {}

impl<T: Num + NumCast + Copy + PartialOrd + Debug> Count for T {}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1, "log2 of zero");
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

fn cast<C: Count>(v: u64) -> C {
    C::from(v).expect("small integer fits every count type")
}

/// Term frequencies, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyTable<C> {
    counts: Vec<C>,
}

impl<C: Count> FrequencyTable<C> {
    pub fn from_counts(counts: impl IntoIterator<Item = C>) -> Self {
        let mut counts: Vec<C> = counts.into_iter().collect();
        counts.sort_by(|a, b| b.partial_cmp(a).expect("counts are comparable"));
        FrequencyTable { counts }
    }

    pub fn counts(&self) -> &[C] {
        &self.counts
    }

    /// Number of distinct terms.
    pub fn n_distinct(&self) -> usize {
        self.counts.len()
    }

    /// Total occurrences.
    pub fn total(&self) -> C {
        self.counts.iter().fold(C::zero(), |acc, &c| acc + c)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl FrequencyTable<u64> {
    /// Exact occurrence counts of every term in the triples.
    pub fn from_triples(triples: &[Triple]) -> Self {
        let occurrences = triples.iter().flat_map(crate::ingest::term_occurrences);
        Self::from_counts(exact_counts(occurrences).into_values())
    }
}

/// Block decomposition of `n` frequency-ranked items: block `i` (from 1)
/// holds the next `2^i` items.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockModel {
    n: u64,
    blocks: u32,
}

impl BlockModel {
    pub fn new(n: u64) -> Self {
        BlockModel {
            n,
            blocks: if n == 0 { 0 } else { ceil_log2(n) },
        }
    }

    /// `b = ceil(log2 n)`.
    pub fn blocks(&self) -> u32 {
        self.blocks
    }

    /// With one or zero items there is nothing to encode.
    pub fn is_degenerate(&self) -> bool {
        self.n <= 1
    }

    pub fn capacity(block: u32) -> u64 {
        1u64 << block
    }

    /// Block of the item with 1-based `rank`: the smallest `i` with
    /// `2 + 4 + ... + 2^i >= rank`.
    pub fn block_of_rank(rank: u64) -> u32 {
        assert!(rank >= 1, "ranks start at 1");
        // 2^(i+1) - 2 >= rank  <=>  i + 1 >= log2(rank + 2)
        ceil_log2(rank + 2) - 1
    }

    /// Extra bits per item that identify its block: `ceil(log2 b)`.
    pub fn selector_bits(&self) -> u32 {
        if self.blocks == 0 {
            0
        } else {
            ceil_log2(self.blocks as u64)
        }
    }
}

/// Bits for fixed-width IDs: `F * ceil(log2 n)`.
pub fn s_fix<C: Count>(table: &FrequencyTable<C>) -> C {
    if table.is_empty() {
        return C::zero();
    }
    table.total() * cast::<C>(ceil_log2(table.n_distinct() as u64) as u64)
}

/// Bits for block-ranked IDs: each occurrence of an item in block `i` costs
/// `i + ceil(log2 b)` bits.
pub fn s_kog<C: Count>(table: &FrequencyTable<C>) -> C {
    let model = BlockModel::new(table.n_distinct() as u64);
    if model.is_degenerate() {
        return C::zero();
    }
    let selector = model.selector_bits() as u64;
    let mut bits = C::zero();
    let mut block_weight = C::zero();
    let mut block = 1u32;
    for (i, &f) in table.counts().iter().enumerate() {
        let b = BlockModel::block_of_rank(i as u64 + 1);
        if b != block {
            bits = bits + block_weight * cast::<C>((block as u64) + selector);
            block_weight = C::zero();
            block = b;
        }
        block_weight = block_weight + f;
    }
    bits + block_weight * cast::<C>((block as u64) + selector)
}

/// Both bit counts plus the degenerate-table flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceReport<C> {
    pub s_fix: C,
    pub s_kog: C,
    /// Fewer than two distinct terms: both models are defined as zero.
    pub degenerate: bool,
}

pub fn space_report<C: Count>(table: &FrequencyTable<C>) -> SpaceReport<C> {
    SpaceReport {
        s_fix: s_fix(table),
        s_kog: s_kog(table),
        degenerate: table.n_distinct() <= 1,
    }
}

/// Shape of a skewed frequency distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZipfLaw {
    /// `f_k` proportional to `1 / s^k`.
    Geometric,
    /// `f_k` proportional to `1 / k^s`.
    PowerLaw,
}

impl ZipfLaw {
    pub fn name(self) -> &'static str {
        match self {
            ZipfLaw::Geometric => "geometric",
            ZipfLaw::PowerLaw => "power",
        }
    }
}

/// Parameters of the closed-form estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZipfParams<F> {
    /// Skew, expected to be at least 2.
    pub s: F,
    /// Distinct terms.
    pub n: u64,
    /// Total occurrences.
    pub total: F,
}

impl<F: Float> ZipfParams<F> {
    pub fn new(s: F, n: u64, total: F) -> Self {
        ZipfParams { s, n, total }
    }

    /// The closed form assumes `s >= 2`.
    pub fn in_regime(&self) -> bool {
        self.s >= F::from(2.0).expect("2 fits")
    }
}

/// Closed-form block-model size for geometric Zipf frequencies:
/// `F * (ceil(log2 b) + 1 / s^2)` with `b = ceil(log2 n)`.
///
/// Out-of-regime skews (`s < 2`) are logged and still evaluated.
pub fn s_kog_zipf<F: Float>(params: &ZipfParams<F>) -> F {
    if !params.in_regime() {
        log::warn!(
            "closed-form estimate used with skew {:?} < 2",
            params.s.to_f64()
        );
    }
    let selector = BlockModel::new(params.n.max(2)).selector_bits();
    let selector = F::from(selector).expect("small integer");
    params.total * (selector + F::one() / (params.s * params.s))
}

/// Real-valued frequencies of `n` ranks under `law`, scaled to sum to
/// `total`, most frequent first.
pub fn zipf_frequencies<F: Float>(law: ZipfLaw, s: F, n: usize, total: F) -> Vec<F> {
    let weights: Vec<F> = match law {
        ZipfLaw::Geometric => {
            let q = F::one() / s;
            let mut w = F::one();
            (0..n)
                .map(|_| {
                    let cur = w;
                    w = w * q;
                    cur
                })
                .collect()
        }
        ZipfLaw::PowerLaw => (1..=n)
            .map(|k| F::one() / F::from(k).expect("rank fits").powf(s))
            .collect(),
    };
    let sum = weights.iter().fold(F::zero(), |a, &b| a + b);
    weights.into_iter().map(|w| w / sum * total).collect()
}

/// Integer frequencies: [`zipf_frequencies`] rounded, every term at least 1.
pub fn zipf_counts(law: ZipfLaw, s: f64, n: usize, total: u64) -> Vec<u64> {
    zipf_frequencies(law, s, n, total as f64)
        .into_iter()
        .map(|f| (f.round() as u64).max(1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        let got: Vec<u32> = [1u64, 2, 3, 4, 5, 8, 9, 1000, 1 << 20].iter().map(|&n| ceil_log2(n)).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4, 10, 20]);
    }

    #[test]
    fn fixed_width_examples() {
        let t = FrequencyTable::from_counts([4u64, 3, 2, 1]);
        assert_eq!(s_fix(&t), 20);
        assert_eq!(s_fix(&FrequencyTable::from_counts([7u64])), 0);
        let t = FrequencyTable::from_counts((0..1000).map(|_| 1000u64));
        assert_eq!(s_fix(&t), 10_000_000);
        assert_eq!(s_fix(&FrequencyTable::<u64>::from_counts([])), 0);
    }

    #[test]
    fn four_term_block_example() {
        let t = FrequencyTable::from_counts([1u64, 2, 8, 4]);
        assert_eq!(s_kog(&t), 33);
        assert_eq!(s_fix(&t), 30);
        let real = FrequencyTable::from_counts([8.0f64, 4.0, 2.0, 1.0]);
        assert_eq!(s_kog(&real), 33.0);
    }

    #[test]
    fn degenerate_tables() {
        let one = space_report(&FrequencyTable::from_counts([5u64]));
        assert_eq!((one.s_fix, one.s_kog, one.degenerate), (0, 0, true));
        assert!(!space_report(&FrequencyTable::from_counts([5u64, 1])).degenerate);
    }

    #[test]
    fn block_ranks() {
        let blocks: Vec<u32> = (1..=15).map(BlockModel::block_of_rank).collect();
        assert_eq!(blocks, vec![1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 4]);
        let m = BlockModel::new(1 << 16);
        assert_eq!((m.blocks(), m.selector_bits()), (16, 4));
    }

    #[test]
    fn closed_form_example() {
        let p = ZipfParams::new(2.0f64, 1 << 16, 1e6);
        assert!((s_kog_zipf(&p) - 4.25e6).abs() < 1e-6);
        let p32 = ZipfParams::new(2.0f32, 1 << 16, 1e6);
        assert!((s_kog_zipf(&p32) - 4.25e6).abs() < 1.0);
        assert!(!ZipfParams::new(1.5f64, 10, 1.0).in_regime());
    }

    #[test]
    fn frequencies_sum_to_total() {
        for law in [ZipfLaw::Geometric, ZipfLaw::PowerLaw] {
            let f = zipf_frequencies(law, 2.0f64, 1000, 1e6);
            let sum: f64 = f.iter().sum();
            assert!((sum - 1e6).abs() < 1e-3);
            assert!(f.windows(2).all(|w| w[0] >= w[1]));
        }
        let c = zipf_counts(ZipfLaw::Geometric, 2.0, 100, 1000);
        assert_eq!(c[0], 500);
        assert!(c.iter().all(|&x| x >= 1));
    }
}
