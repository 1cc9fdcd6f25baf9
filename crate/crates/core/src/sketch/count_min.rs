use super::hash::HashFamily;
use crate::error::{Error, Result};
use crate::ingest::Term;

/// Count-Min sketch: `n` rows of `w` counters, one row per hash function.
/// A term's estimate is the minimum of its `n` counters, so it never
/// undercounts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMinSketch {
    family: HashFamily,
    width: usize,
    /// Row-major, `n * width` counters.
    counters: Vec<u64>,
    total: u64,
}

impl CountMinSketch {
    pub fn new(family: HashFamily, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::invalid("count-min width must be at least 1"));
        }
        let counters = vec![0; family.len() * width];
        Ok(CountMinSketch {
            family,
            width,
            counters,
            total: 0,
        })
    }

    pub(crate) fn from_raw(family: HashFamily, width: usize, counters: Vec<u64>) -> Result<Self> {
        if width == 0 || counters.len() != family.len() * width {
            return Err(Error::invalid("count-min counters do not match n x w"));
        }
        let total = counters[..width].iter().sum();
        Ok(CountMinSketch {
            family,
            width,
            counters,
            total,
        })
    }

    pub fn family(&self) -> &HashFamily {
        &self.family
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of rows (hash functions).
    pub fn depth(&self) -> usize {
        self.family.len()
    }

    /// Total weight added so far; every row sums to this.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn row(&self, j: usize) -> &[u64] {
        &self.counters[j * self.width..(j + 1) * self.width]
    }

    /// Counter index of `term` in row `j`.
    pub fn index(&self, term: &Term, j: usize) -> usize {
        (self.family.hash(term, j) % self.width as u64) as usize
    }

    pub fn update(&mut self, term: &Term) {
        self.add(term, 1);
    }

    pub fn add(&mut self, term: &Term, delta: u64) {
        let mut hashes = Vec::with_capacity(self.depth());
        self.add_with(term, delta, &mut hashes);
    }

    /// Like [`add`](Self::add) with a caller-owned scratch buffer.
    pub(crate) fn add_with(&mut self, term: &Term, delta: u64, scratch: &mut Vec<u64>) {
        self.family.hashes(term, scratch);
        let w = self.width as u64;
        for (j, h) in scratch.iter().enumerate() {
            let slot = j * self.width + (h % w) as usize;
            self.counters[slot] += delta;
        }
        self.total += delta;
    }

    pub fn estimate(&self, term: &Term) -> u64 {
        let mut hashes = Vec::with_capacity(self.depth());
        self.family.hashes(term, &mut hashes);
        let w = self.width as u64;
        hashes
            .iter()
            .enumerate()
            .map(|(j, h)| self.counters[j * self.width + (h % w) as usize])
            .min()
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &CountMinSketch) -> Result<()> {
        if self.width != other.width || self.family != other.family {
            return Err(Error::invalid(
                "count-min sketches differ in width or hash seeds",
            ));
        }
        Ok(())
    }

    /// Adds `other`'s counters into `self`, element by element.
    pub fn merge(&mut self, other: &CountMinSketch) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.counters.iter_mut().zip(&other.counters) {
            *a += b;
        }
        self.total += other.total;
        Ok(())
    }

    /// Sums a non-empty collection of sketches built with identical shape.
    pub fn merge_all<I>(sketches: I) -> Result<CountMinSketch>
    where
        I: IntoIterator<Item = CountMinSketch>,
    {
        let mut iter = sketches.into_iter();
        let mut acc = iter
            .next()
            .ok_or_else(|| Error::invalid("nothing to merge"))?;
        for s in iter {
            acc.merge(&s)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn sketch(n: usize, w: usize) -> CountMinSketch {
        CountMinSketch::new(HashFamily::new(n, 11).unwrap(), w).unwrap()
    }

    fn t(s: &str) -> Term {
        Term::iri(s)
    }

    #[test]
    fn empty_sketch_estimates_zero() {
        let cm = sketch(3, 64);
        assert_eq!(cm.estimate(&t("a")), 0);
    }

    #[test]
    fn exact_without_collisions() {
        let mut cm = sketch(3, 1 << 16);
        let (a, b) = (t("a"), t("b"));
        let collide = (0..3).all(|j| cm.index(&a, j) == cm.index(&b, j));
        assert!(!collide, "pick other terms: every row collides");
        cm.update(&a);
        cm.update(&a);
        cm.update(&b);
        assert_eq!(cm.estimate(&a), 2);
        assert_eq!(cm.estimate(&b), 1);
    }

    #[test]
    fn width_one_collapses_everything() {
        let mut cm = sketch(3, 1);
        for s in ["a", "a", "b"] {
            cm.update(&t(s));
        }
        assert_eq!(cm.estimate(&t("a")), 3);
        assert_eq!(cm.estimate(&t("zzz")), 3);
    }

    #[test]
    fn single_term_stream_is_exact() {
        let mut cm = sketch(3, 8);
        for _ in 0..1234 {
            cm.update(&t("only"));
        }
        assert_eq!(cm.estimate(&t("only")), 1234);
    }

    #[test]
    fn rows_conserve_total() {
        let mut cm = sketch(4, 7);
        for i in 0..100 {
            cm.add(&t(&format!("t{}", i % 13)), 1 + i % 3);
        }
        for j in 0..4 {
            assert_eq!(cm.row(j).iter().sum::<u64>(), cm.total());
        }
    }

    #[test]
    fn merge_of_halves_matches_whole() {
        let stream: Vec<Term> = (0..500).map(|i| t(&format!("x{}", i * 7 % 31))).collect();
        let mut whole = sketch(3, 16);
        let mut left = sketch(3, 16);
        let mut right = sketch(3, 16);
        for (i, term) in stream.iter().enumerate() {
            whole.update(term);
            if i < 200 { left.update(term) } else { right.update(term) }
        }
        let merged = CountMinSketch::merge_all([left, right]).unwrap();
        assert_eq!(merged, whole);
        let mut with_zero = whole.clone();
        with_zero.merge(&sketch(3, 16)).unwrap();
        assert_eq!(with_zero, whole);
    }

    #[test]
    fn three_workers_conserve_occurrences() {
        let mut workers = vec![sketch(3, 32), sketch(3, 32), sketch(3, 32)];
        for i in 0..300 {
            workers[i % 3].update(&t(&format!("k{}", i % 17)));
        }
        let merged = CountMinSketch::merge_all(workers).unwrap();
        for j in 0..3 {
            assert_eq!(merged.row(j).iter().sum::<u64>(), 300);
        }
    }

    #[test]
    fn merge_rejects_mismatch() {
        let mut a = sketch(3, 16);
        assert!(a.merge(&sketch(3, 17)).is_err());
        let other = CountMinSketch::new(HashFamily::new(3, 12).unwrap(), 16).unwrap();
        assert!(a.merge(&other).is_err());
        assert!(CountMinSketch::merge_all(Vec::new()).is_err());
    }

    #[test]
    fn never_underestimates_small_width() {
        let mut cm = sketch(2, 5);
        let mut exact: HashMap<Term, u64> = HashMap::new();
        for i in 0..400u64 {
            let term = t(&format!("s{}", (i * i) % 29));
            cm.update(&term);
            *exact.entry(term).or_default() += 1;
        }
        for (term, count) in &exact {
            assert!(cm.estimate(term) >= *count);
        }
    }
}
