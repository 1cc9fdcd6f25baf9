use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Misra-Gries frequent-items summary with at most `capacity` counters.
///
/// Over a stream of `N` items, every item with frequency greater than
/// `N / (capacity + 1)` is retained, and a stored count never exceeds the
/// item's true frequency. Summaries merge without losing either guarantee.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisraGries<K: Hash + Eq> {
    capacity: usize,
    counts: HashMap<K, u64>,
}

impl<K: Hash + Eq + Clone + Ord> MisraGries<K> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("Misra-Gries capacity must be at least 1"));
        }
        Ok(MisraGries {
            capacity,
            counts: HashMap::with_capacity(capacity + 1),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Stored count, or 0 when the item is not tracked.
    pub fn count(&self, item: &K) -> u64 {
        self.counts.get(item).copied().unwrap_or(0)
    }

    pub fn contains(&self, item: &K) -> bool {
        self.counts.contains_key(item)
    }

    pub fn update(&mut self, item: &K) {
        if let Some(c) = self.counts.get_mut(item) {
            *c += 1;
        } else if self.counts.len() < self.capacity {
            self.counts.insert(item.clone(), 1);
        } else {
            self.counts.retain(|_, c| {
                *c -= 1;
                *c > 0
            });
        }
    }

    /// Entries ordered by count descending, then item ascending.
    pub fn entries(&self) -> Vec<(K, u64)> {
        let mut out: Vec<(K, u64)> = self.counts.iter().map(|(k, c)| (k.clone(), *c)).collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.counts.keys()
    }

    pub(crate) fn insert_raw(&mut self, item: K, count: u64) -> Result<()> {
        if count == 0 || self.counts.len() >= self.capacity || self.counts.contains_key(&item) {
            return Err(Error::invalid("invalid Misra-Gries entry"));
        }
        self.counts.insert(item, count);
        Ok(())
    }

    /// Folds `other` into `self`: counts are summed per item, and when more
    /// than `capacity` items remain the `(capacity + 1)`-th largest count is
    /// subtracted from all of them and non-positive entries are dropped.
    pub fn merge_with(&mut self, other: &MisraGries<K>) -> Result<()> {
        if self.capacity != other.capacity {
            return Err(Error::invalid(format!(
                "Misra-Gries capacity mismatch: {} vs {}",
                self.capacity, other.capacity
            )));
        }
        for (k, c) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += c;
        }
        if self.counts.len() > self.capacity {
            let mut values: Vec<u64> = self.counts.values().copied().collect();
            let (_, cut, _) = values.select_nth_unstable_by(self.capacity, |a, b| b.cmp(a));
            let cut = *cut;
            self.counts.retain(|_, c| {
                *c = c.saturating_sub(cut);
                *c > 0
            });
        }
        Ok(())
    }

    /// Merges summaries left to right. All must share one capacity.
    pub fn merge<'a, I>(summaries: I) -> Result<MisraGries<K>>
    where
        I: IntoIterator<Item = &'a MisraGries<K>>,
        K: 'a,
    {
        let mut iter = summaries.into_iter();
        let first = iter.next().ok_or_else(|| Error::invalid("nothing to merge"))?;
        let mut acc = first.clone();
        for s in iter {
            acc.merge_with(s)?;
        }
        Ok(acc)
    }
}
