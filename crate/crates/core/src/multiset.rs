//! Finite multisets over a totally ordered item type.
//!
//! Counts are stored as a sorted vector of `(item, count)` pairs with every
//! count at least one, so two equal multisets always have identical storage.
//! This gives a canonical text form and makes multisets usable as map keys.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multiset<T> {
    entries: Vec<(T, u32)>,
}

impl<T> Default for Multiset<T> {
    fn default() -> Self {
        Self {
            entries: Vec::new(),
        }
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(item: T) -> Self {
        Self {
            entries: vec![(item, 1)],
        }
    }

    /// Builds a multiset from `(item, count)` pairs; repeated items accumulate
    /// and zero counts are dropped.
    pub fn from_counts<I: IntoIterator<Item = (T, u32)>>(counts: I) -> Self {
        let mut map = BTreeMap::new();
        for (item, c) in counts {
            *map.entry(item).or_insert(0u32) += c;
        }
        Self {
            entries: map.into_iter().filter(|(_, c)| *c > 0).collect(),
        }
    }

    /// Multiset of the items of `iter`, one copy per occurrence.
    pub fn from_items<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::from_counts(iter.into_iter().map(|t| (t, 1)))
    }

    pub fn count(&self, item: &T) -> u32 {
        match self.entries.binary_search_by(|(k, _)| k.cmp(item)) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn cardinality(&self) -> u64 {
        self.entries.iter().map(|(_, c)| u64::from(*c)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct items.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> Vec<T> {
        self.entries.iter().map(|(k, _)| k.clone()).collect()
    }

    /// Whether every count is at most one, i.e. the multiset is a set.
    pub fn is_set(&self) -> bool {
        self.entries.iter().all(|(_, c)| *c == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u32)> + '_ {
        self.entries.iter().map(|(k, c)| (k, *c))
    }

    /// Items in ascending order, each repeated by its multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries
            .iter()
            .flat_map(|(k, c)| std::iter::repeat_n(k, *c as usize))
    }

    /// Pointwise `self ≤ other`.
    pub fn is_submultiset(&self, other: &Self) -> bool {
        self.entries.iter().all(|(k, c)| other.count(k) >= *c)
    }

    pub fn insert(&mut self, item: T, times: u32) {
        if times == 0 {
            return;
        }
        match self.entries.binary_search_by(|(k, _)| k.cmp(&item)) {
            Ok(pos) => self.entries[pos].1 += times,
            Err(pos) => self.entries.insert(pos, (item, times)),
        }
    }

    /// Removes `times` copies of `item`; returns false (and leaves `self`
    /// untouched) when fewer copies are present.
    pub fn remove(&mut self, item: &T, times: u32) -> bool {
        match self.entries.binary_search_by(|(k, _)| k.cmp(item)) {
            Ok(pos) => {
                let c = &mut self.entries[pos].1;
                if *c < times {
                    return false;
                }
                *c -= times;
                if *c == 0 {
                    self.entries.remove(pos);
                }
                true
            }
            Err(_) => times == 0,
        }
    }

    /// Pointwise sum.
    pub fn union_sum(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((ka, ca)), Some((kb, cb))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Less => {
                        out.push((ka.clone(), *ca));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((kb.clone(), *cb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        out.push((ka.clone(), ca + cb));
                        a.next();
                        b.next();
                    }
                },
                (Some(x), None) => {
                    out.push((*x).clone());
                    a.next();
                }
                (None, Some(y)) => {
                    out.push((*y).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { entries: out }
    }

    /// Pointwise difference `self − other`, or `None` if `other ≰ self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        for (k, c) in &other.entries {
            if !out.remove(k, *c) {
                return None;
            }
        }
        Some(out)
    }

    /// `Σ_{i∈S} T_i`: every item `i` of `self` contributes `count(i)` copies of
    /// the multiset `family(i)`.
    pub fn msum<U, F>(&self, mut family: F) -> Result<Multiset<U>>
    where
        U: Ord + Clone,
        F: FnMut(&T) -> Option<Multiset<U>>,
    {
        let mut acc: BTreeMap<U, u32> = BTreeMap::new();
        for (i, c) in &self.entries {
            let t = family(i).ok_or(Error::MissingFamilyMember)?;
            for (j, cj) in t.entries {
                *acc.entry(j).or_insert(0) += c * cj;
            }
        }
        Ok(Multiset {
            entries: acc.into_iter().collect(),
        })
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::from_items(iter)
    }
}

impl<T: fmt::Display> fmt::Display for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (k, c)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}:{c}")?;
        }
        f.write_str("}")
    }
}

impl<T: fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, c)| (k, c)))
            .finish()
    }
}
