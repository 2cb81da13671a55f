//! Fixed-dimension bit sets over object or attribute indices.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

const WORD_BITS: usize = 64;

/// Marker for sets of object indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objects {}

/// Marker for sets of attribute indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attributes {}

/// A subset of `0..dim`, stored as packed 64-bit words.
///
/// The marker type keeps object sets and attribute sets apart at compile
/// time. Bits above `dim` in the last word are always zero.
pub struct IndexSet<D> {
    words: Vec<u64>,
    dim: usize,
    _domain: PhantomData<D>,
}

pub type ObjectSet = IndexSet<Objects>;
pub type AttributeSet = IndexSet<Attributes>;

fn word_count(dim: usize) -> usize {
    dim.div_ceil(WORD_BITS)
}

impl<D> IndexSet<D> {
    pub fn empty(dim: usize) -> Self {
        IndexSet {
            words: vec![0; word_count(dim)],
            dim,
            _domain: PhantomData,
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut words = vec![u64::MAX; word_count(dim)];
        let tail = dim % WORD_BITS;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << tail) - 1;
            }
        }
        IndexSet {
            words,
            dim,
            _domain: PhantomData,
        }
    }

    /// Builds a set from indices. Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(dim: usize, indices: I) -> Self {
        let mut set = Self::empty(dim);
        for i in indices {
            set.insert(i);
        }
        set
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.dim && self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.dim {
            self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.dim
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.dim, other.dim);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// Writes `self ∩ other` into `out` without allocating.
    #[inline]
    pub fn intersection_into(&self, other: &Self, out: &mut Self) {
        for ((o, a), b) in out.words.iter_mut().zip(&self.words).zip(&other.words) {
            *o = a & b;
        }
    }

    /// True when `self` and `other` agree on every index below `end`.
    pub fn agrees_below(&self, other: &Self, end: usize) -> bool {
        let full_words = end / WORD_BITS;
        if self.words[..full_words] != other.words[..full_words] {
            return false;
        }
        let tail = end % WORD_BITS;
        if tail == 0 {
            return true;
        }
        let mask = (1u64 << tail) - 1;
        (self.words[full_words] ^ other.words[full_words]) & mask == 0
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Colexicographic comparison: the set with the larger highest
    /// differing element is greater. This is the order of the sets read as
    /// binary numbers with index 0 as the least significant bit, and it
    /// extends subset inclusion.
    pub fn colex_cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl<D> Clone for IndexSet<D> {
    fn clone(&self) -> Self {
        IndexSet {
            words: self.words.clone(),
            dim: self.dim,
            _domain: PhantomData,
        }
    }

    fn clone_from(&mut self, source: &Self) {
        self.words.clone_from(&source.words);
        self.dim = source.dim;
    }
}

impl<D> PartialEq for IndexSet<D> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.words == other.words
    }
}

impl<D> Eq for IndexSet<D> {}

impl<D> Hash for IndexSet<D> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.words.hash(state);
    }
}

impl<D> fmt::Debug for IndexSet<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a, D> IntoIterator for &'a IndexSet<D> {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
