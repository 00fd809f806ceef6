use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest carrier a [`super::FiniteHyperStructure`] may have: element sets
/// are single machine words.
pub const MAX_CARRIER: usize = 64;

/// A subset of a carrier `{0, .., n-1}` with `n <= 64`, stored as a bitset.
///
/// The carrier size is not stored in the set; the owning structure
/// validates that every set bit is in range when tables are built.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn singleton(i: usize) -> Self {
        ElemSet(1 << i)
    }

    /// All of `{0, .., n-1}`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(ElemSet::EMPTY, |s, i| s.with(i))
    }

    #[inline]
    pub const fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    #[inline]
    #[must_use]
    pub const fn with(self, i: usize) -> Self {
        ElemSet(self.0 | (1 << i))
    }

    #[inline]
    #[must_use]
    pub const fn without(self, i: usize) -> Self {
        ElemSet(self.0 & !(1 << i))
    }

    #[inline]
    #[must_use]
    pub const fn union(self, other: ElemSet) -> Self {
        ElemSet(self.0 | other.0)
    }

    #[inline]
    #[must_use]
    pub const fn intersection(self, other: ElemSet) -> Self {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    #[must_use]
    pub const fn difference(self, other: ElemSet) -> Self {
        ElemSet(self.0 & !other.0)
    }

    #[inline]
    pub const fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_singleton(self) -> bool {
        self.0 != 0 && self.0 & (self.0 - 1) == 0
    }

    /// The unique element of a singleton.
    #[inline]
    pub const fn single(self) -> Option<usize> {
        if self.is_singleton() {
            Some(self.0.trailing_zeros() as usize)
        } else {
            None
        }
    }

    #[inline]
    pub const fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Highest set index plus one (0 for the empty set).
    #[inline]
    pub const fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    #[inline]
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Image of the set under an index map.
    pub fn map(self, f: impl Fn(usize) -> usize) -> ElemSet {
        self.iter().fold(ElemSet::EMPTY, |s, i| s.with(f(i)))
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElemSet::from_indices(iter)
    }
}

impl IntoIterator for ElemSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

/// Ascending iterator over the indices of an [`ElemSet`].
#[derive(Clone, Debug)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
