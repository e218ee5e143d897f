use std::fmt;

use serde::{Serialize, Serializer};

use crate::lattice::{line_class, DivisorClass, LinePair, Permutation5};

/// A subset of the ten lines, bit `k` standing for the `k`-th pair in
/// lexicographic order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineSet(u16);

impl LineSet {
    pub const EMPTY: LineSet = LineSet(0);
    pub const FULL: LineSet = LineSet(0x3ff);

    pub fn from_bits(bits: u16) -> Self {
        LineSet(bits & 0x3ff)
    }

    pub fn bits(&self) -> u16 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, p: LinePair) -> bool {
        self.0 >> p.index() & 1 == 1
    }

    pub fn insert(&mut self, p: LinePair) {
        self.0 |= 1 << p.index();
    }

    pub fn remove(&mut self, p: LinePair) {
        self.0 &= !(1 << p.index());
    }

    pub fn with(mut self, p: LinePair) -> Self {
        self.insert(p);
        self
    }

    pub fn union(self, other: LineSet) -> LineSet {
        LineSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LineSet) -> LineSet {
        LineSet(self.0 & other.0)
    }

    pub fn difference(self, other: LineSet) -> LineSet {
        LineSet(self.0 & !other.0)
    }

    pub fn complement(self) -> LineSet {
        LineSet(!self.0 & 0x3ff)
    }

    pub fn is_subset(&self, other: LineSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(&self, other: LineSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = LinePair> + '_ {
        let bits = self.0;
        (0..10).filter(move |k| bits >> k & 1 == 1).map(LinePair::from_index)
    }

    /// Sum of the classes of the lines in the set.
    pub fn class_sum(&self) -> DivisorClass {
        self.iter().map(|p| line_class(p.index())).sum()
    }

    pub fn permuted(&self, t: &Permutation5) -> LineSet {
        self.iter().map(|p| p.permuted(t)).collect()
    }

    /// All subsets of `self`, in increasing bit order.
    pub fn subsets(&self) -> impl Iterator<Item = LineSet> {
        let full = self.0;
        let mut next = Some(0u16);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(LineSet(cur))
        })
    }

    pub fn pairs(&self) -> Vec<[u8; 2]> {
        self.iter()
            .map(|p| {
                let (i, j) = p.indices();
                [i, j]
            })
            .collect()
    }
}

impl FromIterator<LinePair> for LineSet {
    fn from_iter<I: IntoIterator<Item = LinePair>>(iter: I) -> Self {
        let mut s = LineSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl FromIterator<usize> for LineSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        LineSet(iter.into_iter().fold(0u16, |acc, k| acc | 1 << k))
    }
}

impl fmt::Debug for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for LineSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}
