use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use crate::{ObjectId, MAX_OBJECTS};

/// A finite set of objects, stored as a bitset over universe indices.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bundle(u64);

impl Bundle {
    pub const EMPTY: Bundle = Bundle(0);

    pub const fn from_bits(bits: u64) -> Self {
        Bundle(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The first `m` objects of a universe.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_OBJECTS);
        if m == 64 {
            Bundle(u64::MAX)
        } else {
            Bundle((1u64 << m) - 1)
        }
    }

    pub fn singleton(o: ObjectId) -> Self {
        Bundle(1u64 << o.0)
    }

    pub fn contains(self, o: ObjectId) -> bool {
        self.0 >> o.0 & 1 == 1
    }

    #[must_use]
    pub fn with(self, o: ObjectId) -> Self {
        Bundle(self.0 | 1u64 << o.0)
    }

    #[must_use]
    pub fn without(self, o: ObjectId) -> Self {
        Bundle(self.0 & !(1u64 << o.0))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Bundle) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Bundle) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest object index, if any.
    pub fn first(self) -> Option<ObjectId> {
        (self.0 != 0).then(|| ObjectId(self.0.trailing_zeros() as u8))
    }

    /// Objects in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = ObjectId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(ObjectId(i as u8))
        })
    }

    /// Every subset, starting with the empty set and ending with `self`.
    pub fn subsets(self) -> impl Iterator<Item = Bundle> {
        let full = self.0;
        let mut cur = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Bundle(cur);
            if cur == full {
                done = true;
            } else {
                cur = (cur.wrapping_sub(full)) & full;
            }
            Some(out)
        })
    }

    /// Image under an object relabelling `map[old] = new`.
    pub fn relabel(self, map: &[ObjectId]) -> Bundle {
        self.iter().map(|o| map[o.index()]).collect()
    }
}

impl FromIterator<ObjectId> for Bundle {
    fn from_iter<I: IntoIterator<Item = ObjectId>>(iter: I) -> Self {
        iter.into_iter().fold(Bundle::EMPTY, Bundle::with)
    }
}

impl BitOr for Bundle {
    type Output = Bundle;
    fn bitor(self, rhs: Bundle) -> Bundle {
        Bundle(self.0 | rhs.0)
    }
}

impl BitAnd for Bundle {
    type Output = Bundle;
    fn bitand(self, rhs: Bundle) -> Bundle {
        Bundle(self.0 & rhs.0)
    }
}

impl Sub for Bundle {
    type Output = Bundle;
    fn sub(self, rhs: Bundle) -> Bundle {
        Bundle(self.0 & !rhs.0)
    }
}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|o| o.0)).finish()
    }
}
