use draftkit_core::{Bundle, Preference};

use crate::Comparator;

/// Precomputed PD relation over all bundles of a universe of at most six
/// objects: `geq[s]` is the bitmask of bundles `t` with `s ⪰ t`, and
/// `leq[s]` the bundles `t` with `t ⪰ s`. Bundles are indexed by their bits.
#[derive(Clone, Debug)]
pub struct PdTable {
    pub geq: Vec<u64>,
    pub leq: Vec<u64>,
}

impl PdTable {
    pub const MAX_UNIVERSE: usize = 6;

    pub fn new(pref: &Preference, cmp: Comparator, m: usize) -> Self {
        assert!(m <= Self::MAX_UNIVERSE, "PD table needs a universe of at most 6 objects");
        let size = 1usize << m;
        let mut geq = vec![0u64; size];
        let mut leq = vec![0u64; size];
        for s in 0..size {
            for t in 0..size {
                if cmp.geq(pref, Bundle::from_bits(s as u64), Bundle::from_bits(t as u64)) {
                    geq[s] |= 1 << t;
                    leq[t] |= 1 << s;
                }
            }
        }
        PdTable { geq, leq }
    }

    pub fn is_geq(&self, s: Bundle, t: Bundle) -> bool {
        self.geq[s.bits() as usize] >> t.bits() & 1 == 1
    }

    pub fn is_strict(&self, s: Bundle, t: Bundle) -> bool {
        self.is_geq(s, t) && !self.is_geq(t, s)
    }
}
