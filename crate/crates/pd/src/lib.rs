//! Pairwise dominance (PD) between bundles.
//!
//! `S ⪰ T` under a ranking when some injection maps every object of `T` to a
//! weakly better object of `S`. The fast check walks the ranking once and
//! compares the i-th best objects of both bundles; [`pd_geq_oracle`] decides
//! the same question by bipartite matching and exists to validate it.

mod table;
mod utility;

use draftkit_core::{Bundle, ObjectId, Preference, Problem, Quota, Variant};
use thiserror::Error;

pub use table::PdTable;
pub use utility::{additive_utility, UtilityTable, WeightScheme};

/// Largest bundle the matching oracle accepts.
pub const ORACLE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("bundle of size {0} exceeds the oracle cap of {ORACLE_CAP}")]
    OracleCap(usize),
    #[error("weights must be positive and strictly decreasing in rank (position {0})")]
    NonMonotoneWeights(usize),
    #[error("explicit scheme has {got} weights for {expected} ranked objects")]
    WeightCount { expected: usize, got: usize },
}

/// Both directions of a dominance comparison.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DominanceVerdict {
    pub geq: bool,
    pub strict: bool,
}

/// Base PD check: the i-th best object of `s` is weakly better than the i-th
/// best object of `t`, for every i up to `|t|`.
pub fn pd_geq(pref: &Preference, s: Bundle, t: Bundle) -> bool {
    if t.len() > s.len() {
        return false;
    }
    if t.is_subset(s) {
        return true;
    }
    let mut seen_s = 0usize;
    let mut seen_t = 0usize;
    for &o in pref.ranking() {
        if s.contains(o) {
            seen_s += 1;
        }
        if t.contains(o) {
            seen_t += 1;
            // the seen_t-th best of t sits here; s needs as many objects at or above it
            if seen_s < seen_t {
                return false;
            }
        }
    }
    true
}

/// PD by explicit injection search (augmenting paths) over the relation
/// "weakly better". Refuses bundles larger than [`ORACLE_CAP`].
pub fn pd_geq_oracle(pref: &Preference, s: Bundle, t: Bundle) -> Result<bool, PdError> {
    for b in [s, t] {
        if b.len() > ORACLE_CAP {
            return Err(PdError::OracleCap(b.len()));
        }
    }
    let rank = |o: ObjectId| pref.rank(o).expect("object not ranked");
    let sv: Vec<ObjectId> = s.iter().collect();
    let tv: Vec<ObjectId> = t.iter().collect();
    // adjacency: t-object -> s-objects weakly better than it
    let adj: Vec<Vec<usize>> = tv
        .iter()
        .map(|&x| (0..sv.len()).filter(|&j| rank(sv[j]) <= rank(x)).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; sv.len()];

    fn augment(u: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].map_or(true, |w| augment(w, adj, owner, seen)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }

    for u in 0..tv.len() {
        let mut seen = vec![false; sv.len()];
        if !augment(u, &adj, &mut owner, &mut seen) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quota PD: compare only the best `min(q, |·|)` objects of each bundle.
pub fn pd_geq_quota(pref: &Preference, q: Quota, s: Bundle, t: Bundle) -> bool {
    let ts = pref.top_k(s, q.cap(s.len()));
    let tt = pref.top_k(t, q.cap(t.len()));
    pd_geq(pref, ts, tt)
}

/// PD on the acceptable parts of both bundles.
pub fn pd_geq_unacc(pref: &Preference, s: Bundle, t: Bundle) -> bool {
    let acc = pref.acceptable();
    pd_geq(pref, s & acc, t & acc)
}

/// Which PD variant a comparison uses.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Comparator {
    Base,
    Quota(Quota),
    Unacceptable,
}

impl Comparator {
    /// The comparator agent `idx` uses in `problem`'s model.
    pub fn for_agent(problem: &Problem, idx: usize) -> Comparator {
        match problem.variant() {
            Variant::Fixed | Variant::Variable => Comparator::Base,
            Variant::Quota(q) => Comparator::Quota(q.get(idx)),
            Variant::Unacceptable => Comparator::Unacceptable,
        }
    }

    pub fn geq(self, pref: &Preference, s: Bundle, t: Bundle) -> bool {
        match self {
            Comparator::Base => pd_geq(pref, s, t),
            Comparator::Quota(q) => pd_geq_quota(pref, q, s, t),
            Comparator::Unacceptable => pd_geq_unacc(pref, s, t),
        }
    }

    /// Reduce a bundle to the part this comparator looks at.
    pub fn effective(self, pref: &Preference, s: Bundle) -> Bundle {
        match self {
            Comparator::Base => s,
            Comparator::Quota(q) => pref.top_k(s, q.cap(s.len())),
            Comparator::Unacceptable => s & pref.acceptable(),
        }
    }

    pub fn compare(self, pref: &Preference, s: Bundle, t: Bundle) -> DominanceVerdict {
        let geq = self.geq(pref, s, t);
        DominanceVerdict { geq, strict: geq && !self.geq(pref, t, s) }
    }

    pub fn strictly(self, pref: &Preference, s: Bundle, t: Bundle) -> bool {
        self.compare(pref, s, t).strict
    }
}

/// Agent with preference `pref` holding `own` envies a holder of `other`.
pub fn envies(pref: &Preference, own: Bundle, other: Bundle, cmp: Comparator) -> bool {
    !cmp.geq(pref, own, other)
}
