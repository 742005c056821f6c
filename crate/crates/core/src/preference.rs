use std::fmt;

use crate::{Bundle, CoreError, ObjectId, Pick, Universe, MAX_OBJECTS};

const UNUSED: ObjectId = ObjectId(u8::MAX);

/// A strict ranking of objects, best first, with an optional cutoff.
///
/// With a cutoff `c`, the first `c` ranked objects are acceptable and the
/// rest are ranked below the null object. Without one, every object is
/// acceptable. Problems require rankings of the whole universe; rankings of a
/// subset arise only from [`Preference::restrict`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preference {
    order: [ObjectId; MAX_OBJECTS],
    len: u8,
    cutoff: Option<u8>,
}

impl Preference {
    pub fn new(ranking: &[ObjectId], cutoff: Option<usize>) -> Result<Self, CoreError> {
        if ranking.len() > MAX_OBJECTS {
            return Err(CoreError::UniverseTooLarge(ranking.len()));
        }
        let mut seen = Bundle::EMPTY;
        for &o in ranking {
            if o.index() >= MAX_OBJECTS {
                return Err(CoreError::ObjectOutOfRange(o));
            }
            if seen.contains(o) {
                return Err(CoreError::DuplicateInRanking(o));
            }
            seen = seen.with(o);
        }
        if let Some(c) = cutoff {
            if c > ranking.len() {
                return Err(CoreError::CutoffOutOfRange { cutoff: c, len: ranking.len() });
            }
        }
        let mut order = [UNUSED; MAX_OBJECTS];
        order[..ranking.len()].copy_from_slice(ranking);
        Ok(Preference { order, len: ranking.len() as u8, cutoff: cutoff.map(|c| c as u8) })
    }

    /// A ranking with every object acceptable and no cutoff.
    pub fn complete(ranking: &[ObjectId]) -> Result<Self, CoreError> {
        Self::new(ranking, None)
    }

    /// Convenience constructor from raw indices; panics on invalid input.
    pub fn from_indices(ranking: &[u8], cutoff: Option<usize>) -> Self {
        let r: Vec<ObjectId> = ranking.iter().map(|&i| ObjectId(i)).collect();
        Self::new(&r, cutoff).expect("invalid ranking")
    }

    /// Objects in ranked order, best first.
    pub fn ranking(&self) -> &[ObjectId] {
        &self.order[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The set of ranked objects.
    pub fn domain(&self) -> Bundle {
        self.ranking().iter().copied().collect()
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff.map(usize::from)
    }

    pub fn has_cutoff(&self) -> bool {
        self.cutoff.is_some()
    }

    fn acceptable_len(&self) -> usize {
        self.cutoff.map_or(self.len, |c| c) as usize
    }

    /// Acceptable objects among the ranked ones.
    pub fn acceptable(&self) -> Bundle {
        self.ranking()[..self.acceptable_len()].iter().copied().collect()
    }

    pub fn is_acceptable(&self, o: ObjectId) -> bool {
        self.rank(o).is_some_and(|r| r < self.acceptable_len())
    }

    /// Zero-based position of `o` in the ranking.
    pub fn rank(&self, o: ObjectId) -> Option<usize> {
        self.ranking().iter().position(|&x| x == o)
    }

    /// `x` strictly preferred to `y`. Both must be ranked.
    pub fn prefers(&self, x: ObjectId, y: ObjectId) -> bool {
        let rx = self.rank(x).expect("object not ranked");
        let ry = self.rank(y).expect("object not ranked");
        rx < ry
    }

    /// Best acceptable object of `x`, or `None` (the null object) when `x`
    /// holds no acceptable object.
    pub fn top(&self, x: Bundle) -> Pick {
        self.ranking()[..self.acceptable_len()].iter().copied().find(|&o| x.contains(o))
    }

    /// The `k` best ranked objects of `x`, acceptability ignored.
    ///
    /// # Panics
    /// When `k` exceeds the number of ranked objects in `x`.
    pub fn top_k(&self, x: Bundle, k: usize) -> Bundle {
        let mut out = Bundle::EMPTY;
        let mut left = k;
        for &o in self.ranking() {
            if left == 0 {
                break;
            }
            if x.contains(o) {
                out = out.with(o);
                left -= 1;
            }
        }
        assert!(left == 0, "top_k: k = {k} exceeds |X| = {}", (x & self.domain()).len());
        out
    }

    /// Ordering of `x` consistent with this ranking, with acceptability kept.
    pub fn restrict(&self, x: Bundle) -> Preference {
        let mut order = [UNUSED; MAX_OBJECTS];
        let mut len = 0usize;
        let mut acc = 0usize;
        let al = self.acceptable_len();
        for (r, &o) in self.ranking().iter().enumerate() {
            if x.contains(o) {
                order[len] = o;
                len += 1;
                if r < al {
                    acc += 1;
                }
            }
        }
        Preference { order, len: len as u8, cutoff: self.cutoff.map(|_| acc as u8) }
    }

    /// Same ranking with every object strictly worse than `x` made unacceptable.
    pub fn truncate_at(&self, x: ObjectId) -> Result<Preference, CoreError> {
        if !self.is_acceptable(x) {
            return Err(CoreError::TruncateAtUnacceptable(x));
        }
        let r = self.rank(x).expect("acceptable implies ranked");
        Ok(Preference { cutoff: Some((r + 1) as u8), ..*self })
    }

    /// Same ranking with every object acceptable. A preference that carries
    /// a cutoff keeps one (set to the full length) so it stays in its model.
    pub fn complete_extension(&self) -> Preference {
        Preference { cutoff: self.cutoff.map(|_| self.len), ..*self }
    }

    /// Same ranking with the given cutoff.
    pub fn with_cutoff(&self, cutoff: Option<usize>) -> Result<Preference, CoreError> {
        Preference::new(self.ranking(), cutoff)
    }

    /// Every truncation: same order on a nonempty upper part of the
    /// acceptable prefix, the rest unacceptable in any order. Includes `self`.
    pub fn truncation_family(&self) -> Vec<Preference> {
        let mut out = Vec::new();
        for c in 1..=self.acceptable_len() {
            self.push_tail_orders(c, c..=c, &mut out);
        }
        out
    }

    /// Every extension: the acceptable prefix kept, the remaining objects in
    /// any order with any number of them acceptable. Includes `self`. Empty
    /// when nothing is acceptable.
    pub fn extension_family(&self) -> Vec<Preference> {
        let c = self.acceptable_len();
        let mut out = Vec::new();
        if c > 0 {
            self.push_tail_orders(c, c..=self.len(), &mut out);
        }
        out
    }

    fn push_tail_orders(
        &self,
        keep: usize,
        cutoffs: std::ops::RangeInclusive<usize>,
        out: &mut Vec<Preference>,
    ) {
        let head = &self.ranking()[..keep];
        let mut tail: Vec<ObjectId> = self.ranking()[keep..].to_vec();
        tail.sort();
        loop {
            let mut order = [UNUSED; MAX_OBJECTS];
            order[..keep].copy_from_slice(head);
            order[keep..self.len()].copy_from_slice(&tail);
            for c in cutoffs.clone() {
                out.push(Preference { order, len: self.len, cutoff: Some(c as u8) });
            }
            if !next_permutation(&mut tail) {
                break;
            }
        }
    }

    /// Whether `self` is a truncation of `other`.
    pub fn is_truncation_of(&self, other: &Preference) -> bool {
        let c = self.acceptable_len();
        self.len == other.len
            && c >= 1
            && c <= other.acceptable_len()
            && self.ranking()[..c] == other.ranking()[..c]
    }

    /// Image under an object relabelling `map[old] = new`.
    pub fn relabel(&self, map: &[ObjectId]) -> Preference {
        let mut order = [UNUSED; MAX_OBJECTS];
        for (slot, &o) in order.iter_mut().zip(self.ranking()) {
            *slot = map[o.index()];
        }
        Preference { order, ..*self }
    }

    /// Extend a ranking of a subset to the universe of size `m`: ranked
    /// objects first, then the unranked ones in ascending index order, all
    /// of them below any cutoff.
    pub fn extend_canonically(&self, m: usize) -> Preference {
        let mut order = self.order;
        let mut len = self.len as usize;
        let dom = self.domain();
        for i in 0..m {
            let o = ObjectId(i as u8);
            if !dom.contains(o) {
                order[len] = o;
                len += 1;
            }
        }
        Preference { order, len: len as u8, cutoff: self.cutoff }
    }

    /// All complete rankings of the first `m` objects, lexicographic.
    pub fn all_rankings(m: usize) -> Vec<Preference> {
        Self::rankings_of(Bundle::full(m))
    }

    /// All rankings of exactly the objects of `x`, lexicographic, no cutoff.
    pub fn rankings_of(x: Bundle) -> Vec<Preference> {
        let mut items: Vec<ObjectId> = x.iter().collect();
        let mut out = Vec::new();
        loop {
            out.push(Preference::complete(&items).expect("distinct"));
            if !next_permutation(&mut items) {
                break;
            }
        }
        out
    }

    /// All rankings of the first `m` objects combined with every cutoff `0..=m`.
    pub fn all_with_cutoffs(m: usize) -> Vec<Preference> {
        Self::all_rankings(m)
            .into_iter()
            .flat_map(|p| (0..=m).map(move |c| Preference { cutoff: Some(c as u8), ..p }))
            .collect()
    }

    /// `a>b|c>d` rendering; `|` marks the cutoff when present.
    pub fn format(&self, u: &Universe) -> String {
        let mut s = String::new();
        for (i, &o) in self.ranking().iter().enumerate() {
            if Some(i) == self.cutoff() {
                s.push('|');
            } else if i > 0 {
                s.push('>');
            }
            s.push_str(u.name(o));
        }
        if self.cutoff() == Some(self.len()) {
            s.push('|');
        }
        s
    }

    /// Compact rendering for single-character universes, e.g. `ab|cd`.
    pub fn format_compact(&self, u: &Universe) -> String {
        let mut s = String::new();
        for (i, &o) in self.ranking().iter().enumerate() {
            if Some(i) == self.cutoff() {
                s.push('|');
            }
            s.push_str(u.name(o));
        }
        if self.cutoff() == Some(self.len()) {
            s.push('|');
        }
        s
    }

    /// Parse `a>b|c>d` or the compact `ab|cd` form. The result is not
    /// required to rank the whole universe; problems check completeness.
    pub fn parse(s: &str, u: &Universe) -> Result<Preference, CoreError> {
        let bad = || CoreError::MalformedPreference(s.to_string());
        let text = s.trim();
        let mut ranking = Vec::new();
        let mut cutoff = None;
        let mark = |ranking: &Vec<ObjectId>, cutoff: &mut Option<usize>| {
            if cutoff.is_some() {
                return Err(bad());
            }
            *cutoff = Some(ranking.len());
            Ok(())
        };
        if text.contains('>') || !u.names().iter().all(|n| n.chars().count() == 1) {
            for seg in text.split('>') {
                let parts: Vec<&str> = seg.split('|').collect();
                if parts.len() > 2 {
                    return Err(bad());
                }
                for (pi, part) in parts.iter().enumerate() {
                    if pi == 1 {
                        mark(&ranking, &mut cutoff)?;
                    }
                    let name = part.trim();
                    if name.is_empty() {
                        if parts.len() == 1 {
                            return Err(bad());
                        }
                        continue;
                    }
                    ranking.push(u.object(name)?);
                }
            }
        } else {
            for (i, c) in text.char_indices() {
                if c == '|' {
                    mark(&ranking, &mut cutoff)?;
                } else if !c.is_whitespace() {
                    ranking.push(u.object(&text[i..i + c.len_utf8()])?);
                }
            }
        }
        Preference::new(&ranking, cutoff)
    }
}

impl fmt::Debug for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in self.ranking().iter().enumerate() {
            if Some(i) == self.cutoff() {
                f.write_str("|")?;
            } else if i > 0 {
                f.write_str(">")?;
            }
            write!(f, "{}", o.0)?;
        }
        if self.cutoff() == Some(self.len()) {
            f.write_str("|")?;
        }
        Ok(())
    }
}

/// Advance to the next lexicographic permutation; false after the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
