use draftkit_core::{Bundle, Preference, MAX_OBJECTS};
use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::PdError;

type Q = Ratio<i128>;

/// A way to turn a ranking into per-object additive weights that are
/// positive and strictly decreasing in rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightScheme {
    /// `2^-r` for the object ranked `r`-th (1-based).
    Geometric,
    /// `m - r + 1` for the object ranked `r`-th among `m`.
    Linear,
    /// Distinct random positive integers, sorted, from a seeded stream.
    Random { seed: u64 },
    /// Caller-supplied weights by rank position, best first.
    Explicit(Vec<Ratio<i128>>),
}

impl WeightScheme {
    /// Weights by rank position for a ranking of `m` objects.
    pub fn rank_weights(&self, m: usize) -> Result<Vec<Q>, PdError> {
        let w: Vec<Q> = match self {
            WeightScheme::Geometric => (1..=m).map(|r| Q::new(1, 1i128 << r)).collect(),
            WeightScheme::Linear => (1..=m).map(|r| Q::from_integer((m - r + 1) as i128)).collect(),
            WeightScheme::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut vals: Vec<i128> = Vec::with_capacity(m);
                while vals.len() < m {
                    let v = rng.gen_range(1..=1_000_000i128);
                    if !vals.contains(&v) {
                        vals.push(v);
                    }
                }
                vals.sort_unstable_by(|a, b| b.cmp(a));
                vals.into_iter().map(Q::from_integer).collect()
            }
            WeightScheme::Explicit(w) => {
                if w.len() != m {
                    return Err(PdError::WeightCount { expected: m, got: w.len() });
                }
                w.clone()
            }
        };
        for (i, x) in w.iter().enumerate() {
            if *x <= Q::zero() || (i > 0 && *x >= w[i - 1]) {
                return Err(PdError::NonMonotoneWeights(i));
            }
        }
        Ok(w)
    }

    pub fn name(&self) -> String {
        match self {
            WeightScheme::Geometric => "geometric".into(),
            WeightScheme::Linear => "linear".into(),
            WeightScheme::Random { seed } => format!("random(seed={seed})"),
            WeightScheme::Explicit(_) => "explicit".into(),
        }
    }
}

/// Sum of the scheme's weights over `s`. Under a cutoff only acceptable
/// objects count.
pub fn additive_utility(pref: &Preference, scheme: &WeightScheme, s: Bundle) -> Result<Q, PdError> {
    Ok(UtilityTable::new(pref, scheme)?.utility(s))
}

/// Per-object weights of one preference under one scheme.
#[derive(Clone, Debug)]
pub struct UtilityTable {
    weight: Vec<Q>,
}

impl UtilityTable {
    pub fn new(pref: &Preference, scheme: &WeightScheme) -> Result<Self, PdError> {
        let rw = scheme.rank_weights(pref.len())?;
        let acc = pref.acceptable();
        let mut weight = vec![Q::zero(); MAX_OBJECTS];
        for (r, &o) in pref.ranking().iter().enumerate() {
            if acc.contains(o) {
                weight[o.index()] = rw[r];
            }
        }
        Ok(UtilityTable { weight })
    }

    pub fn utility(&self, s: Bundle) -> Q {
        s.iter().fold(Q::zero(), |acc, o| acc + self.weight[o.index()])
    }

    /// Utility of every bundle over a universe of `m ≤ 16` objects, by bits.
    pub fn all_bundles(&self, m: usize) -> Vec<Q> {
        assert!(m <= 16);
        let mut out = vec![Q::zero(); 1 << m];
        for bits in 1usize..(1 << m) {
            let low = bits.trailing_zeros() as usize;
            out[bits] = out[bits & (bits - 1)] + self.weight[low];
        }
        out
    }
}
