use smallvec::SmallVec;

use crate::{AgentId, AllocationViolation, Bundle, CoreError, ObjectId, Preference};

/// One preference per agent, aligned with [`Problem::agents`].
pub type Profile = SmallVec<[Preference; 4]>;

/// A per-agent cap on bundle size.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quota {
    Finite(u32),
    Infinite,
}

impl Quota {
    /// Operational cap: infinite quotas are bounded by the available set.
    pub fn cap(self, available: usize) -> usize {
        match self {
            Quota::Finite(q) => (q as usize).min(available),
            Quota::Infinite => available,
        }
    }

    pub fn admits(self, size: usize) -> bool {
        match self {
            Quota::Finite(q) => size <= q as usize,
            Quota::Infinite => true,
        }
    }
}

/// Quotas aligned with the problem's agents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quotas(pub Vec<Quota>);

impl Quotas {
    pub fn get(&self, idx: usize) -> Quota {
        self.0[idx]
    }

    /// `min(|X|, Σ q_i)` with infinite quotas counted as `|X|`.
    pub fn assignable(&self, available: usize) -> usize {
        self.0.iter().map(|q| q.cap(available)).sum::<usize>().min(available)
    }
}

/// Which model a problem belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Fixed,
    Quota(Quotas),
    Unacceptable,
    Variable,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum VariantTag {
    Fixed,
    Quota,
    Unacceptable,
    Variable,
}

impl Variant {
    pub fn tag(&self) -> VariantTag {
        match self {
            Variant::Fixed => VariantTag::Fixed,
            Variant::Quota(_) => VariantTag::Quota,
            Variant::Unacceptable => VariantTag::Unacceptable,
            Variant::Variable => VariantTag::Variable,
        }
    }
}

impl VariantTag {
    pub fn name(self) -> &'static str {
        match self {
            VariantTag::Fixed => "fixed",
            VariantTag::Quota => "quota",
            VariantTag::Unacceptable => "unacceptable",
            VariantTag::Variable => "variable",
        }
    }
}

/// A population, an available set, a profile, and the model they live in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Problem {
    universe_size: usize,
    agents: SmallVec<[AgentId; 4]>,
    available: Bundle,
    profile: Profile,
    variant: Variant,
}

impl Problem {
    pub fn new(
        universe_size: usize,
        agents: &[AgentId],
        available: Bundle,
        profile: &[Preference],
        variant: Variant,
    ) -> Result<Self, CoreError> {
        if universe_size > crate::MAX_OBJECTS {
            return Err(CoreError::UniverseTooLarge(universe_size));
        }
        if agents.is_empty() {
            return Err(CoreError::NoAgents);
        }
        for (i, a) in agents.iter().enumerate() {
            if agents[..i].contains(a) {
                return Err(CoreError::DuplicateAgent(*a));
            }
        }
        if profile.len() != agents.len() {
            return Err(CoreError::ProfileLength { agents: agents.len(), prefs: profile.len() });
        }
        let full = Bundle::full(universe_size);
        if !available.is_subset(full) {
            return Err(CoreError::AvailableOutsideUniverse);
        }
        if available.is_empty() && variant != Variant::Variable {
            return Err(CoreError::EmptyAvailable);
        }
        for (a, p) in agents.iter().zip(profile) {
            if p.len() != universe_size || p.domain() != full {
                return Err(CoreError::IncompleteRanking {
                    got: (p.domain() & full).len(),
                    expected: universe_size,
                });
            }
            let wants_cutoff = variant == Variant::Unacceptable;
            if p.has_cutoff() != wants_cutoff {
                let msg = if wants_cutoff {
                    "this model needs an acceptability cutoff"
                } else {
                    "cutoffs are only allowed in the unacceptable-objects model"
                };
                return Err(CoreError::VariantMismatch(*a, msg));
            }
        }
        if let Variant::Quota(q) = &variant {
            if q.0.len() != agents.len() {
                return Err(CoreError::QuotaLength { agents: agents.len(), quotas: q.0.len() });
            }
            if q.0.iter().any(|&x| x == Quota::Finite(0)) {
                return Err(CoreError::ZeroQuota);
            }
        }
        Ok(Problem {
            universe_size,
            agents: agents.into(),
            available,
            profile: profile.into(),
            variant,
        })
    }

    /// Agents `1..=n` on a fixed-model problem.
    pub fn fixed(universe_size: usize, available: Bundle, profile: &[Preference]) -> Result<Self, CoreError> {
        let agents: Vec<AgentId> = (1..=profile.len() as u16).map(AgentId).collect();
        Self::new(universe_size, &agents, available, profile, Variant::Fixed)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn available(&self) -> Bundle {
        self.available
    }

    pub fn profile(&self) -> &[Preference] {
        &self.profile
    }

    pub fn pref(&self, idx: usize) -> &Preference {
        &self.profile[idx]
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn tag(&self) -> VariantTag {
        self.variant.tag()
    }

    pub fn quotas(&self) -> Option<&Quotas> {
        match &self.variant {
            Variant::Quota(q) => Some(q),
            _ => None,
        }
    }

    pub fn index_of(&self, a: AgentId) -> Option<usize> {
        self.agents.iter().position(|&x| x == a)
    }

    pub fn pref_of(&self, a: AgentId) -> Option<&Preference> {
        self.index_of(a).map(|i| &self.profile[i])
    }

    /// Same problem with a different available set (must stay within the
    /// universe; emptiness is the caller's concern).
    pub fn with_available(&self, x: Bundle) -> Problem {
        debug_assert!(x.is_subset(Bundle::full(self.universe_size)));
        Problem { available: x, ..self.clone() }
    }

    /// Same problem with agent at index `idx` reporting `pref` instead.
    pub fn with_pref(&self, idx: usize, pref: Preference) -> Problem {
        debug_assert_eq!(pref.len(), self.universe_size);
        debug_assert_eq!(pref.has_cutoff(), self.profile[idx].has_cutoff());
        let mut p = self.clone();
        p.profile[idx] = pref;
        p
    }

    /// Same problem with the whole profile replaced.
    pub fn with_profile(&self, profile: &[Preference]) -> Problem {
        debug_assert_eq!(profile.len(), self.agents.len());
        Problem { profile: profile.into(), ..self.clone() }
    }

    /// The sub-problem faced by a subset of the agents (in their current
    /// order) on a given available set. Quotas follow their agents.
    pub fn restrict_agents(&self, keep: &[AgentId], available: Bundle) -> Problem {
        let idx: Vec<usize> =
            self.agents.iter().enumerate().filter(|(_, a)| keep.contains(a)).map(|(i, _)| i).collect();
        let variant = match &self.variant {
            Variant::Quota(q) => Variant::Quota(Quotas(idx.iter().map(|&i| q.0[i]).collect())),
            v => v.clone(),
        };
        Problem {
            universe_size: self.universe_size,
            agents: idx.iter().map(|&i| self.agents[i]).collect(),
            available,
            profile: idx.iter().map(|&i| self.profile[i]).collect(),
            variant,
        }
    }

    /// Apply an object relabelling to the available set and profile.
    pub fn relabel(&self, map: &[ObjectId]) -> Problem {
        Problem {
            universe_size: self.universe_size,
            agents: self.agents.clone(),
            available: self.available.relabel(map),
            profile: self.profile.iter().map(|p| p.relabel(map)).collect(),
            variant: self.variant.clone(),
        }
    }

    /// Canonical key with preferences restricted to the available set.
    pub fn key(&self) -> ProblemKey {
        ProblemKey {
            agents: self.agents.clone(),
            available: self.available,
            prefs: self.profile.iter().map(|p| p.restrict(self.available)).collect(),
        }
    }

    /// Canonical key with the full universe rankings.
    pub fn full_key(&self) -> ProblemKey {
        ProblemKey { agents: self.agents.clone(), available: self.available, prefs: self.profile.clone() }
    }
}

/// Canonical identity of a problem for tabulated rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProblemKey {
    pub agents: SmallVec<[AgentId; 4]>,
    pub available: Bundle,
    pub prefs: Profile,
}

/// One bundle per agent, aligned with the problem's agent order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation(pub SmallVec<[Bundle; 4]>);

impl Allocation {
    pub fn new(bundles: impl IntoIterator<Item = Bundle>) -> Self {
        Allocation(bundles.into_iter().collect())
    }

    /// All bundles empty.
    pub fn empty(n: usize) -> Self {
        Allocation(SmallVec::from_elem(Bundle::EMPTY, n))
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.0
    }

    pub fn get(&self, idx: usize) -> Bundle {
        self.0[idx]
    }

    pub fn set(&mut self, idx: usize, b: Bundle) {
        self.0[idx] = b;
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Union of all bundles.
    pub fn assigned(&self) -> Bundle {
        self.0.iter().fold(Bundle::EMPTY, |acc, &b| acc | b)
    }

    /// Number of assigned objects (bundles assumed disjoint).
    pub fn assigned_count(&self) -> usize {
        self.0.iter().map(|b| b.len()).sum()
    }

    pub fn relabel(&self, map: &[ObjectId]) -> Allocation {
        Allocation(self.0.iter().map(|b| b.relabel(map)).collect())
    }

    /// Keep only the bundles at the given indices.
    pub fn select(&self, idx: &[usize]) -> Allocation {
        Allocation(idx.iter().map(|&i| self.0[i]).collect())
    }
}

/// Check disjointness, feasibility and quotas; report the first violation.
pub fn validate_allocation(problem: &Problem, alloc: &Allocation) -> Result<(), AllocationViolation> {
    if alloc.n() != problem.n() {
        return Err(AllocationViolation::WrongAgentCount { expected: problem.n(), got: alloc.n() });
    }
    let agents = problem.agents();
    for (i, &b) in alloc.bundles().iter().enumerate() {
        if let Some(o) = (b - problem.available()).first() {
            return Err(AllocationViolation::OutsideAvailable { agent: agents[i], object: o });
        }
        for (j, &c) in alloc.bundles()[..i].iter().enumerate() {
            if let Some(o) = (b & c).first() {
                return Err(AllocationViolation::Overlap { first: agents[j], second: agents[i], object: o });
            }
        }
    }
    if let Some(q) = problem.quotas() {
        for (i, &b) in alloc.bundles().iter().enumerate() {
            if !q.get(i).admits(b.len()) {
                let quota = match q.get(i) {
                    Quota::Finite(x) => x as usize,
                    Quota::Infinite => usize::MAX,
                };
                return Err(AllocationViolation::QuotaBreach { agent: agents[i], size: b.len(), quota });
            }
        }
    }
    Ok(())
}
