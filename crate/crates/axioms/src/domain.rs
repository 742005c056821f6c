use std::sync::Arc;

use draftkit_core::{AgentId, Bundle, Preference, Problem, Quotas, Variant};
use rayon::prelude::*;

/// How each agent's preference ranges over a block of the domain.
#[derive(Clone, Debug)]
pub enum ProfileMode {
    /// Every listed preference over the whole universe.
    Full(Arc<Vec<Preference>>),
    /// Every ranking of the available set, extended canonically to the
    /// universe. Problems that agree on the available set are identified.
    Restricted,
}

#[derive(Clone, Debug)]
struct Block {
    population: usize,
    available: Bundle,
    space: Arc<Vec<Preference>>,
    start: usize,
    count: usize,
}

/// A finite, deterministically ordered set of problems: populations, then
/// available sets (by size, then bit pattern), then profiles (agent 1's
/// preference most significant).
#[derive(Clone)]
pub struct ProblemDomain {
    universe_size: usize,
    variant: Variant,
    populations: Vec<Vec<AgentId>>,
    available: Vec<Bundle>,
    mode: ProfileMode,
    closure_added: Vec<Bundle>,
    blocks: Vec<Block>,
    len: usize,
}

fn sort_sets(sets: &mut Vec<Bundle>) {
    sets.sort_by_key(|b| (b.len(), b.bits()));
    sets.dedup();
}

impl ProblemDomain {
    /// General constructor. The available sets are closed under nonempty
    /// subsets (plus the empty set in the variable model if it was given);
    /// sets added by the closure are recorded.
    pub fn new(
        universe_size: usize,
        variant: Variant,
        populations: Vec<Vec<AgentId>>,
        available: Vec<Bundle>,
        mode: ProfileMode,
    ) -> Self {
        Self::build(universe_size, variant, populations, available, mode, true)
    }

    fn build(
        universe_size: usize,
        variant: Variant,
        populations: Vec<Vec<AgentId>>,
        available: Vec<Bundle>,
        mode: ProfileMode,
        close: bool,
    ) -> Self {
        assert!(!populations.is_empty(), "a domain needs at least one population");
        if let Variant::Quota(q) = &variant {
            assert!(
                populations.iter().all(|p| p.len() == q.0.len()),
                "quota domains need one quota per agent"
            );
        }
        let mut given = available.clone();
        sort_sets(&mut given);
        let mut closed = if close { Vec::new() } else { given.clone() };
        for &x in given.iter().filter(|_| close) {
            for s in x.subsets() {
                if !s.is_empty() || (variant == Variant::Variable && given.contains(&Bundle::EMPTY)) {
                    closed.push(s);
                }
            }
        }
        sort_sets(&mut closed);
        let closure_added = closed.iter().copied().filter(|s| !given.contains(s)).collect();
        let mut d = ProblemDomain {
            universe_size,
            variant,
            populations,
            available: closed,
            mode,
            closure_added,
            blocks: Vec::new(),
            len: 0,
        };
        d.build_blocks();
        d
    }

    fn build_blocks(&mut self) {
        let mut start = 0;
        let mut blocks = Vec::new();
        for (pi, pop) in self.populations.iter().enumerate() {
            for &x in &self.available {
                let space = match &self.mode {
                    ProfileMode::Full(s) => s.clone(),
                    ProfileMode::Restricted => Arc::new(
                        Preference::rankings_of(x)
                            .iter()
                            .map(|p| p.extend_canonically(self.universe_size))
                            .collect(),
                    ),
                };
                let count = space.len().pow(pop.len() as u32);
                blocks.push(Block { population: pi, available: x, space, start, count });
                start += count;
            }
        }
        self.blocks = blocks;
        self.len = start;
    }

    /// Agents `1..=n`, every nonempty subset of an `m`-object universe,
    /// every complete ranking.
    pub fn fixed(n: usize, m: usize) -> Self {
        Self::new(
            m,
            Variant::Fixed,
            vec![agents(n)],
            vec![Bundle::full(m)],
            ProfileMode::Full(Arc::new(Preference::all_rankings(m))),
        )
    }

    pub fn quota(m: usize, quotas: Quotas) -> Self {
        let n = quotas.0.len();
        Self::new(
            m,
            Variant::Quota(quotas),
            vec![agents(n)],
            vec![Bundle::full(m)],
            ProfileMode::Full(Arc::new(Preference::all_rankings(m))),
        )
    }

    /// Every ranking with every cutoff.
    pub fn unacceptable(n: usize, m: usize) -> Self {
        Self::new(
            m,
            Variant::Unacceptable,
            vec![agents(n)],
            vec![Bundle::full(m)],
            ProfileMode::Full(Arc::new(Preference::all_with_cutoffs(m))),
        )
    }

    /// Every nonempty subset of `potential` as a population, every subset
    /// of the universe (the empty set included) as an available set.
    pub fn variable(potential: &[AgentId], m: usize) -> Self {
        let mut pops = Vec::new();
        for mask in 1u32..(1 << potential.len()) {
            pops.push(
                potential.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &a)| a).collect(),
            );
        }
        pops.sort_by_key(|p: &Vec<AgentId>| (p.len(), p.clone()));
        Self::variable_with(pops, m)
    }

    pub fn variable_with(populations: Vec<Vec<AgentId>>, m: usize) -> Self {
        Self::new(
            m,
            Variant::Variable,
            populations,
            vec![Bundle::full(m), Bundle::EMPTY],
            ProfileMode::Restricted,
        )
    }

    /// Restrict the available sets to the given ones (closed under subsets).
    pub fn with_available_sets(self, sets: Vec<Bundle>) -> Self {
        Self::new(self.universe_size, self.variant, self.populations, sets, self.mode)
    }

    /// Exactly the given available sets, without subset closure. Resource
    /// monotonicity checks then only compare sets that are present.
    pub fn with_exact_sets(self, sets: Vec<Bundle>) -> Self {
        Self::build(self.universe_size, self.variant, self.populations, sets, self.mode, false)
    }

    pub fn with_populations(self, populations: Vec<Vec<AgentId>>) -> Self {
        Self::new(self.universe_size, self.variant, populations, self.available, self.mode)
    }

    pub fn with_mode(self, mode: ProfileMode) -> Self {
        Self::new(self.universe_size, self.variant, self.populations, self.available, mode)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn populations(&self) -> &[Vec<AgentId>] {
        &self.populations
    }

    pub fn available_sets(&self) -> &[Bundle] {
        &self.available
    }

    pub fn mode(&self) -> &ProfileMode {
        &self.mode
    }

    /// Sets that were not supplied but added to close the domain under subsets.
    pub fn closure_added(&self) -> &[Bundle] {
        &self.closure_added
    }

    /// Union of the populations, ascending.
    pub fn potential_agents(&self) -> Vec<AgentId> {
        let mut v: Vec<AgentId> = self.populations.iter().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains_available(&self, x: Bundle) -> bool {
        self.available.binary_search_by_key(&(x.len(), x.bits()), |b| (b.len(), b.bits())).is_ok()
    }

    fn block_of(&self, idx: usize) -> &Block {
        let k = self.blocks.partition_point(|b| b.start + b.count <= idx);
        &self.blocks[k]
    }

    /// The problem at position `idx` of the enumeration.
    pub fn problem(&self, idx: usize) -> Problem {
        assert!(idx < self.len, "domain index {idx} out of range {}", self.len);
        let b = self.block_of(idx);
        let pop = &self.populations[b.population];
        let s = b.space.len();
        let mut local = idx - b.start;
        let mut prefs = vec![b.space[0]; pop.len()];
        for slot in prefs.iter_mut().rev() {
            *slot = b.space[local % s];
            local /= s;
        }
        self.make(pop, b.available, &prefs)
    }

    fn make(&self, pop: &[AgentId], x: Bundle, prefs: &[Preference]) -> Problem {
        let variant = match &self.variant {
            Variant::Quota(q) => Variant::Quota(q.clone()),
            v => v.clone(),
        };
        Problem::new(self.universe_size, pop, x, prefs, variant).expect("domain problems are valid")
    }

    pub fn iter(&self) -> impl Iterator<Item = Problem> + '_ {
        (0..self.len).map(move |i| self.problem(i))
    }

    /// First `Some` in enumeration order, evaluated in parallel.
    pub fn find_first<T: Send>(&self, f: impl Fn(&Problem) -> Option<T> + Sync + Send) -> Option<T> {
        (0..self.len).into_par_iter().find_map_first(|i| f(&self.problem(i)))
    }

    /// Blocks as (population, available set, preference space).
    pub fn blocks(&self) -> impl Iterator<Item = (&[AgentId], Bundle, &[Preference])> + '_ {
        self.blocks.iter().map(|b| (&self.populations[b.population][..], b.available, &b.space[..]))
    }

    /// Build a domain problem from explicit parts (used by block-level checks).
    pub fn assemble(&self, pop: &[AgentId], x: Bundle, prefs: &[Preference]) -> Problem {
        self.make(pop, x, prefs)
    }

    /// The preferences an agent may report at `problem`.
    pub fn reports(&self, problem: &Problem) -> Arc<Vec<Preference>> {
        match &self.mode {
            ProfileMode::Full(s) => s.clone(),
            ProfileMode::Restricted => Arc::new(
                Preference::rankings_of(problem.available())
                    .iter()
                    .map(|p| p.extend_canonically(self.universe_size))
                    .collect(),
            ),
        }
    }

    /// Put a derived problem into the domain's canonical form.
    pub fn normalize(&self, p: Problem) -> Problem {
        match self.mode {
            ProfileMode::Full(_) => p,
            ProfileMode::Restricted => canonical(&p),
        }
    }

    /// Number of problems whose available set has more than `k` objects.
    pub fn count_larger_than(&self, k: usize) -> usize {
        self.blocks.iter().filter(|b| b.available.len() > k).map(|b| b.count).sum()
    }
}

/// Preferences replaced by their restriction to the available set,
/// extended canonically.
pub fn canonical(p: &Problem) -> Problem {
    let x = p.available();
    let m = p.universe_size();
    let prefs: Vec<Preference> = p.profile().iter().map(|q| q.restrict(x).extend_canonically(m)).collect();
    p.with_profile(&prefs)
}

/// Agents `1..=n`.
pub fn agents(n: usize) -> Vec<AgentId> {
    (1..=n as u16).map(AgentId).collect()
}
