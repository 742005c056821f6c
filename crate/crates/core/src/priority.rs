use crate::preference::next_permutation;
use crate::AgentId;

/// A strict order on agents, highest priority first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Priority(pub Vec<AgentId>);

impl Priority {
    /// Agents `1..=n` in increasing order.
    pub fn identity(n: usize) -> Self {
        Priority((1..=n as u16).map(AgentId).collect())
    }

    pub fn reversed(&self) -> Self {
        Priority(self.0.iter().rev().copied().collect())
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Zero-based position, i.e. `π(i) - 1`.
    pub fn position(&self, a: AgentId) -> Option<usize> {
        self.0.iter().position(|&x| x == a)
    }

    /// `a` has strictly higher priority than `b`.
    pub fn ranks_above(&self, a: AgentId, b: AgentId) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(x), Some(y)) => x < y,
            _ => false,
        }
    }

    /// The induced order on a subset of agents.
    pub fn restrict_to(&self, agents: &[AgentId]) -> Priority {
        Priority(self.0.iter().copied().filter(|a| agents.contains(a)).collect())
    }

    /// True when this priority orders exactly the given agents.
    pub fn is_permutation_of(&self, agents: &[AgentId]) -> bool {
        let mut a = self.0.clone();
        let mut b = agents.to_vec();
        a.sort();
        b.sort();
        a == b && a.windows(2).all(|w| w[0] != w[1])
    }

    /// Every priority over `agents`, lexicographic in agent ids.
    pub fn all(agents: &[AgentId]) -> Vec<Priority> {
        let mut v = agents.to_vec();
        v.sort();
        let mut out = Vec::new();
        loop {
            out.push(Priority(v.clone()));
            if !next_permutation(&mut v) {
                break;
            }
        }
        out
    }
}

/// Which agent picks at each step of a draft.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PickingSequence {
    /// Round robin in priority order.
    RoundRobin(Priority),
    /// An explicit finite prefix, then round robin.
    Prefix { prefix: Vec<AgentId>, tail: Priority },
    /// Priority order in odd rounds, reversed in even rounds.
    Snake(Priority),
}

impl PickingSequence {
    /// Agent picking at step `k`, counting from 1.
    pub fn agent_at(&self, k: usize) -> AgentId {
        assert!(k >= 1, "steps are counted from 1");
        match self {
            PickingSequence::RoundRobin(p) => p.0[(k - 1) % p.len()],
            PickingSequence::Prefix { prefix, tail } => {
                if k <= prefix.len() {
                    prefix[k - 1]
                } else {
                    tail.0[(k - 1 - prefix.len()) % tail.len()]
                }
            }
            PickingSequence::Snake(p) => {
                let n = p.len();
                let round = (k - 1) / n;
                let pos = (k - 1) % n;
                if round % 2 == 0 {
                    p.0[pos]
                } else {
                    p.0[n - 1 - pos]
                }
            }
        }
    }

    /// The first `len` picking agents.
    pub fn take(&self, len: usize) -> Vec<AgentId> {
        (1..=len).map(|k| self.agent_at(k)).collect()
    }
}
