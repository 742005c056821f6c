use draftkit_core::{
    AgentId, Allocation, Pick, PickingSequence, Priority, Problem, Quota, Quotas, Universe,
};

/// One step of a draft: who picked, and what (`None` is the null object).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    /// Step index, counting from 1.
    pub step: usize,
    pub agent: AgentId,
    pub pick: Pick,
}

/// The ordered selections a draft made.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelectionTrace {
    pub steps: Vec<Selection>,
}

impl SelectionTrace {
    /// Real objects in selection order.
    pub fn picks(&self) -> Vec<draftkit_core::ObjectId> {
        self.steps.iter().filter_map(|s| s.pick).collect()
    }

    /// `1:a, 2:c, ...` rendering.
    pub fn render(&self, u: &Universe) -> String {
        self.steps
            .iter()
            .map(|s| format!("{}:{}", s.agent, u.fmt_pick(s.pick)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn index_of(problem: &Problem, a: AgentId) -> usize {
    problem
        .index_of(a)
        .unwrap_or_else(|| panic!("picking sequence names agent {a}, who is not in the problem"))
}

/// How a sequential engine stops.
#[derive(Copy, Clone)]
enum Stop {
    /// When nothing is left to pick.
    Exhausted,
    /// Only after `n` consecutive null selections.
    NullRun,
}

fn run(problem: &Problem, seq: &PickingSequence, quotas: Option<&Quotas>, stop: Stop) -> (Allocation, SelectionTrace) {
    let n = problem.n();
    let mut bundles = Allocation::empty(n);
    let mut trace = SelectionTrace::default();
    let mut remaining = problem.available();
    let mut turns = vec![0usize; n];
    let mut null_run = 0usize;
    let mut k = 0usize;
    loop {
        if matches!(stop, Stop::Exhausted) && remaining.is_empty() {
            break;
        }
        k += 1;
        let agent = seq.agent_at(k);
        let i = index_of(problem, agent);
        let under_quota = quotas.map_or(true, |q| match q.get(i) {
            Quota::Finite(c) => turns[i] < c as usize,
            Quota::Infinite => true,
        });
        turns[i] += 1;
        let pick = if under_quota { problem.pref(i).top(remaining) } else { None };
        trace.steps.push(Selection { step: k, agent, pick });
        match pick {
            Some(o) => {
                remaining = remaining.without(o);
                bundles.set(i, bundles.get(i).with(o));
                null_run = 0;
            }
            None => {
                null_run += 1;
                // with no cutoffs or quotas this only happens once X is empty
                if null_run >= n {
                    break;
                }
            }
        }
    }
    (bundles, trace)
}

/// Sequential picking along an arbitrary picking sequence until the
/// available set is exhausted.
pub fn draft(problem: &Problem, seq: &PickingSequence) -> (Allocation, SelectionTrace) {
    run(problem, seq, None, Stop::Exhausted)
}

/// Round-robin draft in priority order.
pub fn draft_priority(problem: &Problem, pi: &Priority) -> (Allocation, SelectionTrace) {
    draft(problem, &PickingSequence::RoundRobin(pi.restrict_to(problem.agents())))
}

/// Round-robin draft where an agent whose turns so far have reached her
/// quota selects the null object; stops after `n` consecutive nulls.
pub fn draft_quota(problem: &Problem, pi: &Priority, q: &Quotas) -> (Allocation, SelectionTrace) {
    run(problem, &PickingSequence::RoundRobin(pi.restrict_to(problem.agents())), Some(q), Stop::NullRun)
}

/// Round-robin draft where agents select the null object when nothing
/// acceptable remains; stops after `n` consecutive nulls.
pub fn u_draft(problem: &Problem, pi: &Priority) -> (Allocation, SelectionTrace) {
    run(problem, &PickingSequence::RoundRobin(pi.restrict_to(problem.agents())), None, Stop::NullRun)
}

/// Draft for a variable population: `pi` orders a superset of the agents.
pub fn draft_variable(problem: &Problem, pi: &Priority) -> (Allocation, SelectionTrace) {
    draft_priority(problem, pi)
}

/// Odd rounds in priority order, even rounds reversed.
pub fn snake_draft(problem: &Problem, pi: &Priority) -> (Allocation, SelectionTrace) {
    draft(problem, &PickingSequence::Snake(pi.restrict_to(problem.agents())))
}

/// Agents in priority order each take every remaining object they find
/// acceptable (in quota problems, their best remaining objects up to quota).
pub fn serial_dictatorship(problem: &Problem, pi: &Priority) -> Allocation {
    let mut out = Allocation::empty(problem.n());
    let mut remaining = problem.available();
    for &a in pi.restrict_to(problem.agents()).agents() {
        let i = index_of(problem, a);
        let pref = problem.pref(i);
        let mut take = remaining & pref.acceptable();
        if let Some(q) = problem.quotas() {
            take = pref.top_k(take, q.get(i).cap(take.len()));
        }
        out.set(i, take);
        remaining = remaining - take;
    }
    out
}

/// The highest-priority agent receives the whole available set.
pub fn pi_dictatorship(problem: &Problem, pi: &Priority) -> Allocation {
    let mut out = Allocation::empty(problem.n());
    if let Some(&a) = pi.restrict_to(problem.agents()).agents().first() {
        out.set(index_of(problem, a), problem.available());
    }
    out
}

/// Everyone receives the empty bundle.
pub fn null_allocation(problem: &Problem) -> Allocation {
    Allocation::empty(problem.n())
}
