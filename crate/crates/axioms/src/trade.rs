use draftkit_core::{AgentId, Allocation, Bundle, ObjectId, Priority, Problem, Variant};
use draftkit_pd::Comparator;

/// Directed edges `(i, x) -> (j, y)` with `x` held by `i`, `y` strictly
/// better for `i`, and `j != i`, over every agent and universe object.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TradeRelation {
    pub edges: Vec<((AgentId, ObjectId), (AgentId, ObjectId))>,
    holder: Vec<Option<usize>>,
    agents: Vec<AgentId>,
    better: Vec<Vec<ObjectId>>,
}

pub fn build_trade_relation(problem: &Problem, alloc: &Allocation) -> TradeRelation {
    let m = problem.universe_size();
    let mut holder = vec![None; m];
    for (i, b) in alloc.bundles().iter().enumerate() {
        for o in b.iter() {
            holder[o.index()] = Some(i);
        }
    }
    let mut edges = Vec::new();
    let mut better = vec![Vec::new(); m];
    for (i, b) in alloc.bundles().iter().enumerate() {
        let pref = problem.pref(i);
        for x in b.iter() {
            let r = pref.rank(x).expect("ranked");
            for &y in &pref.ranking()[..r] {
                better[x.index()].push(y);
                for (j, &aj) in problem.agents().iter().enumerate() {
                    if j != i {
                        edges.push(((problem.agents()[i], x), (aj, y)));
                    }
                }
            }
        }
    }
    TradeRelation { edges, holder, agents: problem.agents().to_vec(), better }
}

impl TradeRelation {
    /// A cycle of held pairs, if any (only held pairs have successors).
    pub fn find_cycle(&self) -> Option<Vec<(AgentId, ObjectId)>> {
        let m = self.holder.len();
        // 0 unvisited, 1 on stack, 2 done
        let mut state = vec![0u8; m];
        let mut stack: Vec<ObjectId> = Vec::new();
        for s in 0..m {
            if self.holder[s].is_none() || state[s] != 0 {
                continue;
            }
            if let Some(c) = self.dfs(ObjectId(s as u8), &mut state, &mut stack) {
                return Some(c);
            }
        }
        None
    }

    fn succ(&self, x: ObjectId) -> impl Iterator<Item = ObjectId> + '_ {
        let hx = self.holder[x.index()];
        self.better[x.index()].iter().copied().filter(move |y| {
            matches!(self.holder[y.index()], Some(h) if Some(h) != hx)
        })
    }

    fn dfs(&self, x: ObjectId, state: &mut [u8], stack: &mut Vec<ObjectId>) -> Option<Vec<(AgentId, ObjectId)>> {
        state[x.index()] = 1;
        stack.push(x);
        let next: Vec<ObjectId> = self.succ(x).collect();
        for y in next {
            match state[y.index()] {
                1 => {
                    let from = stack.iter().position(|&o| o == y).expect("on stack");
                    return Some(
                        stack[from..]
                            .iter()
                            .map(|&o| (self.agents[self.holder[o.index()].expect("held")], o))
                            .collect(),
                    );
                }
                0 => {
                    if let Some(c) = self.dfs(y, state, stack) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        stack.pop();
        state[x.index()] = 2;
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }
}

/// Upper bound on `(n + 1)^|X|` for the brute-force efficiency oracle.
pub const PARETO_CAP: usize = 15_625;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("efficiency oracle refused: {0} candidate allocations exceed the cap of {PARETO_CAP}")]
pub struct OracleRefused(pub usize);

/// Every feasible allocation of the problem's available set: disjoint,
/// within quotas, and (unacceptable-objects model, when `ir_only`) giving
/// nobody an unacceptable object. Objects may stay unassigned.
pub fn all_allocations(problem: &Problem, ir_only: bool) -> Result<Vec<Allocation>, OracleRefused> {
    let n = problem.n();
    let objs: Vec<ObjectId> = problem.available().iter().collect();
    let total = (n + 1).checked_pow(objs.len() as u32).unwrap_or(usize::MAX);
    if total > PARETO_CAP {
        return Err(OracleRefused(total));
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; objs.len()];
    'outer: loop {
        let mut a = Allocation::empty(n);
        let mut ok = true;
        for (k, &d) in digits.iter().enumerate() {
            if d > 0 {
                let i = d - 1;
                if ir_only && !problem.pref(i).is_acceptable(objs[k]) {
                    ok = false;
                    break;
                }
                a.set(i, a.get(i).with(objs[k]));
            }
        }
        if ok {
            if let Some(q) = problem.quotas() {
                ok = (0..n).all(|i| q.get(i).admits(a.get(i).len()));
            }
        }
        if ok {
            out.push(a);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d <= n {
                continue 'outer;
            }
            *d = 0;
        }
        break;
    }
    Ok(out)
}

/// Whether `b` weakly dominates `a` for every agent.
pub fn weakly_dominates(problem: &Problem, b: &Allocation, a: &Allocation) -> bool {
    (0..problem.n()).all(|i| Comparator::for_agent(problem, i).geq(problem.pref(i), b.get(i), a.get(i)))
}

/// Brute-force efficiency: no other feasible allocation makes every agent
/// weakly better off. In the unacceptable-objects model `a` must be IR and
/// only IR competitors count.
pub fn pareto_oracle(problem: &Problem, a: &Allocation) -> Result<bool, OracleRefused> {
    let unacc = *problem.variant() == Variant::Unacceptable;
    if unacc && !(0..problem.n()).all(|i| a.get(i).is_subset(problem.pref(i).acceptable())) {
        // refusal still applies so callers see a consistent cap
        all_allocations(problem, true)?;
        return Ok(false);
    }
    let all = all_allocations(problem, unacc)?;
    Ok(!all.iter().any(|b| b != a && weakly_dominates(problem, b, a)))
}

/// Same, given a precomputed candidate list.
pub fn pareto_among(problem: &Problem, a: &Allocation, candidates: &[Allocation]) -> bool {
    if *problem.variant() == Variant::Unacceptable
        && !(0..problem.n()).all(|i| a.get(i).is_subset(problem.pref(i).acceptable()))
    {
        return false;
    }
    !candidates.iter().any(|b| b != a && weakly_dominates(problem, b, a))
}

/// All objects of `x` assigned.
pub fn non_wasteful(a: &Allocation, x: Bundle) -> bool {
    a.assigned() == x
}

/// Every bundle acceptable to its holder.
pub fn individually_rational(problem: &Problem, a: &Allocation) -> bool {
    (0..problem.n()).all(|i| a.get(i).is_subset(problem.pref(i).acceptable()))
}

/// Every object acceptable to someone is assigned.
pub fn non_wasteful_star(problem: &Problem, a: &Allocation) -> bool {
    let wanted = problem.profile().iter().fold(Bundle::EMPTY, |acc, p| acc | p.acceptable());
    (wanted & problem.available()).is_subset(a.assigned())
}

/// Efficiency through its characterization: NW and acyclic trades, with IR
/// and NW* in place of NW for the unacceptable-objects model.
pub fn efficient_by_characterization(problem: &Problem, a: &Allocation) -> bool {
    let acyclic = build_trade_relation(problem, a).is_acyclic();
    match problem.variant() {
        Variant::Unacceptable => individually_rational(problem, a) && non_wasteful_star(problem, a) && acyclic,
        _ => non_wasteful(a, problem.available()) && acyclic,
    }
}

/// The agent whose bundle size matches every higher-priority agent and
/// exceeds every lower-priority agent by exactly one.
pub fn critical_agent(problem: &Problem, a: &Allocation, pi: &Priority) -> Option<AgentId> {
    let order = pi.restrict_to(problem.agents());
    let sizes: Vec<usize> =
        order.agents().iter().map(|&ag| a.get(problem.index_of(ag).expect("agent in problem")).len()).collect();
    (0..sizes.len()).find_map(|k| {
        let s = sizes[k];
        let above = sizes[..k].iter().all(|&t| t == s);
        let below = sizes[k + 1..].iter().all(|&t| t + 1 == s);
        (above && below).then(|| order.agents()[k])
    })
}
