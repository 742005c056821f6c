//! Rule-space search. One variable per problem key, whose values are the
//! allocations that pass every single-problem axiom; axioms relating several
//! problems become binary constraints between variables.
//!
//! Propagation is queue-driven arc consistency. Search branches on one
//! (variable, value) decision at a time (assign it, or exclude it), picking
//! the variable with fewest values left and, among those, the one with the
//! smallest available set; this follows the induction over growing
//! available sets that pins a draft down.

use std::collections::{HashMap, VecDeque};
use std::sync::RwLock;

use draftkit_axioms::{all_allocations, check_allocation, Axiom, ProblemDomain, NEU_CAP};
use draftkit_core::{AgentId, Allocation, Bundle, ObjectId, Preference, Problem, ProblemKey, Quota};
use draftkit_pd::{Comparator, PdTable};
use draftkit_rules::{KeyMode, Tabulated};
use rayon::prelude::*;

/// Default cap on constraint revisions per solve.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CspError {
    #[error("universe of {0} objects exceeds the solver limit of 6")]
    UniverseTooLarge(usize),
    #[error("problem {problem} has {count} candidate allocations, over the enumeration cap")]
    CandidateCap { problem: String, count: usize },
    #[error("the efficiency oracle refused problem {0}")]
    OracleRefused(String),
}

/// How two bundles (one per side) must relate.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Rel {
    /// `bu ⪰_a bv`.
    Geq,
    /// `bu ⪰_a bv` and `bv ⪰_b bu`.
    Mutual,
    /// not `bv ≻_a bu` and not `bu ≻_b bv`.
    NotBelowMutual,
    /// `bu ⊆ acc` implies `bv = bu`; `acc` is stored in `tb`.
    KeepIfAcceptable,
}

#[derive(Clone, Debug)]
enum Constraint {
    /// Relates agent `ku`'s bundle at `u` to agent `kv`'s bundle at `v`.
    Proj { u: u32, v: u32, ku: u8, kv: u8, rel: Rel, ta: u32, tb: u32, axiom: u8 },
    /// Each value of `u` requires one specific value of another variable
    /// (`None`: no requirement).
    Func { u: u32, reqs: Box<[Option<(u32, u16)>]>, partners: Box<[u32]>, axiom: u8 },
}

pub struct CspVar {
    pub problem: Problem,
    pub key: ProblemKey,
    pub candidates: Vec<Allocation>,
    /// Bundle bits per (candidate, agent), flattened.
    bundles: Vec<u8>,
}

impl CspVar {
    fn bundle(&self, c: usize, k: usize) -> u8 {
        self.bundles[c * self.problem.n() + k]
    }

    fn index_of(&self, a: &Allocation) -> Option<u16> {
        self.candidates.binary_search(a).ok().map(|i| i as u16)
    }
}

/// Live values per variable as one flat bitset.
#[derive(Clone, Debug)]
struct Domains {
    bits: Vec<u64>,
    count: Vec<u32>,
}

/// One propagation event: constraint `constraint` removed `removed` from `var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub constraint: u32,
    pub var: u32,
    pub removed: Vec<u16>,
}

/// Refutation tree. Each leaf empties a variable after its propagation
/// steps; each branch splits on assigning or excluding one value.
#[derive(Clone, Debug)]
pub enum ProofNode {
    Wipeout { steps: Vec<Step>, var: u32 },
    Branch { steps: Vec<Step>, var: u32, value: u16, assign: Box<ProofNode>, exclude: Box<ProofNode> },
}

impl ProofNode {
    pub fn steps(&self) -> &[Step] {
        match self {
            ProofNode::Wipeout { steps, .. } | ProofNode::Branch { steps, .. } => steps,
        }
    }

    /// Variables emptied at the leaves, left to right.
    pub fn emptied(&self) -> Vec<u32> {
        match self {
            ProofNode::Wipeout { var, .. } => vec![*var],
            ProofNode::Branch { assign, exclude, .. } => {
                let mut v = assign.emptied();
                v.extend(exclude.emptied());
                v
            }
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            ProofNode::Wipeout { .. } => 1,
            ProofNode::Branch { assign, exclude, .. } => assign.leaves() + exclude.leaves(),
        }
    }

    pub fn total_steps(&self) -> usize {
        self.steps().len()
            + match self {
                ProofNode::Wipeout { .. } => 0,
                ProofNode::Branch { assign, exclude, .. } => assign.total_steps() + exclude.total_steps(),
            }
    }

    pub fn total_removals(&self) -> usize {
        self.steps().iter().map(|s| s.removed.len()).sum::<usize>()
            + match self {
                ProofNode::Wipeout { .. } => 0,
                ProofNode::Branch { assign, exclude, .. } => assign.total_removals() + exclude.total_removals(),
            }
    }
}

/// Proof that no assignment satisfies the constraints.
#[derive(Clone, Debug)]
pub struct InfeasibilityCertificate {
    pub root: ProofNode,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub revisions: u64,
    pub nodes: u64,
    pub max_depth: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SolveMode {
    FindOne,
    FindAll { limit: usize },
    ProveUnsat,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    /// Solutions as one candidate index per variable. `complete` is false
    /// when the limit cut the enumeration short.
    Sat { solutions: Vec<Vec<u16>>, complete: bool },
    Unsat(InfeasibilityCertificate),
    /// Budget exhausted; nothing is claimed. Solutions found so far are kept.
    Undecided { solutions: Vec<Vec<u16>> },
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn verdict(&self) -> &'static str {
        match self.outcome {
            SolveOutcome::Sat { .. } => "SAT",
            SolveOutcome::Unsat(_) => "UNSAT",
            SolveOutcome::Undecided { .. } => "undecided",
        }
    }
}

pub struct RuleCsp {
    vars: Vec<CspVar>,
    key_mode: KeyMode,
    index: HashMap<ProblemKey, u32>,
    cons: Vec<Constraint>,
    adj: Vec<Vec<u32>>,
    tables: Vec<PdTable>,
    offsets: Vec<usize>,
    init: Domains,
    axioms: Vec<Axiom>,
    universe_size: usize,
    dangling: usize,
}

#[derive(Default)]
struct TableCache {
    ids: HashMap<(Preference, u8, u32), u32>,
    tables: Vec<PdTable>,
}

fn cmp_key(c: Comparator) -> (u8, u32) {
    match c {
        Comparator::Base => (0, 0),
        Comparator::Quota(Quota::Finite(q)) => (1, q),
        Comparator::Quota(Quota::Infinite) => (2, 0),
        Comparator::Unacceptable => (3, 0),
    }
}

struct Builder<'a> {
    domain: &'a ProblemDomain,
    key_mode: KeyMode,
    vars: &'a [CspVar],
    index: &'a HashMap<ProblemKey, u32>,
    cache: RwLock<TableCache>,
    m: usize,
}

/// Per-variable output of constraint generation.
#[derive(Default)]
struct Generated {
    cons: Vec<Constraint>,
    /// Values of this variable ruled out outright.
    pruned: Vec<u16>,
    dangling: usize,
}

impl Builder<'_> {
    fn table(&self, pref: &Preference, cmp: Comparator) -> u32 {
        let (tag, q) = cmp_key(cmp);
        if let Some(&id) = self.cache.read().expect("table cache").ids.get(&(*pref, tag, q)) {
            return id;
        }
        let mut c = self.cache.write().expect("table cache");
        if let Some(&id) = c.ids.get(&(*pref, tag, q)) {
            return id;
        }
        let id = c.tables.len() as u32;
        c.tables.push(PdTable::new(pref, cmp, self.m));
        c.ids.insert((*pref, tag, q), id);
        id
    }

    fn lookup(&self, q: &Problem) -> Option<u32> {
        self.index.get(&self.key_mode.key(q)).copied()
    }

    fn generate(&self, u: u32, axioms: &[(u8, Axiom)]) -> Generated {
        let mut g = Generated::default();
        let var = &self.vars[u as usize];
        let p = &var.problem;
        let n = p.n();
        for (ax_id, axiom) in axioms {
            let ax_id = *ax_id;
            match axiom {
                Axiom::Rm | Axiom::RmVar => {
                    let variable = *axiom == Axiom::RmVar;
                    for &x2 in self.domain.available_sets() {
                        if !x2.is_subset(p.available()) || x2 == p.available() || (x2.is_empty() && !variable) {
                            continue;
                        }
                        let q = self.domain.normalize(p.with_available(x2));
                        let Some(v) = self.lookup(&q) else {
                            g.dangling += 1;
                            continue;
                        };
                        for i in 0..n {
                            let ta = self.table(p.pref(i), Comparator::for_agent(p, i));
                            g.cons.push(Constraint::Proj { u, v, ku: i as u8, kv: i as u8, rel: Rel::Geq, ta, tb: 0, axiom: ax_id });
                        }
                    }
                }
                Axiom::Sp | Axiom::Wsp | Axiom::Tp | Axiom::Ep | Axiom::Ti => {
                    let reports = self.domain.reports(p);
                    for i in 0..n {
                        let truth = *p.pref(i);
                        let cmp = Comparator::for_agent(p, i);
                        let alts = match axiom {
                            Axiom::Tp | Axiom::Ti => truth.truncation_family(),
                            Axiom::Ep => truth.extension_family(),
                            _ => reports.to_vec(),
                        };
                        for r in alts {
                            if r == truth {
                                continue;
                            }
                            let q = p.with_pref(i, r);
                            let Some(v) = self.lookup(&q) else {
                                g.dangling += 1;
                                continue;
                            };
                            if v == u {
                                // same key: every condition holds trivially
                                continue;
                            }
                            let ta = self.table(&truth, cmp);
                            let (rel, tb) = match axiom {
                                // SP/WSP pairs are symmetric: emit once, both directions
                                Axiom::Sp | Axiom::Wsp if v < u => continue,
                                Axiom::Sp => (Rel::Mutual, self.table(&r, Comparator::for_agent(&q, i))),
                                Axiom::Wsp => (Rel::NotBelowMutual, self.table(&r, Comparator::for_agent(&q, i))),
                                Axiom::Ti => (Rel::KeepIfAcceptable, r.acceptable().bits() as u32),
                                _ => (Rel::Geq, 0),
                            };
                            g.cons.push(Constraint::Proj { u, v, ku: i as u8, kv: i as u8, rel, ta, tb, axiom: ax_id });
                        }
                    }
                }
                Axiom::Con | Axiom::TwoCon => {
                    if n < 2 {
                        continue;
                    }
                    let ag = p.agents();
                    for mask in 1u32..(1 << n) - 1 {
                        let keep: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 0).collect();
                        if *axiom == Axiom::TwoCon && keep.len() != 2 {
                            continue;
                        }
                        let keep_ids: Vec<AgentId> = keep.iter().map(|&k| ag[k]).collect();
                        self.func(u, ax_id, &mut g, |a| {
                            let removed =
                                (0..n).filter(|k| mask >> k & 1 == 1).fold(Bundle::EMPTY, |acc, k| acc | a.get(k));
                            let q = self.domain.normalize(p.restrict_agents(&keep_ids, p.available() - removed));
                            (q, a.select(&keep))
                        });
                    }
                }
                Axiom::TCon => {
                    self.func(u, ax_id, &mut g, |a| {
                        let tops = (0..n).fold(Bundle::EMPTY, |acc, i| {
                            match p.pref(i).ranking().iter().find(|o| a.get(i).contains(**o)) {
                                Some(&o) => acc.with(o),
                                None => acc,
                            }
                        });
                        let q = self.domain.normalize(p.with_available(p.available() - tops));
                        let want = Allocation::new((0..n).map(|i| a.get(i) - tops));
                        (q, want)
                    });
                }
                Axiom::Neu | Axiom::TwoNeu => {
                    let x = p.available();
                    if (*axiom == Axiom::TwoNeu && n != 2) || x.len() > NEU_CAP {
                        continue;
                    }
                    for map in relabelings(p.universe_size(), x) {
                        let q = self.domain.normalize(p.relabel(&map));
                        self.func(u, ax_id, &mut g, |a| (q.clone(), a.relabel(&map)));
                    }
                }
                _ => {}
            }
        }
        g.pruned.sort_unstable();
        g.pruned.dedup();
        g
    }

    /// A functional constraint: value `a` of `u` requires partner problem
    /// `q` to take allocation `want`.
    fn func(&self, u: u32, axiom: u8, g: &mut Generated, f: impl Fn(&Allocation) -> (Problem, Allocation)) {
        let var = &self.vars[u as usize];
        let mut reqs = Vec::with_capacity(var.candidates.len());
        let mut partners = Vec::new();
        for (c, a) in var.candidates.iter().enumerate() {
            let (q, want) = f(a);
            let Some(v) = self.lookup(&q) else {
                g.dangling += 1;
                reqs.push(None);
                continue;
            };
            match self.vars[v as usize].index_of(&want) {
                None => {
                    g.pruned.push(c as u16);
                    reqs.push(None);
                }
                Some(idx) if v == u => {
                    if idx as usize != c {
                        g.pruned.push(c as u16);
                    }
                    reqs.push(None);
                }
                Some(idx) => {
                    reqs.push(Some((v, idx)));
                    partners.push(v);
                }
            }
        }
        if partners.is_empty() {
            return;
        }
        partners.sort_unstable();
        partners.dedup();
        g.cons.push(Constraint::Func { u, reqs: reqs.into(), partners: partners.into(), axiom });
    }
}

/// Every permutation of the universe that maps `x` onto a same-size subset,
/// extended to the rest in ascending order.
fn relabelings(m: usize, x: Bundle) -> Vec<Vec<ObjectId>> {
    let xs: Vec<ObjectId> = x.iter().collect();
    let mut out = Vec::new();
    for target in Bundle::full(m).subsets().filter(|t| t.len() == x.len()) {
        let mut img: Vec<ObjectId> = target.iter().collect();
        loop {
            let mut map = vec![ObjectId(0); m];
            for (s, t) in xs.iter().zip(&img) {
                map[s.index()] = *t;
            }
            let rest: Vec<ObjectId> = (Bundle::full(m) - target).iter().collect();
            for (s, t) in (Bundle::full(m) - x).iter().zip(rest) {
                map[s.index()] = t;
            }
            out.push(map);
            if !next_perm(&mut img) {
                break;
            }
        }
    }
    out
}

fn next_perm(v: &mut [ObjectId]) -> bool {
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

fn full_mask(m: usize) -> u64 {
    if m >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << m)) - 1
    }
}

enum Halt {
    Wipeout(u32),
    Budget,
}

struct Search<'a> {
    csp: &'a RuleCsp,
    mode: SolveMode,
    budget: u64,
    stats: SolveStats,
    solutions: Vec<Vec<u16>>,
    out_of_budget: bool,
    buf: Vec<u16>,
}

impl RuleCsp {
    /// Build the CSP for `axioms` over `domain`. Single-problem axioms
    /// filter each variable's candidates; the others become constraints.
    /// Constraints are generated from one representative problem per key.
    pub fn build(domain: &ProblemDomain, axioms: &[Axiom], key_mode: KeyMode) -> Result<RuleCsp, CspError> {
        let m = domain.universe_size();
        if m > PdTable::MAX_UNIVERSE {
            return Err(CspError::UniverseTooLarge(m));
        }
        let mut reps: Vec<Problem> = Vec::new();
        let mut index: HashMap<ProblemKey, u32> = HashMap::new();
        for p in domain.iter() {
            let k = key_mode.key(&p);
            if !index.contains_key(&k) {
                index.insert(k, reps.len() as u32);
                reps.push(p);
            }
        }
        let intra: Vec<&Axiom> = axioms.iter().filter(|a| a.is_intra()).collect();
        let vars: Vec<CspVar> = reps
            .into_par_iter()
            .map(|p| {
                let all = all_allocations(&p, false)
                    .map_err(|e| CspError::CandidateCap { problem: format!("{:?}", p.key()), count: e.0 })?;
                let mut cands = Vec::new();
                for a in all {
                    let mut ok = true;
                    for ax in &intra {
                        if let Some(w) = check_allocation(ax, &p, &a) {
                            if w.detail.starts_with("oracle refused") {
                                return Err(CspError::OracleRefused(format!("{:?}", p.key())));
                            }
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        cands.push(a);
                    }
                }
                cands.sort();
                let n = p.n();
                let mut bundles = vec![0u8; cands.len() * n];
                for (c, a) in cands.iter().enumerate() {
                    for k in 0..n {
                        bundles[c * n + k] = a.get(k).bits() as u8;
                    }
                }
                Ok(CspVar { key: key_mode.key(&p), problem: p, candidates: cands, bundles })
            })
            .collect::<Result<_, _>>()?;

        let inter: Vec<(u8, Axiom)> =
            axioms.iter().enumerate().filter(|(_, a)| !a.is_intra()).map(|(k, a)| (k as u8, a.clone())).collect();
        let builder = Builder { domain, key_mode, vars: &vars, index: &index, cache: RwLock::new(TableCache::default()), m };
        let generated: Vec<Generated> =
            (0..vars.len() as u32).into_par_iter().map(|u| builder.generate(u, &inter)).collect();
        let tables = builder.cache.into_inner().expect("table cache").tables;

        let mut offsets = Vec::with_capacity(vars.len() + 1);
        let mut total = 0usize;
        for v in &vars {
            offsets.push(total);
            total += v.candidates.len().div_ceil(64);
        }
        offsets.push(total);
        let mut init = Domains { bits: vec![0; total], count: vec![0; vars.len()] };
        for (k, v) in vars.iter().enumerate() {
            for c in 0..v.candidates.len() {
                init.bits[offsets[k] + c / 64] |= 1 << (c % 64);
            }
            init.count[k] = v.candidates.len() as u32;
        }
        let mut cons = Vec::new();
        let mut dangling = 0;
        for (u, g) in generated.into_iter().enumerate() {
            for c in g.pruned {
                let w = &mut init.bits[offsets[u] + c as usize / 64];
                if *w >> (c % 64) & 1 == 1 {
                    *w &= !(1 << (c % 64));
                    init.count[u] -= 1;
                }
            }
            dangling += g.dangling;
            cons.extend(g.cons);
        }
        let mut adj = vec![Vec::new(); vars.len()];
        for (cid, c) in cons.iter().enumerate() {
            match c {
                Constraint::Proj { u, v, .. } => {
                    adj[*u as usize].push(cid as u32);
                    adj[*v as usize].push(cid as u32);
                }
                Constraint::Func { u, partners, .. } => {
                    adj[*u as usize].push(cid as u32);
                    for w in partners.iter() {
                        adj[*w as usize].push(cid as u32);
                    }
                }
            }
        }
        Ok(RuleCsp {
            vars,
            key_mode,
            index,
            cons,
            adj,
            tables,
            offsets,
            init,
            axioms: axioms.to_vec(),
            universe_size: m,
            dangling,
        })
    }

    pub fn vars(&self) -> &[CspVar] {
        &self.vars
    }

    pub fn num_constraints(&self) -> usize {
        self.cons.len()
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn key_mode(&self) -> KeyMode {
        self.key_mode
    }

    /// Constraint partners that fell outside the domain and were dropped.
    pub fn dangling(&self) -> usize {
        self.dangling
    }

    pub fn var_of(&self, p: &Problem) -> Option<u32> {
        self.index.get(&self.key_mode.key(p)).copied()
    }

    /// Values left per variable before any propagation.
    pub fn initial_sizes(&self) -> Vec<usize> {
        self.init.count.iter().map(|&c| c as usize).collect()
    }

    /// Values left per variable after propagating the root, or `None` on a wipeout.
    pub fn propagated_sizes(&self, budget: u64) -> Option<Vec<usize>> {
        let mut s = Search::new(self, SolveMode::FindOne, budget);
        let mut d = self.init.clone();
        let mut trace = Vec::new();
        match s.propagate(&mut d, (0..self.vars.len() as u32).collect(), &mut trace) {
            Ok(()) => Some(d.count.iter().map(|&c| c as usize).collect()),
            Err(_) => None,
        }
    }

    /// Name of the axiom behind a constraint.
    pub fn constraint_axiom(&self, cid: u32) -> String {
        let a = match &self.cons[cid as usize] {
            Constraint::Proj { axiom, .. } | Constraint::Func { axiom, .. } => *axiom,
        };
        self.axioms[a as usize].name()
    }

    fn live(&self, d: &Domains, v: u32, c: usize) -> bool {
        d.bits[self.offsets[v as usize] + c / 64] >> (c % 64) & 1 == 1
    }

    fn remove(&self, d: &mut Domains, v: u32, c: usize) {
        d.bits[self.offsets[v as usize] + c / 64] &= !(1 << (c % 64));
        d.count[v as usize] -= 1;
    }

    fn live_values(&self, d: &Domains, v: u32) -> impl Iterator<Item = usize> + '_ {
        let lo = self.offsets[v as usize];
        let hi = self.offsets[v as usize + 1];
        let words: Vec<u64> = d.bits[lo..hi].to_vec();
        words.into_iter().enumerate().flat_map(|(w, mut bits)| {
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    fn allowed_fwd(&self, rel: Rel, ta: u32, tb: u32, b: usize) -> u64 {
        let full = full_mask(self.universe_size);
        let a = &self.tables[ta as usize];
        match rel {
            Rel::Geq => a.geq[b],
            Rel::Mutual => a.geq[b] & self.tables[tb as usize].leq[b],
            Rel::NotBelowMutual => {
                let t = &self.tables[tb as usize];
                full & !(a.leq[b] & !a.geq[b]) & !(t.geq[b] & !t.leq[b])
            }
            Rel::KeepIfAcceptable => {
                if b as u64 & !(tb as u64) == 0 {
                    1 << b
                } else {
                    full
                }
            }
        }
    }

    fn allowed_rev(&self, rel: Rel, ta: u32, tb: u32, t: usize) -> u64 {
        let full = full_mask(self.universe_size);
        let a = &self.tables[ta as usize];
        match rel {
            Rel::Geq => a.leq[t],
            Rel::Mutual => a.leq[t] & self.tables[tb as usize].geq[t],
            Rel::NotBelowMutual => {
                let o = &self.tables[tb as usize];
                full & !(a.geq[t] & !a.leq[t]) & !(o.leq[t] & !o.geq[t])
            }
            Rel::KeepIfAcceptable => {
                let acc = tb as u64;
                let mut mask = 0u64;
                for b in 0..(1usize << self.universe_size) {
                    if b as u64 & !acc != 0 || b == t {
                        mask |= 1 << b;
                    }
                }
                mask
            }
        }
    }

    /// Remove unsupported values of `target` under constraint `cid`;
    /// removed indices go to `out`.
    fn revise(&self, cid: u32, target: u32, d: &mut Domains, out: &mut Vec<u16>) {
        out.clear();
        match &self.cons[cid as usize] {
            Constraint::Proj { u, v, ku, kv, rel, ta, tb, .. } => {
                let (src, ks, kt, fwd) = if target == *v { (*u, *ku, *kv, true) } else { (*v, *kv, *ku, false) };
                let sv = &self.vars[src as usize];
                let mut seen = 0u64;
                for c in self.live_values(d, src) {
                    seen |= 1 << sv.bundle(c, ks as usize);
                }
                let mut allowed = 0u64;
                let mut s = seen;
                while s != 0 {
                    let b = s.trailing_zeros() as usize;
                    s &= s - 1;
                    allowed |= if fwd { self.allowed_fwd(*rel, *ta, *tb, b) } else { self.allowed_rev(*rel, *ta, *tb, b) };
                }
                if allowed == full_mask(self.universe_size) {
                    return;
                }
                let tv = &self.vars[target as usize];
                for c in self.live_values(d, target).collect::<Vec<_>>() {
                    if allowed >> tv.bundle(c, kt as usize) & 1 == 0 {
                        self.remove(d, target, c);
                        out.push(c as u16);
                    }
                }
            }
            Constraint::Func { u, reqs, .. } => {
                if target == *u {
                    for c in self.live_values(d, *u).collect::<Vec<_>>() {
                        if let Some((w, idx)) = reqs[c] {
                            if !self.live(d, w, idx as usize) {
                                self.remove(d, *u, c);
                                out.push(c as u16);
                            }
                        }
                    }
                } else {
                    let n = self.vars[target as usize].candidates.len();
                    let mut allowed = vec![false; n];
                    for c in self.live_values(d, *u) {
                        match reqs[c] {
                            Some((w, idx)) if w == target => allowed[idx as usize] = true,
                            _ => return,
                        }
                    }
                    for c in self.live_values(d, target).collect::<Vec<_>>() {
                        if !allowed[c] {
                            self.remove(d, target, c);
                            out.push(c as u16);
                        }
                    }
                }
            }
        }
    }

    /// Whether value `c` of `target` has support under constraint `cid`,
    /// decided straight from the definition (used by certificate replay).
    fn supported(&self, cid: u32, target: u32, c: usize, d: &Domains) -> bool {
        match &self.cons[cid as usize] {
            Constraint::Proj { u, v, ku, kv, rel, ta, tb, .. } => {
                let (src, ks, kt) = if target == *v { (*u, *ku, *kv) } else { (*v, *kv, *ku) };
                let mine = Bundle::from_bits(self.vars[target as usize].bundle(c, kt as usize) as u64);
                self.live_values(d, src).any(|s| {
                    let other = Bundle::from_bits(self.vars[src as usize].bundle(s, ks as usize) as u64);
                    let (bu, bv) = if target == *v { (other, mine) } else { (mine, other) };
                    self.relation_holds(*rel, *ta, *tb, bu, bv)
                })
            }
            Constraint::Func { u, reqs, .. } => {
                if target == *u {
                    match reqs[c] {
                        Some((w, idx)) => self.live(d, w, idx as usize),
                        None => true,
                    }
                } else {
                    self.live_values(d, *u).any(|s| match reqs[s] {
                        Some((w, idx)) => w != target || idx as usize == c,
                        None => true,
                    })
                }
            }
        }
    }

    fn relation_holds(&self, rel: Rel, ta: u32, tb: u32, bu: Bundle, bv: Bundle) -> bool {
        let a = &self.tables[ta as usize];
        let strictly = |t: &PdTable, s: Bundle, r: Bundle| t.is_strict(s, r);
        match rel {
            Rel::Geq => a.is_geq(bu, bv),
            Rel::Mutual => a.is_geq(bu, bv) && self.tables[tb as usize].is_geq(bv, bu),
            Rel::NotBelowMutual => !strictly(a, bv, bu) && !strictly(&self.tables[tb as usize], bu, bv),
            Rel::KeepIfAcceptable => !bu.is_subset(Bundle::from_bits(tb as u64)) || bu == bv,
        }
    }

    pub fn solve(&self, mode: SolveMode, budget: u64) -> SolveResult {
        // deep searches recurse once per decision
        std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(1 << 29)
                .spawn_scoped(s, || {
                    let mut search = Search::new(self, mode, budget);
                    let roots: Vec<u32> = (0..self.vars.len() as u32).collect();
                    let proof = search.node(self.init.clone(), roots, 0);
                    let solutions = std::mem::take(&mut search.solutions);
                    let outcome = if search.out_of_budget {
                        SolveOutcome::Undecided { solutions }
                    } else if !solutions.is_empty() {
                        let complete = match mode {
                            SolveMode::FindAll { limit } => solutions.len() < limit,
                            _ => false,
                        };
                        SolveOutcome::Sat { solutions, complete }
                    } else {
                        SolveOutcome::Unsat(InfeasibilityCertificate { root: proof.expect("no solutions means a proof") })
                    };
                    SolveResult { outcome, stats: search.stats }
                })
                .expect("spawn solver thread")
                .join()
                .expect("solver thread panicked")
        })
    }

    /// Re-derive every removal of the certificate from the initial domains,
    /// checking each removed value really lacked support, and that every
    /// leaf empties its variable.
    pub fn replay(&self, cert: &InfeasibilityCertificate) -> Result<(), String> {
        self.replay_node(&cert.root, self.init.clone(), "root")
    }

    fn replay_node(&self, node: &ProofNode, mut d: Domains, path: &str) -> Result<(), String> {
        for (k, st) in node.steps().iter().enumerate() {
            if st.constraint as usize >= self.cons.len() || st.var as usize >= self.vars.len() {
                return Err(format!("{path}: step {k} names an unknown constraint or variable"));
            }
            for &c in &st.removed {
                let c = c as usize;
                if c >= self.vars[st.var as usize].candidates.len() || !self.live(&d, st.var, c) {
                    return Err(format!("{path}: step {k} removes value {c} of variable {} which is not live", st.var));
                }
                if self.supported(st.constraint, st.var, c, &d) {
                    return Err(format!(
                        "{path}: step {k} removes a supported value {c} of variable {} ({})",
                        st.var,
                        self.constraint_axiom(st.constraint)
                    ));
                }
            }
            for &c in &st.removed {
                self.remove(&mut d, st.var, c as usize);
            }
        }
        match node {
            ProofNode::Wipeout { var, .. } => {
                if d.count[*var as usize] == 0 {
                    Ok(())
                } else {
                    Err(format!("{path}: variable {var} still has {} values", d.count[*var as usize]))
                }
            }
            ProofNode::Branch { var, value, assign, exclude, .. } => {
                if !self.live(&d, *var, *value as usize) {
                    return Err(format!("{path}: branch value {value} of variable {var} is not live"));
                }
                let mut on = d.clone();
                for c in self.live_values(&d, *var).collect::<Vec<_>>() {
                    if c != *value as usize {
                        self.remove(&mut on, *var, c);
                    }
                }
                self.replay_node(assign, on, &format!("{path}/{var}={value}"))?;
                let mut off = d;
                self.remove(&mut off, *var, *value as usize);
                self.replay_node(exclude, off, &format!("{path}/{var}!={value}"))
            }
        }
    }

    /// Read a solution back as a tabulated rule.
    pub fn to_rule(&self, solution: &[u16], name: &str) -> Tabulated {
        let table = self
            .vars
            .iter()
            .zip(solution)
            .map(|(v, &c)| (v.key.clone(), v.candidates[c as usize].clone()))
            .collect();
        Tabulated::new(name, table, self.key_mode)
    }

    /// The candidate index each variable would take under `rule`, or the
    /// first variable where the rule's allocation is not a candidate.
    pub fn encode(&self, rule: &dyn draftkit_rules::Rule) -> Result<Vec<u16>, u32> {
        self.vars
            .iter()
            .enumerate()
            .map(|(k, v)| v.index_of(&rule.allocate(&v.problem)).ok_or(k as u32))
            .collect()
    }

    /// Whether a full assignment satisfies every constraint (checked pairwise).
    pub fn satisfies(&self, solution: &[u16]) -> bool {
        let mut d = Domains { bits: vec![0; self.init.bits.len()], count: vec![1; self.vars.len()] };
        for (v, &c) in solution.iter().enumerate() {
            if !self.live(&self.init, v as u32, c as usize) {
                return false;
            }
            d.bits[self.offsets[v] + c as usize / 64] |= 1 << (c % 64);
        }
        (0..self.cons.len() as u32).all(|cid| match &self.cons[cid as usize] {
            Constraint::Proj { v, .. } => self.supported(cid, *v, solution[*v as usize] as usize, &d),
            Constraint::Func { u, .. } => self.supported(cid, *u, solution[*u as usize] as usize, &d),
        })
    }
}

impl<'a> Search<'a> {
    fn new(csp: &'a RuleCsp, mode: SolveMode, budget: u64) -> Self {
        Search { csp, mode, budget, stats: SolveStats::default(), solutions: Vec::new(), out_of_budget: false, buf: Vec::new() }
    }

    fn propagate(&mut self, d: &mut Domains, start: Vec<u32>, trace: &mut Vec<Step>) -> Result<(), Halt> {
        let csp = self.csp;
        let mut queued = vec![false; csp.vars.len()];
        let mut queue = VecDeque::with_capacity(start.len());
        for v in start {
            if !queued[v as usize] {
                queued[v as usize] = true;
                queue.push_back(v);
            }
        }
        while let Some(x) = queue.pop_front() {
            queued[x as usize] = false;
            for &cid in &csp.adj[x as usize] {
                let targets: &[u32] = match &csp.cons[cid as usize] {
                    Constraint::Proj { u, v, .. } => {
                        if *u == x {
                            std::slice::from_ref(v)
                        } else {
                            std::slice::from_ref(u)
                        }
                    }
                    Constraint::Func { u, partners, .. } => {
                        if *u == x {
                            partners
                        } else {
                            std::slice::from_ref(u)
                        }
                    }
                };
                for &t in targets {
                    self.stats.revisions += 1;
                    if self.stats.revisions > self.budget {
                        return Err(Halt::Budget);
                    }
                    let mut buf = std::mem::take(&mut self.buf);
                    csp.revise(cid, t, d, &mut buf);
                    if !buf.is_empty() {
                        trace.push(Step { constraint: cid, var: t, removed: buf.clone() });
                        if d.count[t as usize] == 0 {
                            self.buf = buf;
                            return Err(Halt::Wipeout(t));
                        }
                        if !queued[t as usize] {
                            queued[t as usize] = true;
                            queue.push_back(t);
                        }
                    }
                    self.buf = buf;
                }
            }
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.out_of_budget
            || match self.mode {
                SolveMode::FindOne | SolveMode::ProveUnsat => !self.solutions.is_empty(),
                SolveMode::FindAll { limit } => self.solutions.len() >= limit,
            }
    }

    /// Explore one node; returns its refutation if the subtree has no
    /// solution and the search finished it.
    fn node(&mut self, mut d: Domains, changed: Vec<u32>, depth: usize) -> Option<ProofNode> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let mut steps = Vec::new();
        match self.propagate(&mut d, changed, &mut steps) {
            Err(Halt::Budget) => {
                self.out_of_budget = true;
                return None;
            }
            Err(Halt::Wipeout(var)) => return Some(ProofNode::Wipeout { steps, var }),
            Ok(()) => {}
        }
        let csp = self.csp;
        let pick = (0..csp.vars.len() as u32)
            .filter(|&v| d.count[v as usize] > 1)
            .min_by_key(|&v| (d.count[v as usize], csp.vars[v as usize].problem.available().len(), v));
        let Some(var) = pick else {
            let sol: Vec<u16> =
                (0..csp.vars.len() as u32).map(|v| csp.live_values(&d, v).next().expect("singleton") as u16).collect();
            self.solutions.push(sol);
            return None;
        };
        let value = csp.live_values(&d, var).next().expect("nonempty") as u16;
        let mut on = d.clone();
        for c in csp.live_values(&d, var).collect::<Vec<_>>() {
            if c != value as usize {
                csp.remove(&mut on, var, c);
            }
        }
        let assign = self.node(on, vec![var], depth + 1);
        if self.done() {
            return None;
        }
        let mut off = d;
        csp.remove(&mut off, var, value as usize);
        let exclude = self.node(off, vec![var], depth + 1);
        match (assign, exclude) {
            (Some(a), Some(e)) => {
                Some(ProofNode::Branch { steps, var, value, assign: Box::new(a), exclude: Box::new(e) })
            }
            _ => None,
        }
    }
}
