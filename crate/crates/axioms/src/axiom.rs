use std::fmt;

use draftkit_core::{AgentId, Allocation, Bundle, ObjectId, Priority, Problem, Quota, Universe, Variant};
use draftkit_pd::Comparator;
use draftkit_rules::Rule;

use crate::domain::ProblemDomain;
use crate::trade::{build_trade_relation, individually_rational, non_wasteful_star, pareto_oracle};

/// Bijection enumeration for neutrality stops above this many objects.
pub const NEU_CAP: usize = 4;

/// The properties a rule can be checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    Ef,
    Rp(Priority),
    Wrp(Priority),
    Ef1,
    Nw,
    Rt,
    /// NW and RT (IR, NW*, RT with unacceptable objects; the brute-force
    /// oracle with quotas).
    Eff,
    /// Brute-force Pareto oracle.
    Pareto,
    Rm,
    Sp,
    Wsp,
    Ir,
    NwStar,
    WrpStar(Priority),
    Tp,
    Ep,
    Ti,
    WrpQuota(Priority),
    NwQuota,
    Con,
    TwoCon,
    TCon,
    Neu,
    TwoNeu,
    /// Resource monotonicity with preferences restricted to the smaller set.
    RmVar,
}

impl Axiom {
    pub fn name(&self) -> String {
        let s = match self {
            Axiom::Ef => "EF",
            Axiom::Rp(_) => "RP",
            Axiom::Wrp(_) => "WRP",
            Axiom::Ef1 => "EF1",
            Axiom::Nw => "NW",
            Axiom::Rt => "RT",
            Axiom::Eff => "EFF",
            Axiom::Pareto => "PARETO",
            Axiom::Rm => "RM",
            Axiom::Sp => "SP",
            Axiom::Wsp => "WSP",
            Axiom::Ir => "IR",
            Axiom::NwStar => "NW*",
            Axiom::WrpStar(_) => "WRP*",
            Axiom::Tp => "TP",
            Axiom::Ep => "EP",
            Axiom::Ti => "TI",
            Axiom::WrpQuota(_) => "WRPq",
            Axiom::NwQuota => "NWq",
            Axiom::Con => "CON",
            Axiom::TwoCon => "2-CON",
            Axiom::TCon => "T-CON",
            Axiom::Neu => "NEU",
            Axiom::TwoNeu => "2-NEU",
            Axiom::RmVar => "RM-VAR",
        };
        match self.priority() {
            Some(p) => format!("{s}-{}", fmt_priority(p)),
            None => s.to_string(),
        }
    }

    /// Whether the axiom constrains one problem at a time.
    pub fn is_intra(&self) -> bool {
        matches!(
            self,
            Axiom::Ef
                | Axiom::Rp(_)
                | Axiom::Wrp(_)
                | Axiom::Ef1
                | Axiom::Nw
                | Axiom::Rt
                | Axiom::Eff
                | Axiom::Pareto
                | Axiom::Ir
                | Axiom::NwStar
                | Axiom::WrpStar(_)
                | Axiom::WrpQuota(_)
                | Axiom::NwQuota
        )
    }

    pub fn priority(&self) -> Option<&Priority> {
        match self {
            Axiom::Rp(p) | Axiom::Wrp(p) | Axiom::WrpStar(p) | Axiom::WrpQuota(p) => Some(p),
            _ => None,
        }
    }

    /// Parse a name such as `EF1`, `RP`, `WRP*`, `2-CON`; priority-based
    /// axioms take `pi`. Case-insensitive; `RM†` and `RMDAGGER` alias `RM-VAR`.
    pub fn parse(name: &str, pi: &Priority) -> Result<Axiom, String> {
        let up = name.trim().to_ascii_uppercase();
        let a = match up.as_str() {
            "EF" => Axiom::Ef,
            "RP" => Axiom::Rp(pi.clone()),
            "WRP" => Axiom::Wrp(pi.clone()),
            "EF1" => Axiom::Ef1,
            "NW" => Axiom::Nw,
            "RT" => Axiom::Rt,
            "EFF" | "EFF*" => Axiom::Eff,
            "PARETO" => Axiom::Pareto,
            "RM" => Axiom::Rm,
            "SP" => Axiom::Sp,
            "WSP" => Axiom::Wsp,
            "IR" => Axiom::Ir,
            "NW*" | "NWSTAR" => Axiom::NwStar,
            "WRP*" | "WRPSTAR" => Axiom::WrpStar(pi.clone()),
            "TP" => Axiom::Tp,
            "EP" => Axiom::Ep,
            "TI" => Axiom::Ti,
            "WRPQ" => Axiom::WrpQuota(pi.clone()),
            "NWQ" => Axiom::NwQuota,
            "CON" => Axiom::Con,
            "2-CON" | "2CON" => Axiom::TwoCon,
            "T-CON" | "TCON" => Axiom::TCon,
            "NEU" => Axiom::Neu,
            "2-NEU" | "2NEU" => Axiom::TwoNeu,
            "RM-VAR" | "RM†" | "RMDAGGER" => Axiom::RmVar,
            _ => return Err(format!("unknown axiom `{name}`")),
        };
        Ok(a)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn fmt_priority(p: &Priority) -> String {
    p.agents().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(">")
}

/// A violating instance. `problem` is where the rule is evaluated first;
/// `related` holds the comparison problems (misreport, smaller set,
/// reduced population, relabelled problem) in the order the check used them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub problem: Problem,
    pub related: Vec<Problem>,
    pub agents: Vec<AgentId>,
    pub bundles: Vec<Bundle>,
    pub detail: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub axiom: String,
    pub verdict: Verdict,
    /// Problems in the domain the check ranged over.
    pub checked: usize,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

fn letters(p: &Problem) -> Universe {
    Universe::letters(p.universe_size())
}

struct Eval<'a> {
    rule: &'a dyn Rule,
}

impl Eval<'_> {
    fn alloc(&self, p: &Problem) -> Allocation {
        self.rule.allocate(p)
    }

    fn geq(&self, p: &Problem, i: usize, s: Bundle, t: Bundle) -> bool {
        Comparator::for_agent(p, i).geq(p.pref(i), s, t)
    }

    fn strictly(&self, p: &Problem, i: usize, s: Bundle, t: Bundle) -> bool {
        Comparator::for_agent(p, i).strictly(p.pref(i), s, t)
    }
}

fn wit(p: &Problem, related: Vec<Problem>, agents: Vec<AgentId>, bundles: Vec<Bundle>, detail: String) -> Witness {
    Witness { problem: p.clone(), related, agents, bundles, detail }
}

/// Check one axiom at one problem; `Some` is a violation.
pub fn check_at(rule: &dyn Rule, domain: &ProblemDomain, axiom: &Axiom, p: &Problem) -> Option<Witness> {
    let ev = Eval { rule };
    let a = ev.alloc(p);
    if axiom.is_intra() {
        return check_allocation(axiom, p, &a);
    }
    let u = letters(p);
    let ag = p.agents();
    let n = p.n();
    let show = |a: &Allocation| u.fmt_allocation(a);
    match axiom {
        Axiom::Rm | Axiom::RmVar => {
            let variable = *axiom == Axiom::RmVar;
            for &x2 in domain.available_sets() {
                if !x2.is_subset(p.available()) || x2 == p.available() || (x2.is_empty() && !variable) {
                    continue;
                }
                let q = domain.normalize(p.with_available(x2));
                let b = ev.alloc(&q);
                for i in 0..n {
                    if !ev.geq(p, i, a.get(i), b.get(i)) {
                        return Some(wit(p, vec![q], vec![ag[i]], vec![a.get(i), b.get(i)],
                            format!("agent {} gets {} at {} but {} at {}", ag[i], u.fmt_bundle(a.get(i)),
                                u.fmt_bundle(p.available()), u.fmt_bundle(b.get(i)), u.fmt_bundle(x2))));
                    }
                }
            }
            None
        }
        Axiom::Sp | Axiom::Wsp | Axiom::Tp | Axiom::Ep | Axiom::Ti => {
            let reports = domain.reports(p);
            for i in 0..n {
                let truth = *p.pref(i);
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
                    let b = ev.alloc(&q).get(i);
                    let bad = match axiom {
                        Axiom::Wsp => ev.strictly(p, i, b, a.get(i)),
                        Axiom::Ti => a.get(i).is_subset(r.acceptable()) && b != a.get(i),
                        _ => !ev.geq(p, i, a.get(i), b),
                    };
                    if bad {
                        return Some(wit(p, vec![q], vec![ag[i]], vec![a.get(i), b],
                            format!("agent {} reporting {} gets {} instead of {}", ag[i], r.format(&u),
                                u.fmt_bundle(b), u.fmt_bundle(a.get(i)))));
                    }
                }
            }
            None
        }
        Axiom::Con | Axiom::TwoCon => {
            if n < 2 {
                return None;
            }
            for mask in 1u32..(1 << n) - 1 {
                let keep: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 0).collect();
                if *axiom == Axiom::TwoCon && keep.len() != 2 {
                    continue;
                }
                let removed = (0..n).filter(|k| mask >> k & 1 == 1).fold(Bundle::EMPTY, |acc, k| acc | a.get(k));
                let keep_ids: Vec<AgentId> = keep.iter().map(|&k| ag[k]).collect();
                let q = domain.normalize(p.restrict_agents(&keep_ids, p.available() - removed));
                let b = ev.alloc(&q);
                let want = a.select(&keep);
                if b != want {
                    return Some(wit(p, vec![q], keep_ids, vec![], format!(
                        "remaining agents get {} after removal but {} originally", show(&b), show(&want))));
                }
            }
            None
        }
        Axiom::TCon => {
            let tops = (0..n).fold(Bundle::EMPTY, |acc, i| match p.pref(i).ranking().iter().find(|o| a.get(i).contains(**o)) {
                Some(&o) => acc.with(o),
                None => acc,
            });
            let q = domain.normalize(p.with_available(p.available() - tops));
            let b = ev.alloc(&q);
            (0..n).find(|&i| b.get(i) != a.get(i) - tops).map(|i| {
                wit(p, vec![q.clone()], vec![ag[i]], vec![a.get(i) - tops, b.get(i)], format!(
                    "after removing top objects {} agent {} gets {} instead of {}", u.fmt_bundle(tops), ag[i],
                    u.fmt_bundle(b.get(i)), u.fmt_bundle(a.get(i) - tops)))
            })
        }
        Axiom::Neu | Axiom::TwoNeu => {
            let x = p.available();
            if (*axiom == Axiom::TwoNeu && n != 2) || x.len() > NEU_CAP {
                return None;
            }
            let m = p.universe_size();
            let xs: Vec<ObjectId> = x.iter().collect();
            for target in Bundle::full(m).subsets().filter(|t| t.len() == x.len()) {
                let mut img: Vec<ObjectId> = target.iter().collect();
                loop {
                    let map = bijection_map(m, &xs, &img, x, target);
                    let q = domain.normalize(p.relabel(&map));
                    let b = ev.alloc(&q);
                    let want = a.relabel(&map);
                    if b != want {
                        return Some(wit(p, vec![q], vec![], vec![], format!(
                            "relabelled problem gets {} instead of {}", show(&b), show(&want))));
                    }
                    if !next_perm(&mut img) {
                        break;
                    }
                }
            }
            None
        }
        _ => unreachable!("single-problem axioms are handled above"),
    }
}

/// Check a single-problem axiom against a given allocation.
///
/// # Panics
/// For axioms that relate several problems.
pub fn check_allocation(axiom: &Axiom, p: &Problem, a: &Allocation) -> Option<Witness> {
    let u = letters(p);
    let ag = p.agents();
    let n = p.n();
    let show = |a: &Allocation| u.fmt_allocation(a);
    let geq = |p: &Problem, i: usize, s: Bundle, t: Bundle| Comparator::for_agent(p, i).geq(p.pref(i), s, t);
    match axiom {
        Axiom::Ef => {
            for i in 0..n {
                for j in 0..n {
                    if i != j && !geq(p, i, a.get(i), a.get(j)) {
                        return Some(wit(p, vec![], vec![ag[i], ag[j]], vec![a.get(i), a.get(j)],
                            format!("agent {} envies agent {} at {}", ag[i], ag[j], show(a))));
                    }
                }
            }
            None
        }
        Axiom::Rp(pi) | Axiom::Wrp(pi) | Axiom::WrpStar(pi) | Axiom::WrpQuota(pi) => {
            let order = pi.restrict_to(ag);
            for (k, &hi) in order.agents().iter().enumerate() {
                let i = p.index_of(hi).expect("agent");
                for &lo in &order.agents()[k + 1..] {
                    let j = p.index_of(lo).expect("agent");
                    let (ai, aj) = (a.get(i), a.get(j));
                    let ok = match axiom {
                        Axiom::Rp(_) => geq(p, i, ai, aj),
                        Axiom::Wrp(_) => ai.len() >= aj.len(),
                        Axiom::WrpStar(_) => {
                            let acc = p.pref(i).acceptable();
                            (ai & acc).len() >= (aj & acc).len()
                        }
                        _ => {
                            let full = match p.quotas().map(|q| q.get(i)) {
                                Some(Quota::Finite(q)) => ai.len() == q as usize,
                                _ => false,
                            };
                            full || ai.len() >= aj.len()
                        }
                    };
                    if !ok {
                        return Some(wit(p, vec![], vec![hi, lo], vec![ai, aj],
                            format!("agent {hi} (higher priority) vs agent {lo} at {}", show(a))));
                    }
                }
            }
            None
        }
        Axiom::Ef1 => {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let ai = a.get(i);
                    let aj = a.get(j);
                    let fine = geq(p, j, aj, ai) || ai.iter().any(|x| geq(p, j, aj, ai.without(x)));
                    if !fine {
                        return Some(wit(p, vec![], vec![ag[j], ag[i]], vec![aj, ai],
                            format!("agent {} envies agent {} beyond one object at {}", ag[j], ag[i], show(a))));
                    }
                }
            }
            None
        }
        Axiom::Nw => (a.assigned() != p.available()).then(|| {
            wit(p, vec![], vec![], vec![p.available() - a.assigned()],
                format!("{} left unassigned at {}", u.fmt_bundle(p.available() - a.assigned()), show(a)))
        }),
        Axiom::NwQuota => {
            let target = match p.quotas() {
                Some(q) => q.assignable(p.available().len()),
                None => p.available().len(),
            };
            (a.assigned_count() != target).then(|| {
                wit(p, vec![], vec![], vec![a.assigned()],
                    format!("{} objects assigned, {} required, at {}", a.assigned_count(), target, show(a)))
            })
        }
        Axiom::Rt => build_trade_relation(p, a).find_cycle().map(|c| {
            let cyc: Vec<String> = c.iter().map(|(i, x)| format!("({i},{})", u.name(*x))).collect();
            wit(p, vec![], c.iter().map(|x| x.0).collect(), vec![], format!("trade cycle {} at {}", cyc.join(" -> "), show(a)))
        }),
        Axiom::Eff => match p.variant() {
            Variant::Quota(_) => check_allocation(&Axiom::Pareto, p, a),
            Variant::Unacceptable => check_allocation(&Axiom::Ir, p, a)
                .or_else(|| check_allocation(&Axiom::NwStar, p, a))
                .or_else(|| check_allocation(&Axiom::Rt, p, a)),
            _ => check_allocation(&Axiom::Nw, p, a).or_else(|| check_allocation(&Axiom::Rt, p, a)),
        },
        Axiom::Pareto => match pareto_oracle(p, a) {
            Ok(true) => None,
            Ok(false) => Some(wit(p, vec![], vec![], vec![], format!("{} is dominated", show(a)))),
            Err(e) => Some(wit(p, vec![], vec![], vec![], format!("oracle refused: {e}"))),
        },
        Axiom::Ir => (!individually_rational(p, a)).then(|| {
            let i = (0..n).find(|&i| !a.get(i).is_subset(p.pref(i).acceptable())).expect("some agent");
            wit(p, vec![], vec![ag[i]], vec![a.get(i)],
                format!("agent {} holds unacceptable objects at {}", ag[i], show(a)))
        }),
        Axiom::NwStar => (!non_wasteful_star(p, a)).then(|| {
            wit(p, vec![], vec![], vec![], format!("an acceptable object is left unassigned at {}", show(a)))
        }),
        _ => panic!("{axiom} relates several problems"),
    }
}

/// A permutation of the universe sending `xs[k]` to `img[k]` and the rest
/// of the universe to the rest in ascending order.
fn bijection_map(m: usize, xs: &[ObjectId], img: &[ObjectId], x: Bundle, target: Bundle) -> Vec<ObjectId> {
    let mut map = vec![ObjectId(0); m];
    for (s, t) in xs.iter().zip(img) {
        map[s.index()] = *t;
    }
    let rest_src = (Bundle::full(m) - x).iter();
    let rest_dst: Vec<ObjectId> = (Bundle::full(m) - target).iter().collect();
    for (s, t) in rest_src.zip(rest_dst) {
        map[s.index()] = t;
    }
    map
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

/// Check an axiom over the whole domain; the witness is the first
/// violation in enumeration order.
pub fn check(rule: &dyn Rule, domain: &ProblemDomain, axiom: &Axiom) -> AxiomReport {
    let witness = domain.find_first(|p| check_at(rule, domain, axiom, p));
    let mut notes = Vec::new();
    if matches!(axiom, Axiom::Neu | Axiom::TwoNeu) {
        let skipped = domain.count_larger_than(NEU_CAP);
        if skipped > 0 {
            notes.push(format!("{skipped} problems with more than {NEU_CAP} available objects not checked"));
        }
    }
    if matches!(axiom, Axiom::Rm | Axiom::RmVar) && !domain.closure_added().is_empty() {
        notes.push(format!("{} available sets added to close the domain under subsets", domain.closure_added().len()));
    }
    let verdict = match &witness {
        None => Verdict::Holds,
        Some(w) if w.detail.starts_with("oracle refused") => Verdict::Undecided,
        Some(_) => Verdict::Violated,
    };
    AxiomReport { axiom: axiom.name(), verdict, checked: domain.len(), witness, notes }
}

/// Holds when some priority over the domain's potential agents satisfies
/// the axiom built by `make`.
pub fn check_some_priority(
    rule: &dyn Rule,
    domain: &ProblemDomain,
    make: impl Fn(Priority) -> Axiom,
) -> AxiomReport {
    let mut first = None;
    let mut label = String::new();
    for pi in Priority::all(&domain.potential_agents()) {
        let ax = make(pi.clone());
        let r = check(rule, domain, &ax);
        label = ax.name().split('-').next().unwrap_or_default().to_string();
        if r.holds() {
            return AxiomReport {
                axiom: format!("{label} (some priority)"),
                verdict: Verdict::Holds,
                checked: r.checked,
                witness: None,
                notes: vec![format!("holds for {}", ax.name())],
            };
        }
        first.get_or_insert(r);
    }
    let r = first.expect("at least one priority");
    AxiomReport {
        axiom: format!("{label} (some priority)"),
        verdict: Verdict::Violated,
        checked: r.checked,
        witness: r.witness,
        notes: vec!["violated for every priority; witness is for the first".into()],
    }
}

/// Re-run the check at the witness problem and confirm it reproduces the
/// same violation.
pub fn replay(rule: &dyn Rule, domain: &ProblemDomain, axiom: &Axiom, w: &Witness) -> bool {
    check_at(rule, domain, axiom, &w.problem).as_ref() == Some(w)
}
