//! Rules showing that each axiom of a characterization is needed: every
//! rule here fails its designated axiom and satisfies the others.

use std::sync::Arc;

use crate::csp::{CspError, RuleCsp, SolveMode, SolveOutcome};
use draftkit_axioms::{check, check_at, check_some_priority, Axiom, AxiomReport, ProblemDomain};
use draftkit_core::{AgentId, Allocation, Bundle, ObjectId, PickingSequence, Preference, Priority, Problem, Variant};
use draftkit_rules::{
    draft_priority, KeyMode, Rule, Tabulated, u_draft, CompleteExtensionRule, DraftRule, FnRule, NullRule, PiDictatorshipRule, Piecewise,
    RuleRef, SequenceDraftRule, SerialDictatorshipRule, SnakeDraftRule,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Fixed,
    Unacceptable,
    Variable,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Fixed => "fixed population",
            Model::Unacceptable => "unacceptable objects",
            Model::Variable => "variable population",
        }
    }

    /// Axiom names of the characterization; priority-based ones are
    /// checked for some priority.
    pub fn axioms(self) -> &'static [&'static str] {
        match self {
            Model::Fixed => &["WRP", "EF1", "NW", "RM"],
            Model::Unacceptable => &["IR", "NW*", "WRP*", "EF1", "RM", "TI"],
            Model::Variable => &["EF1", "EFF", "RM-VAR", "2-CON", "T-CON", "2-NEU"],
        }
    }

    /// The characterization minus `fails`, with priority-based axioms fixed
    /// to `pi`.
    pub fn remaining_axioms(self, fails: &str, pi: &Priority) -> Vec<Axiom> {
        self.axioms()
            .iter()
            .filter(|name| **name != fails)
            .map(|name| Axiom::parse(name, pi).expect("known axiom"))
            .collect()
    }
}

pub struct Counterexample {
    pub model: Model,
    pub name: String,
    /// The axiom the rule is meant to fail.
    pub fails: &'static str,
    pub rule: RuleRef,
    /// Specific instances where the designated axiom must fail.
    pub witnesses: Vec<(Axiom, Problem)>,
}

fn pref(m: usize, order: &[u8], cutoff: Option<usize>) -> Preference {
    let p = Preference::from_indices(order, None).extend_canonically(m);
    match cutoff {
        Some(c) => p.with_cutoff(Some(c)).expect("cutoff in range"),
        None => p,
    }
}

fn agents(n: usize) -> Vec<AgentId> {
    (1..=n as u16).map(AgentId).collect()
}

/// `x1..x_{n+1}` for agent 1 and `x2..x_{n+1}, x1` for everyone else.
fn rotated_profile(n: usize, m: usize, cutoff: bool) -> Vec<Preference> {
    let k = n + 1;
    let first: Vec<u8> = (0..k as u8).collect();
    let rest: Vec<u8> = (1..k as u8).chain([0]).collect();
    let c = cutoff.then_some(m);
    (0..n).map(|i| if i == 0 { pref(m, &first, c) } else { pref(m, &rest, c) }).collect()
}

/// The four fixed-population rules for `n` agents over `m >= n + 1` objects.
pub fn fixed_model(n: usize, m: usize) -> Vec<Counterexample> {
    assert!(m > n, "the resource-monotonicity rule needs n + 1 objects");
    let pi = Priority::identity(n);
    let all = Bundle::full(m);
    let mk = |x: Bundle, prefs: &[Preference]| Problem::new(m, &agents(n), x, prefs, Variant::Fixed).expect("valid");

    let same: Vec<Preference> = vec![pref(m, &(0..m as u8).collect::<Vec<_>>(), None); n];
    let other: Vec<Preference> =
        (0..n).map(|i| if i == 0 { pref(m, &(0..m as u8).rev().collect::<Vec<_>>(), None) } else { same[0] }).collect();
    let same_c = same.clone();
    let wrp_rule = Piecewise::new("identical-profile switch", Arc::new(DraftRule::new(pi.reversed())))
        .with(move |p: &Problem| p.profile() == &same_c[..], Arc::new(DraftRule::new(pi.clone())));

    let x_prime = Bundle::full(n + 1);
    let rotated = rotated_profile(n, m, false);
    let rot = rotated.clone();
    let mut prefix = vec![AgentId(1)];
    prefix.extend(agents(n));
    let seq = SequenceDraftRule { sequence: PickingSequence::Prefix { prefix, tail: pi.clone() } };
    let rm_rule = Piecewise::new("double first pick at one problem", Arc::new(DraftRule::new(pi.clone())))
        .with(move |p: &Problem| p.available() == x_prime && p.profile() == &rot[..], Arc::new(seq));

    // odd-sized available set so bundle sizes differ
    let odd = if m % n == 0 { Bundle::full(m - 1) } else { all };
    vec![
        Counterexample {
            model: Model::Fixed,
            name: "null".into(),
            fails: "NW",
            rule: Arc::new(NullRule),
            witnesses: vec![(Axiom::Nw, mk(all, &same))],
        },
        Counterexample {
            model: Model::Fixed,
            name: "pi-dictatorship".into(),
            fails: "EF1",
            rule: Arc::new(PiDictatorshipRule { priority: pi.clone() }),
            witnesses: vec![(Axiom::Ef1, mk(all, &same))],
        },
        Counterexample {
            model: Model::Fixed,
            name: "identical-profile switch".into(),
            fails: "WRP",
            rule: Arc::new(wrp_rule),
            witnesses: vec![
                (Axiom::Wrp(pi.reversed()), mk(odd, &same)),
                (Axiom::Wrp(pi.clone()), mk(odd, &other)),
            ],
        },
        Counterexample {
            model: Model::Fixed,
            name: "double first pick".into(),
            fails: "RM",
            rule: Arc::new(rm_rule),
            witnesses: vec![(Axiom::Rm, mk(x_prime, &rotated))],
        },
    ]
}

/// The six rules of the unacceptable-objects model, two agents, three objects.
pub fn unacceptable_model() -> Vec<Counterexample> {
    let (n, m) = (2usize, 3usize);
    let pi = Priority::identity(n);
    let all = Bundle::full(m);
    let mk = |x: Bundle, prefs: &[Preference]| Problem::new(m, &agents(n), x, prefs, Variant::Unacceptable).expect("valid");
    let full_abc = pref(m, &[0, 1, 2], Some(3));
    let full_bac = pref(m, &[1, 0, 2], Some(3));
    let ab_only = pref(m, &[0, 1, 2], Some(2));

    // priority switch on whether agent 1 ranks `a` first
    let top_a = ObjectId(0);
    let wrp_rule = Piecewise::new("top-object priority switch", Arc::new(DraftRule::new(pi.reversed())))
        .with(move |p: &Problem| p.pref(0).ranking()[0] == top_a, Arc::new(DraftRule::new(pi.clone())));

    // agent 1 keeps x1 on X' near the rotated profile
    let x_prime = Bundle::full(n + 1);
    let rotated = rotated_profile(n, m, true);
    let rot = rotated.clone();
    let pi_rm = pi.clone();
    let rm_rule = FnRule::new("x1 bonus", move |p: &Problem| {
        let near = p
            .profile()
            .iter()
            .zip(&rot)
            .all(|(r, base)| r.is_truncation_of(base) || base.is_truncation_of(r));
        if p.available() == x_prime && near && p.pref(0).is_acceptable(ObjectId(0)) {
            let rest = p.with_available(x_prime.without(ObjectId(0)));
            let mut a = u_draft(&rest, &pi_rm).0;
            a.set(0, a.get(0).with(ObjectId(0)));
            a
        } else {
            u_draft(p, &pi_rm).0
        }
    });

    // everything to agent 1 at one profile on subsets of {a, b}
    let (a, b) = (ObjectId(0), ObjectId(1));
    let ti_profile = vec![pref(m, &[1, 2, 0], Some(3)), pref(m, &[0, 1, 2], Some(1))];
    let tp = ti_profile.clone();
    let pi_ti = pi.clone();
    let ab = Bundle::EMPTY.with(a).with(b);
    let ti_rule = FnRule::new("give-all on {a,b}", move |p: &Problem| {
        if p.profile() == &tp[..] && p.available().is_subset(ab) {
            let mut out = Allocation::empty(p.n());
            out.set(0, p.available());
            out
        } else {
            u_draft(p, &pi_ti).0
        }
    });
    let ti_witness = mk(ab, &[ti_profile[0], ab_only]);

    vec![
        Counterexample {
            model: Model::Unacceptable,
            name: "complete-extension draft".into(),
            fails: "IR",
            rule: Arc::new(CompleteExtensionRule { inner: Arc::new(DraftRule::new(pi.clone())) }),
            witnesses: vec![(Axiom::Ir, mk(all, &[ab_only, ab_only]))],
        },
        Counterexample {
            model: Model::Unacceptable,
            name: "null".into(),
            fails: "NW*",
            rule: Arc::new(NullRule),
            witnesses: vec![(Axiom::NwStar, mk(all, &[full_abc, full_abc]))],
        },
        Counterexample {
            model: Model::Unacceptable,
            name: "top-object priority switch".into(),
            fails: "WRP*",
            rule: Arc::new(wrp_rule),
            witnesses: vec![
                (Axiom::WrpStar(pi.reversed()), mk(all, &[full_abc, full_abc])),
                (Axiom::WrpStar(pi.clone()), mk(all, &[full_bac, full_bac])),
            ],
        },
        Counterexample {
            model: Model::Unacceptable,
            name: "serial dictatorship".into(),
            fails: "EF1",
            rule: Arc::new(SerialDictatorshipRule { priority: pi.clone() }),
            witnesses: vec![(Axiom::Ef1, mk(all, &[full_abc, full_abc]))],
        },
        Counterexample {
            model: Model::Unacceptable,
            name: "x1 bonus".into(),
            fails: "RM",
            rule: Arc::new(rm_rule),
            witnesses: vec![(Axiom::Rm, mk(x_prime, &rotated))],
        },
        Counterexample {
            model: Model::Unacceptable,
            name: "give-all on {a,b}".into(),
            fails: "TI",
            rule: Arc::new(ti_rule),
            witnesses: vec![(Axiom::Ti, ti_witness)],
        },
    ]
}

/// The six variable-population rules for potential agents `1..=k`.
pub fn variable_model() -> Vec<Counterexample> {
    let pi = Priority::identity(3);
    let p1 = pi.clone();
    let rm_rule = FnRule::new("tail-first rounds", move |p: &Problem| {
        let order = p1.restrict_to(p.agents());
        let (n, s) = (p.n(), p.available().len());
        if s < n || s % n == 0 {
            return draft_priority(p, &order).0;
        }
        let c = s % n;
        let prefix = order.agents()[n - c..].to_vec();
        draftkit_rules::draft(p, &PickingSequence::Prefix { prefix, tail: order }).0
    });
    let p2 = pi.clone();
    let con_rule = FnRule::new("pairs forward, larger groups reversed", move |p: &Problem| {
        if p.n() == 2 {
            draft_priority(p, &p2).0
        } else {
            draft_priority(p, &p2.reversed()).0
        }
    });
    let p3 = pi.clone();
    let x = ObjectId(0);
    let neu_rule = FnRule::new("last-ranked a to the last agent", move |p: &Problem| {
        let avail = p.available();
        let last_everywhere = avail.contains(x)
            && p.profile().iter().all(|r| r.ranking().iter().rev().find(|o| avail.contains(**o)) == Some(&x));
        if !last_everywhere {
            return draft_priority(p, &p3).0;
        }
        let mut a = draft_priority(&p.with_available(avail.without(x)), &p3).0;
        let lowest = *p3.restrict_to(p.agents()).agents().last().expect("nonempty population");
        let i = p.index_of(lowest).expect("agent");
        a.set(i, a.get(i).with(x));
        a
    });
    let mk = |name: &str, fails, rule: RuleRef| Counterexample {
        model: Model::Variable,
        name: name.into(),
        fails,
        rule,
        witnesses: vec![],
    };
    vec![
        mk("pi-dictatorship", "EF1", Arc::new(PiDictatorshipRule { priority: pi.clone() })),
        mk("null", "EFF", Arc::new(NullRule)),
        mk("tail-first rounds", "RM-VAR", Arc::new(rm_rule)),
        mk("pairs forward, larger groups reversed", "2-CON", Arc::new(con_rule)),
        mk("snake", "T-CON", Arc::new(SnakeDraftRule { priority: pi.clone() })),
        mk("last-ranked a to the last agent", "2-NEU", Arc::new(neu_rule)),
    ]
}

#[derive(Clone, Debug)]
pub struct IndependenceResult {
    pub model: Model,
    pub rule: String,
    pub fails: &'static str,
    pub reports: Vec<AxiomReport>,
    /// Designated instances that did not show the expected violation.
    pub missed_witnesses: Vec<String>,
    /// Other axioms violated at the designated instances themselves.
    pub instance_violations: Vec<String>,
}

impl IndependenceResult {
    /// Exactly the designated axiom fails, and at each designated instance.
    pub fn passed(&self) -> bool {
        self.missed_witnesses.is_empty()
            && self.reports.iter().zip(self.model.axioms()).all(|(r, name)| r.holds() == (*name != self.fails))
    }

    /// The weaker reading: the designated axiom fails at its instances and
    /// no other axiom fails there.
    pub fn passed_at_witnesses(&self) -> bool {
        self.missed_witnesses.is_empty() && self.instance_violations.is_empty()
    }
}

fn run_axiom(rule: &RuleRef, domain: &ProblemDomain, name: &str) -> AxiomReport {
    let pi = Priority(domain.potential_agents());
    match name {
        "WRP" => check_some_priority(rule.as_ref(), domain, Axiom::Wrp),
        "WRP*" => check_some_priority(rule.as_ref(), domain, Axiom::WrpStar),
        _ => check(rule.as_ref(), domain, &Axiom::parse(name, &pi).expect("known axiom")),
    }
}

/// Check one counterexample over `domain`.
pub fn evaluate(c: &Counterexample, domain: &ProblemDomain) -> IndependenceResult {
    let reports = c.model.axioms().iter().map(|name| run_axiom(&c.rule, domain, name)).collect();
    let missed_witnesses = c
        .witnesses
        .iter()
        .filter(|(ax, p)| check_at(c.rule.as_ref(), domain, ax, p).is_none())
        .map(|(ax, p)| format!("{} not violated at {:?}", ax.name(), p.key()))
        .collect();
    let pi = Priority(domain.potential_agents());
    let mut instance_violations = Vec::new();
    for name in c.model.axioms().iter().filter(|n| **n != c.fails) {
        let candidates: Vec<Axiom> = match *name {
            "WRP" => Priority::all(&pi.0).into_iter().map(Axiom::Wrp).collect(),
            "WRP*" => Priority::all(&pi.0).into_iter().map(Axiom::WrpStar).collect(),
            _ => vec![Axiom::parse(name, &pi).expect("known axiom")],
        };
        let clean = candidates
            .iter()
            .any(|ax| c.witnesses.iter().all(|(_, p)| check_at(c.rule.as_ref(), domain, ax, p).is_none()));
        if !clean {
            instance_violations.push(format!("{name} violated at a designated instance"));
        }
    }
    IndependenceResult { model: c.model, rule: c.name.clone(), fails: c.fails, reports, missed_witnesses, instance_violations }
}

/// A rule found by search that satisfies `keep` and fails `target`; both
/// are confirmed by the ordinary checkers.
pub struct Alternative {
    pub rule: Tabulated,
    pub report: AxiomReport,
    /// Solutions of the search examined before this one.
    pub examined: usize,
}

/// Search the rule space for a rule satisfying `keep` but not `target`.
pub fn alternative_counterexample(
    domain: &ProblemDomain,
    keep: &[Axiom],
    target: &Axiom,
    limit: usize,
    budget: u64,
) -> Result<Option<Alternative>, CspError> {
    let csp = RuleCsp::build(domain, keep, KeyMode::Full)?;
    let solutions = match csp.solve(SolveMode::FindAll { limit }, budget).outcome {
        SolveOutcome::Sat { solutions, .. } | SolveOutcome::Undecided { solutions } => solutions,
        SolveOutcome::Unsat(_) => return Ok(None),
    };
    Ok(solutions.iter().enumerate().find_map(|(k, sol)| {
        let rule = csp.to_rule(sol, &format!("search-{}-{}", target.name(), k + 1));
        let report = check(&rule, domain, target);
        if report.holds() || !keep.iter().all(|ax| check(&rule as &dyn Rule, domain, ax).holds()) {
            return None;
        }
        Some(Alternative { rule, report, examined: k + 1 })
    }))
}
