//! One driver per reproducible result. Each returns a [`TheoremReport`]
//! whose outcome says whether the expected verdict was reproduced.

use std::sync::Arc;
use std::time::{Duration, Instant};

use draftkit_axioms::msp::{check_best_case, check_msp_certificate, check_msp_falsify};
use draftkit_axioms::{
    agents, all_allocations, check, check_allocation, critical_agent, Axiom, AxiomReport, ProblemDomain,
};
use draftkit_core::{AgentId, Allocation, Bundle, ObjectId, PickingSequence, Preference, Priority, Problem, Quota, Quotas, Universe, Variant};
use draftkit_pd::{Comparator, WeightScheme};
use draftkit_rules::{
    draft_priority, DraftRule, FnRule, KeyMode, NullRule, PiDictatorshipRule, Rule, RuleRef, SequenceDraftRule,
    SerialDictatorshipRule, SnakeDraftRule,
};
use rayon::prelude::*;

use crate::csp::{CspError, RuleCsp, SolveMode, SolveOutcome, DEFAULT_BUDGET};
use crate::efficiency::{efficiency_equivalence, random_rule_agreement};
use crate::impossibility::replay_impossibility_cases;
use crate::independence::variable_model;
use crate::priority::{infer_priority, verify_extension_lemma, ExtensionVerdict, PriorityInferenceError};
use crate::uniqueness::{survivors, CONJECTURE_NOTE, UNIQUENESS_LABEL};

/// Identifiers accepted by [`verify`].
pub const THEOREM_IDS: &[&str] = &[
    "T1", "T2", "T3", "T4", "T4-replay", "T5", "T6", "T7", "T8", "P1", "P2", "P3", "P4", "L1", "L2", "L8", "L9",
    "TABLE1",
];

/// Largest universe for exhaustive enumeration, and for rule-space search
/// or relabelling checks, unless explicitly lifted.
pub const ENUMERATION_CAP: usize = 6;
pub const SEARCH_CAP: usize = 5;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Reproduced,
    Failed,
    Undecided,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Reproduced => "reproduced",
            Outcome::Failed => "failed",
            Outcome::Undecided => "undecided",
        }
    }

    fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Failed, _) | (_, Outcome::Failed) => Outcome::Failed,
            (Outcome::Undecided, _) | (_, Outcome::Undecided) => Outcome::Undecided,
            _ => Outcome::Reproduced,
        }
    }
}

impl From<bool> for Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Reproduced
        } else {
            Outcome::Failed
        }
    }
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub id: String,
    pub claim: String,
    /// The claim quantifies over infinitely many objects; only a finite
    /// sub-domain was checked.
    pub desk_scale: bool,
    pub outcome: Outcome,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct Scale {
    pub agents: Option<usize>,
    pub objects: Option<usize>,
    pub budget: u64,
    pub seed: u64,
    pub random_rules: usize,
    pub random_schemes: usize,
    pub allow_huge: bool,
    /// Include wall-clock times in detail lines.
    pub timings: bool,
}

impl Default for Scale {
    fn default() -> Self {
        Scale {
            agents: None,
            objects: None,
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            random_rules: 1000,
            random_schemes: 100,
            allow_huge: false,
            timings: true,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown theorem id {0:?}; expected one of {ids}", ids = THEOREM_IDS.join(", "))]
    UnknownId(String),
    #[error("{what} = {value} exceeds the cap of {cap}; pass --i-know-this-is-huge to lift it")]
    TooLarge { what: &'static str, value: usize, cap: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Csp(#[from] CspError),
}

struct Ctx<'a> {
    scale: &'a Scale,
    details: Vec<String>,
}

impl Ctx<'_> {
    fn took(&self, t: Instant) -> String {
        if self.scale.timings {
            format!(" ({:.2?})", t.elapsed())
        } else {
            String::new()
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    fn cap(&self, what: &'static str, value: usize, cap: usize) -> Result<(), VerifyError> {
        if value > cap && !self.scale.allow_huge {
            return Err(VerifyError::TooLarge { what, value, cap });
        }
        Ok(())
    }

    fn objects(&self, default: usize, cap: usize) -> Result<usize, VerifyError> {
        let m = self.scale.objects.unwrap_or(default);
        self.cap("objects", m, cap)?;
        Ok(m)
    }

    fn agents(&self, default: usize) -> usize {
        self.scale.agents.unwrap_or(default).max(1)
    }

    /// Check every axiom; note one line per axiom.
    fn sweep(&mut self, label: &str, rule: &dyn Rule, domain: &ProblemDomain, axioms: &[Axiom]) -> Outcome {
        let mut ok = true;
        for ax in axioms {
            let r = check(rule, domain, ax);
            self.note_report(label, &r);
            ok &= r.holds();
        }
        ok.into()
    }

    fn note_report(&mut self, label: &str, r: &AxiomReport) {
        let mut line = format!("{label}: {} {} over {} problems", r.axiom, r.verdict.as_str(), r.checked);
        if let Some(w) = &r.witness {
            line.push_str(&format!(" (witness: {})", w.detail));
        }
        self.note(line);
        for n in &r.notes {
            self.note(format!("{label}: {} note: {n}", r.axiom));
        }
    }

    fn unsat(&mut self, label: &str, domain: &ProblemDomain, axioms: &[Axiom], mode: KeyMode) -> Result<Outcome, VerifyError> {
        let t = Instant::now();
        let csp = RuleCsp::build(domain, axioms, mode)?;
        let r = csp.solve(SolveMode::ProveUnsat, self.scale.budget);
        let names: Vec<String> = axioms.iter().map(|a| a.name()).collect();
        let head = format!(
            "{label}: {{{}}} with {} variables, {} constraints: {} after {} revisions, {} nodes",
            names.join(", "),
            csp.vars().len(),
            csp.num_constraints(),
            r.verdict(),
            r.stats.revisions,
            r.stats.nodes
        );
        let out = match &r.outcome {
            SolveOutcome::Unsat(cert) => {
                let replay = csp.replay(cert);
                self.note(format!(
                    "{head}; certificate: {} leaves, {} steps, {} removals, replay {}{}",
                    cert.root.leaves(),
                    cert.root.total_steps(),
                    cert.root.total_removals(),
                    if replay.is_ok() { "ok" } else { "FAILED" },
                    self.took(t)
                ));
                if let Err(e) = &replay {
                    self.note(format!("{label}: replay error: {e}"));
                }
                Outcome::from(replay.is_ok())
            }
            SolveOutcome::Sat { .. } => {
                self.note(format!("{head}{}", self.took(t)));
                Outcome::Failed
            }
            SolveOutcome::Undecided { .. } => {
                self.note(format!("{head}; budget {} exhausted{}", self.scale.budget, self.took(t)));
                Outcome::Undecided
            }
        };
        Ok(out)
    }

    fn unique(
        &mut self,
        label: &str,
        domain: &ProblemDomain,
        axioms: &[Axiom],
        target: RuleRef,
        mode: KeyMode,
    ) -> Result<Outcome, VerifyError> {
        let t = Instant::now();
        let csp = RuleCsp::build(domain, axioms, mode)?;
        let names: Vec<String> = axioms.iter().map(|a| a.name()).collect();
        let head = format!(
            "{label}: {{{}}} with {} variables, {} constraints",
            names.join(", "),
            csp.vars().len(),
            csp.num_constraints()
        );
        match survivors(&csp, domain, target, 2, self.scale.budget) {
            Ok(rep) => {
                let first = rep.survivors.first();
                self.note(format!(
                    "{head}: {} survivor(s){}, {}{} [{}]",
                    rep.survivors.len(),
                    if rep.complete { "" } else { " (limit reached)" },
                    match first {
                        Some(s) if s.equals_target() => format!("first equals {}", rep.target),
                        Some(_) => format!("first differs from {}", rep.target),
                        None => "none".into(),
                    },
                    self.took(t),
                    UNIQUENESS_LABEL
                ));
                for s in &rep.survivors {
                    if let Some((p, a, b)) = &s.first_difference {
                        let u = Universe::letters(p.universe_size());
                        self.note(format!(
                            "{label}: survivor differs at {:?}: {} vs {}",
                            p.key(),
                            u.fmt_allocation(a),
                            u.fmt_allocation(b)
                        ));
                    }
                    if !s.failed_axioms.is_empty() {
                        self.note(format!("{label}: survivor fails {:?} when re-checked", s.failed_axioms));
                    }
                }
                Ok(rep.unique_target().into())
            }
            Err(r) => {
                self.note(format!("{head}: {}{}", r.verdict(), self.took(t)));
                Ok(if r.verdict() == "undecided" { Outcome::Undecided } else { Outcome::Failed })
            }
        }
    }
}

fn report(id: &str, claim: &str, desk_scale: bool, f: impl FnOnce(&mut Ctx) -> Result<Outcome, VerifyError>, scale: &Scale) -> Result<TheoremReport, VerifyError> {
    let t = Instant::now();
    let mut ctx = Ctx { scale, details: Vec::new() };
    let outcome = f(&mut ctx)?;
    if desk_scale {
        ctx.note("desk-scale: a finite sub-domain stands in for the unbounded statement");
    }
    Ok(TheoremReport { id: id.into(), claim: claim.into(), desk_scale, outcome, details: ctx.details, elapsed: t.elapsed() })
}

/// Run one driver.
pub fn verify(id: &str, scale: &Scale) -> Result<TheoremReport, VerifyError> {
    let canon = THEOREM_IDS.iter().find(|k| k.eq_ignore_ascii_case(id)).ok_or_else(|| VerifyError::UnknownId(id.into()))?;
    match *canon {
        "T1" => report("T1", "the draft is the only rule with WRP, EF1, NW and RM", true, fixed_uniqueness, scale),
        "T2" => report("T2", "no rule has RP, EF1, NW and WSP", true, rp_wsp_impossibility, scale),
        "T3" => report("T3", "no rule has EFF, EF1 and WSP", true, eff_wsp_impossibility, scale),
        "T4" => report("T4", "with two agents no rule has NW, EF1 and SP (generic search)", true, two_agent_sp_impossibility, scale),
        "T4-replay" => report("T4-replay", "with two agents no rule has NW, EF1 and SP (guided case analysis)", true, two_agent_sp_replay, scale),
        "T5" => report("T5", "drafts are maxmin strategy-proof and not obviously manipulable", false, maxmin, scale),
        "T6" => report("T6", "with quotas the draft is the only rule with WRPq, EF1, NWq and RM", true, quota_uniqueness, scale),
        "T7" => report("T7", "with unacceptable objects the draft is the only rule with WRP*, EF1, NW*, RM, IR and TI", true, unacceptable_uniqueness, scale),
        "T8" => report("T8", "with variable populations drafts are the only rules with EF1, EFF, RM-VAR, 2-CON, T-CON and 2-NEU", true, variable_uniqueness, scale),
        "P1" => report("P1", "EFF is equivalent to NW and RT", false, |c| efficiency(c, false), scale),
        "P2" => report("P2", "the draft satisfies RP, EF1, EFF and RM", false, draft_properties, scale),
        "P3" => report("P3", "EFF* is equivalent to IR, NW* and RT", false, |c| efficiency(c, true), scale),
        "P4" => report("P4", "IR, TP and EP together imply TI", false, truncation_invariance, scale),
        "L1" => report("L1", "WRP and EF1 force a critical agent in every allocation", false, critical_agents, scale),
        "L2" => report("L2", "under RM, adding an object worse than everything assigned keeps every bundle", false, added_worst_object, scale),
        "L8" => report("L8", "the priority of a rule is recoverable from two-agent probes", false, priority_probes, scale),
        "L9" => report("L9", "RM-VAR and T-CON extend a serial dictatorship on single-unit problems to the draft", true, extension, scale),
        "TABLE1" => report("TABLE1", "null rule, pi-dictatorship and draft against RP, EF1, EFF, NW, SP, WSP", false, property_matrix, scale),
        _ => unreachable!(),
    }
}

fn fixed_uniqueness(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let n = c.agents(2);
    let m = c.objects(3, SEARCH_CAP)?;
    let pi = Priority::identity(n);
    let domain = ProblemDomain::fixed(n, m);
    let axioms = [Axiom::Wrp(pi.clone()), Axiom::Ef1, Axiom::Nw, Axiom::Rm];
    c.unique(&format!("n={n} m={m}"), &domain, &axioms, Arc::new(DraftRule::new(pi)), KeyMode::Full)
}

fn full_set_domain(n: usize, m: usize) -> ProblemDomain {
    ProblemDomain::fixed(n, m).with_exact_sets(vec![Bundle::full(m)])
}

fn rp_wsp_impossibility(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let n = c.agents(2);
    let m = c.objects(3, SEARCH_CAP)?;
    let domain = full_set_domain(n, m);
    let mut out = Outcome::Reproduced;
    for pi in Priority::all(&agents(n)) {
        let label = format!("n={n} |X|={m} priority {:?}", pi.agents().iter().map(|a| a.0).collect::<Vec<_>>());
        out = out.and(c.unsat(&label, &domain, &[Axiom::Rp(pi.clone()), Axiom::Ef1, Axiom::Nw, Axiom::Wsp], KeyMode::Full)?);
    }
    // without RP: an open question beyond two agents
    let csp = RuleCsp::build(&domain, &[Axiom::Nw, Axiom::Ef1, Axiom::Wsp], KeyMode::Full)?;
    let r = csp.solve(SolveMode::FindOne, c.scale.budget);
    c.note(format!("probe {{NW, EF1, WSP}} without RP: {}", r.verdict()));
    if r.verdict() == "SAT" {
        c.note(CONJECTURE_NOTE);
    }
    Ok(out)
}

fn eff_wsp_impossibility(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let n = c.agents(2);
    let m = c.objects(4, SEARCH_CAP)?;
    c.unsat(&format!("n={n} |X|={m}"), &full_set_domain(n, m), &[Axiom::Eff, Axiom::Ef1, Axiom::Wsp], KeyMode::Full)
}

fn two_agent_sp_impossibility(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    if c.agents(2) != 2 {
        return Err(VerifyError::Unsupported("T4 concerns exactly two agents".into()));
    }
    let m = c.objects(5, SEARCH_CAP)?;
    let domain = full_set_domain(2, m);
    let pi = Priority::identity(2);
    let out = c.unsat(&format!("|X|={m}"), &domain, &[Axiom::Nw, Axiom::Ef1, Axiom::Sp], KeyMode::Full)?;
    // each pair of the three axioms is satisfiable; exhibit a witness rule
    let mut sat = |axioms: &[Axiom], rule: &dyn Rule, label: &str| -> Result<bool, VerifyError> {
        let csp = RuleCsp::build(&domain, axioms, KeyMode::Full)?;
        let ok = csp.encode(rule).map(|sol| csp.satisfies(&sol)).unwrap_or(false);
        let names: Vec<String> = axioms.iter().map(|a| a.name()).collect();
        c.note(format!("dropping {label}: {{{}}} {} ({} is a solution: {ok})", names.join(", "), if ok { "SAT" } else { "not shown SAT" }, rule.name()));
        Ok(ok)
    };
    let no_sp = sat(&[Axiom::Nw, Axiom::Ef1], &DraftRule::new(pi.clone()), "SP")?;
    let no_ef1 = sat(&[Axiom::Nw, Axiom::Sp], &SerialDictatorshipRule { priority: pi }, "EF1")?;
    Ok(out.and((no_sp && no_ef1).into()))
}

fn two_agent_sp_replay(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let log = replay_impossibility_cases();
    let matched = log.cells.iter().filter(|r| r.matched).count();
    c.note(format!("starting allocations at (abcde, badce): {}", log.base_candidates.join(" ")));
    for r in &log.cells {
        c.note(format!(
            "{} / {} at {}: expected {}, found {}{}",
            r.case,
            r.table,
            r.profile,
            r.expected,
            r.found,
            if r.matched { "" } else { "  MISMATCH" }
        ));
    }
    c.note(format!("{matched}/{} cells matched, {} contradiction terminals", log.cells.len(), log.contradictions));
    c.note(format!("agreement on X forces equal bundles (6-object universe): {}", log.restriction_step));
    c.note(format!("Case 2 tables are Case 1 with c and d interchanged: {}", log.case2_is_relabelled_case1));
    for f in &log.failures {
        c.note(format!("failure: {f}"));
    }
    Ok(log.passed().into())
}

fn schemes(scale: &Scale) -> Vec<WeightScheme> {
    let mut v = vec![WeightScheme::Geometric, WeightScheme::Linear];
    v.extend((0..scale.random_schemes as u64).map(|k| WeightScheme::Random { seed: scale.seed.wrapping_add(k) }));
    v
}

fn maxmin(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let grid: Vec<(usize, usize)> = match (c.scale.agents, c.scale.objects) {
        (None, None) => [2, 3].iter().flat_map(|&n| (2..=4).map(move |m| (n, m))).collect(),
        _ => vec![(c.agents(2), c.objects(4, ENUMERATION_CAP)?)],
    };
    let schemes = schemes(c.scale);
    c.note(format!("utility schemes: geometric, linear and {} seeded random", c.scale.random_schemes));
    let mut out = Outcome::Reproduced;
    for (n, m) in grid {
        let domain = ProblemDomain::fixed(n, m);
        let rule = DraftRule::new(Priority::identity(n));
        let label = format!("n={n} m={m}");
        for r in [
            check_msp_certificate(&rule, &domain),
            check_msp_falsify(&rule, &domain, &schemes),
            check_best_case(&rule, &domain, &schemes),
        ] {
            c.note_report(&label, &r);
            out = out.and(r.holds().into());
        }
    }
    Ok(out)
}

fn quota_options() -> [Quota; 3] {
    [Quota::Finite(1), Quota::Finite(2), Quota::Infinite]
}

fn fmt_quota(q: &Quotas) -> String {
    let s: Vec<String> = q.0.iter().map(|x| match x {
        Quota::Finite(k) => k.to_string(),
        Quota::Infinite => "inf".into(),
    }).collect();
    format!("({})", s.join(","))
}

fn quota_uniqueness(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let n = c.agents(2);
    let sweep_m = c.objects(4, ENUMERATION_CAP)?;
    let search_m = sweep_m.min(3);
    let pi = Priority::identity(n);
    let mut vectors: Vec<Quotas> = vec![Quotas(Vec::new())];
    for _ in 0..n {
        vectors = vectors.into_iter().flat_map(|v| quota_options().map(|q| Quotas([v.0.clone(), vec![q]].concat()))).collect();
    }
    let axioms = [Axiom::WrpQuota(pi.clone()), Axiom::Ef1, Axiom::NwQuota, Axiom::Rm];
    let rule: RuleRef = Arc::new(DraftRule::new(pi));
    let mut out = Outcome::Reproduced;
    for q in vectors {
        let label = format!("q={}", fmt_quota(&q));
        out = out.and(c.sweep(&format!("{label} m={sweep_m}"), rule.as_ref(), &ProblemDomain::quota(sweep_m, q.clone()), &axioms));
        out = out.and(c.unique(&format!("{label} m={search_m}"), &ProblemDomain::quota(search_m, q), &axioms, rule.clone(), KeyMode::Full)?);
    }
    Ok(out)
}

fn unacceptable_uniqueness(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let n = c.agents(2);
    let sweep_m = c.objects(4, ENUMERATION_CAP)?;
    let search_m = sweep_m.min(3);
    let pi = Priority::identity(n);
    let rule: RuleRef = Arc::new(DraftRule::new(pi.clone()));
    let mut out = Outcome::Reproduced;
    let all = [
        Axiom::WrpStar(pi.clone()),
        Axiom::Ef1,
        Axiom::NwStar,
        Axiom::Rm,
        Axiom::Ir,
        Axiom::Ti,
        Axiom::Tp,
        Axiom::Ep,
        Axiom::Rp(pi.clone()),
        Axiom::Eff,
    ];
    out = out.and(c.sweep(&format!("m={sweep_m}"), rule.as_ref(), &ProblemDomain::unacceptable(n, sweep_m), &all));
    let axioms = &all[..6];
    out = out.and(c.unique(&format!("m={search_m}"), &ProblemDomain::unacceptable(n, search_m), axioms, rule, KeyMode::Full)?);
    Ok(out)
}

fn variable_uniqueness(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let k = c.agents(3);
    let sweep_m = c.objects(4, SEARCH_CAP)?;
    let search_m = sweep_m.min(3);
    let potential = agents(k);
    let pi = Priority::identity(k);
    let rule = DraftRule::new(pi.clone());
    let mut out = Outcome::Reproduced;
    out = out.and(c.sweep(
        &format!("m={sweep_m}"),
        &rule,
        &ProblemDomain::variable(&potential, sweep_m),
        &[Axiom::Ef1, Axiom::Eff, Axiom::RmVar, Axiom::Con, Axiom::TCon, Axiom::Neu],
    ));
    let domain = ProblemDomain::variable(&potential, search_m);
    let axioms = [Axiom::Ef1, Axiom::Eff, Axiom::RmVar, Axiom::TwoCon, Axiom::TCon, Axiom::TwoNeu];
    let t = Instant::now();
    let csp = RuleCsp::build(&domain, &axioms, KeyMode::Restricted)?;
    let priorities = Priority::all(&potential);
    let r = csp.solve(SolveMode::FindAll { limit: priorities.len() + 1 }, c.scale.budget);
    let head = format!("m={search_m}: {} variables, {} constraints", csp.vars().len(), csp.num_constraints());
    let sols = match r.outcome {
        SolveOutcome::Sat { solutions, complete: true } => solutions,
        SolveOutcome::Sat { solutions, .. } => {
            c.note(format!("{head}: more than {} survivors", solutions.len() - 1));
            return Ok(Outcome::Failed);
        }
        other => {
            c.note(format!("{head}: {}", SolveResultVerdict(&other)));
            return Ok(if matches!(other, SolveOutcome::Undecided { .. }) { Outcome::Undecided } else { Outcome::Failed });
        }
    };
    let mut matched = vec![false; priorities.len()];
    let mut ok = sols.len() == priorities.len();
    for (s, sol) in sols.iter().enumerate() {
        let t_rule = csp.to_rule(sol, &format!("survivor-{}", s + 1));
        let which = priorities.iter().position(|p| {
            let d = DraftRule::new(p.clone());
            domain.find_first(|q| (t_rule.allocate(q) != d.allocate(q)).then_some(())).is_none()
        });
        match which {
            Some(w) if !matched[w] => matched[w] = true,
            _ => ok = false,
        }
        let failed: Vec<String> = axioms.iter().filter(|ax| !check(&t_rule, &domain, ax).holds()).map(|a| a.name()).collect();
        ok &= failed.is_empty();
        c.note(format!(
            "survivor {}: {}{}",
            s + 1,
            which.map(|w| format!("draft for priority {:?}", priorities[w].agents().iter().map(|a| a.0).collect::<Vec<_>>())).unwrap_or("not a draft".into()),
            if failed.is_empty() { String::new() } else { format!(", fails {failed:?}") }
        ));
    }
    c.note(format!("{head}: {} survivors for {} priorities{} [{UNIQUENESS_LABEL}]", sols.len(), priorities.len(), c.took(t)));
    Ok(out.and(ok.into()))
}

struct SolveResultVerdict<'a>(&'a SolveOutcome);

impl std::fmt::Display for SolveResultVerdict<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self.0 {
            SolveOutcome::Sat { .. } => "SAT",
            SolveOutcome::Unsat(_) => "UNSAT",
            SolveOutcome::Undecided { .. } => "undecided",
        })
    }
}

fn efficiency(c: &mut Ctx, unacceptable: bool) -> Result<Outcome, VerifyError> {
    let n = c.agents(2);
    let m = c.objects(4, ENUMERATION_CAP)?;
    let d = if unacceptable { ProblemDomain::unacceptable(n, m) } else { ProblemDomain::fixed(n, m) };
    let r = efficiency_equivalence(&d);
    c.note(format!(
        "n={n} m={m}: {} problems, {} allocations ({} efficient), {} disagreements",
        r.problems, r.allocations, r.efficient, r.disagreement_count
    ));
    for d in &r.disagreements {
        c.note(format!("  at {:?}: {:?} characterization {} oracle {}", d.problem.key(), d.allocation, d.characterization, d.oracle));
    }
    let out = Outcome::from(r.agrees());
    let d = if unacceptable { ProblemDomain::unacceptable(2, 3) } else { ProblemDomain::fixed(2, 3) };
    let rules = random_rule_agreement(&d, c.scale.random_rules, c.scale.seed);
    let bad: Vec<_> = rules.iter().filter(|r| r.oracle != r.characterization).collect();
    c.note(format!(
        "{} seeded random rules on n=2 m=3: {} efficient, {} disagreements",
        rules.len(),
        rules.iter().filter(|r| r.oracle).count(),
        bad.len()
    ));
    for r in bad.iter().take(5) {
        c.note(format!("  {}: oracle {} characterization {}", r.rule, r.oracle, r.characterization));
    }
    Ok(out.and(bad.is_empty().into()))
}

fn draft_properties(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let m = c.objects(4, ENUMERATION_CAP)?;
    let ns: Vec<usize> = match c.scale.agents {
        Some(n) => vec![n],
        None => vec![2, 3],
    };
    let mut out = Outcome::Reproduced;
    for n in ns {
        let pi = Priority::identity(n);
        let d = ProblemDomain::fixed(n, m);
        out = out.and(c.sweep(&format!("n={n} m={m}"), &DraftRule::new(pi.clone()), &d, &[Axiom::Rp(pi), Axiom::Ef1, Axiom::Eff, Axiom::Rm]));
    }
    Ok(out)
}

/// Expected cells, one row per rule over RP, EF1, EFF, NW, SP, WSP.
pub const PROPERTY_MATRIX: [(&str, [bool; 6]); 3] = [
    ("null", [true, true, false, false, true, true]),
    ("pi-dictatorship", [true, false, true, true, true, true]),
    ("draft", [true, true, true, true, false, false]),
];

fn property_matrix(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let n = c.agents(3);
    let m = c.objects(4, ENUMERATION_CAP)?;
    let pi = Priority::identity(n);
    let d = ProblemDomain::fixed(n, m);
    let rules: [RuleRef; 3] =
        [Arc::new(NullRule), Arc::new(PiDictatorshipRule { priority: pi.clone() }), Arc::new(DraftRule::new(pi.clone()))];
    let axioms = [Axiom::Rp(pi), Axiom::Ef1, Axiom::Eff, Axiom::Nw, Axiom::Sp, Axiom::Wsp];
    let mut ok = true;
    for ((name, expected), rule) in PROPERTY_MATRIX.iter().zip(&rules) {
        let row: Vec<bool> = axioms.iter().map(|ax| check(rule.as_ref(), &d, ax).holds()).collect();
        let cells: Vec<String> = axioms
            .iter()
            .zip(&row)
            .zip(expected)
            .map(|((ax, got), want)| format!("{}={}{}", ax.name(), yes(*got), if got == want { "" } else { "(!)" }))
            .collect();
        ok &= row == expected;
        c.note(format!("{name}: {}", cells.join(" ")));
    }
    c.note(format!("n={n} m={m}, {} problems", d.len()));
    Ok(ok.into())
}

fn yes(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

fn truncation_invariance(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let m = c.objects(4, ENUMERATION_CAP)?;
    // bundle level: for a truncation R' of R, IR bundles B (truthful) and
    // B' (truncated) with B acceptable under R', TP and EP force B = B'
    let mut cases = 0usize;
    let mut bad = None;
    for r in Preference::all_with_cutoffs(m) {
        for rt in r.truncation_family() {
            let acc_t = rt.acceptable();
            for b in acc_t.subsets() {
                for bt in acc_t.subsets() {
                    let tp = Comparator::Unacceptable.geq(&r, b, bt);
                    let ep = Comparator::Unacceptable.geq(&rt, bt, b);
                    if tp && ep {
                        cases += 1;
                        if b != bt && bad.is_none() {
                            bad = Some((r, rt, b, bt));
                        }
                    }
                }
            }
        }
    }
    let u = Universe::letters(m);
    c.note(format!("bundle level, universe {m}: {cases} (R, R', B, B') with TP and EP, counterexample: {}", match bad {
        None => "none".into(),
        Some((r, rt, b, bt)) => format!("{} / {} / {} / {}", r.format(&u), rt.format(&u), u.fmt_bundle(b), u.fmt_bundle(bt)),
    }));
    let mut out = Outcome::from(bad.is_none());

    // rule level: named rules and rules found by search
    let d = ProblemDomain::unacceptable(2, 3);
    let pi = Priority::identity(2);
    let mut rules: Vec<RuleRef> = vec![
        Arc::new(DraftRule::new(pi.clone())),
        Arc::new(DraftRule::new(pi.reversed())),
        Arc::new(SerialDictatorshipRule { priority: pi.clone() }),
        Arc::new(NullRule),
        Arc::new(SnakeDraftRule { priority: pi.clone() }),
    ];
    rules.extend(crate::independence::unacceptable_model().into_iter().map(|c| c.rule));
    let mut premise = 0;
    for r in &rules {
        let pre = [Axiom::Ir, Axiom::Tp, Axiom::Ep].iter().all(|a| check(r.as_ref(), &d, a).holds());
        let ti = check(r.as_ref(), &d, &Axiom::Ti).holds();
        premise += pre as usize;
        if pre && !ti {
            out = Outcome::Failed;
            c.note(format!("{} has IR, TP and EP but fails TI", r.name()));
        }
    }
    c.note(format!("named rules: {} checked, {} satisfy IR, TP and EP, all of those satisfy TI: {}", rules.len(), premise, out == Outcome::Reproduced));
    let small = ProblemDomain::unacceptable(2, 2);
    let csp = RuleCsp::build(&small, &[Axiom::Ir, Axiom::Tp, Axiom::Ep], KeyMode::Full)?;
    let limit = c.scale.random_rules.max(1);
    let res = csp.solve(SolveMode::FindAll { limit }, c.scale.budget);
    let sols = match res.outcome {
        SolveOutcome::Sat { solutions, .. } | SolveOutcome::Undecided { solutions } => solutions,
        SolveOutcome::Unsat(_) => Vec::new(),
    };
    let failing = sols.par_iter().filter(|s| !check(&csp.to_rule(s, "s"), &small, &Axiom::Ti).holds()).count();
    c.note(format!("search over n=2 m=2: {} rules with IR, TP and EP enumerated, {} fail TI", sols.len(), failing));
    Ok(out.and((failing == 0).into()))
}

fn critical_agents(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let grid: Vec<(usize, usize)> = match (c.scale.agents, c.scale.objects) {
        (None, None) => vec![(2, 4), (3, 3)],
        _ => vec![(c.agents(2), c.objects(4, ENUMERATION_CAP)?)],
    };
    let mut out = Outcome::Reproduced;
    for (n, m) in grid {
        let d = ProblemDomain::fixed(n, m);
        for pi in Priority::all(&agents(n)) {
            let wrp = Axiom::Wrp(pi.clone());
            let counts: Vec<(usize, Option<(Problem, Allocation)>)> = (0..d.len())
                .into_par_iter()
                .map(|idx| {
                    let p = d.problem(idx);
                    let mut k = 0;
                    let mut bad = None;
                    for a in all_allocations(&p, false).expect("within cap") {
                        if check_allocation(&wrp, &p, &a).is_none() && check_allocation(&Axiom::Ef1, &p, &a).is_none() {
                            k += 1;
                            if critical_agent(&p, &a, &pi).is_none() && bad.is_none() {
                                bad = Some((p.clone(), a));
                            }
                        }
                    }
                    (k, bad)
                })
                .collect();
            let total: usize = counts.iter().map(|x| x.0).sum();
            let bad = counts.into_iter().find_map(|x| x.1);
            c.note(format!(
                "n={n} m={m} priority {:?}: {total} allocations with WRP and EF1, {}",
                pi.agents().iter().map(|a| a.0).collect::<Vec<_>>(),
                match &bad {
                    None => "each has a critical agent".to_string(),
                    Some((p, a)) => format!("none at {:?} {:?}", p.key(), a),
                }
            ));
            out = out.and(bad.is_none().into());
        }
    }
    Ok(out)
}

/// Problems and objects the lemma applies to, for one rule.
fn added_worst_object_at(rule: &dyn Rule, d: &ProblemDomain) -> (usize, Option<String>) {
    let m = d.universe_size();
    let res: Vec<(usize, Option<String>)> = (0..d.len())
        .into_par_iter()
        .map(|idx| {
            let p = d.problem(idx);
            let a = rule.allocate(&p);
            let mut k = 0;
            for o in 0..m as u8 {
                let x = ObjectId(o);
                if p.available().contains(x) {
                    continue;
                }
                let below_all = (0..p.n()).all(|i| a.get(i).iter().all(|y| p.pref(i).prefers(y, x)));
                if !below_all {
                    continue;
                }
                k += 1;
                let b = rule.allocate(&p.with_available(p.available().with(x)));
                if let Some(i) = (0..p.n()).find(|&i| !a.get(i).is_subset(b.get(i))) {
                    return (k, Some(format!("agent {} at {:?} adding {}", p.agents()[i], p.key(), x.0)));
                }
            }
            (k, None)
        })
        .collect();
    (res.iter().map(|r| r.0).sum(), res.into_iter().find_map(|r| r.1))
}

fn added_worst_object(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let m = c.objects(4, ENUMERATION_CAP)?;
    let ns: Vec<usize> = match c.scale.agents {
        Some(n) => vec![n],
        None => vec![2, 3],
    };
    let mut out = Outcome::Reproduced;
    for n in ns {
        let d = ProblemDomain::fixed(n, m);
        let mut rules: Vec<RuleRef> = Priority::all(&agents(n)).into_iter().map(|p| Arc::new(DraftRule::new(p)) as RuleRef).collect();
        let id = Priority::identity(n);
        rules.push(Arc::new(SnakeDraftRule { priority: id.clone() }));
        let mut prefix = vec![AgentId(1)];
        prefix.extend(agents(n));
        rules.push(Arc::new(SequenceDraftRule { sequence: PickingSequence::Prefix { prefix, tail: id } }));
        for r in rules {
            let rm = check(r.as_ref(), &d, &Axiom::Rm);
            if !rm.holds() {
                c.note(format!("n={n} m={m} {}: fails RM, lemma does not apply", r.name()));
                continue;
            }
            let (k, bad) = added_worst_object_at(r.as_ref(), &d);
            c.note(format!("n={n} m={m} {}: RM holds, {k} additions checked, {}", r.name(), bad.clone().unwrap_or("every bundle kept".into())));
            out = out.and(bad.is_none().into());
        }
    }
    Ok(out)
}

fn priority_probes(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let k = c.agents(4);
    let m = c.objects(3, ENUMERATION_CAP)?;
    let ag = agents(k);
    let mut recovered = 0;
    let mut snake_ok = 0;
    let all = Priority::all(&ag);
    for pi in &all {
        if infer_priority(&DraftRule::new(pi.clone()), &ag, m).ok().as_ref() == Some(pi) {
            recovered += 1;
        }
        if infer_priority(&SnakeDraftRule { priority: pi.clone() }, &ag, m).ok().as_ref() == Some(pi) {
            snake_ok += 1;
        }
    }
    c.note(format!("draft: {recovered}/{} priorities over {k} agents recovered exactly (m={m})", all.len()));
    c.note(format!("snake draft: {snake_ok}/{} recovered", all.len()));
    // answers that depend on which objects are probed
    let pi = Priority::identity(k);
    let pr = pi.clone();
    let fixture = FnRule::new("object-dependent order", move |p: &Problem| {
        let order = if p.available().contains(ObjectId(0)) { pr.clone() } else { pr.reversed() };
        draft_priority(p, &order).0
    });
    let neutral = matches!(infer_priority(&fixture, &ag, m), Err(PriorityInferenceError::NotNeutral { .. }));
    c.note(format!("object-dependent fixture reported as a 2-NEU violation: {neutral}"));
    let fair = infer_priority(&PiDictatorshipRule { priority: pi }, &ag, m);
    c.note(format!("pi-dictatorship rejected for violating a hypothesis: {}", matches!(fair, Err(PriorityInferenceError::Hypothesis { .. }))));
    Ok((recovered == all.len() && snake_ok == all.len() && neutral).into())
}

fn extension(c: &mut Ctx) -> Result<Outcome, VerifyError> {
    let k = c.agents(3);
    let m = c.objects(4, SEARCH_CAP)?;
    let potential = agents(k);
    let pi = Priority::identity(k);
    let d = ProblemDomain::variable(&potential, m);
    let u = Universe::letters(m);
    let mut out = Outcome::Reproduced;
    let tail = variable_model().into_iter().find(|c| c.fails == "RM-VAR").expect("tail-first rule").rule;
    let cases: [(&str, RuleRef, &[ExtensionVerdict]); 3] = [
        ("draft", Arc::new(DraftRule::new(pi.clone())), &[ExtensionVerdict::Confirmed]),
        ("snake draft", Arc::new(SnakeDraftRule { priority: pi.clone() }), &[ExtensionVerdict::HypothesisFails]),
        ("tail-first rounds", tail, &[ExtensionVerdict::HypothesisFails, ExtensionVerdict::Refuted]),
    ];
    for (name, rule, expected) in cases {
        let r = verify_extension_lemma(rule.as_ref(), &pi, &d);
        let div = r.divergence.as_ref().map(|dv| {
            format!("{:?} rule {} draft {}", dv.problem.key(), u.fmt_allocation(&dv.rule), u.fmt_allocation(&dv.draft))
        });
        c.note(format!(
            "{name}: {:?}; precondition {}; RM-VAR {}; T-CON {}; first divergence {}",
            r.verdict,
            if r.precondition.is_none() { "holds" } else { "fails" },
            r.rm.verdict.as_str(),
            r.tcon.verdict.as_str(),
            div.unwrap_or("none".into())
        ));
        out = out.and(expected.contains(&r.verdict).into());
    }
    Ok(out)
}

/// Helper for callers that build a fixed-model problem from index rankings.
pub fn fixed_problem(m: usize, x: Bundle, rankings: &[&[u8]]) -> Problem {
    let prefs: Vec<Preference> = rankings.iter().map(|r| Preference::from_indices(r, None).extend_canonically(m)).collect();
    Problem::new(m, &agents(prefs.len()), x, &prefs, Variant::Fixed).expect("valid problem")
}
