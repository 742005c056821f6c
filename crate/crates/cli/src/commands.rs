//! The five commands. Each returns human-readable text, a JSON result and
//! an exit status; `main` handles printing and `--out`.

use std::fmt::Write as _;
use std::sync::Arc;

use draftkit_axioms::msp::{check_best_case, check_msp_certificate, check_msp_falsify, msp_verdict, MspVerdict};
use draftkit_axioms::{agents, check, check_at, Axiom, AxiomReport, ProblemDomain, Verdict};
use draftkit_core::{Allocation, Priority, Problem, Quota, Quotas, Universe};
use draftkit_pd::WeightScheme;
use draftkit_rules::{
    draft_priority, draft_quota, draft_variable, null_allocation, pi_dictatorship, serial_dictatorship, snake_draft,
    u_draft, DraftRule, NullRule, PiDictatorshipRule, RuleRef, SelectionTrace, SerialDictatorshipRule, SnakeDraftRule,
};
use draftkit_verifier::manipulation::find_manipulation;
use draftkit_verifier::theorems::{ENUMERATION_CAP, SEARCH_CAP};
use draftkit_verifier::{infer_priority, verify, Outcome, Scale, VerifyError, THEOREM_IDS};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{Loaded, ProblemFile, VariantName};
use crate::report::{allocation_names, bundle_names, AgentBundle, AxiomJson, Status, WitnessJson};

#[derive(Clone, Debug)]
pub struct Settings {
    pub budget: u64,
    pub seed: u64,
    pub allow_huge: bool,
    pub timestamp: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            budget: draftkit_verifier::DEFAULT_BUDGET,
            seed: draftkit_verifier::theorems::DEFAULT_SEED,
            allow_huge: false,
            timestamp: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommandOutput {
    pub status: Status,
    pub text: String,
    pub json: Value,
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RuleName {
    Draft,
    DraftQuota,
    UDraft,
    DraftVariable,
    SerialDictatorship,
    PiDictatorship,
    Null,
    Snake,
}

impl RuleName {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Draft => "draft",
            RuleName::DraftQuota => "draft-quota",
            RuleName::UDraft => "u-draft",
            RuleName::DraftVariable => "draft-variable",
            RuleName::SerialDictatorship => "serial-dictatorship",
            RuleName::PiDictatorship => "pi-dictatorship",
            RuleName::Null => "null",
            RuleName::Snake => "snake",
        }
    }

    fn models(self) -> &'static [VariantName] {
        use VariantName::*;
        match self {
            RuleName::Draft => &[Fixed],
            RuleName::DraftQuota => &[Quota],
            RuleName::UDraft => &[Unacceptable],
            RuleName::DraftVariable => &[Variable],
            RuleName::SerialDictatorship | RuleName::PiDictatorship | RuleName::Snake => &[Fixed, Variable],
            RuleName::Null => &[Fixed, Quota, Unacceptable, Variable],
        }
    }

    /// Reject rule/model mismatches such as quotas with the plain draft.
    pub fn accepts(self, v: VariantName) -> Result<(), UsageError> {
        if self.models().contains(&v) {
            return Ok(());
        }
        let fits: Vec<&str> = self.models().iter().map(|m| m.as_str()).collect();
        let hint = match v {
            VariantName::Fixed => "draft",
            VariantName::Quota => "draft-quota",
            VariantName::Unacceptable => "u-draft",
            VariantName::Variable => "draft-variable",
        };
        Err(UsageError(format!(
            "rule {} applies to the {} model, not {}; use --rule {hint}",
            self.as_str(),
            fits.join("/"),
            v.as_str()
        )))
    }

    pub fn build(self, pi: &Priority) -> RuleRef {
        match self {
            RuleName::Draft | RuleName::DraftQuota | RuleName::UDraft | RuleName::DraftVariable => {
                Arc::new(DraftRule::new(pi.clone()))
            }
            RuleName::SerialDictatorship => Arc::new(SerialDictatorshipRule { priority: pi.clone() }),
            RuleName::PiDictatorship => Arc::new(PiDictatorshipRule { priority: pi.clone() }),
            RuleName::Null => Arc::new(NullRule),
            RuleName::Snake => Arc::new(SnakeDraftRule { priority: pi.clone() }),
        }
    }

    /// Allocation plus the selection trace for the sequential engines.
    pub fn execute(self, p: &Problem, pi: &Priority) -> (Allocation, Option<SelectionTrace>) {
        let traced = |(a, t): (Allocation, SelectionTrace)| (a, Some(t));
        match self {
            RuleName::Draft => traced(draft_priority(p, pi)),
            RuleName::DraftQuota => traced(draft_quota(p, pi, p.quotas().expect("quota model"))),
            RuleName::UDraft => traced(u_draft(p, pi)),
            RuleName::DraftVariable => traced(draft_variable(p, pi)),
            RuleName::Snake => traced(snake_draft(p, pi)),
            RuleName::SerialDictatorship => (serial_dictatorship(p, pi), None),
            RuleName::PiDictatorship => (pi_dictatorship(p, pi), None),
            RuleName::Null => (null_allocation(p), None),
        }
    }
}

fn fmt_priority(pi: &Priority) -> String {
    pi.agents().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(">")
}

pub fn parse_priority(s: &str) -> Result<Priority, UsageError> {
    s.split(|c| c == ',' || c == '>')
        .map(|t| t.trim().parse::<u16>().map(draftkit_core::AgentId))
        .collect::<Result<Vec<_>, _>>()
        .map(Priority)
        .map_err(|_| UsageError(format!("priority `{s}` must list agent ids, e.g. 2,1,3")))
}

pub fn parse_quotas(s: &str) -> Result<Vec<Quota>, UsageError> {
    s.split(',')
        .map(|t| match t.trim() {
            "inf" => Ok(Quota::Infinite),
            k => match k.parse::<u32>() {
                Ok(0) | Err(_) => Err(UsageError(format!("quota `{k}` must be a positive integer or inf"))),
                Ok(q) => Ok(Quota::Finite(q)),
            },
        })
        .collect()
}

fn check_priority(pi: &Priority, p: &Problem) -> Result<(), UsageError> {
    let mut a = pi.agents().to_vec();
    let mut b = p.agents().to_vec();
    a.sort();
    b.sort();
    if a != b {
        return Err(UsageError(format!("priority {} does not order the problem's agents", fmt_priority(pi))));
    }
    Ok(())
}

fn parse_axioms(names: &[String], pi: &Priority) -> Result<Vec<Requested>, UsageError> {
    names
        .iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim().to_ascii_uppercase().as_str() {
            "MSP" => Ok(Requested::Msp),
            "BEST-CASE" => Ok(Requested::BestCase),
            _ => Axiom::parse(s, pi).map(Requested::Axiom).map_err(UsageError),
        })
        .collect()
}

enum Requested {
    Axiom(Axiom),
    Msp,
    BestCase,
}

impl Requested {
    fn name(&self) -> String {
        match self {
            Requested::Axiom(a) => a.name(),
            Requested::Msp => "MSP".into(),
            Requested::BestCase => "best-case".into(),
        }
    }

    fn needs_relabelling(&self) -> bool {
        matches!(self, Requested::Axiom(Axiom::Neu | Axiom::TwoNeu))
    }
}

fn schemes(seed: u64) -> Vec<WeightScheme> {
    let mut v = vec![WeightScheme::Geometric, WeightScheme::Linear];
    v.extend((0..100).map(|k| WeightScheme::Random { seed: seed.wrapping_add(k) }));
    v
}

fn status_of(v: Verdict) -> Status {
    match v {
        Verdict::Holds => Status::Ok,
        Verdict::Violated => Status::Violation,
        Verdict::Undecided => Status::Undecided,
    }
}

fn describe(r: &AxiomReport, out: &mut String) {
    let _ = writeln!(out, "  {:<10} {:<9} ({} problems)", r.axiom, r.verdict.as_str(), r.checked);
    if let Some(w) = &r.witness {
        let u = Universe::letters(w.problem.universe_size());
        let _ = writeln!(out, "    witness: {}", w.detail);
        let _ = writeln!(out, "    at: {}", compact(&w.problem, &u));
        for q in &w.related {
            let _ = writeln!(out, "    vs: {}", compact(q, &u));
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "    note: {n}");
    }
}

fn compact(p: &Problem, u: &Universe) -> String {
    let prefs: Vec<String> = p.profile().iter().map(|q| q.format(u)).collect();
    let ids: Vec<String> = p.agents().iter().map(|a| a.to_string()).collect();
    format!("agents {} X={} prefs ({})", ids.join(","), u.fmt_bundle(p.available()), prefs.join(", "))
}

/// Domain of the given shape, as enumerated by the checkers.
pub fn domain_for(variant: VariantName, n: usize, m: usize, quotas: Option<Vec<Quota>>) -> Result<ProblemDomain, UsageError> {
    Ok(match variant {
        VariantName::Fixed => ProblemDomain::fixed(n, m),
        VariantName::Unacceptable => ProblemDomain::unacceptable(n, m),
        VariantName::Variable => ProblemDomain::variable(&agents(n), m),
        VariantName::Quota => {
            let q = quotas.ok_or_else(|| UsageError("the quota model needs --quotas".into()))?;
            if q.len() != n {
                return Err(UsageError(format!("{} quotas for {n} agents", q.len())));
            }
            ProblemDomain::quota(m, Quotas(q))
        }
    })
}

#[derive(Serialize)]
struct RunJson {
    rule: &'static str,
    priority: Vec<u16>,
    problem: ProblemFile,
    allocation: Vec<AgentBundle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<Value>>,
    unassigned: Vec<String>,
    axioms: Vec<AxiomJson>,
}

/// Run a rule on one problem, optionally checking axioms at that instance.
pub fn run(loaded: &Loaded, rule: RuleName, axioms: &[String], _s: &Settings) -> Result<CommandOutput, UsageError> {
    let p = &loaded.problem;
    let u = &loaded.universe;
    rule.accepts(VariantName::of(p.variant()))?;
    let pi = &loaded.priority;
    check_priority(pi, p)?;
    let (alloc, trace) = rule.execute(p, pi);
    let mut text = String::new();
    let _ = writeln!(text, "rule: {} (priority {})", rule.as_str(), fmt_priority(pi));
    let _ = writeln!(text, "available: {}", u.fmt_bundle(p.available()));
    let width = (0..p.n()).map(|i| loaded.label(i).len()).max().unwrap_or(5).max(5);
    let _ = writeln!(text, "{:<width$}  {:<20}  bundle", "agent", "preference");
    let mut rows = Vec::new();
    for i in 0..p.n() {
        let agent = p.agents()[i];
        // pick order when a trace exists, universe order otherwise
        let order: Vec<String> = match &trace {
            Some(t) => t.steps.iter().filter(|s| s.agent == agent).filter_map(|s| s.pick).map(|o| u.name(o).to_string()).collect(),
            None => bundle_names(u, alloc.get(i)),
        };
        let _ = writeln!(text, "{:<width$}  {:<20}  {{{}}}", loaded.label(i), p.pref(i).format(u), order.join(","));
        rows.push(AgentBundle { agent: agent.0, name: loaded.names[i].clone(), bundle: order });
    }
    let _ = writeln!(text, "allocation: {}", u.fmt_allocation(&alloc));
    if let Some(t) = &trace {
        let _ = writeln!(text, "trace: {}", t.render(u));
    }
    let unassigned = p.available().iter().filter(|o| !alloc.assigned().contains(*o)).map(|o| u.name(o).to_string()).collect::<Vec<_>>();
    if !unassigned.is_empty() {
        let _ = writeln!(text, "unassigned: {{{}}}", unassigned.join(","));
    }

    let requested = parse_axioms(axioms, pi)?;
    let mut status = Status::Ok;
    let mut ax_json = Vec::new();
    if !requested.is_empty() {
        let n = p.n();
        if p.agents().iter().enumerate().any(|(i, a)| a.0 as usize != i + 1) {
            return Err(UsageError("--check needs agents numbered 1..n in order".into()));
        }
        let m = p.universe_size();
        let domain = domain_for(VariantName::of(p.variant()), n, m, p.quotas().map(|q| q.0.clone()))?;
        // the checkers label objects a, b, c, ...
        let letters = Universe::letters(m);
        let rule_ref = rule.build(pi);
        let _ = writeln!(text, "axioms at this instance:");
        for r in &requested {
            let Requested::Axiom(ax) = r else {
                return Err(UsageError(format!("{} is a domain-level property; use `check`", r.name())));
            };
            let w = check_at(rule_ref.as_ref(), &domain, ax, p);
            let verdict = if w.is_some() { Verdict::Violated } else { Verdict::Holds };
            status = status.worst(status_of(verdict));
            let _ = writeln!(text, "  {:<10} {}", ax.name(), verdict.as_str());
            if let Some(w) = &w {
                let _ = writeln!(text, "    witness: {}", w.detail);
                let _ = writeln!(text, "    vs: {}", w.related.iter().map(|q| compact(q, &letters)).collect::<Vec<_>>().join("; "));
            }
            ax_json.push(AxiomJson {
                axiom: ax.name(),
                verdict: verdict.as_str().into(),
                checked: 1,
                witness: w.as_ref().map(WitnessJson::new),
                notes: Vec::new(),
            });
        }
    }
    let json = RunJson {
        rule: rule.as_str(),
        priority: pi.agents().iter().map(|a| a.0).collect(),
        problem: loaded.to_file(),
        allocation: rows,
        trace: trace.as_ref().map(|t| {
            t.steps.iter().map(|s| json!({"step": s.step, "agent": s.agent.0, "pick": s.pick.map(|o| u.name(o).to_string())})).collect()
        }),
        unassigned,
        axioms: ax_json,
    };
    Ok(CommandOutput { status, text, json: serde_json::to_value(json).expect("serializable") })
}

#[derive(Clone, Debug)]
pub struct DomainSpec {
    pub variant: VariantName,
    pub agents: usize,
    pub objects: usize,
    pub quotas: Option<Vec<Quota>>,
}

/// Audit a rule against axioms over every problem of a domain.
pub fn check_domain(
    spec: &DomainSpec,
    rule: RuleName,
    axioms: &[String],
    priority: Option<Priority>,
    s: &Settings,
) -> Result<CommandOutput, UsageError> {
    rule.accepts(spec.variant)?;
    if spec.agents == 0 || spec.objects == 0 {
        return Err(UsageError("--agents and --objects must be positive".into()));
    }
    let pi = priority.unwrap_or_else(|| Priority::identity(spec.agents));
    let mut ids: Vec<u16> = pi.agents().iter().map(|a| a.0).collect();
    ids.sort();
    if ids != (1..=spec.agents as u16).collect::<Vec<_>>() {
        return Err(UsageError(format!("priority {} does not order agents 1..{}", fmt_priority(&pi), spec.agents)));
    }
    let requested = parse_axioms(axioms, &pi)?;
    if requested.is_empty() {
        return Err(UsageError("no axioms requested".into()));
    }
    let cap = if requested.iter().any(Requested::needs_relabelling) { SEARCH_CAP } else { ENUMERATION_CAP };
    let domain = domain_for(spec.variant, spec.agents, spec.objects, spec.quotas.clone())?;
    let header = format!(
        "check {} (priority {}) over the {} model, n={}, universe of {} objects",
        rule.as_str(),
        fmt_priority(&pi),
        spec.variant.as_str(),
        spec.agents,
        spec.objects
    );
    let mut text = header.clone() + "\n";
    if spec.objects > cap && !s.allow_huge {
        let msg = format!("universe of {} objects exceeds the cap of {cap}; pass --i-know-this-is-huge to lift it", spec.objects);
        let _ = writeln!(text, "undecided: {msg}");
        let partial: Vec<Value> = requested.iter().map(|r| json!({"axiom": r.name(), "verdict": "undecided", "checked": 0})).collect();
        return Ok(CommandOutput { status: Status::Undecided, text, json: json!({"header": header, "note": msg, "axioms": partial}) });
    }
    let _ = writeln!(text, "{} problems", domain.len());
    let rule_ref = rule.build(&pi);
    let mut status = Status::Ok;
    let mut reports = Vec::new();
    for r in &requested {
        let rep = match r {
            Requested::Axiom(ax) => check(rule_ref.as_ref(), &domain, ax),
            Requested::Msp => {
                let cert = check_msp_certificate(rule_ref.as_ref(), &domain);
                let fals = check_msp_falsify(rule_ref.as_ref(), &domain, &schemes(s.seed));
                let mut rep = match msp_verdict(&cert, &fals) {
                    MspVerdict::Refuted => fals.clone(),
                    _ => cert.clone(),
                };
                rep.axiom = "MSP".into();
                rep.verdict = match msp_verdict(&cert, &fals) {
                    MspVerdict::Proved => Verdict::Holds,
                    MspVerdict::Refuted => Verdict::Violated,
                    MspVerdict::Undecided => Verdict::Undecided,
                };
                rep.notes.push(format!("certificate {}, falsifier {}", cert.verdict.as_str(), fals.verdict.as_str()));
                rep
            }
            Requested::BestCase => check_best_case(rule_ref.as_ref(), &domain, &schemes(s.seed)),
        };
        status = status.worst(status_of(rep.verdict));
        describe(&rep, &mut text);
        reports.push(rep);
    }
    let json = json!({
        "header": header,
        "rule": rule.as_str(),
        "variant": spec.variant.as_str(),
        "agents": spec.agents,
        "objects": spec.objects,
        "priority": pi.agents().iter().map(|a| a.0).collect::<Vec<_>>(),
        "problems": domain.len(),
        "axioms": reports.iter().map(AxiomJson::new).collect::<Vec<_>>(),
    });
    Ok(CommandOutput { status, text, json })
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub agents: Option<usize>,
    pub objects: Option<usize>,
    pub random_rules: Option<usize>,
    pub random_schemes: Option<usize>,
}

/// Reproduce one or more results; `all` expands to every id.
pub fn verify_ids(ids: &[String], o: &VerifyOptions, s: &Settings) -> Result<CommandOutput, UsageError> {
    let ids: Vec<String> = if ids.iter().any(|i| i.eq_ignore_ascii_case("all")) {
        THEOREM_IDS.iter().map(|s| s.to_string()).collect()
    } else {
        ids.to_vec()
    };
    if ids.is_empty() {
        return Err(UsageError(format!("name a result to verify: {} or all", THEOREM_IDS.join(", "))));
    }
    let base = Scale::default();
    let scale = Scale {
        agents: o.agents,
        objects: o.objects,
        budget: s.budget,
        seed: s.seed,
        random_rules: o.random_rules.unwrap_or(base.random_rules),
        random_schemes: o.random_schemes.unwrap_or(base.random_schemes),
        allow_huge: s.allow_huge,
        timings: s.timestamp,
    };
    let mut text = String::new();
    let mut status = Status::Ok;
    let mut reports = Vec::new();
    for id in &ids {
        match verify(id, &scale) {
            Ok(r) => {
                let st = match r.outcome {
                    Outcome::Reproduced => Status::Ok,
                    Outcome::Failed => Status::Violation,
                    Outcome::Undecided => Status::Undecided,
                };
                status = status.worst(st);
                let _ = write!(text, "{} {}{}", r.id, r.outcome.as_str(), if r.desk_scale { " [desk-scale]" } else { "" });
                if s.timestamp {
                    let _ = write!(text, " ({:.2?})", r.elapsed);
                }
                let _ = writeln!(text, "\n  claim: {}", r.claim);
                for d in &r.details {
                    let _ = writeln!(text, "  {d}");
                }
                let mut j = json!({
                    "id": r.id,
                    "claim": r.claim,
                    "desk_scale": r.desk_scale,
                    "outcome": r.outcome.as_str(),
                    "details": r.details,
                });
                if s.timestamp {
                    j["elapsed_ms"] = json!(r.elapsed.as_secs_f64() * 1e3);
                }
                reports.push(j);
            }
            Err(VerifyError::TooLarge { what, value, cap }) => {
                let msg = VerifyError::TooLarge { what, value, cap }.to_string();
                status = status.worst(Status::Undecided);
                let _ = writeln!(text, "{id} undecided\n  {msg}");
                reports.push(json!({"id": id, "outcome": "undecided", "details": [msg]}));
            }
            Err(VerifyError::Csp(e)) => {
                status = status.worst(Status::Undecided);
                let _ = writeln!(text, "{id} undecided\n  {e}");
                reports.push(json!({"id": id, "outcome": "undecided", "details": [e.to_string()]}));
            }
            Err(e) => return Err(UsageError(e.to_string())),
        }
    }
    Ok(CommandOutput { status, text, json: json!({ "reports": reports }) })
}

/// Search for a profitable misreport by one agent.
pub fn manipulate(loaded: &Loaded, rule: RuleName, agent: &str, _s: &Settings) -> Result<CommandOutput, UsageError> {
    let p = &loaded.problem;
    let u = &loaded.universe;
    rule.accepts(VariantName::of(p.variant()))?;
    check_priority(&loaded.priority, p)?;
    let a = loaded.find_agent(agent).ok_or_else(|| UsageError(format!("no agent `{agent}` in the problem")))?;
    let idx = p.index_of(a).expect("resolved above");
    let r = rule.build(&loaded.priority);
    let truthful = r.allocate(p).get(idx);
    let found = find_manipulation(r.as_ref(), p, a);
    let mut text = format!(
        "agent {} reports {} truthfully and receives {}\n",
        loaded.label(idx),
        p.pref(idx).format(u),
        u.fmt_bundle(truthful)
    );
    let json = match &found {
        Some(m) => {
            let _ = writeln!(
                text,
                "manipulable: reporting {} yields {}, strictly better than {}",
                m.misreport.format(u),
                u.fmt_bundle(m.gained),
                u.fmt_bundle(m.lost)
            );
            json!({
                "agent": a.0,
                "truthful": p.pref(idx).format(u),
                "manipulable": true,
                "misreport": m.misreport.format(u),
                "gained": bundle_names(u, m.gained),
                "lost": bundle_names(u, m.lost),
                "problem": loaded.to_file(),
            })
        }
        None => {
            let _ = writeln!(text, "no misreport gives a bundle that dominates the truthful one");
            json!({"agent": a.0, "truthful": p.pref(idx).format(u), "manipulable": false, "problem": loaded.to_file()})
        }
    };
    let status = if found.is_some() { Status::Violation } else { Status::Ok };
    Ok(CommandOutput { status, text, json })
}

/// Recover the priority behind a rule built from `priority`.
pub fn infer(rule: RuleName, n: usize, m: usize, priority: Option<Priority>, _s: &Settings) -> Result<CommandOutput, UsageError> {
    let ag = agents(n);
    let pi = priority.unwrap_or_else(|| Priority::identity(n));
    let mut sorted = pi.agents().to_vec();
    sorted.sort();
    if sorted != ag {
        return Err(UsageError(format!("priority {} does not order agents 1..{n}", fmt_priority(&pi))));
    }
    let r = rule.build(&pi);
    let mut text = format!("probing {} built from priority {} with {n} agents, {m} objects\n", rule.as_str(), fmt_priority(&pi));
    let (status, json) = match infer_priority(r.as_ref(), &ag, m) {
        Ok(found) => {
            let _ = writeln!(text, "inferred priority: {}{}", fmt_priority(&found), if found == pi { " (matches)" } else { " (differs)" });
            (
                if found == pi { Status::Ok } else { Status::Violation },
                json!({"rule": rule.as_str(), "priority": pi.agents().iter().map(|a| a.0).collect::<Vec<_>>(),
                       "inferred": found.agents().iter().map(|a| a.0).collect::<Vec<_>>()}),
            )
        }
        Err(e) => {
            let _ = writeln!(text, "no priority: {e}");
            (Status::Violation, json!({"rule": rule.as_str(), "error": e.to_string()}))
        }
    };
    Ok(CommandOutput { status, text, json })
}

/// Allocation of `loaded` under `rule`, with object names, for callers
/// that only need the result.
pub fn allocation_of(loaded: &Loaded, rule: RuleName) -> Vec<Vec<String>> {
    let (a, _) = rule.execute(&loaded.problem, &loaded.priority);
    allocation_names(&loaded.universe, &a)
}
