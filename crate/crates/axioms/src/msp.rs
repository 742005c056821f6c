//! Maxmin strategy-proofness: a sufficient certificate, a utility-based
//! falsifier, and the best-case check for non-obvious manipulability.

use draftkit_core::{AgentId, Bundle, Preference, Problem, Universe};
use draftkit_pd::{pd_geq, UtilityTable, WeightScheme};
use draftkit_rules::Rule;
use rayon::prelude::*;

use crate::axiom::{AxiomReport, Verdict, Witness};
use crate::domain::ProblemDomain;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MspVerdict {
    Proved,
    Refuted,
    Undecided,
}

/// Combine certificate and falsifier reports.
pub fn msp_verdict(certificate: &AxiomReport, falsifier: &AxiomReport) -> MspVerdict {
    if falsifier.verdict == Verdict::Violated {
        MspVerdict::Refuted
    } else if certificate.verdict == Verdict::Holds {
        MspVerdict::Proved
    } else {
        MspVerdict::Undecided
    }
}

struct Slot<'a> {
    pop: &'a [AgentId],
    x: Bundle,
    space: &'a [Preference],
    agent: usize,
}

fn slots(domain: &ProblemDomain) -> Vec<Slot<'_>> {
    let mut out = Vec::new();
    for (pop, x, space) in domain.blocks() {
        for agent in 0..pop.len() {
            out.push(Slot { pop, x, space, agent });
        }
    }
    out
}

/// Every profile over `space` for `n` agents with agent `fixed` reporting `own`.
fn adversaries(space: &[Preference], n: usize, fixed: usize, own: Preference) -> impl Iterator<Item = Vec<Preference>> + '_ {
    let s = space.len();
    let total = s.pow((n - 1) as u32);
    (0..total).map(move |mut code| {
        let mut prefs = vec![own; n];
        for k in (0..n).rev() {
            if k == fixed {
                continue;
            }
            prefs[k] = space[code % s];
            code /= s;
        }
        prefs
    })
}

fn fmt_profile(prefs: &[Preference], u: &Universe) -> String {
    prefs.iter().map(|p| p.format(u)).collect::<Vec<_>>().join(", ")
}

/// Holds when, for every available set, agent and truthful preference:
/// (a) against the unanimous adversary (everyone else reporting the same
/// preference) truth PD-dominates every misreport, and (b) truth against any
/// adversary PD-dominates truth against the unanimous adversary. Failure of
/// either clause leaves MSP undecided.
pub fn check_msp_certificate(rule: &dyn Rule, domain: &ProblemDomain) -> AxiomReport {
    let slots = slots(domain);
    let u = Universe::letters(domain.universe_size());
    let items: Vec<(usize, usize)> =
        slots.iter().enumerate().flat_map(|(k, s)| (0..s.space.len()).map(move |t| (k, t))).collect();
    let found = items.par_iter().find_map_first(|&(k, t)| {
        let s = &slots[k];
        let n = s.pop.len();
        let truth = s.space[t];
        let unanimous = vec![truth; n];
        let pu = domain.assemble(s.pop, s.x, &unanimous);
        let base = rule.allocate(&pu).get(s.agent);
        for &r in s.space {
            let q = pu.with_pref(s.agent, r);
            let b = rule.allocate(&q).get(s.agent);
            if !pd_geq(&truth, base, b) {
                return Some(Witness {
                    problem: pu.clone(),
                    related: vec![q],
                    agents: vec![s.pop[s.agent]],
                    bundles: vec![base, b],
                    detail: format!(
                        "clause (a): against the unanimous adversary, misreport {} gives {} vs truthful {}",
                        r.format(&u), u.fmt_bundle(b), u.fmt_bundle(base)
                    ),
                });
            }
        }
        for prefs in adversaries(s.space, n, s.agent, truth) {
            let q = domain.assemble(s.pop, s.x, &prefs);
            let b = rule.allocate(&q).get(s.agent);
            if !pd_geq(&truth, b, base) {
                return Some(Witness {
                    problem: pu.clone(),
                    related: vec![q],
                    agents: vec![s.pop[s.agent]],
                    bundles: vec![base, b],
                    detail: format!(
                        "clause (b): adversary ({}) leaves truth with {}, not dominating the unanimous-adversary bundle {}",
                        fmt_profile(&prefs, &u), u.fmt_bundle(b), u.fmt_bundle(base)
                    ),
                });
            }
        }
        None
    });
    let verdict = if found.is_some() { Verdict::Undecided } else { Verdict::Holds };
    let notes = match &found {
        Some(w) => vec![format!("certificate failed ({}); MSP not decided by it", &w.detail[..11])],
        None => vec![],
    };
    AxiomReport { axiom: "MSP certificate".into(), verdict, checked: domain.len(), witness: found, notes }
}

/// For one slot: the bundles agent `agent` can end up with for each report,
/// over every adversary profile.
fn outcome_sets(rule: &dyn Rule, domain: &ProblemDomain, s: &Slot<'_>) -> Vec<Vec<Bundle>> {
    s.space
        .iter()
        .map(|&r| {
            let mut v: Vec<Bundle> = adversaries(s.space, s.pop.len(), s.agent, r)
                .map(|prefs| rule.allocate(&domain.assemble(s.pop, s.x, &prefs)).get(s.agent))
                .collect();
            v.sort_by_key(|b| b.bits());
            v.dedup();
            v
        })
        .collect()
}

fn slot_problem(domain: &ProblemDomain, s: &Slot<'_>, truth: Preference) -> Problem {
    domain.assemble(s.pop, s.x, &vec![truth; s.pop.len()])
}

/// Brute-force maxmin: under each scheme, truth must attain the largest
/// worst-case utility over all reports. Sound for refutation only.
pub fn check_msp_falsify(rule: &dyn Rule, domain: &ProblemDomain, schemes: &[WeightScheme]) -> AxiomReport {
    let slots = slots(domain);
    let u = Universe::letters(domain.universe_size());
    let found = slots.par_iter().find_map_first(|s| {
        let sets = outcome_sets(rule, domain, s);
        for (t, &truth) in s.space.iter().enumerate() {
            for scheme in schemes {
                let tab = UtilityTable::new(&truth, scheme).expect("provided schemes are valid");
                let worst: Vec<_> =
                    sets.iter().map(|v| v.iter().map(|&b| tab.utility(b)).min().expect("nonempty")).collect();
                if let Some(r) = (0..worst.len()).find(|&r| worst[r] > worst[t]) {
                    return Some(Witness {
                        problem: slot_problem(domain, s, truth),
                        related: vec![],
                        agents: vec![s.pop[s.agent]],
                        bundles: vec![],
                        detail: format!(
                            "under {} utilities, report {} guarantees {} but truth only {}",
                            scheme.name(), s.space[r].format(&u), worst[r], worst[t]
                        ),
                    });
                }
            }
        }
        None
    });
    let verdict = if found.is_some() { Verdict::Violated } else { Verdict::Holds };
    AxiomReport {
        axiom: "MSP falsifier".into(),
        verdict,
        checked: domain.len(),
        witness: found,
        notes: vec![format!("{} utility schemes", schemes.len())],
    }
}

/// The best truthful outcome over all adversaries is worth exactly the
/// agent's `k` favourite objects, `k` being her bundle size against the
/// unanimous adversary.
pub fn check_best_case(rule: &dyn Rule, domain: &ProblemDomain, schemes: &[WeightScheme]) -> AxiomReport {
    let slots = slots(domain);
    let u = Universe::letters(domain.universe_size());
    let found = slots.par_iter().find_map_first(|s| {
        for &truth in s.space {
            let mut outcomes: Vec<Bundle> = adversaries(s.space, s.pop.len(), s.agent, truth)
                .map(|prefs| rule.allocate(&domain.assemble(s.pop, s.x, &prefs)).get(s.agent))
                .collect();
            outcomes.sort_by_key(|b| b.bits());
            outcomes.dedup();
            let pu = slot_problem(domain, s, truth);
            let k = rule.allocate(&pu).get(s.agent).len();
            let ideal = truth.top_k(s.x, k);
            for scheme in schemes {
                let tab = UtilityTable::new(&truth, scheme).expect("provided schemes are valid");
                let best = outcomes.iter().map(|&b| tab.utility(b)).max().expect("nonempty");
                if best != tab.utility(ideal) {
                    return Some(Witness {
                        problem: pu,
                        related: vec![],
                        agents: vec![s.pop[s.agent]],
                        bundles: vec![ideal],
                        detail: format!(
                            "under {} utilities the best truthful outcome is worth {} but {} is worth {}",
                            scheme.name(), best, u.fmt_bundle(ideal), tab.utility(ideal)
                        ),
                    });
                }
            }
        }
        None
    });
    let verdict = if found.is_some() { Verdict::Violated } else { Verdict::Holds };
    AxiomReport { axiom: "best-case check".into(), verdict, checked: domain.len(), witness: found, notes: vec![] }
}
