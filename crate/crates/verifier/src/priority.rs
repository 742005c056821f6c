//! Recovering the priority behind a rule from two-agent probes, and the
//! extension step from single-unit problems to every problem.

use draftkit_axioms::{check, check_allocation, AxiomReport, Axiom, ProblemDomain};
use draftkit_core::{AgentId, Allocation, Bundle, ObjectId, Preference, Priority, Problem, Variant};
use draftkit_rules::{draft_variable, Rule};

#[derive(Clone, Debug, thiserror::Error)]
pub enum PriorityInferenceError {
    #[error("probing needs at least two agents and two objects")]
    TooSmall,
    #[error("the rule violates {axiom} at probe {problem:?}: {allocation:?}")]
    Hypothesis { axiom: String, problem: Problem, allocation: Allocation },
    #[error("2-NEU violated: agents {agents:?} are ordered differently at {first:?} and {second:?}")]
    NotNeutral { agents: (AgentId, AgentId), first: Problem, second: Problem },
    #[error("probe results are intransitive: {0} over {1}, {1} over {2}, {2} over {0}")]
    Intransitive(AgentId, AgentId, AgentId),
}

/// Two agents, two objects, preferences over `{x, y}` extended canonically.
fn probe(m: usize, pair: [AgentId; 2], x: ObjectId, y: ObjectId, second_agrees: bool) -> Problem {
    let first = Preference::complete(&[x, y]).expect("two objects").extend_canonically(m);
    let second = if second_agrees { first } else { Preference::complete(&[y, x]).expect("two objects").extend_canonically(m) };
    Problem::new(m, &pair, Bundle::EMPTY.with(x).with(y), &[first, second], Variant::Variable).expect("valid probe")
}

fn require(axiom: Axiom, p: &Problem, a: &Allocation) -> Result<(), PriorityInferenceError> {
    match check_allocation(&axiom, p, a) {
        None => Ok(()),
        Some(_) => Err(PriorityInferenceError::Hypothesis { axiom: axiom.name(), problem: p.clone(), allocation: a.clone() }),
    }
}

/// Infer the priority of a rule over `agents` in an `m`-object universe.
///
/// For each pair of agents and each ordered pair of objects `(x, y)`, the
/// rule must be efficient and EF1 on the probes where both agents rank `x`
/// first, and where they disagree; the agent receiving `x` when both
/// agree ranks higher. Answers must not depend on the objects, and the
/// resulting relation must be transitive.
pub fn infer_priority(rule: &dyn Rule, agents: &[AgentId], m: usize) -> Result<Priority, PriorityInferenceError> {
    let mut agents = agents.to_vec();
    agents.sort();
    agents.dedup();
    if agents.len() < 2 || m < 2 {
        return Err(PriorityInferenceError::TooSmall);
    }
    let n = agents.len();
    let mut beats = vec![vec![false; n]; n];
    for s in 0..n {
        for t in s + 1..n {
            let pair = [agents[s], agents[t]];
            let mut seen: Option<(bool, Problem)> = None;
            for x in 0..m as u8 {
                for y in 0..m as u8 {
                    if x == y {
                        continue;
                    }
                    let (x, y) = (ObjectId(x), ObjectId(y));
                    let split = probe(m, pair, x, y, false);
                    let a = rule.allocate(&split);
                    require(Axiom::Eff, &split, &a)?;
                    require(Axiom::Ef1, &split, &a)?;
                    let same = probe(m, pair, x, y, true);
                    let a = rule.allocate(&same);
                    require(Axiom::Eff, &same, &a)?;
                    require(Axiom::Ef1, &same, &a)?;
                    let first_wins = a.get(0).contains(x);
                    match &seen {
                        None => seen = Some((first_wins, same)),
                        Some((w, p)) if *w != first_wins => {
                            return Err(PriorityInferenceError::NotNeutral {
                                agents: (pair[0], pair[1]),
                                first: p.clone(),
                                second: same,
                            })
                        }
                        Some(_) => {}
                    }
                }
            }
            let first_wins = seen.expect("at least one probe").0;
            beats[s][t] = first_wins;
            beats[t][s] = !first_wins;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if beats[i][j] && beats[j][k] && beats[k][i] {
                    return Err(PriorityInferenceError::Intransitive(agents[i], agents[j], agents[k]));
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(beats[i].iter().filter(|&&b| b).count()));
    Ok(Priority(order.into_iter().map(|i| agents[i]).collect()))
}

/// A problem where the rule and the draft disagree.
#[derive(Clone, Debug)]
pub struct Divergence {
    pub problem: Problem,
    pub rule: Allocation,
    pub draft: Allocation,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExtensionVerdict {
    /// Hypotheses hold and the rule equals the draft everywhere.
    Confirmed,
    /// The rule differs from the draft on some single-unit problem.
    PreconditionFails,
    /// RM-VAR or T-CON fails; the first divergence (if any) is reported.
    HypothesisFails,
    /// Hypotheses hold yet the rule differs from the draft.
    Refuted,
}

#[derive(Clone, Debug)]
pub struct ExtensionLemmaReport {
    pub verdict: ExtensionVerdict,
    /// First single-unit problem (at most one object per agent) where the
    /// rule differs from the draft.
    pub precondition: Option<Divergence>,
    pub rm: AxiomReport,
    pub tcon: AxiomReport,
    pub divergence: Option<Divergence>,
}

fn diverges(rule: &dyn Rule, pi: &Priority, p: &Problem) -> Option<Divergence> {
    let a = rule.allocate(p);
    let d = draft_variable(p, pi).0;
    (a != d).then(|| Divergence { problem: p.clone(), rule: a, draft: d })
}

/// Check that a rule agreeing with the draft on single-unit problems and
/// satisfying RM-VAR and T-CON equals the draft on the whole domain.
pub fn verify_extension_lemma(rule: &dyn Rule, pi: &Priority, domain: &ProblemDomain) -> ExtensionLemmaReport {
    let precondition =
        domain.find_first(|p| if p.available().len() <= p.n() { diverges(rule, pi, p) } else { None });
    let rm = check(rule, domain, &Axiom::RmVar);
    let tcon = check(rule, domain, &Axiom::TCon);
    let divergence = domain.find_first(|p| diverges(rule, pi, p));
    let verdict = if precondition.is_some() {
        ExtensionVerdict::PreconditionFails
    } else if !rm.holds() || !tcon.holds() {
        ExtensionVerdict::HypothesisFails
    } else if divergence.is_some() {
        ExtensionVerdict::Refuted
    } else {
        ExtensionVerdict::Confirmed
    };
    ExtensionLemmaReport { verdict, precondition, rm, tcon, divergence }
}
