use draftkit_core::{AgentId, Bundle, Preference, Problem, Variant};
use draftkit_pd::Comparator;
use draftkit_rules::Rule;

/// A profitable misreport: reporting `misreport` yields `gained`, which the
/// agent's true preference ranks strictly above the truthful bundle `lost`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manipulation {
    pub agent: AgentId,
    pub misreport: Preference,
    pub gained: Bundle,
    pub lost: Bundle,
}

/// The reports an agent may make in `problem`'s model: every ranking of the
/// universe, with every cutoff when objects may be unacceptable.
pub fn report_space(problem: &Problem) -> Vec<Preference> {
    match problem.variant() {
        Variant::Unacceptable => Preference::all_with_cutoffs(problem.universe_size()),
        _ => Preference::all_rankings(problem.universe_size()),
    }
}

/// First misreport, in the order of `reports`, whose outcome strictly
/// PD-dominates the truthful bundle under the agent's true preference.
pub fn find_manipulation_among(
    rule: &dyn Rule,
    problem: &Problem,
    agent: AgentId,
    reports: &[Preference],
) -> Option<Manipulation> {
    let i = problem.index_of(agent)?;
    let truth = *problem.pref(i);
    let cmp = Comparator::for_agent(problem, i);
    let lost = rule.allocate(problem).get(i);
    reports.iter().filter(|r| **r != truth).find_map(|&r| {
        let gained = rule.allocate(&problem.with_pref(i, r)).get(i);
        cmp.strictly(&truth, gained, lost).then_some(Manipulation { agent, misreport: r, gained, lost })
    })
}

/// [`find_manipulation_among`] over the full report space.
pub fn find_manipulation(rule: &dyn Rule, problem: &Problem, agent: AgentId) -> Option<Manipulation> {
    find_manipulation_among(rule, problem, agent, &report_space(problem))
}
