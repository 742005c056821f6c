use std::sync::Arc;

use draftkit_axioms::{check, ProblemDomain};
use draftkit_core::{Allocation, Problem};
use draftkit_rules::{Rule, RuleRef, Tabulated};

use crate::csp::{RuleCsp, SolveMode, SolveOutcome, SolveResult};

/// How uniqueness results are labelled: the domain is finite, so nothing
/// here speaks for the unbounded statement.
pub const UNIQUENESS_LABEL: &str = "uniqueness over the checked domain";

/// Printed with any satisfiable result for NW, EF1 and WSP.
pub const CONJECTURE_NOTE: &str = "a SAT outcome at desk scale neither proves nor refutes the conjecture that NW, EF1 and WSP are incompatible for all n";

pub struct Survivor {
    pub rule: Tabulated,
    /// First problem (domain order) where the survivor and the target differ.
    pub first_difference: Option<(Problem, Allocation, Allocation)>,
    /// Axioms the survivor fails when checked directly on the domain.
    pub failed_axioms: Vec<String>,
}

impl Survivor {
    pub fn equals_target(&self) -> bool {
        self.first_difference.is_none()
    }
}

pub struct UniquenessReport {
    pub label: &'static str,
    pub target: String,
    pub survivors: Vec<Survivor>,
    /// False when the enumeration stopped at its limit.
    pub complete: bool,
    pub result: SolveResult,
}

impl UniquenessReport {
    /// Exactly one rule survives, it equals the target and passes every axiom.
    pub fn unique_target(&self) -> bool {
        self.complete
            && self.survivors.len() == 1
            && self.survivors[0].equals_target()
            && self.survivors[0].failed_axioms.is_empty()
    }

    pub fn all_pass_axioms(&self) -> bool {
        self.survivors.iter().all(|s| s.failed_axioms.is_empty())
    }
}

/// Enumerate up to `limit` rules satisfying the CSP, compare each with
/// `target` and re-check each against the axioms through the ordinary
/// checkers. `None` when the search was unsatisfiable or undecided.
pub fn survivors(
    csp: &RuleCsp,
    domain: &ProblemDomain,
    target: RuleRef,
    limit: usize,
    budget: u64,
) -> Result<UniquenessReport, SolveResult> {
    let result = csp.solve(SolveMode::FindAll { limit }, budget);
    let (solutions, complete) = match &result.outcome {
        SolveOutcome::Sat { solutions, complete } => (solutions.clone(), *complete),
        _ => return Err(result),
    };
    let survivors = solutions
        .iter()
        .enumerate()
        .map(|(k, sol)| {
            let mut rule = csp.to_rule(sol, &format!("survivor-{}", k + 1));
            if csp.dangling() > 0 {
                // partners outside the domain were unconstrained; read them from the target
                rule = rule.with_fallback(target.clone());
            }
            let first_difference = domain.find_first(|p| {
                let a = rule.allocate(p);
                let b = target.allocate(p);
                (a != b).then(|| (p.clone(), a, b))
            });
            let failed_axioms =
                csp.axioms().iter().filter(|ax| !check(&rule, domain, ax).holds()).map(|ax| ax.name()).collect();
            Survivor { rule, first_difference, failed_axioms }
        })
        .collect();
    Ok(UniquenessReport { label: UNIQUENESS_LABEL, target: target.name(), survivors, complete, result })
}

/// Convenience for callers holding a concrete rule.
pub fn survivors_of<R: Rule + 'static>(
    csp: &RuleCsp,
    domain: &ProblemDomain,
    target: R,
    limit: usize,
    budget: u64,
) -> Result<UniquenessReport, SolveResult> {
    survivors(csp, domain, Arc::new(target), limit, budget)
}
