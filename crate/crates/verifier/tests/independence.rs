use draftkit_axioms::{Axiom, ProblemDomain};
use draftkit_core::{AgentId, Priority};
use draftkit_verifier::{
    alternative_counterexample, evaluate, fixed_model, unacceptable_model, variable_model, Counterexample,
    IndependenceResult, Model,
};

fn failing(r: &IndependenceResult) -> Vec<String> {
    r.reports.iter().filter(|rep| !rep.holds()).map(|rep| rep.axiom.clone()).collect()
}

fn by_designation(cases: Vec<Counterexample>, domain: &ProblemDomain) -> Vec<IndependenceResult> {
    cases.iter().map(|c| evaluate(c, domain)).collect()
}

fn potential() -> Vec<AgentId> {
    (1..=3).map(AgentId).collect()
}

#[test]
fn fixed_population_rules_fail_only_their_axiom() {
    for (n, m) in [(2, 3), (3, 4)] {
        for r in by_designation(fixed_model(n, m), &ProblemDomain::fixed(n, m)) {
            assert!(r.passed(), "n={n} m={m} {}: fails {:?}, missed {:?}", r.rule, failing(&r), r.missed_witnesses);
        }
    }
}

#[test]
fn unacceptable_rules_match_except_resource_monotonicity_rule() {
    for r in by_designation(unacceptable_model(), &ProblemDomain::unacceptable(2, 3)) {
        assert!(r.missed_witnesses.is_empty(), "{}: {:?}", r.rule, r.missed_witnesses);
        if r.fails == "RM" {
            // also breaks truncation invariance just outside its neighbourhood
            assert_eq!(failing(&r), ["RM", "TI"]);
        } else {
            assert!(r.passed(), "{}: fails {:?}", r.rule, failing(&r));
        }
    }
}

#[test]
fn variable_population_rules() {
    let domain = ProblemDomain::variable(&potential(), 3);
    for r in by_designation(variable_model(), &domain) {
        match r.fails {
            "RM-VAR" => assert_eq!(failing(&r), ["RM-VAR", "T-CON"]),
            "2-NEU" => assert_eq!(failing(&r), ["RM-VAR", "2-CON", "T-CON", "2-NEU"]),
            _ => assert!(r.passed(), "{}: fails {:?}", r.rule, failing(&r)),
        }
    }
}

#[test]
fn tail_first_rounds_breaks_top_object_consistency_on_three_objects() {
    let domain = ProblemDomain::variable(&potential(), 3);
    let rule = variable_model().into_iter().find(|c| c.fails == "RM-VAR").unwrap();
    let r = evaluate(&rule, &domain);
    let w = r.reports.iter().find(|rep| rep.axiom == "T-CON").unwrap().witness.clone().unwrap();
    assert_eq!(w.problem.n(), 2);
    assert_eq!(w.problem.available().len(), 3);
}

#[test]
fn search_finds_rules_failing_only_the_refuted_axioms() {
    let pi3 = Priority::identity(3);
    let var = ProblemDomain::variable(&potential(), 3);
    for target in ["2-NEU", "RM-VAR"] {
        let keep = Model::Variable.remaining_axioms(target, &pi3);
        let alt = alternative_counterexample(&var, &keep, &Axiom::parse(target, &pi3).unwrap(), 200, 10_000_000)
            .unwrap()
            .unwrap_or_else(|| panic!("no rule failing only {target}"));
        assert!(!alt.report.holds());
    }
    let pi2 = Priority::identity(2);
    let unacc = ProblemDomain::unacceptable(2, 3);
    let keep = Model::Unacceptable.remaining_axioms("RM", &pi2);
    let alt = alternative_counterexample(&unacc, &keep, &Axiom::Rm, 50, 10_000_000).unwrap().expect("rule failing only RM");
    assert!(!alt.report.holds());
}

#[test]
fn designated_instances_show_only_the_designated_failure() {
    let cases = [
        (fixed_model(2, 3), ProblemDomain::fixed(2, 3)),
        (unacceptable_model(), ProblemDomain::unacceptable(2, 3)),
        (variable_model(), ProblemDomain::variable(&draftkit_axioms::agents(3), 3)),
    ];
    for (model, domain) in cases {
        for c in &model {
            let r = evaluate(c, &domain);
            assert!(r.passed_at_witnesses(), "{}: {:?} {:?}", r.rule, r.missed_witnesses, r.instance_violations);
        }
    }
}
