use std::collections::HashMap;

use draftkit_axioms::{agents, all_allocations, check, Axiom, ProblemDomain};
use draftkit_core::{AgentId, Bundle, Priority, Universe};
use draftkit_rules::{DraftRule, KeyMode, Rule, SerialDictatorshipRule, Tabulated};
use draftkit_verifier::theorems::fixed_problem;
use draftkit_verifier::*;

fn exact(n: usize, m: usize) -> ProblemDomain {
    ProblemDomain::fixed(n, m).with_exact_sets(vec![Bundle::full(m)])
}

#[test]
fn csp_enumeration_matches_brute_force() {
    // NW and EF1 are per-problem, so the rule space they leave is a product;
    // RM then couples problems and is filtered by the checker.
    let d = ProblemDomain::fixed(2, 2);
    let problems: Vec<_> = d.iter().collect();
    let options: Vec<Vec<_>> = problems
        .iter()
        .map(|p| {
            all_allocations(p, false)
                .unwrap()
                .into_iter()
                .filter(|a| {
                    [Axiom::Nw, Axiom::Ef1].iter().all(|ax| draftkit_axioms::check_allocation(ax, p, a).is_none())
                })
                .collect()
        })
        .collect();
    let combos: usize = options.iter().map(Vec::len).product();
    assert!(combos <= 1 << 14, "brute force too large: {combos}");
    let mut brute = 0;
    for code in 0..combos {
        let mut rest = code;
        let mut table = HashMap::new();
        for (p, opts) in problems.iter().zip(&options) {
            table.insert(KeyMode::Full.key(p), opts[rest % opts.len()].clone());
            rest /= opts.len();
        }
        let rule = Tabulated::new("brute", table, KeyMode::Full);
        brute += check(&rule, &d, &Axiom::Rm).holds() as usize;
    }
    let csp = RuleCsp::build(&d, &[Axiom::Nw, Axiom::Ef1, Axiom::Rm], KeyMode::Full).unwrap();
    let r = csp.solve(SolveMode::FindAll { limit: combos + 1 }, DEFAULT_BUDGET);
    let verdict = r.verdict();
    match r.outcome {
        SolveOutcome::Sat { solutions, complete } => {
            assert!(complete);
            assert_eq!(solutions.len(), brute);
            for s in &solutions {
                assert!(csp.satisfies(s));
            }
        }
        _ => panic!("expected SAT, got {verdict}"),
    }
}

#[test]
fn certificates_replay_and_tampering_is_caught() {
    let d = exact(2, 4);
    let csp = RuleCsp::build(&d, &[Axiom::Eff, Axiom::Ef1, Axiom::Wsp], KeyMode::Full).unwrap();
    let r = csp.solve(SolveMode::ProveUnsat, DEFAULT_BUDGET);
    let SolveOutcome::Unsat(cert) = r.outcome else { panic!("expected UNSAT, got {}", r.verdict()) };
    csp.replay(&cert).unwrap();

    let mut truncated = cert.clone();
    if let ProofNode::Wipeout { steps, .. } = &mut truncated.root {
        steps.truncate(steps.len() / 2);
    } else {
        panic!("expected a refutation at the root");
    }
    assert!(csp.replay(&truncated).is_err());
}

#[test]
fn search_budget_yields_undecided() {
    let d = exact(2, 4);
    let csp = RuleCsp::build(&d, &[Axiom::Eff, Axiom::Ef1, Axiom::Wsp], KeyMode::Full).unwrap();
    assert_eq!(csp.solve(SolveMode::ProveUnsat, 10).verdict(), "undecided");
}

#[test]
fn encoded_rules_satisfy_exactly_their_axioms() {
    let d = exact(2, 3);
    let pi = Priority::identity(2);
    let csp = RuleCsp::build(&d, &[Axiom::Nw, Axiom::Ef1], KeyMode::Full).unwrap();
    assert!(csp.satisfies(&csp.encode(&DraftRule::new(pi.clone())).unwrap()));
    // serial dictatorship violates EF1 at the first problem, outside every candidate set
    assert_eq!(csp.encode(&SerialDictatorshipRule { priority: pi }), Err(0));
}

#[test]
fn manipulations_agree_with_weak_strategy_proofness() {
    let d = ProblemDomain::fixed(2, 3);
    let pi = Priority::identity(2);
    let draft = DraftRule::new(pi.clone());
    let sd = SerialDictatorshipRule { priority: pi };
    let found = d.iter().any(|p| p.agents().iter().any(|&a| find_manipulation(&draft, &p, a).is_some()));
    assert!(found);
    assert!(!check(&draft, &d, &Axiom::Wsp).holds());
    assert!(d.iter().all(|p| p.agents().iter().all(|&a| find_manipulation(&sd, &p, a).is_none())));
    assert!(check(&sd, &d, &Axiom::Wsp).holds());
}

#[test]
fn first_pick_manipulation() {
    // agent 1 secures the object agent 2 wants most, then still gets a
    let u = Universe::letters(4);
    let p = fixed_problem(4, Bundle::full(4), &[&[0, 1, 2, 3], &[1, 2, 0, 3]]);
    let draft = DraftRule::new(Priority::identity(2));
    assert_eq!(u.fmt_allocation(&draft.allocate(&p)), "({a,c},{b,d})");
    let m = find_manipulation(&draft, &p, AgentId(1)).expect("manipulable");
    assert_eq!(u.fmt_bundle(m.gained), "{a,b}");
    assert_eq!(u.fmt_bundle(m.lost), "{a,c}");
    assert!(find_manipulation(&draft, &p, AgentId(2)).is_none());
    assert_eq!(report_space(&p).len(), 24);
}

#[test]
fn priority_inference_recovers_every_order() {
    let ag = agents(3);
    for pi in Priority::all(&ag) {
        assert_eq!(infer_priority(&DraftRule::new(pi.clone()), &ag, 3).unwrap(), pi);
    }
}

#[test]
fn small_drivers_reproduce() {
    for id in ["T1", "T2", "T3", "L1", "L8", "L9", "T4-replay"] {
        let r = verify(id, &Scale::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Reproduced, "{id}: {:#?}", r.details);
    }
}

#[test]
fn impossibility_replay_covers_every_table() {
    let log = replay_impossibility_cases();
    assert!(log.passed(), "{:#?}", log.failures);
    assert_eq!(log.cells.len(), 34);
    assert!(log.cells.iter().all(|c| c.matched));
    assert!(log.case2_is_relabelled_case1);
    assert!(log.restriction_step);
}

#[test]
fn efficiency_characterization_matches_oracle() {
    for d in [ProblemDomain::fixed(2, 3), ProblemDomain::fixed(3, 3), ProblemDomain::unacceptable(2, 3)] {
        let r = efficiency_equivalence(&d);
        assert!(r.agrees(), "{} disagreements", r.disagreement_count);
        assert!(r.efficient > 0 && r.efficient < r.allocations);
    }
    let rules = random_rule_agreement(&ProblemDomain::fixed(2, 3), 40, 7);
    assert!(rules.iter().all(|r| r.oracle == r.characterization));
    assert!(rules.iter().any(|r| r.oracle) && rules.iter().any(|r| !r.oracle));
}

#[test]
fn random_rules_are_reproducible() {
    let d = ProblemDomain::fixed(2, 2);
    let a = random_rule(&d, 3, 0.5);
    let b = random_rule(&d, 3, 0.5);
    assert!(d.iter().all(|p| a.allocate(&p) == b.allocate(&p)));
}

#[test]
fn scale_caps_and_unknown_ids() {
    let big = Scale { objects: Some(7), ..Scale::default() };
    assert!(matches!(verify("T1", &big), Err(VerifyError::TooLarge { .. })));
    assert!(matches!(verify("T9", &Scale::default()), Err(VerifyError::UnknownId(_))));
    assert!(verify("t1", &Scale::default()).is_ok());
    let wrong = Scale { agents: Some(3), ..Scale::default() };
    assert!(matches!(verify("T4", &wrong), Err(VerifyError::Unsupported(_))));
}
