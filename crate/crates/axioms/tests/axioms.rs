use std::collections::HashMap;
use std::sync::Arc;

use draftkit_axioms::msp::{check_best_case, check_msp_certificate, check_msp_falsify, msp_verdict, MspVerdict};
use draftkit_axioms::*;
use draftkit_core::*;
use draftkit_pd::WeightScheme;
use draftkit_rules::*;

fn prefs(u: &Universe, rows: &[&str]) -> Vec<Preference> {
    rows.iter().map(|r| Preference::parse(r, u).unwrap()).collect()
}

fn alloc(u: &Universe, parts: &[&str]) -> Allocation {
    Allocation::new(parts.iter().map(|s| u.bundle(s).unwrap()))
}

fn draft(n: usize) -> DraftRule {
    DraftRule::new(Priority::identity(n))
}

#[test]
fn trade_relation_examples() {
    let u = Universe::letters(4);
    let p = Problem::fixed(4, u.all(), &prefs(&u, &["a>b>c>d", "d>c>b>a"])).unwrap();
    let a = alloc(&u, &["ac", "bd"]);
    let t = build_trade_relation(&p, &a);
    let (c, b) = (u.object("c").unwrap(), u.object("b").unwrap());
    assert!(t.edges.contains(&((AgentId(1), c), (AgentId(2), b))));
    assert!(t.edges.contains(&((AgentId(2), b), (AgentId(1), c))));
    let cyc = t.find_cycle().unwrap();
    assert_eq!(cyc.len(), 2);
    assert!(!pareto_oracle(&p, &a).unwrap());
    assert!(pareto_oracle(&p, &alloc(&u, &["ab", "cd"])).unwrap());

    // everyone holds only their top object
    let q = Problem::fixed(4, u.bundle("ad").unwrap(), &prefs(&u, &["a>b>c>d", "d>c>b>a"])).unwrap();
    assert!(build_trade_relation(&q, &alloc(&u, &["a", "d"])).edges.is_empty());
    let single = Problem::fixed(4, u.all(), &prefs(&u, &["a>b>c>d"])).unwrap();
    assert!(build_trade_relation(&single, &alloc(&u, &["cd"])).edges.is_empty());
}

#[test]
fn single_object_efficiency() {
    let u = Universe::letters(2);
    let p = Problem::fixed(2, u.bundle("a").unwrap(), &prefs(&u, &["a>b", "b>a"])).unwrap();
    assert!(pareto_oracle(&p, &alloc(&u, &["a", ""])).unwrap());
    assert!(pareto_oracle(&p, &alloc(&u, &["", "a"])).unwrap());
    assert!(!pareto_oracle(&p, &alloc(&u, &["", ""])).unwrap());
}

#[test]
fn characterization_matches_oracle_on_every_allocation() {
    for d in [ProblemDomain::fixed(2, 3), ProblemDomain::unacceptable(2, 3)] {
        for p in d.iter() {
            let unacc = *p.variant() == Variant::Unacceptable;
            let all = all_allocations(&p, false).unwrap();
            let ir = all_allocations(&p, unacc).unwrap();
            for a in &all {
                assert_eq!(
                    efficient_by_characterization(&p, a),
                    pareto_among(&p, a, &ir),
                    "{p:?} {a:?}"
                );
            }
        }
    }
}

#[test]
fn oracle_refuses_large_problems() {
    let u = Universe::letters(7);
    let p = Problem::fixed(7, u.all(), &prefs(&u, &["a>b>c>d>e>f>g"; 3])).unwrap();
    assert!(pareto_oracle(&p, &Allocation::empty(3)).is_err());
}

fn table_one(n: usize, m: usize) -> Vec<(String, Vec<bool>)> {
    let d = ProblemDomain::fixed(n, m);
    let pi = Priority::identity(n);
    let rules: Vec<(&str, RuleRef)> = vec![
        ("null", Arc::new(NullRule)),
        ("pi-dictatorship", Arc::new(PiDictatorshipRule { priority: pi.clone() })),
        ("draft", Arc::new(DraftRule::new(pi.clone()))),
    ];
    let axioms = [Axiom::Rp(pi.clone()), Axiom::Ef1, Axiom::Eff, Axiom::Nw, Axiom::Sp, Axiom::Wsp];
    rules
        .into_iter()
        .map(|(name, r)| {
            let row = axioms
                .iter()
                .map(|ax| {
                    let rep = check(r.as_ref(), &d, ax);
                    if let Some(w) = &rep.witness {
                        assert!(replay(r.as_ref(), &d, ax, w), "{name} {ax} witness does not replay");
                    }
                    rep.holds()
                })
                .collect();
            (name.to_string(), row)
        })
        .collect()
}

#[test]
fn table_one_small() {
    let t = table_one(2, 3);
    assert_eq!(t[0].1, vec![true, true, false, false, true, true]);
    assert_eq!(t[1].1, vec![true, false, true, true, true, true]);
    assert_eq!(t[2].1, vec![true, true, true, true, false, false]);
}

#[test]
fn wsp_witness_is_the_textbook_manipulation() {
    let d = ProblemDomain::fixed(2, 3);
    let rep = check(&draft(2), &d, &Axiom::Wsp);
    let w = rep.witness.unwrap();
    let u = Universe::letters(3);
    assert_eq!(w.problem.profile(), &prefs(&u, &["a>b>c", "b>c>a"])[..]);
    assert_eq!(w.related[0].pref(0).format(&u), "b>a>c");
    assert_eq!(w.bundles, vec![u.bundle("ac").unwrap(), u.bundle("ab").unwrap()]);
}

#[test]
fn tabulated_rule_with_a_trade_cycle() {
    let u = Universe::letters(4);
    let p = Problem::fixed(4, u.all(), &prefs(&u, &["a>b>c>d", "d>c>b>a"])).unwrap();
    let bad = Tabulated::new("cyclic", HashMap::from([(p.key(), alloc(&u, &["ac", "bd"]))]), KeyMode::Restricted)
        .with_fallback(Arc::new(draft(2)));
    let d = ProblemDomain::fixed(2, 4);
    let rep = check(&bad, &d, &Axiom::Rt);
    assert_eq!(rep.verdict, Verdict::Violated);
    assert_eq!(rep.witness.as_ref().unwrap().problem, p);
    assert!(check(&draft(2), &d, &Axiom::Rt).holds());
    assert!(check(&NullRule, &d, &Axiom::Rt).holds());
}

#[test]
fn null_rule_is_envy_free_and_wasteful() {
    let d = ProblemDomain::fixed(2, 3);
    assert!(check(&NullRule, &d, &Axiom::Ef).holds());
    assert!(!check(&NullRule, &d, &Axiom::Nw).holds());
    let rep = check(&PiDictatorshipRule { priority: Priority::identity(2) }, &d, &Axiom::Ef1);
    let w = rep.witness.unwrap();
    assert_eq!(w.bundles[1].len(), 2);
    assert!(w.bundles[0].is_empty());
}

#[test]
fn draft_sweep_small() {
    let d = ProblemDomain::fixed(3, 3);
    let pi = Priority::identity(3);
    for ax in [Axiom::Rp(pi.clone()), Axiom::Wrp(pi.clone()), Axiom::Ef1, Axiom::Eff, Axiom::Pareto, Axiom::Rm] {
        assert!(check(&draft(3), &d, &ax).holds(), "{ax}");
    }
    // draft for one priority does not respect the reverse one
    assert!(!check(&draft(3), &d, &Axiom::Rp(pi.reversed())).holds());
}

#[test]
fn critical_agent_examples() {
    let u = Universe::letters(4);
    let pi = Priority::identity(3);
    let p = Problem::fixed(4, u.all(), &prefs(&u, &["a>b>c>d", "c>d>b>a", "a>d>c>b"])).unwrap();
    assert_eq!(critical_agent(&p, &alloc(&u, &["ab", "c", "d"]), &pi), Some(AgentId(1)));
    assert_eq!(critical_agent(&p, &alloc(&u, &["a", "c", "d"]), &pi), Some(AgentId(3)));
    assert_eq!(critical_agent(&p, &alloc(&u, &["ab", "", "c"]), &pi), None);
    let d = ProblemDomain::fixed(3, 4);
    for p in d.iter().step_by(97) {
        assert!(critical_agent(&p, &draft(3).allocate(&p), &pi).is_some());
    }
}

#[test]
fn quota_draft_sweep() {
    let pi = Priority::identity(2);
    for q in [[Quota::Finite(1), Quota::Finite(2)], [Quota::Infinite, Quota::Finite(1)]] {
        let d = ProblemDomain::quota(3, Quotas(q.to_vec()));
        for ax in [Axiom::WrpQuota(pi.clone()), Axiom::Ef1, Axiom::NwQuota, Axiom::Rm] {
            assert!(check(&draft(2), &d, &ax).holds(), "{ax} {q:?}");
        }
    }
    // a rule handing both objects to the lower-priority agent breaks WRPq
    let d = ProblemDomain::quota(2, Quotas(vec![Quota::Finite(1), Quota::Finite(1)]));
    let greedy = FnRule::new("greedy", |p: &Problem| Allocation::new([Bundle::EMPTY, p.available()]));
    assert!(!check(&greedy, &d, &Axiom::WrpQuota(pi)).holds());
}

#[test]
fn unacceptable_draft_sweep() {
    let pi = Priority::identity(2);
    let d = ProblemDomain::unacceptable(2, 3);
    let axioms = [
        Axiom::Ir,
        Axiom::NwStar,
        Axiom::WrpStar(pi.clone()),
        Axiom::Rp(pi.clone()),
        Axiom::Ef1,
        Axiom::Eff,
        Axiom::Pareto,
        Axiom::Rm,
        Axiom::Tp,
        Axiom::Ep,
        Axiom::Ti,
    ];
    for ax in &axioms {
        assert!(check(&draft(2), &d, ax).holds(), "{ax}");
    }
    let ext = CompleteExtensionRule { inner: Arc::new(draft(2)) };
    assert_eq!(check(&ext, &d, &Axiom::Ir).verdict, Verdict::Violated);
}

#[test]
fn ti_follows_from_ir_tp_ep_on_sample_rules() {
    let pi = Priority::identity(2);
    let d = ProblemDomain::unacceptable(2, 3);
    let rules: Vec<RuleRef> = vec![
        Arc::new(draft(2)),
        Arc::new(DraftRule::new(pi.reversed())),
        Arc::new(SerialDictatorshipRule { priority: pi.clone() }),
        Arc::new(NullRule),
        Arc::new(CompleteExtensionRule { inner: Arc::new(draft(2)) }),
        Arc::new(SnakeDraftRule { priority: pi.clone() }),
    ];
    for r in rules {
        let pre = [Axiom::Ir, Axiom::Tp, Axiom::Ep].iter().all(|a| check(r.as_ref(), &d, a).holds());
        if pre {
            assert!(check(r.as_ref(), &d, &Axiom::Ti).holds(), "{}", r.name());
        }
    }
}

#[test]
fn variable_population_sweep() {
    let potential = agents(3);
    let d = ProblemDomain::variable(&potential, 3);
    let pi = Priority::identity(3);
    let dr = DraftRule::new(pi.clone());
    for ax in [Axiom::Ef1, Axiom::Eff, Axiom::RmVar, Axiom::Con, Axiom::TCon, Axiom::Neu] {
        let r = check(&dr, &d, &ax);
        assert!(r.holds(), "{ax}: {:?}", r.witness);
    }
    let snake = SnakeDraftRule { priority: pi };
    let r = check(&snake, &d, &Axiom::TCon);
    assert_eq!(r.verdict, Verdict::Violated);
    assert!(replay(&snake, &d, &Axiom::TCon, r.witness.as_ref().unwrap()));
    assert!(check(&snake, &d, &Axiom::TwoCon).holds());
}

#[test]
fn domain_enumeration() {
    let d = ProblemDomain::fixed(2, 3);
    assert_eq!(d.len(), 36 * 7);
    assert!(d.closure_added().len() == 6);
    let all: Vec<Problem> = d.iter().collect();
    assert_eq!(all[0].available().len(), 1);
    assert_eq!(all[5], d.problem(5));
    let v = ProblemDomain::variable(&agents(2), 2);
    // populations {1},{2},{1,2}; sets {}, {a}, {b}, {a,b}
    assert_eq!(v.len(), (1 + 1 + 1 + 2) * 2 + (1 + 1 + 1 + 4));
    let first_witness = ProblemDomain::fixed(2, 3).find_first(|p| (p.available().len() == 3).then_some(p.clone()));
    assert_eq!(first_witness.unwrap(), d.problem(36 * 6));
}

#[test]
fn maxmin_certificate_and_falsifier() {
    let d = ProblemDomain::fixed(2, 3);
    let schemes = vec![WeightScheme::Geometric, WeightScheme::Linear, WeightScheme::Random { seed: 1 }];
    let cert = check_msp_certificate(&draft(2), &d);
    let fals = check_msp_falsify(&draft(2), &d, &schemes);
    assert!(cert.holds() && fals.holds());
    assert_eq!(msp_verdict(&cert, &fals), MspVerdict::Proved);
    assert!(check_best_case(&draft(2), &d, &schemes).holds());

    // agent 2 takes everything unless preferences agree
    let spoiler = Piecewise::new("spoiler", Arc::new(draft(2))).with(
        |p: &Problem| p.pref(0) != p.pref(1),
        Arc::new(FnRule::new("to-2", |p: &Problem| Allocation::new([Bundle::EMPTY, p.available()]))),
    );
    let cert = check_msp_certificate(&spoiler, &d);
    assert_eq!(cert.verdict, Verdict::Undecided);
    assert!(cert.witness.unwrap().detail.starts_with("clause (b)"));
}
