use draftkit_core::*;
use proptest::prelude::*;

fn u4() -> Universe {
    Universe::letters(4)
}

fn pref(s: &str, u: &Universe) -> Preference {
    Preference::parse(s, u).unwrap()
}

#[test]
fn top_picks_best_of_subset() {
    let u = u4();
    let p = pref("a>b>c>d", &u);
    assert_eq!(p.top(u.bundle("bd").unwrap()), u.lookup("b"));
}

#[test]
fn top_is_null_when_nothing_acceptable_or_empty() {
    let u = u4();
    let p = pref("c>d|a>b", &u);
    assert_eq!(p.top(u.bundle("ab").unwrap()), None);
    assert_eq!(p.top(Bundle::EMPTY), None);
    assert_eq!(pref("a>b>c>d", &u).top(Bundle::EMPTY), None);
}

#[test]
fn top_k_examples() {
    let u = Universe::letters(3);
    let p = pref("a>b>c", &u);
    assert_eq!(p.top_k(u.all(), 2), u.bundle("ab").unwrap());
    assert_eq!(p.top_k(u.all(), 0), Bundle::EMPTY);
    let q = pref("c>a>b", &u);
    assert_eq!(q.top_k(u.bundle("ab").unwrap(), 1), u.bundle("a").unwrap());
}

#[test]
#[should_panic]
fn top_k_beyond_size_panics() {
    let u = Universe::letters(3);
    pref("a>b>c", &u).top_k(u.bundle("ab").unwrap(), 3);
}

#[test]
fn restrict_examples() {
    let u = u4();
    let p = pref("a>b>c>d", &u);
    let r = p.restrict(u.bundle("bd").unwrap());
    assert_eq!(r.ranking(), &[ObjectId(1), ObjectId(3)]);
    let q = Preference::parse("a|b", &Universe::letters(2)).unwrap();
    let rq = q.restrict(Universe::letters(2).all());
    assert!(rq.is_acceptable(ObjectId(0)) && !rq.is_acceptable(ObjectId(1)));
    assert_eq!(p.restrict(u.all()), p);
}

#[test]
fn truncation_examples() {
    let u = u4();
    let p = pref("a>b>c|d", &u);
    let t = p.truncate_at(ObjectId(1)).unwrap();
    assert_eq!(t.format(&u), "a>b|c>d");
    assert_eq!(p.truncate_at(ObjectId(2)).unwrap(), p);
    assert_eq!(p.truncate_at(ObjectId(0)).unwrap().acceptable(), u.bundle("a").unwrap());
    assert!(p.truncate_at(ObjectId(3)).is_err());
}

#[test]
fn complete_extension_examples() {
    let u = Universe::letters(2);
    let p = pref("a|b", &u);
    assert_eq!(p.complete_extension().acceptable(), u.all());
    let all = pref("a>b|", &u);
    assert_eq!(all.complete_extension(), all);
    let none = pref("|a>b", &u);
    assert_eq!(none.complete_extension().ranking(), none.ranking());
    assert_eq!(none.complete_extension().acceptable(), u.all());
}

#[test]
fn truncation_and_extension_families() {
    let u = Universe::letters(3);
    let p = pref("a>b|c", &u);
    let tr = p.truncation_family();
    // cutoff 1 with {b,c} in either order, plus cutoff 2 with c alone.
    assert_eq!(tr.len(), 3);
    assert!(tr.contains(&p));
    assert!(tr.iter().all(|t| t.is_truncation_of(&p)));
    let ex = p.extension_family();
    assert_eq!(ex.len(), 2);
    assert!(ex.iter().all(|e| p.is_truncation_of(e)));
    assert!(pref("|a>b>c", &u).truncation_family().is_empty());
    assert!(pref("|a>b>c", &u).extension_family().is_empty());
}

#[test]
fn format_and_parse_round_trip() {
    let u = u4();
    for s in ["a>b>c>d", "a>b|c>d", "|a>b>c>d", "a>b>c>d|"] {
        assert_eq!(pref(s, &u).format(&u), s);
    }
    assert_eq!(pref("ab|cd", &u), pref("a>b|c>d", &u));
    assert_eq!(pref("ab|cd", &u).format_compact(&u), "ab|cd");
    assert!(Preference::parse("a>a>b", &u).is_err());
    assert!(Preference::parse("a|b|c", &u).is_err());
    assert!(Preference::parse("a>x", &u).is_err());
}

#[test]
fn multi_char_names_need_separators() {
    let u = Universe::new(["x1", "x2", "x3"]).unwrap();
    let p = Preference::parse("x2>x1|x3", &u).unwrap();
    assert_eq!(p.format(&u), "x2>x1|x3");
    assert_eq!(u.fmt_bundle(p.acceptable()), "{x1,x2}");
}

#[test]
fn enumerations_have_expected_sizes() {
    assert_eq!(Preference::all_rankings(4).len(), 24);
    assert_eq!(Preference::all_with_cutoffs(3).len(), 24);
    let r = Preference::all_rankings(3);
    assert_eq!(r[0].ranking(), &[ObjectId(0), ObjectId(1), ObjectId(2)]);
    assert_eq!(r[5].ranking(), &[ObjectId(2), ObjectId(1), ObjectId(0)]);
    assert_eq!(Priority::all(&[AgentId(1), AgentId(2), AgentId(3)]).len(), 6);
    assert_eq!(Bundle::full(4).subsets().count(), 16);
}

#[test]
fn extend_canonically_appends_missing_objects() {
    let p = Preference::from_indices(&[2, 0], None).extend_canonically(4);
    assert_eq!(p.ranking(), &[ObjectId(2), ObjectId(0), ObjectId(1), ObjectId(3)]);
}

#[test]
fn picking_sequences() {
    let pi = Priority::identity(3);
    let rr = PickingSequence::RoundRobin(pi.clone());
    assert_eq!(rr.take(5), vec![AgentId(1), AgentId(2), AgentId(3), AgentId(1), AgentId(2)]);
    let snake = PickingSequence::Snake(pi.clone());
    assert_eq!(
        snake.take(7),
        [1, 2, 3, 3, 2, 1, 1].iter().map(|&a| AgentId(a)).collect::<Vec<_>>()
    );
    let pre = PickingSequence::Prefix { prefix: vec![AgentId(3), AgentId(3)], tail: pi };
    assert_eq!(pre.take(4), vec![AgentId(3), AgentId(3), AgentId(1), AgentId(2)]);
}

#[test]
fn priority_helpers() {
    let pi = Priority(vec![AgentId(3), AgentId(1), AgentId(2)]);
    assert_eq!(pi.position(AgentId(1)), Some(1));
    assert!(pi.ranks_above(AgentId(3), AgentId(2)));
    assert_eq!(pi.restrict_to(&[AgentId(2), AgentId(3)]).agents(), &[AgentId(3), AgentId(2)]);
    assert_eq!(pi.reversed().agents(), &[AgentId(2), AgentId(1), AgentId(3)]);
}

fn fixed_problem(n: usize, x: &str, quotas: Option<Vec<Quota>>) -> (Universe, Problem) {
    let u = Universe::letters(3);
    let prof = vec![pref("a>b>c", &u); n];
    let agents: Vec<AgentId> = (1..=n as u16).map(AgentId).collect();
    let variant = quotas.map_or(Variant::Fixed, |q| Variant::Quota(Quotas(q)));
    let p = Problem::new(3, &agents, u.bundle(x).unwrap(), &prof, variant).unwrap();
    (u, p)
}

#[test]
fn validate_allocation_examples() {
    let (u, p) = fixed_problem(2, "abc", None);
    let a = u.bundle("a").unwrap();
    assert!(matches!(
        validate_allocation(&p, &Allocation::new([a, a])),
        Err(AllocationViolation::Overlap { .. })
    ));
    let ok = Allocation::new([u.bundle("ab").unwrap(), u.bundle("c").unwrap()]);
    assert_eq!(validate_allocation(&p, &ok), Ok(()));

    let (u, q) = fixed_problem(2, "abc", Some(vec![Quota::Finite(1), Quota::Infinite]));
    let breach = Allocation::new([u.bundle("ab").unwrap(), Bundle::EMPTY]);
    assert_eq!(
        validate_allocation(&q, &breach),
        Err(AllocationViolation::QuotaBreach { agent: AgentId(1), size: 2, quota: 1 })
    );

    let (u, r) = fixed_problem(2, "ab", None);
    assert!(matches!(
        validate_allocation(&r, &Allocation::new([u.bundle("c").unwrap(), Bundle::EMPTY])),
        Err(AllocationViolation::OutsideAvailable { .. })
    ));
    assert!(matches!(
        validate_allocation(&r, &Allocation::empty(3)),
        Err(AllocationViolation::WrongAgentCount { .. })
    ));
}

#[test]
fn problem_validation() {
    let u = Universe::letters(3);
    let full = pref("a>b>c", &u);
    let cut = pref("a|b>c", &u);
    let ag = [AgentId(1), AgentId(2)];
    assert!(Problem::new(3, &ag, Bundle::EMPTY, &[full, full], Variant::Fixed).is_err());
    assert!(Problem::new(3, &ag, Bundle::EMPTY, &[full, full], Variant::Variable).is_ok());
    assert!(Problem::new(3, &ag, u.all(), &[full, cut], Variant::Fixed).is_err());
    assert!(Problem::new(3, &ag, u.all(), &[cut, cut], Variant::Unacceptable).is_ok());
    assert!(Problem::new(3, &[AgentId(1), AgentId(1)], u.all(), &[full, full], Variant::Fixed).is_err());
    let partial = Preference::from_indices(&[0, 1], None);
    assert!(Problem::new(3, &ag, u.all(), &[full, partial], Variant::Fixed).is_err());
    assert!(Problem::new(3, &ag, u.all(), &[full], Variant::Fixed).is_err());
    let q = Variant::Quota(Quotas(vec![Quota::Finite(0), Quota::Infinite]));
    assert!(Problem::new(3, &ag, u.all(), &[full, full], q).is_err());
}

#[test]
fn keys_restrict_preferences() {
    let u = Universe::letters(3);
    let ag = [AgentId(1), AgentId(2)];
    let x = u.bundle("ab").unwrap();
    let p1 = Problem::new(3, &ag, x, &[pref("a>b>c", &u), pref("b>a>c", &u)], Variant::Fixed).unwrap();
    let p2 = Problem::new(3, &ag, x, &[pref("c>a>b", &u), pref("b>c>a", &u)], Variant::Fixed).unwrap();
    assert_eq!(p1.key(), p2.key());
    assert_ne!(p1.full_key(), p2.full_key());
}

#[test]
fn bundle_and_allocation_rendering() {
    let u = u4();
    let a = Allocation::new([u.bundle("ab").unwrap(), u.bundle("c").unwrap(), u.bundle("d").unwrap()]);
    assert_eq!(u.fmt_allocation(&a), "({a,b},{c},{d})");
    assert_eq!(u.fmt_bundle(Bundle::EMPTY), "{}");
    assert_eq!(u.bundle("{a,c}").unwrap(), u.bundle("ac").unwrap());
}

fn arb_pref(m: usize) -> impl Strategy<Value = Preference> {
    (Just((0..m as u8).collect::<Vec<u8>>()).prop_shuffle(), 0..=m)
        .prop_map(|(r, c)| Preference::from_indices(&r, Some(c)))
}

proptest! {
    #[test]
    fn top_is_best_acceptable(p in arb_pref(6), bits in 0u64..64) {
        let x = Bundle::from_bits(bits);
        match p.top(x) {
            Some(t) => {
                prop_assert!(x.contains(t) && p.is_acceptable(t));
                for y in x.iter().filter(|&y| y != t && p.is_acceptable(y)) {
                    prop_assert!(p.prefers(t, y));
                }
            }
            None => prop_assert!((x & p.acceptable()).is_empty()),
        }
    }

    #[test]
    fn top_k_of_whole_set_is_the_set(p in arb_pref(6), bits in 0u64..64) {
        let x = Bundle::from_bits(bits);
        prop_assert_eq!(p.top_k(x, x.len()), x);
    }

    #[test]
    fn restrict_is_idempotent(p in arb_pref(6), bits in 1u64..64) {
        let x = Bundle::from_bits(bits);
        prop_assert_eq!(p.restrict(x).restrict(x), p.restrict(x));
        prop_assert_eq!(p.restrict(x).domain(), x);
    }

    #[test]
    fn truncate_then_complete_keeps_ranking(p in arb_pref(6), k in 0usize..6) {
        if let Some(&x) = p.ranking().get(k) {
            if let Ok(t) = p.truncate_at(x) {
                let c = t.complete_extension();
                prop_assert_eq!(c.ranking(), p.ranking());
                prop_assert!(t.is_truncation_of(&p));
            }
        }
    }

    #[test]
    fn parse_format_round_trip(p in arb_pref(6)) {
        let u = Universe::letters(6);
        prop_assert_eq!(Preference::parse(&p.format(&u), &u).unwrap(), p);
        prop_assert_eq!(Preference::parse(&p.format_compact(&u), &u).unwrap(), p);
    }
}
