use draftkit_core::{Bundle, Preference, Quota, Universe};
use draftkit_pd::*;
use num_rational::Ratio;

fn setup(m: usize, s: &str) -> (Universe, Preference) {
    let u = Universe::letters(m);
    let p = Preference::parse(s, &u).unwrap();
    (u, p)
}

fn b(u: &Universe, s: &str) -> Bundle {
    u.bundle(s).unwrap()
}

#[test]
fn base_examples() {
    let (u, p) = setup(3, "a>b>c");
    for (s, t, want) in [("ab", "ac", true), ("ac", "ab", false), ("abc", "b", true), ("ac", "ac", true)] {
        assert_eq!(pd_geq(&p, b(&u, s), b(&u, t)), want, "{s} vs {t}");
        assert_eq!(pd_geq_oracle(&p, b(&u, s), b(&u, t)).unwrap(), want, "{s} vs {t}");
    }
    assert!(!pd_geq_oracle(&p, Bundle::EMPTY, b(&u, "a")).unwrap());
    assert!(pd_geq_oracle(&p, b(&u, "a"), Bundle::EMPTY).unwrap());
}

#[test]
fn oracle_refuses_large_bundles() {
    let p = Preference::from_indices(&(0..13).collect::<Vec<u8>>(), None);
    assert_eq!(pd_geq_oracle(&p, Bundle::full(13), Bundle::EMPTY), Err(PdError::OracleCap(13)));
}

#[test]
fn quota_examples() {
    let (u, p) = setup(3, "a>b>c");
    assert!(pd_geq_quota(&p, Quota::Finite(1), b(&u, "ac"), b(&u, "b")));
    assert!(!pd_geq_quota(&p, Quota::Finite(1), b(&u, "b"), b(&u, "a")));
    assert!(!pd_geq_quota(&p, Quota::Finite(1), b(&u, "b"), b(&u, "ac")));
}

#[test]
fn unacceptable_examples() {
    let (u, p) = setup(2, "a|b");
    assert!(pd_geq_unacc(&p, b(&u, "ab"), b(&u, "a")));
    assert!(pd_geq_unacc(&p, b(&u, "a"), b(&u, "ab")));
    let (u, p) = setup(3, "|a>b>c");
    assert!(pd_geq_unacc(&p, b(&u, "a"), b(&u, "bc")) && pd_geq_unacc(&p, b(&u, "bc"), b(&u, "a")));
    let (u, p) = setup(3, "a>b|c");
    assert!(!pd_geq_unacc(&p, b(&u, "bc"), b(&u, "a")));
}

#[test]
fn envy_examples() {
    let (u, p) = setup(4, "a>b>c>d");
    assert!(envies(&p, b(&u, "bd"), b(&u, "ac"), Comparator::Base));
    assert!(!envies(&p, b(&u, "abc"), b(&u, "ac"), Comparator::Base));
    assert!(!envies(&p, Bundle::EMPTY, Bundle::EMPTY, Comparator::Base));
}

#[test]
fn verdict_strictness() {
    let (u, p) = setup(3, "a>b>c");
    let v = Comparator::Base.compare(&p, b(&u, "ab"), b(&u, "ac"));
    assert!(v.geq && v.strict);
    let w = Comparator::Base.compare(&p, b(&u, "ab"), b(&u, "ab"));
    assert!(w.geq && !w.strict);
}

#[test]
fn fast_matches_oracle_exhaustively_up_to_five_objects() {
    for m in 1..=5 {
        let subsets: Vec<Bundle> = Bundle::full(m).subsets().collect();
        for p in Preference::all_rankings(m) {
            for &s in &subsets {
                for &t in &subsets {
                    assert_eq!(pd_geq(&p, s, t), pd_geq_oracle(&p, s, t).unwrap());
                    for q in [Quota::Finite(1), Quota::Finite(2), Quota::Infinite] {
                        let (ts, tt) = (p.top_k(s, q.cap(s.len())), p.top_k(t, q.cap(t.len())));
                        assert_eq!(pd_geq_quota(&p, q, s, t), pd_geq_oracle(&p, ts, tt).unwrap());
                    }
                    for c in 0..=m {
                        let pc = p.with_cutoff(Some(c)).unwrap();
                        let acc = pc.acceptable();
                        assert_eq!(pd_geq_unacc(&pc, s, t), pd_geq_oracle(&pc, s & acc, t & acc).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn infinite_quota_is_base() {
    let m = 4;
    let subsets: Vec<Bundle> = Bundle::full(m).subsets().collect();
    for p in Preference::all_rankings(m) {
        for &s in &subsets {
            for &t in &subsets {
                assert_eq!(pd_geq_quota(&p, Quota::Infinite, s, t), pd_geq(&p, s, t));
            }
        }
    }
}

#[test]
fn partial_order_laws_up_to_five_objects() {
    let m = 5;
    let subsets: Vec<Bundle> = Bundle::full(m).subsets().collect();
    // PD depends only on relative rank, so the identity ranking covers every
    // case up to relabelling; a second ranking guards the relabelling claim.
    for p in [Preference::all_rankings(m)[0], Preference::all_rankings(m)[77]] {
        let t = PdTable::new(&p, Comparator::Base, m);
        for &x in &subsets {
            assert!(t.is_geq(x, x));
            for &y in &subsets {
                if t.is_geq(x, y) && t.is_geq(y, x) {
                    assert_eq!(x, y);
                }
                if !t.is_geq(x, y) {
                    continue;
                }
                for &z in &subsets {
                    if t.is_geq(y, z) {
                        assert!(t.is_geq(x, z));
                    }
                }
            }
        }
    }
}

#[test]
fn responsiveness() {
    let m = 5;
    for p in Preference::all_rankings(m).into_iter().step_by(7) {
        for s in Bundle::full(m).subsets() {
            for x in (Bundle::full(m) - s).iter() {
                let v = Comparator::Base.compare(&p, s.with(x), s);
                assert!(v.strict);
                for y in (Bundle::full(m) - s).iter() {
                    if !p.prefers(y, x) {
                        assert!(pd_geq(&p, s.with(x), s.with(y)));
                    }
                }
            }
        }
    }
}

#[test]
fn utility_examples() {
    let (u, p) = setup(3, "a>b>c");
    assert_eq!(additive_utility(&p, &WeightScheme::Geometric, b(&u, "ac")).unwrap(), Ratio::new(5, 8));
    assert_eq!(additive_utility(&p, &WeightScheme::Linear, b(&u, "ac")).unwrap(), Ratio::from_integer(4));
    assert_eq!(additive_utility(&p, &WeightScheme::Geometric, Bundle::EMPTY).unwrap(), Ratio::from_integer(0));
    let (u, pc) = setup(3, "a|b>c");
    assert_eq!(additive_utility(&pc, &WeightScheme::Geometric, b(&u, "abc")).unwrap(), Ratio::new(1, 2));
    let bad = WeightScheme::Explicit(vec![Ratio::from_integer(1), Ratio::from_integer(2), Ratio::from_integer(3)]);
    assert!(matches!(additive_utility(&p, &bad, b(&u, "a")), Err(PdError::NonMonotoneWeights(1))));
    let short = WeightScheme::Explicit(vec![Ratio::from_integer(1)]);
    assert!(matches!(additive_utility(&p, &short, b(&u, "a")), Err(PdError::WeightCount { .. })));
}

#[test]
fn random_scheme_is_seeded_and_monotone() {
    let a = WeightScheme::Random { seed: 7 }.rank_weights(6).unwrap();
    let b = WeightScheme::Random { seed: 7 }.rank_weights(6).unwrap();
    let c = WeightScheme::Random { seed: 8 }.rank_weights(6).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

fn schemes() -> Vec<WeightScheme> {
    let mut v = vec![WeightScheme::Geometric, WeightScheme::Linear];
    v.extend((0..100).map(|seed| WeightScheme::Random { seed }));
    v
}

#[test]
fn pd_implies_higher_utility_for_every_scheme() {
    let m = 5;
    let p = Preference::all_rankings(m)[33];
    let tabs: Vec<Vec<_>> = schemes().iter().map(|s| UtilityTable::new(&p, s).unwrap().all_bundles(m)).collect();
    for s in Bundle::full(m).subsets() {
        for t in Bundle::full(m).subsets() {
            if pd_geq(&p, s, t) {
                for tab in &tabs {
                    assert!(tab[s.bits() as usize] >= tab[t.bits() as usize]);
                }
            }
        }
    }
}

#[test]
fn non_dominance_is_witnessed_by_some_sampled_scheme() {
    for m in 1..=6 {
        let p = Preference::all_rankings(m)[0];
        let tabs: Vec<Vec<_>> =
            schemes().iter().map(|s| UtilityTable::new(&p, s).unwrap().all_bundles(m)).collect();
        for s in Bundle::full(m).subsets() {
            for t in Bundle::full(m).subsets() {
                if !pd_geq(&p, s, t) {
                    assert!(
                        tabs.iter().any(|tab| tab[t.bits() as usize] > tab[s.bits() as usize]),
                        "no scheme separates {s:?} from {t:?}"
                    );
                }
            }
        }
    }
}
