//! Efficiency through its characterization against the brute-force oracle,
//! allocation by allocation and rule by rule.

use std::collections::HashMap;

use draftkit_axioms::{
    all_allocations, build_trade_relation, check, individually_rational, non_wasteful, non_wasteful_star, Axiom,
    ProblemDomain,
};
use draftkit_core::{Allocation, Preference, Priority, Problem, Variant};
use draftkit_pd::{Comparator, PdTable};
use draftkit_rules::{DraftRule, KeyMode, Rule, Tabulated};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct Disagreement {
    pub problem: Problem,
    pub allocation: Allocation,
    pub characterization: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, Default)]
pub struct EquivalenceReport {
    pub problems: usize,
    pub allocations: usize,
    pub efficient: usize,
    /// First disagreements in domain order (at most ten kept).
    pub disagreements: Vec<Disagreement>,
    pub disagreement_count: usize,
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.disagreement_count == 0
    }
}

/// PD tables for every preference of the domain's report space.
struct Tables {
    m: usize,
    map: HashMap<(Preference, u8), PdTable>,
}

impl Tables {
    fn new(domain: &ProblemDomain) -> Self {
        let m = domain.universe_size();
        let mut prefs: Vec<Preference> = Vec::new();
        for (_, _, space) in domain.blocks() {
            prefs.extend(space.iter().copied());
        }
        prefs.sort();
        prefs.dedup();
        let unacc = *domain.variant() == Variant::Unacceptable;
        let map = prefs
            .par_iter()
            .map(|p| {
                let cmp = if unacc { Comparator::Unacceptable } else { Comparator::Base };
                ((*p, unacc as u8), PdTable::new(p, cmp, m))
            })
            .collect();
        Tables { m, map }
    }

    fn get(&self, p: &Problem, i: usize) -> std::borrow::Cow<'_, PdTable> {
        let cmp = Comparator::for_agent(p, i);
        let unacc = matches!(cmp, Comparator::Unacceptable);
        match self.map.get(&(*p.pref(i), unacc as u8)) {
            Some(t) if matches!(cmp, Comparator::Base | Comparator::Unacceptable) => std::borrow::Cow::Borrowed(t),
            _ => std::borrow::Cow::Owned(PdTable::new(p.pref(i), cmp, self.m)),
        }
    }
}

fn characterized(p: &Problem, a: &Allocation) -> bool {
    let acyclic = build_trade_relation(p, a).is_acyclic();
    match p.variant() {
        Variant::Unacceptable => individually_rational(p, a) && non_wasteful_star(p, a) && acyclic,
        _ => non_wasteful(a, p.available()) && acyclic,
    }
}

/// Compare the characterization (NW and RT; IR, NW* and RT with
/// unacceptable objects) with the Pareto oracle for every feasible
/// allocation of every problem in `domain`.
pub fn efficiency_equivalence(domain: &ProblemDomain) -> EquivalenceReport {
    let tables = Tables::new(domain);
    let per_problem: Vec<(usize, usize, Vec<Disagreement>)> = (0..domain.len())
        .into_par_iter()
        .map(|idx| {
            let p = domain.problem(idx);
            let unacc = *p.variant() == Variant::Unacceptable;
            let all = all_allocations(&p, false).expect("domain within oracle cap");
            let competitors: Vec<&Allocation> =
                all.iter().filter(|b| !unacc || individually_rational(&p, b)).collect();
            let t: Vec<_> = (0..p.n()).map(|i| tables.get(&p, i)).collect();
            let dominated = |a: &Allocation| {
                competitors.iter().any(|b| *b != a && (0..p.n()).all(|i| t[i].is_geq(b.get(i), a.get(i))))
            };
            let mut efficient = 0;
            let mut bad = Vec::new();
            for a in &all {
                let oracle = (!unacc || individually_rational(&p, a)) && !dominated(a);
                let ch = characterized(&p, a);
                efficient += oracle as usize;
                if oracle != ch {
                    bad.push(Disagreement { problem: p.clone(), allocation: a.clone(), characterization: ch, oracle });
                }
            }
            (all.len(), efficient, bad)
        })
        .collect();
    let mut r = EquivalenceReport { problems: domain.len(), ..Default::default() };
    for (count, eff, bad) in per_problem {
        r.allocations += count;
        r.efficient += eff;
        r.disagreement_count += bad.len();
        for d in bad {
            if r.disagreements.len() < 10 {
                r.disagreements.push(d);
            }
        }
    }
    r
}

/// A seeded random rule tabulated on `domain`: at each problem it returns
/// the draft outcome for a random priority, except that with probability
/// `noise` it returns a uniformly random feasible allocation.
pub fn random_rule(domain: &ProblemDomain, seed: u64, noise: f64) -> Tabulated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = domain
        .iter()
        .map(|p| {
            let a = if rng.gen_bool(noise) {
                let all = all_allocations(&p, false).expect("domain within oracle cap");
                all.choose(&mut rng).expect("at least the empty allocation").clone()
            } else {
                let mut order = p.agents().to_vec();
                order.shuffle(&mut rng);
                DraftRule::new(Priority(order)).allocate(&p)
            };
            (KeyMode::Full.key(&p), a)
        })
        .collect();
    Tabulated::new(format!("random-{seed}"), table, KeyMode::Full)
}

#[derive(Clone, Debug)]
pub struct RuleAgreement {
    pub rule: String,
    pub oracle: bool,
    pub characterization: bool,
}

/// Domain-level verdicts for `count` random rules: the Pareto checker
/// against the conjunction of its characterizing axioms.
pub fn random_rule_agreement(domain: &ProblemDomain, count: usize, seed: u64) -> Vec<RuleAgreement> {
    let unacc = *domain.variant() == Variant::Unacceptable;
    let parts: Vec<Axiom> =
        if unacc { vec![Axiom::Ir, Axiom::NwStar, Axiom::Rt] } else { vec![Axiom::Nw, Axiom::Rt] };
    let noise = [0.0, 0.002, 0.05, 0.5];
    (0..count)
        .map(|k| {
            let rule = random_rule(domain, seed.wrapping_add(k as u64), noise[k % noise.len()]);
            let oracle = check(&rule, domain, &Axiom::Pareto).holds();
            let characterization = parts.iter().all(|ax| check(&rule, domain, ax).holds());
            RuleAgreement { rule: rule.name(), oracle, characterization }
        })
        .collect()
}
