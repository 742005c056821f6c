//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::path::Path;
use std::time::{Duration, Instant};

use draftkit_axioms::msp::{check_best_case, check_msp_certificate, check_msp_falsify};
use draftkit_axioms::{Axiom, ProblemDomain};
use draftkit_cli::commands;
use draftkit_cli::{load, RuleName, Settings, Status};
use draftkit_core::{AgentId, Bundle, Preference, Priority, Quota};
use draftkit_pd::{pd_geq, pd_geq_oracle, pd_geq_quota, pd_geq_unacc, WeightScheme};
use draftkit_rules::DraftRule;
use draftkit_verifier::{
    alternative_counterexample, evaluate, fixed_model, unacceptable_model, variable_model, verify, Model, Outcome,
    Scale, TheoremReport, DEFAULT_BUDGET,
};

const WORKED_EXAMPLE_LIMIT: Duration = Duration::from_millis(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(60);
const UNIQUENESS_LIMIT: Duration = Duration::from_secs(30);
const SMALL_UNSAT_LIMIT: Duration = Duration::from_secs(30);
const FOUR_OBJECT_UNSAT_LIMIT: Duration = Duration::from_secs(5 * 60);
const FIVE_OBJECT_UNSAT_LIMIT: Duration = Duration::from_secs(10 * 60);
const PD_UNIVERSE: usize = 6;
const RANDOM_SCHEMES: u64 = 100;
const DETAIL_LINES: usize = 6;

struct Line {
    pass: bool,
    details: Vec<String>,
}

impl Line {
    fn new() -> Self {
        Line { pass: true, details: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details.push(if ok { what } else { format!("FAILED: {what}") });
        self.pass &= ok;
    }

    fn within(&mut self, label: &str, took: Duration, limit: Duration) {
        self.require(took <= limit, format!("{label}: {took:.2?} (limit {limit:.0?})"));
    }

    fn driver(&mut self, id: &str) -> Duration {
        let start = Instant::now();
        let r = verify(id, &Scale::default());
        let took = start.elapsed();
        match r {
            Ok(TheoremReport { outcome, details, .. }) => {
                let ok = outcome == Outcome::Reproduced;
                self.require(ok, format!("{id}: {} in {took:.2?}", outcome.as_str()));
                let shown = if ok { DETAIL_LINES.min(details.len()) } else { details.len() };
                self.details.extend(details[..shown].iter().map(|d| format!("  {d}")));
                if shown < details.len() {
                    self.details.push(format!("  ... {} more", details.len() - shown));
                }
            }
            Err(e) => self.require(false, format!("{id}: {e}")),
        }
        took
    }
}

fn problems() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../problems"))
}

fn worked_example() -> Line {
    let mut l = Line::new();
    let loaded = load(&problems().join("worked_example.toml"), None).unwrap();
    let start = Instant::now();
    let out = commands::run(&loaded, RuleName::Draft, &[], &Settings::default()).unwrap();
    let took = start.elapsed();
    l.require(out.text.contains("allocation: ({a,b},{c},{d})"), "allocation ({a,b},{c},{d})");
    l.require(out.text.contains("trace: 1:a, 2:c, 3:d, 1:b"), "trace a, c, d, b");
    l.within("run", took, WORKED_EXAMPLE_LIMIT);
    l
}

fn manipulation_example() -> Line {
    let mut l = Line::new();
    let loaded = load(&problems().join("manipulation.toml"), None).unwrap();
    let out = commands::manipulate(&loaded, RuleName::Draft, "1", &Settings::default()).unwrap();
    let j = &out.json;
    l.require(out.status == Status::Violation, "agent 1 can manipulate");
    l.require(j["misreport"] == "b>a>c", format!("misreport {}", j["misreport"]));
    l.require(j["gained"] == serde_json::json!(["a", "b"]), format!("gains {}", j["gained"]));
    l.require(j["lost"] == serde_json::json!(["a", "c"]), format!("over truthful {}", j["lost"]));
    l
}

fn timed_driver(id: &str, limit: Duration) -> Line {
    let mut l = Line::new();
    let took = l.driver(id);
    l.within(id, took, limit);
    l
}

fn drivers(ids: &[&str]) -> Line {
    let mut l = Line::new();
    for id in ids {
        l.driver(id);
    }
    l
}

fn impossibility_five_objects() -> Line {
    let mut l = Line::new();
    l.driver("T4-replay");
    let took = l.driver("T4");
    l.within("T4", took, FIVE_OBJECT_UNSAT_LIMIT);
    l
}

fn schemes() -> Vec<WeightScheme> {
    let mut v = vec![WeightScheme::Geometric, WeightScheme::Linear];
    v.extend((0..RANDOM_SCHEMES).map(|k| WeightScheme::Random { seed: 20_240_601 + k }));
    v
}

fn msp_grid() -> impl Iterator<Item = (usize, usize)> {
    [2, 3].into_iter().flat_map(|n| (2..=4).map(move |m| (n, m)))
}

fn maxmin_strategyproofness() -> Line {
    let mut l = Line::new();
    let schemes = schemes();
    for (n, m) in msp_grid() {
        let d = ProblemDomain::fixed(n, m);
        let rule = DraftRule::new(Priority::identity(n));
        let cert = check_msp_certificate(&rule, &d);
        let fals = check_msp_falsify(&rule, &d, &schemes);
        l.require(
            cert.holds() && fals.holds(),
            format!("n={n} m={m}: certificate {} ({} slots), falsifier {}", cert.verdict.as_str(), cert.checked, fals.verdict.as_str()),
        );
    }
    l
}

fn best_case() -> Line {
    let mut l = Line::new();
    let schemes = schemes();
    for (n, m) in msp_grid() {
        let d = ProblemDomain::fixed(n, m);
        let r = check_best_case(&DraftRule::new(Priority::identity(n)), &d, &schemes);
        l.require(r.holds(), format!("n={n} m={m}: {} over {} instances", r.verdict.as_str(), r.checked));
    }
    l
}

fn independence() -> Line {
    let mut l = Line::new();
    let potential: Vec<AgentId> = (1..=3).map(AgentId).collect();
    let groups = [
        ("fixed", fixed_model(2, 3), ProblemDomain::fixed(2, 3)),
        ("unacceptable", unacceptable_model(), ProblemDomain::unacceptable(2, 3)),
        ("variable", variable_model(), ProblemDomain::variable(&potential, 3)),
    ];
    let (mut total, mut at_witness, mut domain_wide) = (0, 0, 0);
    for (label, cases, domain) in groups {
        for c in &cases {
            let r = evaluate(c, &domain);
            total += 1;
            at_witness += r.passed_at_witnesses() as usize;
            domain_wide += r.passed() as usize;
            if !r.passed() {
                let extra: Vec<_> = r
                    .reports
                    .iter()
                    .filter(|rep| !rep.holds() && rep.axiom != r.fails)
                    .map(|rep| rep.axiom.clone())
                    .collect();
                l.details.push(format!("  {label} / {} (designated {}): also fails {}", r.rule, r.fails, extra.join(", ")));
            }
        }
    }
    l.details.insert(0, format!("witness instances: {at_witness}/{total} rules fail exactly the designated axiom"));
    l.require(domain_wide == total, format!("whole domain: {domain_wide}/{total} rules fail only the designated axiom"));
    let pi3 = Priority::identity(3);
    let searches = [
        (Model::Variable, "2-NEU", ProblemDomain::variable(&potential, 3), pi3.clone(), 200),
        (Model::Variable, "RM-VAR", ProblemDomain::variable(&potential, 3), pi3, 200),
        (Model::Unacceptable, "RM", ProblemDomain::unacceptable(2, 3), Priority::identity(2), 50),
    ];
    for (model, target, domain, pi, limit) in searches {
        let keep = model.remaining_axioms(target, &pi);
        let found = alternative_counterexample(&domain, &keep, &Axiom::parse(target, &pi).unwrap(), limit, DEFAULT_BUDGET);
        let msg = match found {
            Ok(Some(alt)) => format!("solution {} of the search", alt.examined),
            Ok(None) => "none found".into(),
            Err(e) => e.to_string(),
        };
        l.details.push(format!("  rule satisfying every {} axiom but {target}: {msg}", model.name()));
    }
    l
}

fn pd_oracle() -> Line {
    let mut l = Line::new();
    for m in 1..=PD_UNIVERSE {
        let subsets: Vec<Bundle> = Bundle::full(m).subsets().collect();
        let quotas: Vec<Quota> = (1..=m as u32).map(Quota::Finite).chain([Quota::Infinite]).collect();
        let (mut pairs, mut wrong) = ([0usize; 3], [0usize; 3]);
        for p in Preference::all_rankings(m) {
            let cut: Vec<Preference> = (0..=m).map(|c| p.with_cutoff(Some(c)).unwrap()).collect();
            for &s in &subsets {
                for &t in &subsets {
                    pairs[0] += 1;
                    wrong[0] += (pd_geq(&p, s, t) != pd_geq_oracle(&p, s, t).unwrap()) as usize;
                    for &q in &quotas {
                        let (ts, tt) = (p.top_k(s, q.cap(s.len())), p.top_k(t, q.cap(t.len())));
                        pairs[1] += 1;
                        wrong[1] += (pd_geq_quota(&p, q, s, t) != pd_geq_oracle(&p, ts, tt).unwrap()) as usize;
                    }
                    for pc in &cut {
                        let acc = pc.acceptable();
                        pairs[2] += 1;
                        wrong[2] += (pd_geq_unacc(pc, s, t) != pd_geq_oracle(pc, s & acc, t & acc).unwrap()) as usize;
                    }
                }
            }
        }
        l.require(
            wrong == [0; 3],
            format!(
                "|universe|={m}: base {}/{}, quota {}/{}, unacceptable {}/{} disagreements",
                wrong[0], pairs[0], wrong[1], pairs[1], wrong[2], pairs[2]
            ),
        );
    }
    l
}

type Criterion = (&'static str, bool, fn() -> Line);

fn main() {
    rayon::ThreadPoolBuilder::new().num_threads(1).build_global().ok();
    let criteria: [Criterion; 15] = [
        ("worked example", false, worked_example),
        ("manipulation example", false, manipulation_example),
        ("draft sweep: RP, EF1, EFF, RM", false, || timed_driver("P2", SWEEP_LIMIT)),
        ("property matrix", false, || drivers(&["TABLE1"])),
        ("efficiency characterizations vs oracle", false, || drivers(&["P1", "P3"])),
        ("draft uniqueness, n=2, three objects", true, || timed_driver("T1", UNIQUENESS_LIMIT)),
        ("RP, EF1, NW, WSP unsatisfiable on three objects", true, || timed_driver("T2", SMALL_UNSAT_LIMIT)),
        ("EFF, EF1, WSP unsatisfiable on four objects", true, || timed_driver("T3", FOUR_OBJECT_UNSAT_LIMIT)),
        ("NW, EF1, SP unsatisfiable on five objects", true, impossibility_five_objects),
        ("maxmin strategy-proofness", false, maxmin_strategyproofness),
        ("best-case utility", false, best_case),
        ("quota and unacceptable-object sweeps", false, || drivers(&["T6", "T7"])),
        ("independence counterexamples", false, independence),
        ("variable populations and priority recovery", true, || drivers(&["T8", "L8", "L9"])),
        ("PD comparators vs matching oracle", false, pd_oracle),
    ];
    let mut failed = 0;
    for (k, (title, desk, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let line = f();
        let tag = if *desk { " [desk-scale]" } else { "" };
        let verdict = if line.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2}{tag}: {verdict} {title} ({:.2?})", k + 1, start.elapsed());
        for d in &line.details {
            println!("    {d}");
        }
        failed += !line.pass as usize;
    }
    println!("{} of 15 criteria pass", 15 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
