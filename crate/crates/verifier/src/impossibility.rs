//! Guided replay of the case analysis showing that no rule for two agents
//! and five objects is non-wasteful, EF1 and strategy-proof.
//!
//! Each cell is a profile over `X = {a,b,c,d,e}`. Its candidates are the
//! NW and EF1 allocations that survive SP against every cell already pinned
//! on the current branch which differs in one agent's preference. A cell
//! either pins one allocation, branches into the expected subcases, or has
//! no candidate left (a contradiction). Every outcome is compared with the
//! expected tables.

use std::collections::BTreeMap;

use draftkit_axioms::{all_allocations, check_allocation, Axiom};
use draftkit_core::{AgentId, Allocation, Bundle, ObjectId, Preference, Problem, Universe, Variant};
use draftkit_pd::pd_geq;

const M: usize = 5;

type Profile = (Preference, Preference);

/// What the tables say about a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Expect {
    Pin(Allocation),
    Contradiction,
    /// Subcases: label, allocation, and the script that follows.
    Branch(Vec<(&'static str, Allocation, Vec<Cell>)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Cell {
    table: &'static str,
    profile: Profile,
    expect: Expect,
}

fn cell(table: &'static str, p1: &str, p2: &str, expect: Expect) -> Cell {
    Cell { table, profile: (pref(p1), pref(p2)), expect }
}

fn pin(b1: &str, b2: &str) -> Expect {
    Expect::Pin(alloc(b1, b2))
}

fn branch(subs: Vec<(&'static str, (&str, &str), Vec<Cell>)>) -> Expect {
    Expect::Branch(subs.into_iter().map(|(l, (b1, b2), rest)| (l, alloc(b1, b2), rest)).collect())
}

fn case1_script(t_a: &'static str, t_b: &'static str) -> Vec<Cell> {
    use Expect::Contradiction;
    vec![cell(
        t_a,
        "abcde",
        "baced",
        branch(vec![
            (
                "a",
                ("ade", "bc"),
                vec![
                    cell(t_a, "abcde", "bcdea", pin("ade", "bc")),
                    cell(t_a, "bcade", "bcdea", Contradiction),
                ],
            ),
            (
                "b",
                ("acd", "be"),
                vec![
                    cell(t_b, "abcde", "bcdea", pin("ace", "bd")),
                    cell(t_b, "abcde", "bceda", pin("acd", "be")),
                    cell(t_b, "bdace", "bcdea", pin("ade", "bc")),
                    cell(t_b, "bdace", "bceda", Contradiction),
                ],
            ),
        ]),
    )]
}

/// Case 2 exactly as tabulated (objects c and d interchanged relative to Case 1).
fn case2_script() -> Vec<Cell> {
    use Expect::Contradiction;
    vec![
        cell("Case 2", "abcde", "bacde", pin("ade", "bc")),
        cell("Case 2", "abdce", "bacde", pin("ade", "bc")),
        cell(
            "Case 2a",
            "abdce",
            "badec",
            branch(vec![
                (
                    "a",
                    ("ace", "bd"),
                    vec![
                        cell("Case 2a", "abdce", "bdcea", pin("ace", "bd")),
                        cell("Case 2a", "bdace", "bdcea", Contradiction),
                    ],
                ),
                (
                    "b",
                    ("acd", "be"),
                    vec![
                        cell("Case 2b", "abdce", "bdcea", pin("ade", "bc")),
                        cell("Case 2b", "abdce", "bdeca", pin("acd", "be")),
                        cell("Case 2b", "bcade", "bdcea", pin("ace", "bd")),
                        cell("Case 2b", "bcade", "bdeca", Contradiction),
                    ],
                ),
            ]),
        ),
    ]
}

/// Permutation of the five objects swapping each given pair.
fn swap_map(pairs: &[(char, char)]) -> Vec<ObjectId> {
    let mut map: Vec<ObjectId> = (0..M as u8).map(ObjectId).collect();
    for &(x, y) in pairs {
        let (x, y) = (x as usize - 'a' as usize, y as usize - 'a' as usize);
        map.swap(x, y);
    }
    map
}

fn relabel_script(cells: &[Cell], map: &[ObjectId], table: &'static str) -> Vec<Cell> {
    cells
        .iter()
        .map(|c| Cell {
            table,
            profile: (c.profile.0.relabel(map), c.profile.1.relabel(map)),
            expect: match &c.expect {
                Expect::Pin(a) => Expect::Pin(a.relabel(map)),
                Expect::Contradiction => Expect::Contradiction,
                Expect::Branch(bs) => Expect::Branch(
                    bs.iter().map(|(l, a, rest)| (*l, a.relabel(map), relabel_script(rest, map, table))).collect(),
                ),
            },
        })
        .collect()
}

/// The script with table names dropped.
fn strip_tables(cells: &[Cell]) -> Vec<Cell> {
    cells
        .iter()
        .map(|c| Cell {
            table: "",
            profile: c.profile,
            expect: match &c.expect {
                Expect::Branch(bs) => {
                    Expect::Branch(bs.iter().map(|(l, a, rest)| (*l, a.clone(), strip_tables(rest))).collect())
                }
                e => e.clone(),
            },
        })
        .collect()
}

/// One replayed cell.
#[derive(Clone, Debug)]
pub struct CellRecord {
    pub case: String,
    pub table: String,
    pub profile: String,
    pub expected: String,
    pub found: String,
    pub matched: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ReplayLog {
    pub cells: Vec<CellRecord>,
    /// The four starting allocations at the base profile, as found.
    pub base_candidates: Vec<String>,
    pub contradictions: usize,
    /// Agreement on `X` forces equal bundles under SP; checked over a
    /// six-object universe.
    pub restriction_step: bool,
    /// Case 2 as tabulated equals Case 1 with c and d interchanged.
    pub case2_is_relabelled_case1: bool,
    pub failures: Vec<String>,
}

impl ReplayLog {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.restriction_step && self.case2_is_relabelled_case1
    }
}

struct Replayer {
    u: Universe,
    log: ReplayLog,
}

fn pref(s: &str) -> Preference {
    let idx: Vec<u8> = s.bytes().map(|b| b - b'a').collect();
    Preference::from_indices(&idx, None)
}

fn bundle(s: &str) -> Bundle {
    s.bytes().fold(Bundle::EMPTY, |b, c| b.with(ObjectId(c - b'a')))
}

fn alloc(b1: &str, b2: &str) -> Allocation {
    Allocation::new([bundle(b1), bundle(b2)])
}

fn problem(p: Profile) -> Problem {
    Problem::new(M, &[AgentId(1), AgentId(2)], Bundle::full(M), &[p.0, p.1], Variant::Fixed)
        .expect("valid profile")
}

/// NW and EF1 allocations at a profile.
fn feasible(p: &Problem) -> Vec<Allocation> {
    all_allocations(p, false)
        .expect("small")
        .into_iter()
        .filter(|a| check_allocation(&Axiom::Nw, p, a).is_none() && check_allocation(&Axiom::Ef1, p, a).is_none())
        .collect()
}

impl Replayer {
    fn show(&self, a: &Allocation) -> String {
        self.u.fmt_allocation(a)
    }

    fn show_profile(&self, p: Profile) -> String {
        format!("({}, {})", p.0.format_compact(&self.u), p.1.format_compact(&self.u))
    }

    /// Candidates at `profile` given the cells pinned so far.
    fn candidates(&self, profile: Profile, pinned: &BTreeMap<Profile, Allocation>) -> Vec<Allocation> {
        let p = problem(profile);
        let prefs = [profile.0, profile.1];
        feasible(&p)
            .into_iter()
            .filter(|b| {
                pinned.iter().all(|(q, a)| {
                    let qp = [q.0, q.1];
                    let diff: Vec<usize> = (0..2).filter(|&k| qp[k] != prefs[k]).collect();
                    if diff.len() != 1 {
                        return true;
                    }
                    let k = diff[0];
                    // truthful at the pinned cell, and truthful at the new one
                    pd_geq(&qp[k], a.get(k), b.get(k)) && pd_geq(&prefs[k], b.get(k), a.get(k))
                })
            })
            .collect()
    }

    fn run(&mut self, case: &str, cells: &[Cell], pinned: &mut BTreeMap<Profile, Allocation>) {
        for c in cells {
            let found = self.candidates(c.profile, pinned);
            let found_s: Vec<String> = found.iter().map(|a| self.show(a)).collect();
            let profile = self.show_profile(c.profile);
            let here = format!("{case}, {} cell {profile}", c.table);
            match &c.expect {
                Expect::Pin(a) => {
                    let want = a.clone();
                    let ok = found.len() == 1 && found[0] == want;
                    self.record(case, c, self.show(&want), found_s.join(" or "), ok, &here);
                    pinned.insert(c.profile, want);
                }
                Expect::Contradiction => {
                    let ok = found.is_empty();
                    if ok {
                        self.log.contradictions += 1;
                    }
                    let shown = if ok { "contradiction".to_string() } else { found_s.join(" or ") };
                    self.record(case, c, "contradiction".into(), shown, ok, &here);
                    // a branch ends at its contradiction
                    return;
                }
                Expect::Branch(subs) => {
                    let want: Vec<Allocation> = subs.iter().map(|(_, a, _)| a.clone()).collect();
                    let mut sorted_found = found.clone();
                    sorted_found.sort();
                    let mut sorted_want = want.clone();
                    sorted_want.sort();
                    let ok = sorted_found == sorted_want;
                    let want_s: Vec<String> = want.iter().map(|a| self.show(a)).collect();
                    self.record(case, c, want_s.join(" or "), found_s.join(" or "), ok, &here);
                    for (label, a, rest) in subs {
                        let mut branch = pinned.clone();
                        branch.insert(c.profile, a.clone());
                        self.run(&format!("{case}{label}"), rest, &mut branch);
                    }
                    return;
                }
            }
        }
    }

    fn record(&mut self, case: &str, c: &Cell, expected: String, found: String, matched: bool, here: &str) {
        if !matched {
            self.log.failures.push(format!("{here}: expected {expected}, found {found}"));
        }
        self.log.cells.push(CellRecord {
            case: case.to_string(),
            table: c.table.to_string(),
            profile: self.show_profile(c.profile),
            expected,
            found,
            matched,
        });
    }
}

/// Agents whose preferences agree on `X` get identical bundles under SP:
/// for every pair of rankings of a six-object universe that agree on a
/// five-object `X`, and all `S, T ⊆ X`, `S ⪰ T` and `T ⪰' S` force `S = T`.
pub fn restriction_step_holds() -> bool {
    let m = 6;
    let x = Bundle::full(5);
    let outside = ObjectId(5);
    let subsets: Vec<Bundle> = x.subsets().collect();
    for base in Preference::rankings_of(x) {
        let order = base.ranking().to_vec();
        let inserted: Vec<Preference> = (0..=order.len())
            .map(|pos| {
                let mut v = order.clone();
                v.insert(pos, outside);
                Preference::complete(&v).expect("ranking")
            })
            .collect();
        debug_assert!(inserted.iter().all(|p| p.len() == m));
        for p in &inserted {
            for q in &inserted {
                for &s in &subsets {
                    for &t in &subsets {
                        if s != t && pd_geq(p, s, t) && pd_geq(q, t, s) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Replay every case. Case 1 and Case 2 follow their tables; Cases 3 and 4
/// move to a relabelled copy of the base profile and rerun Case 1 under
/// that relabelling.
pub fn replay_impossibility_cases() -> ReplayLog {
    let mut r = Replayer { u: Universe::letters(M), log: ReplayLog::default() };
    let base: Profile = (pref("abcde"), pref("badce"));
    let base_p = problem(base);
    let mut starts: Vec<Allocation> = feasible(&base_p).into_iter().filter(|a| a.get(0).len() == 3).collect();
    starts.sort();
    r.log.base_candidates = starts.iter().map(|a| r.show(a)).collect();
    let expected_starts: Vec<Allocation> = {
        let mut v: Vec<Allocation> =
            [("ace", "bd"), ("ade", "bc"), ("bce", "ad"), ("bde", "ac")].into_iter().map(|(x, y)| alloc(x, y)).collect();
        v.sort();
        v
    };
    if starts != expected_starts {
        r.log.failures.push(format!("base profile: expected four starting allocations, found {}", r.log.base_candidates.join(", ")));
    }

    let case1 = case1_script("Case 1a", "Case 1b");
    let cd = swap_map(&[('c', 'd')]);
    let ab = swap_map(&[('a', 'b')]);
    let abcd = swap_map(&[('a', 'b'), ('c', 'd')]);
    r.log.case2_is_relabelled_case1 =
        strip_tables(&case2_script()[2..]) == strip_tables(&relabel_script(&case1, &cd, ""));

    let cases: Vec<(&str, Allocation, Vec<Cell>)> = vec![
        ("Case 1", alloc("ace", "bd"), case1.clone()),
        ("Case 2", alloc("ade", "bc"), case2_script()),
        ("Case 3", alloc("bce", "ad"), {
            let mut v = vec![
                cell("Case 3", "abcde", "abdce", pin("bce", "ad")),
                cell("Case 3", "bacde", "abdce", pin("bce", "ad")),
            ];
            v.extend(relabel_script(&case1, &ab, "Case 3"));
            v
        }),
        ("Case 4", alloc("bde", "ac"), {
            let mut v = vec![
                cell("Case 4", "abcde", "abcde", pin("bde", "ac")),
                cell("Case 4", "badce", "abcde", pin("bde", "ac")),
            ];
            v.extend(relabel_script(&case1, &abcd, "Case 4"));
            v
        }),
    ];
    for (name, start, script) in cases {
        let mut pinned = BTreeMap::new();
        pinned.insert(base, start);
        r.run(name, &script, &mut pinned);
    }
    r.log.restriction_step = restriction_step_holds();
    if !r.log.restriction_step {
        r.log.failures.push("restriction step: agreeing preferences admit distinct SP-compatible bundles".into());
    }
    if !r.log.case2_is_relabelled_case1 {
        r.log.failures.push("Case 2 tables are not Case 1 with c and d interchanged".into());
    }
    r.log
}
