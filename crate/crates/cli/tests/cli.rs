use std::path::{Path, PathBuf};
use std::process::Command;

use draftkit_cli::commands::{self, allocation_of};
use draftkit_cli::*;

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn problem(name: &str) -> Loaded {
    load(&problems_dir().join(name), None).unwrap()
}

fn strip_comments(s: &str) -> String {
    s.lines().filter(|l| !l.trim_start().starts_with('#')).map(|l| format!("{l}\n")).collect()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_draftkit"))
}

#[test]
fn documents_round_trip_byte_for_byte() {
    for f in ["worked_example.toml", "manipulation.toml", "quota.toml", "nothing_acceptable.toml", "variable.toml"] {
        let text = std::fs::read_to_string(problems_dir().join(f)).unwrap();
        let l = parse_problem(&text, f).unwrap();
        let out = l.to_file().to_toml();
        assert_eq!(strip_comments(&text).trim_end(), out.trim_end(), "{f}");
        let again = parse_problem(&out, f).unwrap();
        assert_eq!(again.problem, l.problem);
        assert_eq!(again.priority, l.priority);
    }
}

#[test]
fn unknown_fields_are_rejected_with_position() {
    let text = "objects = [\"a\", \"b\"]\nvariant = \"fixed\"\ncolour = \"red\"\n\n[[agents]]\nid = 1\npreference = \"a>b\"\n";
    match parse_problem(text, "doc") {
        Err(InputError::At { line, column, message, .. }) => {
            assert_eq!((line, column), (3, 1));
            assert!(message.contains("colour"), "{message}");
        }
        other => panic!("expected a positioned error, got {other:?}"),
    }
    let nested = "objects = [\"a\"]\nvariant = \"fixed\"\n[[agents]]\nid = 1\npreference = \"a\"\nrank = 2\n";
    assert!(matches!(parse_problem(nested, "doc"), Err(InputError::At { line: 6, .. })));
}

#[test]
fn semantic_errors_point_at_the_offending_value() {
    let base = |pref: &str, variant: &str| {
        format!("objects = [\"a\", \"b\", \"c\"]\nvariant = \"{variant}\"\n\n[[agents]]\nid = 1\npreference = \"{pref}\"\n")
    };
    let err = parse_problem(&base("a>b", "fixed"), "doc").unwrap_err().to_string();
    assert!(err.starts_with("doc:6:14:") && err.contains("omits c"), "{err}");
    let err = parse_problem(&base("a>x>b>c", "fixed"), "doc").unwrap_err().to_string();
    assert!(err.contains("unknown object `x`"), "{err}");
    let err = parse_problem(&base("a>b|c", "fixed"), "doc").unwrap_err().to_string();
    assert!(err.contains("only allowed with variant = \"unacceptable\""), "{err}");
    assert!(parse_problem(&base("a>b|c", "unacceptable"), "doc").is_ok());
    let err = parse_problem(&base("a>b>c", "quota"), "doc").unwrap_err().to_string();
    assert!(err.contains("needs a quota"), "{err}");
    let quota0 = base("a>b>c", "quota") + "quota = 0\n";
    assert!(parse_problem(&quota0, "doc").unwrap_err().to_string().contains("at least 1"));
    let bad_priority = base("a>b>c", "fixed").replace("variant = \"fixed\"", "variant = \"fixed\"\npriority = [2]");
    assert!(parse_problem(&bad_priority, "doc").unwrap_err().to_string().contains("priority"));
}

#[test]
fn csv_rows_and_cutoffs() {
    let l = parse_csv("team1,a>b>c>d\nteam2,a>b|c>d\n", "t.csv", None).unwrap();
    assert_eq!(variant_name(&l), VariantName::Unacceptable);
    let u = &l.universe;
    assert_eq!(u.names(), ["a", "b", "c", "d"]);
    assert_eq!(l.problem.pref(0).format(u), "a>b>c>d|");
    assert_eq!(l.problem.pref(1).format(u), "a>b|c>d");
    assert_eq!(l.names, vec![Some("team1".to_string()), Some("team2".to_string())]);

    let fixed = parse_csv("team,preference\nx,a>b>c\ny,c>a>b\n", "t.csv", None).unwrap();
    assert_eq!(variant_name(&fixed), VariantName::Fixed);
    assert!(!fixed.problem.pref(0).has_cutoff());

    let top = parse_csv("x,|a>b\ny,a|>b\n", "t.csv", None);
    assert!(top.unwrap_err().to_string().contains("malformed cutoff"));
    assert!(parse_csv("x,|a>b\ny,b>a|\n", "t.csv", None).is_ok());
}

fn variant_name(l: &Loaded) -> VariantName {
    VariantName::of(l.problem.variant())
}

#[test]
fn csv_errors() {
    let err = parse_csv("team1,a>b>c>d\nteam2,a>b>c\n", "t.csv", None).unwrap_err().to_string();
    assert!(err.contains("team2") && err.contains("omits d"), "{err}");
    let err = parse_csv("team1,a>b>a\n", "t.csv", None).unwrap_err().to_string();
    assert!(err.contains("duplicate object `a`"), "{err}");
    for bad in ["a>b||c", "a|b|c", "a>|b", "a|>b"] {
        let err = parse_csv(&format!("t,{bad}\n"), "t.csv", None).unwrap_err().to_string();
        assert!(err.contains("malformed cutoff"), "{bad}: {err}");
    }
    assert!(parse_csv("t,a>>b\n", "t.csv", None).unwrap_err().to_string().contains("empty object name"));
    assert!(parse_csv("t,a>b\nt,b>a\n", "t.csv", None).unwrap_err().to_string().contains("twice"));
    assert!(parse_csv("t,a>b,extra\n", "t.csv", None).unwrap_err().to_string().contains("fields"));
    assert!(parse_csv("t,a>b|\n", "t.csv", Some(VariantName::Fixed)).is_err());
    let err = parse_csv("team1,a>b\nteam2,b>a>c\n", "t.csv", None).unwrap_err().to_string();
    assert!(err.contains("team1: ranking omits c"), "{err}");
}

#[test]
fn run_worked_example() {
    let l = problem("worked_example.toml");
    let out = commands::run(&l, RuleName::Draft, &[], &Settings::default()).unwrap();
    assert_eq!(out.status, Status::Ok);
    assert!(out.text.contains("allocation: ({a,b},{c},{d})"));
    assert!(out.text.contains("trace: 1:a, 2:c, 3:d, 1:b"));
    assert_eq!(allocation_of(&l, RuleName::Draft), vec![vec!["a", "b"], vec!["c"], vec!["d"]]);
}

#[test]
fn run_quota_and_unacceptable() {
    let q = problem("quota.toml");
    let out = commands::run(&q, RuleName::DraftQuota, &[], &Settings::default()).unwrap();
    assert_eq!(out.json["unassigned"], serde_json::json!(["c"]));
    assert!(commands::run(&q, RuleName::Draft, &[], &Settings::default()).is_err());

    let u = problem("nothing_acceptable.toml");
    let out = commands::run(&u, RuleName::UDraft, &[], &Settings::default()).unwrap();
    assert_eq!(out.status, Status::Ok);
    assert!(out.text.contains("allocation: ({},{})"));
}

#[test]
fn run_checks_axioms_at_the_instance() {
    let l = problem("manipulation.toml");
    let out = commands::run(&l, RuleName::Draft, &["EF1,WSP".into()], &Settings::default()).unwrap();
    assert_eq!(out.status, Status::Violation);
    assert_eq!(out.json["axioms"][0]["verdict"], "holds");
    assert_eq!(out.json["axioms"][1]["verdict"], "violated");
    assert!(out.json["axioms"][1]["witness"]["related"][0]["agents"].is_array());
}

#[test]
fn manipulation_example() {
    let l = problem("manipulation.toml");
    let out = commands::manipulate(&l, RuleName::Draft, "1", &Settings::default()).unwrap();
    assert_eq!(out.status, Status::Violation);
    assert_eq!(out.json["misreport"], "b>a>c");
    assert_eq!(out.json["gained"], serde_json::json!(["a", "b"]));
    assert_eq!(out.json["lost"], serde_json::json!(["a", "c"]));
    let none = commands::manipulate(&l, RuleName::SerialDictatorship, "1", &Settings::default()).unwrap();
    assert_eq!(none.status, Status::Ok);
    assert!(commands::manipulate(&l, RuleName::Draft, "9", &Settings::default()).is_err());
}

#[test]
fn check_statuses() {
    let s = Settings::default();
    let spec = |n, m| DomainSpec { variant: VariantName::Fixed, agents: n, objects: m, quotas: None };
    let ok = commands::check_domain(&spec(3, 4), RuleName::Draft, &["RP,EF1,EFF,RM".into()], None, &s).unwrap();
    assert_eq!(ok.status, Status::Ok);
    let wsp = commands::check_domain(&spec(2, 3), RuleName::Draft, &["WSP".into()], None, &s).unwrap();
    assert_eq!(wsp.status, Status::Violation);
    let w = &wsp.json["axioms"][0]["witness"];
    assert_eq!(w["problem"]["agents"][0]["preference"], "a>b>c");
    assert_eq!(w["problem"]["agents"][1]["preference"], "b>c>a");
    assert_eq!(w["related"][0]["agents"][0]["preference"], "b>a>c");
    let pid = commands::check_domain(&spec(2, 3), RuleName::PiDictatorship, &["EF1".into()], None, &s).unwrap();
    assert_eq!(pid.status, Status::Violation);
    let capped = commands::check_domain(&spec(2, 7), RuleName::Draft, &["EF1".into()], None, &s).unwrap();
    assert_eq!(capped.status, Status::Undecided);
    let neu = DomainSpec { variant: VariantName::Variable, agents: 2, objects: 6, quotas: None };
    let capped = commands::check_domain(&neu, RuleName::DraftVariable, &["NEU".into()], None, &s).unwrap();
    assert_eq!(capped.status, Status::Undecided);
    assert!(commands::check_domain(&spec(2, 3), RuleName::Draft, &["XYZ".into()], None, &s).is_err());
    assert!(commands::check_domain(&spec(2, 3), RuleName::DraftQuota, &["EF1".into()], None, &s).is_err());
}

#[test]
fn infer_priority_command() {
    let s = Settings::default();
    let pi = commands::parse_priority("3,1,4,2").unwrap();
    let out = commands::infer(RuleName::DraftVariable, 4, 3, Some(pi), &s).unwrap();
    assert_eq!(out.status, Status::Ok);
    assert_eq!(out.json["inferred"], serde_json::json!([3, 1, 4, 2]));
    let bad = commands::infer(RuleName::PiDictatorship, 3, 3, None, &s).unwrap();
    assert_eq!(bad.status, Status::Violation);
}

#[test]
fn binary_exit_codes() {
    let dir = problems_dir();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["run", dir.join("worked_example.toml").to_str().unwrap()]), 0);
    assert_eq!(code(&["manipulate", dir.join("manipulation.toml").to_str().unwrap(), "--agent", "1"]), 1);
    assert_eq!(code(&["run", dir.join("quota.toml").to_str().unwrap()]), 2);
    assert_eq!(code(&["run", "/nonexistent.toml"]), 2);
    assert_eq!(code(&["check", "--agents", "2", "--objects", "7", "--axioms", "EF1"]), 3);
    assert_eq!(code(&["verify", "T1", "--budget", "5"]), 3);
    assert_eq!(code(&["verify", "T1", "--objects", "7"]), 3);
    assert_eq!(code(&["verify", "nope"]), 2);
    assert_eq!(code(&["verify", "T1", "L8", "--jobs", "1"]), 0);
}

#[test]
fn reports_are_deterministic_without_timestamps() {
    let tmp = std::env::temp_dir().join(format!("draftkit-det-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let out = tmp.join("r.json");
            let status = bin()
                .args(["verify", "T1", "T3", "--no-timestamp", "--out"])
                .arg(&out)
                .status()
                .unwrap();
            assert_eq!(status.code(), Some(0));
            std::fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let doc: serde_json::Value = serde_json::from_slice(&runs[0]).unwrap();
    assert!(doc.get("timestamp_unix").is_none());
    assert_eq!(doc["result"]["reports"][0]["outcome"], "reproduced");

    let stamped = tmp.join("s.json");
    bin().args(["run", problems_dir().join("league.csv").to_str().unwrap(), "--rule", "u-draft", "--out"]).arg(&stamped).status().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&stamped).unwrap()).unwrap();
    assert!(doc["timestamp_unix"].as_u64().unwrap() > 0);
    assert_eq!(doc["result"]["allocation"][0]["name"], "team1");
    std::fs::remove_dir_all(&tmp).ok();
}
