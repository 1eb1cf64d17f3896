use std::collections::HashMap;
use std::path::Path;
use std::process::Command as Process;

use equigh_cli::{execute, parse_cli, parse_cli_with_env, Budgets, CliError, Command, GhMode, SpaceSource};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_equigh")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn argv(line: &str) -> Vec<&str> {
    std::iter::once("equigh").chain(line.split_whitespace()).collect()
}

#[test]
fn parses_gh_with_two_samples() {
    let c = parse_cli(argv("gh --exact --sample x=paper:z3_threepoints --sample y=paper:tripod --budget 12")).unwrap();
    assert_eq!(c.command, Command::Gh { mode: GhMode::Exact, quotients: false });
    assert_eq!(c.x, Some(SpaceSource::Sample("paper:z3_threepoints".into())));
    assert_eq!(c.y, Some(SpaceSource::Sample("paper:tripod".into())));
    assert_eq!(c.budgets.pair_orbits, 12);
    assert_eq!(c.budgets.nodes, Budgets::default().nodes);
}

#[test]
fn unprefixed_samples_fill_x_then_y() {
    let c = parse_cli(argv("gh --sample a --sample b")).unwrap();
    assert_eq!(c.x, Some(SpaceSource::Sample("a".into())));
    assert_eq!(c.y, Some(SpaceSource::Sample("b".into())));
    assert!(matches!(parse_cli(argv("sep --sample x=a --sample x=b")), Err(CliError::BadValue { .. })));
    assert!(matches!(parse_cli(argv("sep --space a.json --space-x b.json")), Err(CliError::BadValue { .. })));
}

#[test]
fn rejects_bad_values() {
    for line in [
        "gh --budget -1",
        "gh --budget 0",
        "gh --max-nodes many",
        "persist --p 4",
        "persist --p 2147483659",
        "gh --seed -3",
        "gh --restrict-y 0,a",
        "dI-lower --degrees 0,-1",
        "persist --r-max -2",
        "net --epsilon -1",
        "formulas --op zeta --params n",
    ] {
        match parse_cli(argv(line)) {
            Err(CliError::BadValue { .. }) => {}
            other => panic!("{line}: {other:?}"),
        }
    }
    assert!(matches!(parse_cli(argv("gh --frobnicate")), Err(CliError::UnknownFlag(_))));
    assert!(matches!(parse_cli(argv("persist --p 0 --sample a")).map(|c| c.p), Ok(Some(0))));
    assert!(matches!(parse_cli(argv("persist --p 7 --sample a")).map(|c| c.p), Ok(Some(7))));
}

#[test]
fn env_overrides_sit_between_flags_and_defaults() {
    let vars: HashMap<&str, &str> = [("EQUIGH_BUDGET_PAIR_ORBITS", "5"), ("EQUIGH_BUDGET_HOM_DEGREE", "9")].into();
    let env = |k: &str| vars.get(k).map(|v| v.to_string());
    let c = parse_cli_with_env(argv("gh --sample a --sample b"), &env).unwrap();
    assert_eq!((c.budgets.pair_orbits, c.budgets.hom_degree), (5, 9));
    let c = parse_cli_with_env(argv("gh --budget 7 --sample a --sample b"), &env).unwrap();
    assert_eq!(c.budgets.pair_orbits, 7);
    let c = parse_cli_with_env(argv("gh --sample a --sample b"), &|_| None).unwrap();
    assert_eq!(c.budgets, Budgets::default());
    let broken = |k: &str| (k == "EQUIGH_BUDGET_NODES").then(|| "-4".to_string());
    match parse_cli_with_env(argv("gh --sample a --sample b"), &broken) {
        Err(CliError::BadValue { flag, .. }) => assert_eq!(flag, "EQUIGH_BUDGET_NODES"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["gh", "--budget", "-1"]).0, 2);
    assert_eq!(run(&["gh", "--nope"]).0, 2);
    let (code, _, err) = run(&["gh", "--sample", "paper:z3_threepoints"]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(run(&["sep", "--sample", "no_such_kind"]).0, 3);
    assert_eq!(run(&["sep", "--sample", "paper:tripod"]).0, 0);
}

#[test]
fn input_counts_are_checked() {
    assert!(matches!(parse_cli(argv("gh --sample paper:z3_threepoints")), Err(CliError::MissingInput(_))));
    assert!(matches!(parse_cli(argv("sep")), Err(CliError::MissingInput(_))));
    assert!(matches!(parse_cli(argv("sep --sample a --sample b")), Err(CliError::BadValue { .. })));
    let c = parse_cli(argv("sep --sample paper:tripod")).unwrap();
    assert!(execute(&c).unwrap().pass);
}

#[test]
fn report_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, stdout, err) = run(&[
        "dI-lower",
        "--sample",
        "x=paper:sixpoint_X",
        "--sample",
        "y=paper:sixpoint_Y",
        "--restrict-y",
        "0,2",
        "--degrees",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout);
    let value: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&value).unwrap()), written);
    assert_eq!(value["certified_lower_bound"], Value::from("1/2"));
    assert_eq!(run(&["dI-lower", "--sample", "x=paper:sixpoint_X", "--sample", "y=paper:sixpoint_Y", "--restrict-y", "0,2", "--degrees", "0"]).1, stdout);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn csv_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "pair.csv", "0,1\n1,0\n");
    std::fs::write(format!("{good}.action.json"), r#"{"group":"Z2","action":[[0,1],[1,0]]}"#).unwrap();
    let (code, out, err) = run(&["sep", "--space", &good]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sep_G"], Value::from("1/1"));

    let asym = write(dir.path(), "asym.csv", "0,1\n2,0\n");
    let (code, _, err) = run(&["sep", "--space", &asym]);
    assert_eq!(code, 3);
    assert!(err.contains("dist"), "{err}");

    let junk = write(dir.path(), "junk.csv", "0,x\n1,0\n");
    let (code, _, err) = run(&["sep", "--space", &junk]);
    assert_eq!(code, 3);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn quotient_output_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.json");
    let (code, _, err) = run(&["quotient", "--sample", "paper:tripod", "--out", q.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (code, out, err) = run(&["sep", "--space", q.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], Value::Bool(true));
}

#[test]
fn verify_random_is_reproducible() {
    let a = run(&["verify", "--suite", "random", "--count", "20", "--seed", "11"]);
    let b = run(&["verify", "--suite", "random", "--count", "20", "--seed", "11"]);
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a.1, b.1);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["failures"], Value::from(0));
}
