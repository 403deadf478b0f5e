//! Command-level tests: exit codes, golden structured output, determinism.
//!
//! Set `IRRQ_UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::Command as Process;

use irrq::cli::{run, Command, OutputFormat, RunConfig};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new("tests/data").join(name)
}

fn json_cfg(command: Command) -> RunConfig {
    RunConfig { format: OutputFormat::Json, ..RunConfig::new(command) }
}

fn check(names: &[&str]) -> RunConfig {
    json_cfg(Command::Check { paths: names.iter().map(|n| data(n)).collect() })
}

fn golden(name: &str, actual: &str) {
    let path = Path::new("tests/golden").join(name);
    if std::env::var_os("IRRQ_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(run(&check(&["exclusion.json"])).exit_code, 0);
    assert_eq!(run(&check(&["twisted.json"])).exit_code, 0);
    assert_eq!(run(&check(&["empty2.json"])).exit_code, 1);
    assert_eq!(run(&check(&["isolated_pair4.json"])).exit_code, 1);
    assert_eq!(run(&check(&["malformed.json"])).exit_code, 2);
    assert_eq!(run(&check(&["out_of_range.json"])).exit_code, 2);
    assert_eq!(run(&check(&["does_not_exist.json"])).exit_code, 2);
    assert_eq!(run(&check(&["batch.json"])).exit_code, 2);
    let starved = RunConfig { work_limit: 0, ..check(&["degree3_n5.json"]) };
    let out = run(&starved);
    assert_eq!(out.exit_code, 3);
    assert_eq!(parse(&out.stdout)[0]["status"], "resources");
}

#[test]
fn check_reports() {
    let out = run(&check(&["exclusion.json"]));
    let v = parse(&out.stdout);
    assert_eq!(v[0]["verdict"]["irreducibly_quantified"], true);

    let v = parse(&run(&check(&["empty2.json"])).stdout);
    assert_eq!(v[0]["verdict"]["exchangeable"], false);
    assert_eq!(v[0]["verdict"]["exchangeable_witness"], serde_json::json!([0, 1]));

    let text = run(&RunConfig::new(Command::Check { paths: vec![data("exclusion.json")] })).stdout;
    assert!(text.contains("irreducibly_quantified: true"));
}

#[test]
fn batch_preserves_order_and_isolates_errors() {
    let out = run(&check(&["batch.json"]));
    let v = parse(&out.stdout);
    let statuses: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["ok", "negative", "input_error", "ok"]);
    assert!(out.stderr.contains("batch.json#2"));
    for jobs in [1, 2, 4] {
        assert_eq!(run(&RunConfig { jobs, ..check(&["batch.json"]) }).stdout, out.stdout);
    }
}

#[test]
fn golden_check_outputs() {
    for name in [
        "exclusion",
        "twisted",
        "empty2",
        "collapse",
        "collapse_swap",
        "swaps3",
        "isolated_pair4",
        "degree3_n5",
        "batch",
    ] {
        let out = run(&check(&[&format!("{name}.json")]));
        golden(&format!("{name}.check.json"), &out.stdout);
    }
}

#[test]
fn conserved_command() {
    let out = run(&json_cfg(Command::Conserved { paths: vec![data("twisted.json")] }));
    assert_eq!(out.exit_code, 0);
    golden("twisted.conserved.json", &out.stdout);
    let v = parse(&out.stdout);
    assert_eq!(v[0]["conserved"]["normalized"], serde_json::json!([[0, 1, 2]]));

    let cfg = RunConfig { base_point: 5, ..json_cfg(Command::Conserved { paths: vec![data("twisted.json")] }) };
    assert_eq!(run(&cfg).exit_code, 2);
}

#[test]
fn oracle_command() {
    let out = run(&RunConfig::new(Command::Oracle { paths: vec![data("exclusion.json")] }));
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.contains("verified-up-to 3"));

    let cfg = RunConfig { max_sites: 2, ..json_cfg(Command::Oracle { paths: vec![data("empty2.json")] }) };
    let out = run(&cfg);
    assert_eq!(out.exit_code, 1);
    golden("empty2.oracle.json", &out.stdout);

    let cfg = RunConfig { degree_cap: 10, ..RunConfig::new(Command::Oracle { paths: vec![data("twisted.json")] }) };
    assert_eq!(run(&cfg).exit_code, 3);

    // the swap spot-check is seeded: same seed, same output
    let a = RunConfig { seed: 9, ..json_cfg(Command::Oracle { paths: vec![data("twisted.json")] }) };
    assert_eq!(run(&a).stdout, run(&a).stdout);
}

#[test]
fn classify_command() {
    let cfg = json_cfg(Command::Classify { paths: vec![data("exclusion.json"), data("exclusion_relabeled.json")] });
    let v = parse(&run(&cfg).stdout);
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    assert_eq!(v["classes"][0].as_array().unwrap().len(), 2);

    let cfg = json_cfg(Command::Classify { paths: vec![data("exclusion.json"), data("swaps3.json")] });
    let v = parse(&run(&cfg).stdout);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);

    let out = run(&json_cfg(Command::Classify { paths: vec![] }));
    assert_eq!(out.exit_code, 0);
    assert_eq!(parse(&out.stdout), serde_json::json!({"classes": [], "errors": []}));

    // verdicts stay per interaction inside a class
    let cfg = json_cfg(Command::Classify {
        paths: vec![data("twisted.json"), data("swaps3.json"), data("batch.json"), data("malformed.json")],
    });
    let out = run(&cfg);
    assert_eq!(out.exit_code, 2);
    golden("mixed.classify.json", &out.stdout);
}

#[test]
fn maximal_command() {
    let out = run(&json_cfg(Command::Maximal { path: data("basis_01.json") }));
    assert_eq!(out.exit_code, 0);
    assert_eq!(parse(&out.stdout), serde_json::json!({"states": 2, "edges": [[[0, 1], [1, 0]]]}));

    let out = run(&json_cfg(Command::Maximal { path: data("basis_012.json") }));
    golden("basis_012.maximal.json", &out.stdout);
    let i = irrq::Interaction::from_json(&out.stdout).unwrap();
    for (a, b) in [((0, 2), (2, 0)), ((0, 2), (1, 1)), ((2, 0), (1, 1)), ((0, 1), (1, 0)), ((1, 2), (2, 1))] {
        assert!(i.has_edge(irrq::StatePair(a.0, a.1), irrq::StatePair(b.0, b.1)));
    }
    assert_eq!(i.edge_count(), 5);

    let out = run(&json_cfg(Command::Maximal { path: data("basis_indicators.json") }));
    let i = irrq::Interaction::from_json(&out.stdout).unwrap();
    assert_eq!(i.edge_count(), 3);

    assert_eq!(run(&json_cfg(Command::Maximal { path: data("basis_short.json") })).exit_code, 2);
}

#[test]
fn binary_exit_codes_and_flags() {
    let bin = env!("CARGO_BIN_EXE_irrq");
    let status = |args: &[&str]| Process::new(bin).args(args).status().unwrap().code().unwrap();
    assert_eq!(status(&["check", "tests/data/exclusion.json"]), 0);
    assert_eq!(status(&["check", "tests/data/empty2.json"]), 1);
    assert_eq!(status(&["check", "tests/data/malformed.json"]), 2);
    assert_eq!(status(&["check", "--work-limit", "0", "tests/data/degree3_n5.json"]), 3);
    assert_eq!(status(&["oracle", "--max-sites", "2", "tests/data/empty2.json"]), 1);

    let out = Process::new(bin)
        .args(["check", "--format", "json", "--jobs", "2", "--base-point", "1", "tests/data/twisted.json"])
        .output()
        .unwrap();
    let v = parse(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(v[0]["verdict"]["conserved"]["base_point"], 1);
}
