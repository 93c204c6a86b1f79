use std::process::{Command, Output};

fn pdsing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdsing"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_json_is_deterministic() {
    let args = ["analyze", "2 - 3/5 - 4/5 - 1/2", "--p", "5", "--json"];
    let a = pdsing(&args);
    let b = pdsing(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["multiplicity"], 3);
    assert_eq!(v["failing_primes"], serde_json::json!([2, 5]));
    assert_eq!(v["f_rationality"][0]["witness"]["n"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(
        pdsing(&[
            "analyze",
            "2 - 1/3 - 1/3 - 1/3",
            "--p",
            "3",
            "--expect",
            "f-rational"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        pdsing(&[
            "analyze",
            "2 - 3/5 - 4/5 - 1/2",
            "--p",
            "5",
            "--expect",
            "f-rational"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        pdsing(&[
            "analyze",
            "2 - 1/2 - 1/2 - 1/2 - 1/3",
            "--expect",
            "rational"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(pdsing(&["analyze", "2 - 1/0"]).status.code(), Some(2));
    assert_eq!(
        pdsing(&["analyze", "2 - 1/2", "--p", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pdsing(&["analyze", "2 - 3/5 - 4/5 - 1/2", "--verify"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn parse_errors_carry_positions() {
    let o = pdsing(&["analyze", "2 - 1/2 3", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"], "parse_error");
    assert!(v["message"].as_str().unwrap().contains("byte 8"));
}

#[test]
fn render_dot_lists_every_vertex() {
    let o = pdsing(&["render", "2 - 1/2 - 2/3 - 7/9", "--format", "dot"]);
    let text = stdout(&o);
    assert!(text.starts_with("graph dual {"));
    assert_eq!(text.matches(" -- ").count(), 7);
    assert!(text.contains("E0 [label=\"-2\", xlabel=\"6\"]"));
    assert!(text.contains("E3_4 [label=\"-3\", xlabel=\"1\"]"));
}

#[test]
fn hj_and_failing_primes() {
    let o = pdsing(&["hj", "7/3"]);
    assert!(stdout(&o).starts_with("7/3 = [[3,2,2]]"));
    let o = pdsing(&["failing-primes", "2 - 1/3 - 1/3 - 1/3"]);
    assert_eq!(stdout(&o), "{}\n");
    let o = pdsing(&["failing-primes", "4 - 1/2 - 1/2 - 1/2 - 1/2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failing_primes"], serde_json::json!([]));
}

#[test]
fn small_classification_passes() {
    let o = pdsing(&[
        "classify",
        "--multiplicity",
        "4",
        "--max-s",
        "2",
        "--max-points",
        "3",
        "--max-denominator",
        "6",
        "--max-param",
        "3",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outside_table"], serde_json::json!([]));
}
