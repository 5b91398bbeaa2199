use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricmld"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cone(name: &str) -> String {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "data",
        "cones",
        name,
    ]
    .iter()
    .collect();
    path.to_str().unwrap().to_owned()
}

/// Runs a command expected to succeed and parses each stdout line as JSON.
fn json_lines(args: &[&str]) -> Vec<Value> {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn json(args: &[&str]) -> Value {
    let mut lines = json_lines(args);
    assert_eq!(lines.len(), 1);
    lines.remove(0)
}

/// Runs a command expected to fail; returns its exit status and stderr.
fn failure(args: &[&str]) -> (i32, String) {
    let out = run(args);
    assert!(out.stdout.is_empty(), "failed commands print no payload");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn mld_of_quotients() {
    let v = json(&["mld", "--quotient", "5:1,2"]);
    assert_eq!(v["mld_log"], "3/5");
    assert_eq!(v["mld_disc"], "-2/5");
    assert_eq!(v["class"], "klt-not-canonical");
    assert_eq!(v["index"], 5);
    assert_eq!(v["smooth"], false);

    let v = json(&["mld", "--quotient", "2:1,1"]);
    assert_eq!(v["mld_log"], "1");
    assert_eq!(v["mld_disc"], "0");
    assert_eq!(v["class"], "canonical-not-terminal");
    assert_eq!(v["index"], 1);

    let v = json(&["mld", "--quotient", "6:2,3"]);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["mld_log"], Value::Null);

    let v = json(&["mld", "--quotient", "4:1,2,0"]);
    assert_eq!(v["normalized"], "2:1,1");
    assert_eq!(v["trace"]["dropped"], serde_json::json!([3]));
    assert_eq!(v["mld_log"], "1");
}

#[test]
fn mld_of_cones() {
    let v = json(&["mld", "--cone", &cone("klein.cone")]);
    assert_eq!(v["mld_log"], "1");
    assert_eq!(
        v["witness"]["point"],
        serde_json::json!(["0", "1/2", "1/2"])
    );
    let v = json(&["mld", "--cone", &cone("smooth.cone")]);
    assert_eq!(v["smooth"], true);
}

#[test]
fn mld_usage_errors() {
    assert_eq!(failure(&["mld"]).0, 2);
    assert_eq!(
        failure(&["mld", "--quotient", "5:1,2", "--cone", &cone("half.cone")]).0,
        2
    );
    assert_eq!(failure(&["mld", "--quotient", "5:1.5,2"]).0, 2);
    assert_eq!(failure(&["mld", "--quotient", "5: 1,2"]).0, 2);
    assert_eq!(failure(&["mld", "--cone", "/nonexistent.cone"]).0, 2);
    // weights 2,4 generate only a subgroup of Z/6
    assert_eq!(failure(&["mld", "--quotient", "6:2,4"]).0, 1);
}

#[test]
fn reduce_cones() {
    let v = json(&["reduce", "--cone", &cone("klein.cone")]);
    assert_eq!(v["quotient"], "2:1,1");
    assert_eq!(v["mld_log"], "1");
    assert_eq!(v["verified"], true);
    let v = json(&["reduce", "--cone", &cone("cyclic-3-1-1.cone")]);
    assert_eq!(v["quotient"], "3:1,1");
    let (code, msg) = failure(&["reduce", "--cone", &cone("smooth.cone")]);
    assert_eq!(code, 1);
    assert!(
        msg.contains("smooth — minimal discrepancy undefined"),
        "{msg}"
    );
}

#[test]
fn lift_quotients() {
    let v = json(&["lift", "--quotient", "3:1,1", "--times", "1"]);
    assert_eq!(v["lifted"], "3:1,1,1,2");
    assert_eq!(v["mld_before"], "2/3");
    assert_eq!(v["mld_after"], "5/3");
    let v = json(&["lift", "--quotient", "3:1,1", "--times", "2"]);
    assert_eq!(v["dim"], 6);
    assert_eq!(v["mld_after"], "8/3");
    assert_eq!(
        failure(&["lift", "--quotient", "6:2,3", "--times", "1"]).0,
        1
    );
    assert_eq!(
        failure(&["lift", "--quotient", "3:1,1", "--times", "0"]).0,
        2
    );
}

#[test]
fn sequences() {
    let lines = json_lines(&[
        "sequence", "--base", "3:1,1", "--l", "0", "--n", "3", "--orders", "4,7,13",
    ]);
    let mlds: Vec<&Value> = lines[..3].iter().map(|t| &t["verified_mld"]).collect();
    assert_eq!(mlds, ["3/4", "5/7", "9/13"]);
    assert_eq!(lines[3]["limit"], "2/3");
    assert_eq!(lines[3]["from_above"], true);

    let (code, msg) = failure(&[
        "sequence", "--base", "3:1,1", "--l", "0", "--n", "2", "--orders", "4",
    ]);
    assert_eq!(code, 2);
    assert!(msg.contains("n = 2 < m + r + 2l"), "{msg}");
    let (code, msg) = failure(&[
        "sequence", "--base", "3:1,1", "--l", "0", "--n", "3", "--orders", "5",
    ]);
    assert_eq!(code, 2);
    assert!(msg.contains("5 is not 1 mod 3"), "{msg}");

    let lines = json_lines(&[
        "sequence", "--base", "2:1,1", "--l", "1", "--n", "5", "--orders", "3,5",
    ]);
    assert_eq!(lines[2]["constant"], true);
}

#[test]
fn enumerate_and_report() {
    let out = run(&["enumerate", "--dim", "2", "--max-order", "3"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "dim,N,weights,mld_num,mld_den,class,index\n\
         2,2,\"1,1\",1,1,canonical-not-terminal,1\n\
         2,3,\"1,1\",2,3,klt-not-canonical,3\n\
         2,3,\"1,2\",1,1,canonical-not-terminal,1\n"
    );

    let dir = tempfile::tempdir().unwrap();
    let s2 = dir.path().join("s2.csv");
    let summary = json(&[
        "enumerate",
        "--dim",
        "2",
        "--max-order",
        "3",
        "--out",
        s2.to_str().unwrap(),
    ]);
    assert_eq!(summary["types"], 3);
    let values: Vec<&Value> = summary["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| &e["mld_log"])
        .collect();
    assert_eq!(values, ["2/3", "1"]);

    let empty = json(&[
        "enumerate",
        "--dim",
        "1",
        "--max-order",
        "50",
        "--out",
        s2.to_str().unwrap(),
    ]);
    assert_eq!(empty["spectrum"], serde_json::json!([]));

    let v = json(&["report", "--dim", "2", "--max-order", "300", "--lower", ""]);
    assert_eq!(v["candidates"][0]["value"], "0");
    assert_eq!(v["candidates"][0]["below"], 0);

    let s2j = dir.path().join("s2.json");
    json(&[
        "enumerate",
        "--dim",
        "2",
        "--max-order",
        "12",
        "--format",
        "json",
        "--out",
        s2j.to_str().unwrap(),
    ]);
    let v = json(&[
        "report",
        "--dim",
        "3",
        "--max-order",
        "12",
        "--lower",
        s2j.to_str().unwrap(),
        "--delta",
        "1/10",
    ]);
    assert_eq!(v["lower_dims"], serde_json::json!([2]));
    assert_eq!(v["delta"], "1/10");
    assert_eq!(
        failure(&[
            "report",
            "--dim",
            "3",
            "--max-order",
            "5",
            "--lower",
            "",
            "--delta",
            "0.1"
        ])
        .0,
        2
    );
}
