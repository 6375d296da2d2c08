//! End-to-end checks of the binary: exit codes and output shape.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semiarcs"))
}

#[test]
fn verify_exit_codes() {
    // a valid 2-semiarc: exit 0
    let out = bin()
        .args(["verify", "--q", "3", "--t", "2", "--points", "1:0:0,0:1:0,0:0:1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["is_semiarc"], true);

    // not a 2-semiarc: exit 3
    let out = bin()
        .args(["verify", "--q", "3", "--t", "2", "--points", "1:0:0,0:1:0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // malformed input: exit 2
    let out = bin()
        .args(["verify", "--q", "3", "--t", "2", "--points", "1:0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // unwritable output path: exit 4
    let out = bin()
        .args(["bounds", "--q", "5", "--out", "/nonexistent-dir/x.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn classify_json_document() {
    let out = bin()
        .args(["classify", "--q", "4", "--t", "2", "--group", "pgammal"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["q"], 4);
    assert_eq!(doc["records"].as_array().unwrap().len(), 3);
    // infeasible explicit configuration: exit 2
    let out = bin()
        .args(["classify", "--q", "4", "--t", "7", "--sizes", ""])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plane_dump_and_distributions() {
    let out = bin().args(["plane", "--q", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["n"], 7);
    assert_eq!(doc["points"].as_array().unwrap().len(), 7);

    let out = bin()
        .args(["distributions", "--q", "7", "--s", "14", "--t", "2", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 10); // header + nine rows
}
