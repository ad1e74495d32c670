use std::process::{Command, Output};

use serde_json::{json, Value};

fn fusion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusion")).args(args).output().unwrap()
}

const TWISTED: [&str; 6] = ["--central-charge", "-2", "--h1", "-1/8", "--singular-level", "2"];

fn json_of(cmd: &str, extra: &[&str]) -> Value {
    let mut args = vec![cmd];
    args.extend(TWISTED);
    args.extend(extra);
    let out = fusion(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn singular_vector_at_level_two() {
    let doc = json_of("singular", &[]);
    let level2 = &doc["output"]["levels"][1];
    assert_eq!(level2["determinant"], "0");
    assert_eq!(level2["gram"], json!([["-3/2", "-3/4"], ["-3/4", "-3/8"]]));
    assert_eq!(level2["singular_vectors"], json!([{"L(-1)L(-1)": "1", "L(-2)": "-1/2"}]));
}

#[test]
fn fuse_at_depth_zero() {
    let doc = json_of("fuse", &["--depth", "0"]);
    let f = &doc["output"]["fusion"];
    assert_eq!(f["dimension"], 2);
    assert_eq!(f["jordan"], json!([{"eigenvalue": "0", "block_sizes": [2]}]));
    assert_eq!(f["l0_matrix"], json!([["-1/4", "-1/16"], ["1", "1/4"]]));
}

#[test]
fn dual_at_w_two() {
    let doc = json_of("dual", &["--depth", "0", "--w", "2"]);
    assert_eq!(doc["output"]["dual"]["l0_matrix"], json!([["-1/4", "2"], ["-1/32", "1/4"]]));
}

#[test]
fn crosscheck_agrees_and_fuse_can_check_dual() {
    let doc = json_of("crosscheck", &["--depth", "1"]);
    assert_eq!(doc["output"]["kind"], "crosscheck");
    let doc = json_of("fuse", &["--depth", "0", "--check-dual"]);
    assert!(doc["output"]["crosscheck"].is_object());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let mut args = vec!["fuse"];
    args.extend(TWISTED);
    args.extend(["--depth", "1"]);
    let a = fusion(&args);
    let b = fusion(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.ends_with(b"\n"));
}

#[test]
fn json_round_trips_through_the_library() {
    let mut args = vec!["fuse"];
    args.extend(TWISTED);
    let out = fusion(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = fusion_core::report::parse(&text).unwrap();
    assert_eq!(fusion_core::report::emit(&doc, fusion_core::report::Format::Json), text);
}

#[test]
fn text_format_prints_matrix_rows() {
    let mut args = vec!["fuse"];
    args.extend(TWISTED);
    args.extend(["--format", "text"]);
    let out = fusion(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-1/16"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(fusion(&["fuse", "--h1", "1"]).status.code(), Some(1));
    assert_eq!(fusion(&["bogus"]).status.code(), Some(1));
    let mut args = vec!["fuse"];
    args.extend(TWISTED);
    args.extend(["--depth", "2", "--lmax", "3"]);
    let out = fusion(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stabilize"));
}

#[test]
fn heisenberg_fusion() {
    let out = fusion(&["fuse", "--algebra", "heisenberg", "--lambda1", "1", "--lambda2", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["output"]["fusion"]["l0_matrix"], json!([["9/2"]]));
}
