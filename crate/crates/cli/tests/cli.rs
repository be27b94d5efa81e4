use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use prym_core::enumerate::StageCounts;
use prym_core::fixtures::{covers, graphs};
use prym_core::graph::json::{graph_from_json, graph_to_json};
use prym_core::morphism::{DoubleCover, Tower};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prym")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read(rel: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(fixtures().join(rel)).unwrap()).unwrap()
}

#[test]
fn fixture_files_match_the_library() {
    for (name, g) in graphs() {
        let v = read(&format!("graphs/{name}.json"));
        let parsed = graph_from_json(&v).unwrap();
        assert_eq!(parsed, g, "{name}");
        assert_eq!(graph_from_json(&graph_to_json(&parsed)).unwrap(), parsed);
    }
    for (name, c) in covers() {
        let v = read(&format!("covers/{name}.json"));
        let parsed = DoubleCover::from_json(&v).unwrap();
        assert_eq!(parsed, c, "{name}");
        assert_eq!(DoubleCover::from_json(&parsed.to_json()).unwrap(), parsed);
    }
    for name in ["genus2", "genus3", "genus3-fs2"] {
        let t = Tower::from_json(&read(&format!("towers/{name}.json"))).unwrap();
        assert_eq!(Tower::from_json(&t.to_json()).unwrap(), t);
    }
}

#[test]
fn dumbbell_cover_has_torus_rank_one() {
    let out = run(&["moments", "prym", fixtures().join("covers/dumbbell.json").to_str().unwrap(), "--report", "json", "--numeric"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["torus_rank"], 1);
    assert_eq!(v["w0"], "4*f + g1 + g2");
    assert!(v["i2"]["numerator"].is_array());
    assert!(v["i2"]["radicand"].is_string());
    assert_eq!(v["i2"]["value"]["scaled_numerator"], "3");
    assert_eq!(v["i2"]["value"]["radicand"], "6");
}

#[test]
fn jacobian_moments_at_a_point() {
    let f = fixtures().join("graphs/theta.json");
    let out = run(&["moments", "jac", f.to_str().unwrap(), "--numeric", "x=1,y=1,z=1", "--report", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["w0_value"]["exact"], "3");
    let d = v["i2"]["value"]["decimal"].as_f64().unwrap();
    assert!((d - 5.0 / 18.0 * 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn enumerate_text_round_trips_counts() {
    let out = run(&["enumerate", "trigonal", "--genus", "2", "--count-only"]);
    assert!(out.status.success());
    let c = StageCounts::from_text(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!((c.trees, c.typed, c.monodromy, c.generic, c.covers), (4, 32, 140, 121, 363));
    assert_eq!(StageCounts::from_text(&c.to_text()).unwrap(), c);
}

#[test]
fn enumerate_lists_trees() {
    let out = run(&["enumerate", "trees", "--genus", "1", "--report", "json"]);
    let v = json_of(&out);
    assert_eq!(v["counts"]["trees"], 2);
    assert_eq!(v["items"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("prym-verify-a-{}.json", std::process::id()));
    let out = run(&["verify", "--genus", "2", "--report", "json", "--jobs", "2", "--out", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let first = out.stdout.clone();
    let again = run(&["verify", "--genus", "2", "--report", "json", "--jobs", "1"]);
    assert_eq!(first, again.stdout);
    let v = json_of(&out);
    assert_eq!(v["p_coefficient"], 2);
    assert_eq!(v["counts"]["covers"], 363);
    let saved: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    assert!(saved["runs"][0]["seconds"].is_number());
    fs::remove_file(a).unwrap();
}

#[test]
fn trigonal_run_emits_pi() {
    let f = fixtures().join("towers/genus3-fs2.json");
    let out = run(&["trigonal", "run", f.to_str().unwrap(), "--emit-pi", "--report", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["genus_pi"], 2);
    assert_eq!(v["q_case"], "one FS2 set");
    assert!(v["pi"]["graph"]["edges"].is_array());
}

#[test]
fn matroid_report() {
    let f = fixtures().join("covers/genus3-fs2.json");
    let v = json_of(&run(&["matroid", f.to_str().unwrap(), "--report", "json"]));
    assert_eq!(v["torus_rank"], 2);
    assert_eq!(v["fs_sets"], serde_json::json!([["e", "f"]]));
}

#[test]
fn oracle_on_a_gram_file() {
    let f = fixtures().join("grams/segment4.json");
    let out = run(&["oracle", "mc", "--gram", f.to_str().unwrap(), "--samples", "100000", "--seed", "3", "--report", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["det"]["exact"], "4");
    let (i2, se) = (v["i2_estimate"].as_f64().unwrap(), v["std_error"].as_f64().unwrap());
    assert!((i2 - 2.0 / 3.0).abs() < 4.0 * se);
}

#[test]
fn oracle_checks_a_cover() {
    let f = fixtures().join("covers/k4-odd.json");
    let out = run(&["oracle", "mc", "--cover", f.to_str().unwrap(), "--samples", "200000", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["agree"], true);
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(run(&["verify", "--genus", "4", "--unknown"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--genus", "7"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "prym", "/nonexistent.json"]).status.code(), Some(2));
    let f = fixtures().join("invalid/sign-zero.json");
    let out = run(&["moments", "prym", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges[0]"));
}
