use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use pencillab::json::{OneFormJson, PolyJson};
use pencillab::melnikov::CertificateJson;
use pencillab::random;
use serde_json::{json, Value};

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pencillab"));
    cmd.args(args).env_remove("PENCILLAB_MAX_D");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args, &[]);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_canonical_three() {
    let r = report(&["analyze", "--canonical-d", "3"]);
    assert_eq!(r["counts"], json!({"a1": 2, "a2": 6, "a3": 1}));
    assert_eq!(r["closed_form_counts"], r["counts"]);
    assert_eq!(r["mu"], 9);
    assert_eq!(r["mu_matches_combinatorics"], true);
}

#[test]
fn orbit_from_face() {
    let r = report(&["orbit", "--canonical-d", "2", "--start", "face:0"]);
    let o = &r["orbits"][0];
    assert_eq!(o["rank_mod_radical"], 2);
    assert_eq!(o["theorem_2_3"], true);
    let bad = run(&["orbit", "--canonical-d", "2", "--start", "face:9"], &[]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn melnikov_random_form_is_obstructed() {
    let dir = tempfile::tempdir().unwrap();
    let w = random::form(&mut random::rng(11), 3);
    let input = json!({"canonical_d": 3, "k": 1, "forms": {"1": OneFormJson::from(&w)}});
    let path = write(dir.path(), "def.json", &input);
    let r = report(&["melnikov", "--input", &path]);
    assert_eq!(r["status"], "obstructed");
    assert_eq!(r["order"], 1);
    let back: CertificateJson = serde_json::from_value(r).unwrap();
    assert_eq!(back.order, 1);
}

#[test]
fn melnikov_log_form_is_certified() {
    let dir = tempfile::tempdir().unwrap();
    let arr = pencillab::arrangement::canonical_arrangement(2).unwrap();
    let gens = pencillab::melnikov::log_generators(&arr);
    let lam: Vec<_> = [2, -1, -1].iter().map(|&n| pencillab::q(n, 1)).collect();
    let w = pencillab::exact_algebra::combination::combine_forms(&lam, &gens);
    let input = json!({"canonical_d": 2, "k": 1, "forms": {"1": OneFormJson::from(&w)}});
    let path = write(dir.path(), "def.json", &input);
    let r = report(&["melnikov", "--input", &path]);
    assert_eq!(r["status"], "log_certificate");
    assert_eq!(r["order"], 2);
    assert_eq!(r["lambda"], json!(["2", "-1", "-1"]));
    assert_eq!(r["grouping"], json!([[0], [1, 2]]));
}

#[test]
fn exit_codes() {
    let capped = run(&["analyze", "--canonical-d", "3"], &[("PENCILLAB_MAX_D", "2")]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("PENCILLAB_MAX_D"));
    assert_eq!(run(&["analyze", "--canonical-d", "7"], &[]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--canonical-d", "2", "--max-d", "1"], &[]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("bad.json");
    std::fs::write(&garbage, "{not json").unwrap();
    let out = run(&["relexact", "--input", garbage.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));

    let parallel = json!({"arrangement": {"lines": [["1", "0", "0"], ["1", "0", "-1"], ["0", "1", "0"]]}});
    let path = write(dir.path(), "par.json", &parallel);
    assert_eq!(run(&["analyze", "--input", &path], &[]).status.code(), Some(2));

    // A factor that does not divide f.
    let f = pencillab::RPoly::from_ints(&[(1, 2, 1), (1, 1, 2), (-1, 1, 1)]);
    let input = json!({
        "f": PolyJson::from(&f),
        "factors": [PolyJson::from(&pencillab::RPoly::from_ints(&[(1, 1, 0), (1, 0, 0)]))],
    });
    let path = write(dir.path(), "kernel.json", &input);
    assert_eq!(run(&["kernel", "--input", &path], &[]).status.code(), Some(4));
}

#[test]
fn relexact_and_connection() {
    let dir = tempfile::tempdir().unwrap();
    let f = pencillab::RPoly::from_ints(&[(1, 3, 0), (1, 1, 2), (-1, 1, 0)]);
    let w1 = pencillab::ROneForm::new(
        pencillab::RPoly::from_ints(&[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]),
        pencillab::RPoly::zero(),
    );
    let input = json!({"f": PolyJson::from(&f), "omega": OneFormJson::from(&w1)});
    let path = write(dir.path(), "w.json", &input);
    let r = report(&["relexact", "--input", &path]);
    assert_eq!(r, json!({"member": false}));
    let r = report(&["connection", "--input", &path]);
    assert_eq!(r["power_annihilation"], json!({"n": 2, "holds": true}));
    let r = report(&["kernel", "--canonical-d", "2"]);
    assert_eq!(r["rank_in_h"], 2);
}

#[test]
fn bounds_report() {
    let r = report(&["bounds", "--d", "2", "--partition", "1,2"]);
    assert_eq!(r["results"][0]["bounds"]["codim_minus_one"], 2);
    assert_eq!(r["results"][0]["pk_audit"]["quoted_matches"], true);
    let all = report(&["bounds", "--d", "3"]);
    assert_eq!(all["results"].as_array().unwrap().len(), 5);
}

#[test]
fn reports_are_byte_identical() {
    let a = run(&["dynkin", "--canonical-d", "3"], &[]);
    let b = run(&["dynkin", "--canonical-d", "3"], &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let s1 = run(&["selftest", "--seed", "5", "--cases", "3"], &[]);
    let s2 = run(&["selftest", "--seed", "5", "--cases", "3"], &[]);
    assert!(s1.status.success(), "{}", String::from_utf8_lossy(&s1.stderr));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn batch_matches_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = json!({"jobs": [
        {"command": "analyze", "canonical_d": 2},
        {"command": "orbit", "canonical_d": 3, "start": "vertex:1"},
        {"command": "bounds", "d": 3, "partition": [2, 2]},
        {"command": "analyze", "canonical_d": 9},
        {"command": "dynkin", "canonical_d": 2},
    ]});
    let path = write(dir.path(), "jobs.json", &jobs);
    let one = run(&["batch", "--input", &path, "--jobs", "1"], &[]);
    let four = run(&["batch", "--input", &path, "--jobs", "4"], &[]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&four.stdout).unwrap();
    assert_eq!(r["results"][0]["report"], report(&["analyze", "--canonical-d", "2"]));
    assert_eq!(r["results"][1]["report"], report(&["orbit", "--canonical-d", "3", "--start", "vertex:1"]));
    assert_eq!(r["results"][3]["exit_code"], 2);
    assert_eq!(r["results"][4]["exit_code"], 0);
    let _: BTreeMap<String, Value> = serde_json::from_value(r).unwrap();
}
