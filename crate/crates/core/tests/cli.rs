use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn sixsphere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sixsphere")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn elliptic_form() -> Value {
    let term = |idx: [u8; 3], re: &str| json!({ "idx": idx, "re": re, "im": "0" });
    json!({
        "dim": 6,
        "degree": 3,
        "terms": [term([1, 3, 6], "1"), term([1, 4, 5], "1"), term([2, 3, 5], "1"), term([2, 4, 6], "-1")],
    })
}

#[test]
fn verify_structure_and_mutations() {
    let o = sixsphere(&["verify-structure"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["pass"], true);
    assert_eq!(r["command"], "verify-structure");
    let m = sixsphere(&["verify-structure", "--mutate", "dtheta-eps"]);
    assert_eq!(code(&m), 1);
    assert_eq!(report(&m)["pass"], false);
    assert_eq!(code(&sixsphere(&["verify-structure", "--mutate", "no-such-mutation"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&sixsphere(&["sphere-suite", "--samples", "3"])), 2);
    assert_eq!(code(&sixsphere(&["sphere-suite", "--mode", "fast"])), 2);
    assert_eq!(code(&sixsphere(&["sphere-suite", "--tol", "1e-9"])), 2);
    assert_eq!(code(&sixsphere(&["classify-3form"])), 2);
    assert_eq!(code(&sixsphere(&["chern", "--family", "nonsense"])), 2);
    assert_eq!(code(&sixsphere(&["verify-structure", "--mode", "float"])), 2);
    assert_eq!(code(&sixsphere(&["no-such-command"])), 2);
}

#[test]
fn classify_exact_and_float() {
    let dir = tempfile::tempdir().unwrap();
    let exact = write_json(dir.path(), "elliptic.json", &elliptic_form());
    let o = sixsphere(&["classify-3form", "--input", &exact]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["tag"], "elliptic");
    assert_eq!(r["lambda"], "-4");
    assert_eq!(r["J_exact"], true);

    let mut float_doc = elliptic_form();
    float_doc["mode"] = json!("float");
    for t in float_doc["terms"].as_array_mut().unwrap() {
        let re: f64 = t["re"].as_str().unwrap().parse().unwrap();
        t["re"] = json!(re * 1.5);
        t["im"] = json!(0.0);
    }
    let float = write_json(dir.path(), "float.json", &float_doc);
    let o = sixsphere(&["classify-3form", "--input", &float, "--mode", "float"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(&o)["tag"], "elliptic");
    // float data read in exact mode
    assert_eq!(code(&sixsphere(&["classify-3form", "--input", &float])), 2);

    let split = json!({ "form": { "dim": 6, "degree": 3, "terms": [
        { "idx": [1, 2, 3], "re": "1" }, { "idx": [4, 5, 6], "re": "1" }
    ] } });
    let path = write_json(dir.path(), "split.json", &split);
    assert_eq!(report(&sixsphere(&["classify-3form", "--input", &path]))["tag"], "split");
    let broken = write_json(dir.path(), "broken.json", &json!({ "dim": 6 }));
    assert_eq!(code(&sixsphere(&["classify-3form", "--input", &broken])), 2);
}

#[test]
fn chern_families_and_inputs() {
    let o = sixsphere(&["chern"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["residual"], json!({ "re": "-1", "im": "0" }));
    assert_eq!(r["orientation"], "+1");

    let r = report(&sixsphere(&["chern", "--family", "remark1"]));
    assert_eq!(r["residual"], json!({ "re": "0", "im": "0" }));
    assert_eq!(r["H_signature"], json!([1, 2]));

    let dir = tempfile::tempdir().unwrap();
    let point = json!(["0", "0", "3/5", "0", "0", "4/5", "0"]);
    let at_point = write_json(dir.path(), "family.json", &json!({ "point": point, "family": "minus-standard" }));
    let r = report(&sixsphere(&["chern", "--input", &at_point]));
    assert_eq!(r["orientation"], "-1");
    assert_eq!(r["pass"], true);

    let mut bad = vec![vec!["0"; 7]; 7];
    bad[1][2] = "2";
    bad[2][1] = "-1";
    let bad_j = write_json(dir.path(), "bad.json", &json!({ "point": point, "J": bad }));
    assert_eq!(code(&sixsphere(&["chern", "--input", &bad_j])), 2);
    let off_sphere = write_json(
        dir.path(),
        "off.json",
        &json!({ "point": ["1", "1", "0", "0", "0", "0", "0"], "family": "standard" }),
    );
    assert_eq!(code(&sixsphere(&["chern", "--input", &off_sphere])), 2);

    let o = sixsphere(&["chern", "--samples", "20", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    let checks = report(&o)["checks"].as_array().unwrap().clone();
    let sweep = checks.iter().find(|c| c["check"] == "residual_free_sweep").unwrap();
    assert_eq!(sweep["definite"], 0);
    assert_eq!(sweep["valid"], 20);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> =
        (0..3).map(|i| dir.path().join(format!("r{i}.json")).to_str().unwrap().to_owned()).collect();
    for (path, threads) in paths.iter().zip(["1", "1", "2"]) {
        let o = sixsphere(&[
            "sphere-suite",
            "--mode",
            "float",
            "--samples",
            "6",
            "--seed",
            "11",
            "--threads",
            threads,
            "--report",
            path,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[0], bytes[2]);
    let r: Value = serde_json::from_slice(&bytes[0]).unwrap();
    assert_eq!(r["seed"], 11);
    assert!(r["max_defect"].as_f64().unwrap() < 1e-10);
}

#[test]
fn sphere_suite_exact_at_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_json(dir.path(), "p.json", &json!({ "point": ["2/7", "3/7", "6/7", "0", "0", "0", "0"] }));
    let o = sixsphere(&["sphere-suite", "--input", &p]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(&o)["max_defect"], 0.0);
}
