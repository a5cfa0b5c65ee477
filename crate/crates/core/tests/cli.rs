use std::process::{Command, Output};

use finfree::rational::{parse_q, Q};
use serde_json::Value;

fn finfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finfree")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--emit", "json"];
    full.extend_from_slice(args);
    let o = finfree(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn expand_prints_the_expression() {
    let o = finfree(&["expand", "--family", "hermite", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2 - 5/d + 3/d^2");
    let o = finfree(&["expand", "--family", "power", "--a", "1", "--n", "3"]);
    // a x^0 power family is a point mass at 1, so every moment is 1.
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn envelope_fields() {
    let v = json(&["family", "--family", "laguerre", "--lambda", "1/3", "--d", "4"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["subcommand"], "family");
    assert_eq!(v["all_passed"], true);
    assert!(v["caps"]["partitions"].is_u64());
    let a: Vec<&str> = v["results"][0]["a"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(a, ["1", "4/3", "1/6", "-1/54", "5/2592"]);
}

fn kappas(v: &Value) -> Vec<Q> {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| parse_q(r["kappa_n"].as_str().unwrap()).unwrap())
        .collect()
}

#[test]
fn convolve_adds_cumulants() {
    let p = r#"{"roots": ["0", "2", "5"]}"#;
    let q = r#"{"roots": ["1", "-1", "1/2"]}"#;
    let v = json(&["convolve", "--op", "boxplus", "--p", p, "--q", q]);
    let r = serde_json::to_string(&v["results"][0]).unwrap();
    let k = kappas(&json(&["cumulants", "--poly", &r]));
    let kp = kappas(&json(&["cumulants", "--poly", p]));
    let kq = kappas(&json(&["cumulants", "--poly", q]));
    assert_eq!(k.len(), 3);
    for i in 0..3 {
        assert_eq!(k[i], &kp[i] + &kq[i], "kappa_{}", i + 1);
    }
}

#[test]
fn verify_reports_per_identity() {
    let v = json(&["verify", "--identity", "count-A,mobius-algebra", "--n", "4", "--cases", "2", "--seed", "9"]);
    let res = v["results"].as_array().unwrap();
    assert_eq!(res.len(), 2);
    assert_eq!(res[0]["identity"], "count-A");
    assert_eq!(res[1]["identity"], "mobius-algebra");
    assert_eq!(v["seed"], 9);
    assert!(res.iter().all(|r| r["all_passed"] == true && r["cases"].as_u64().unwrap() > 0));
}

#[test]
fn csv_output_has_header() {
    let o = finfree(&["--emit", "csv", "expand", "--family", "hermite", "--n", "4", "--upto"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m_n"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn bad_input_exits_2() {
    for args in [
        vec!["verify", "--identity", "nope"],
        vec!["expand", "--family", "hermite", "--n", "40"],
        vec!["cumulants", "--poly", r#"{"a": ["2"]}"#],
        vec!["frobnicate"],
    ] {
        let o = finfree(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn transform_round_trip() {
    // Semicircle moments through the K transform give 1/z + z.
    let v = json(&["transform", "--in", "[0,1,0,2,0,5]", "--op", "k", "--order", "4"]);
    let nonzero: Vec<(i64, String)> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["coefficient"] != "0")
        .map(|t| (t["exponent"].as_str().unwrap().parse().unwrap(), t["coefficient"].as_str().unwrap().to_owned()))
        .collect();
    assert_eq!(nonzero, [(-1, "1".to_owned()), (1, "1".to_owned())]);
}
