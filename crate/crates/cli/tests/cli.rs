//! End-to-end runs of the `pdo` binary. Golden files are refreshed with
//! `UPDATE_GOLDEN=1 cargo test -p pdo-cli`.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(sub)
}

fn data(name: &str) -> String {
    dir("data").join(name).to_string_lossy().into_owned()
}

fn pdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn golden(name: &str, o: &Output) {
    let path = dir("golden").join(name);
    let got = stdout(o);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(dir("golden")).unwrap();
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(got, want, "output differs from {name}");
}

#[test]
fn glue_cusp_golden() {
    let o = pdo(&["glue", "--ideal", "x^2", "--subring", "h"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let mut gens: Vec<String> = r["result"]["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    gens.sort();
    assert_eq!(gens, ["h", "x^2", "x^3"]);
    assert_eq!(r["result"]["conductor"], serde_json::json!(["x^2"]));
    assert_eq!(r["result"]["certificate"]["holds"], true);
    golden("glue_cusp.json", &o);
}

#[test]
fn cm_golden() {
    let o = pdo(&["cm", "--algebra", "x^2,x^3,h", "--budget", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["is_cm"], true);
    golden("cm_cusp.json", &o);

    let o = pdo(&["cm", "--algebra", "x^2,x*h,h^2,x^3,h^3"]);
    let r = report(&o);
    assert_eq!(r["result"]["is_cm"], false);
    assert_eq!(
        r["result"]["closure_generators"],
        serde_json::json!(["h", "x"])
    );
}

#[test]
fn cycle_golden() {
    let o = pdo(&["cycle", "--fn", "x^2/h", "--primes", "x,h"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["cycle"], "2*(x) - 1*(h)");
    golden("cycle.json", &o);
}

#[test]
fn nonlinear_prime_needs_flag() {
    let o = pdo(&["cycle", "--fn", "x^2 - h^3", "--primes", "x^2 - h^3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = pdo(&[
        "cycle",
        "--fn",
        "x^2 - h^3",
        "--primes",
        "x^2 - h^3",
        "--assume-irreducible",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["orders"][0]["order"], 1);
}

#[test]
fn analyze_remark_ring() {
    let o = pdo(&[
        "analyze",
        "--ring",
        &data("remark_ring.json"),
        "--mmax",
        "40",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let si = &r["result"]["self_intersection"];
    assert_eq!(
        (si["num"].as_str(), si["den"].as_str()),
        (Some("1"), Some("2"))
    );
    assert_eq!(r["result"]["filtration"]["dims"][4], 9);
    golden("analyze_remark.json", &o);

    // the text file form gives the same result
    let t = pdo(&[
        "analyze",
        "--ring",
        &data("remark_ring.txt"),
        "--mmax",
        "40",
    ]);
    assert_eq!(report(&t)["result"], r["result"]);
}

#[test]
fn analyze_rank_mismatch_is_negative() {
    let o = pdo(&[
        "analyze",
        "--op",
        "d2",
        "--op",
        "d1*d2 + d1^2",
        "--rank",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&o)["result"]["coherent_of_rank"], false);
}

#[test]
fn analyze_noncommuting_is_negative() {
    let o = pdo(&["analyze", "--op", "d1", "--op", "x1*d1"]);
    assert_eq!(o.status.code(), Some(2));
    let r = report(&o);
    assert_eq!(r["status"], "negative");
    assert!(r["result"]["reason"]
        .as_str()
        .unwrap()
        .contains("do not commute"));
}

#[test]
fn schur_glued_pair() {
    let o = pdo(&["schur", "--pair", &data("glued_pair.json"), "--nmax", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["result"]["rank"], 1);
    assert_eq!(r["result"]["stable"], true);
    assert_eq!(r["result"]["witness_at_every_level"], true);
    let si = &r["result"]["algebra_growth"]["self_intersection"];
    assert_eq!(
        (si["num"].as_str(), si["den"].as_str()),
        (Some("1"), Some("2"))
    );
    golden("schur_glued_pair.json", &o);
}

#[test]
fn commute_glued_operators() {
    let o = pdo(&["commute", &data("glued_ops.txt"), "--precision", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["result"]["all_commute"], true);
    assert!(r["result"]["pairs"][0]["precision"].as_u64().unwrap() >= 6);
}

#[test]
fn commute_negative_control() {
    let o = pdo(&["commute", "--op", "d1", "--op", "x1*d1"]);
    assert_eq!(o.status.code(), Some(2));
    let r = report(&o);
    assert_eq!(r["status"], "negative");
    assert_eq!(r["result"]["pairs"][0]["commutator"], "d1");
    golden("commute_negative.json", &o);
}

#[test]
fn empty_file_is_a_parse_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("empty.txt");
    std::fs::write(&path, "").unwrap();
    let o = pdo(&["commute", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn out_flag_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("r.json");
    let o = pdo(&[
        "cycle",
        "--fn",
        "x",
        "--primes",
        "x",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["config"]["seed"], 20240601);
    assert_eq!(r["pdo_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn text_format() {
    let o = pdo(&[
        "glue",
        "--ideal",
        "x^2",
        "--subring",
        "h",
        "--format",
        "text",
    ]);
    assert!(stdout(&o).starts_with("R + I = k["));
}

#[test]
fn runs_are_reproducible() {
    let args = ["schur", "--pair", &data("glued_pair.json"), "--nmax", "8"];
    let a = pdo(&args);
    let b = pdo(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = pdo(&seq);
    assert_eq!(report(&a)["result"], report(&c)["result"]);
}

#[test]
fn bad_flags_fail() {
    assert_eq!(
        pdo(&["cm", "--algebra", "x", "--budget", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pdo(&["selftest", "--only", "11"]).status.code(), Some(1));
    assert_eq!(
        pdo(&["glue", "--ideal", "x^", "--subring", "h"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn selftest_single_criterion() {
    let o = pdo(&["selftest", "--only", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["criteria"][0]["passed"], true);
}
