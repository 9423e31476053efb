use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tmcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmcf"))
        .args(args)
        .env_remove("TMCF_PRECISION")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report JSON on stdout")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn passing_report_exits_zero() {
    let out = tmcf(&["hyperquadratic", "--s", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], "tmcf.report/1");
    assert_eq!(r["command"], "hyperquadratic");
    assert_eq!(r["overall_pass"], true);
    assert_eq!(r["payload_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn failed_certificate_exits_one() {
    // the order bound 3D does not hold at D = 4 for this pair
    let out = tmcf(&[
        "approx",
        "--a",
        "z^2",
        "--b",
        "z^3+1",
        "--lmax",
        "2",
        "--search",
        "4",
        "--min-ratio",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["overall_pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tmcf(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(tmcf(&["riccati", "--a", "z"]).status.code(), Some(2));
    assert_eq!(
        tmcf(&["riccati", "--a", "z", "--b", "z"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tmcf(&["riccati", "--a", "1", "--b", "z"]).status.code(),
        Some(2)
    );
    assert_eq!(tmcf(&["hyperquadratic", "--s", "5"]).status.code(), Some(2));
    assert_eq!(
        tmcf(&["verify-identities", "--kmax", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn internal_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = tmcf(&["verify-quartic", "--cert", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_deterministic() {
    let a = report(&tmcf(&["omega", "--prec", "128"]));
    let b = report(&tmcf(&["omega", "--prec", "128"]));
    assert_eq!(a["payload_sha256"], b["payload_sha256"]);
    assert_eq!(a["certificates"], b["certificates"]);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tmcf"))
        .args(["omega"])
        .env("TMCF_PRECISION", "96")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["params"]["prec"], 96);
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = tmcf(&[
        "riccati",
        "--a",
        "z",
        "--b",
        "z+1",
        "--prec",
        "512",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS riccati/a=z,b=z+1"));
    assert_eq!(read_json(&path)["overall_pass"], true);
}

#[test]
fn guess_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = tmcf(&[
        "guess",
        "--a",
        "z",
        "--b",
        "z+1",
        "--degbound",
        "8",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c = read_json(&cert);
    assert_eq!(c["matches_closed_form"], true);
    // A_3 = A_1
    assert_eq!(c["coefficients"][1], c["coefficients"][3]);
    let out = tmcf(&[
        "verify-quartic",
        "--cert",
        cert.to_str().unwrap(),
        "--prec",
        "1024",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        report(&out)["certificates"][0]["name"],
        "guess-reverify/a=z,b=z+1"
    );

    // a tampered coefficient no longer vanishes
    let mut bad = c.clone();
    bad["coefficients"][0] = Value::from("z^3");
    std::fs::write(&cert, bad.to_string()).unwrap();
    let out = tmcf(&[
        "verify-quartic",
        "--cert",
        cert.to_str().unwrap(),
        "--prec",
        "1024",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn guess_batch_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pairs.csv");
    std::fs::write(&csv, "a,b\nz,z+1\nz^2,z\nz^2+z,z+1\n").unwrap();
    let certs = dir.path().join("certs");
    let out = tmcf(&[
        "guess",
        "--batch",
        csv.to_str().unwrap(),
        "--out",
        certs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["certificates"].as_array().unwrap().len(), 3);
    assert_eq!(std::fs::read_dir(&certs).unwrap().count(), 3);
}

#[test]
fn sections_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (svg, csv) = (dir.path().join("dots.svg"), dir.path().join("dots.csv"));
    let out = tmcf(&[
        "sections",
        "--depth",
        "6",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<String> = std::fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(&rows[..4], ["i,j", "-1,0", "-2,-1", "-2,-3"]);
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<svg") && s.contains("<circle"));
}

#[test]
fn baum_sweet_expansion_histogram() {
    let out = tmcf(&["expand", "--series", "baumsweet", "--count", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &report(&out)["certificates"][0];
    assert_eq!(c["params"]["max_degree"], 2);
}

#[test]
fn identities_small() {
    let out = tmcf(&["verify-identities", "--kmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let names: Vec<&str> = r["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"pqr-sums/k=2"));
    assert!(names.windows(2).all(|w| w[0] <= w[1]));
}
