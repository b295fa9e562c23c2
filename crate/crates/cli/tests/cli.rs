use std::collections::HashSet;
use std::io::Write;
use std::process::{Command, Output};

use pcube_cli::registry::REGISTRY;
use serde_json::Value;

fn pcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcube"))
        .args(args)
        .env_remove("PCUBE_NCAP")
        .output()
        .expect("spawn pcube")
}

fn poly_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# x1 + x1 x2 / 2 + x3 / 4").unwrap();
    writeln!(f, "1 1\n3 0.5\n4 0.25").unwrap();
    f
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn registry_ids_are_unique_per_command() {
    let mut seen = HashSet::new();
    for t in REGISTRY {
        assert!(seen.insert((t.command, t.id)), "duplicate {}/{}", t.command, t.id);
        assert_eq!(t.example[0], t.command);
    }
}

#[test]
fn every_registered_checker_runs() {
    let poly = poly_file();
    let path = poly.path().to_str().unwrap().to_string();
    for t in REGISTRY {
        let mut args: Vec<&str> = t.example.to_vec();
        if t.command == "invariance" {
            args.extend(["--poly", &path]);
        }
        let out = pcube(&args);
        let code = out.status.code();
        assert!(
            matches!(code, Some(0) | Some(1)),
            "{}: exit {code:?}: {}",
            t.id,
            String::from_utf8_lossy(&out.stderr)
        );
        let doc = json(&out);
        let rows = doc["rows"].as_array().unwrap();
        assert!(!rows.is_empty(), "{}: no rows", t.id);
        assert!(rows.iter().all(|r| r["theorem"] == t.id), "{}: wrong theorem tag", t.id);
    }
}

#[test]
fn hyper_example_gives_one_passing_row() {
    let out = pcube(&["check-hyper", "--theorem", "13", "--fn", "antitribes:s=2,w=3", "--p", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["pass"], true);
    assert_eq!(doc["pass"], true);
    let lhs = rows[0]["lhs"].as_f64().unwrap();
    let rhs = rows[0]["rhs"].as_f64().unwrap();
    assert!(lhs <= rhs);
}

#[test]
fn dictator_measure_curve_is_the_identity() {
    let out = pcube(&["threshold", "--fn", "dictator", "--grid", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), ["instance", "p", "mu", "influence"]);
    let mut count = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let p: f64 = rec[1].parse().unwrap();
        let mu: f64 = rec[2].parse().unwrap();
        let infl: f64 = rec[3].parse().unwrap();
        assert!((mu - p).abs() < 1e-15);
        assert!((infl - 1.0).abs() < 1e-12);
        count += 1;
    }
    assert_eq!(count, 16);
}

#[test]
fn malformed_input_exits_2_without_output() {
    for args in [
        &["check-hyper", "--theorem", "13", "--fn", "antitribes:s=two,w=3"][..],
        &["check-hyper", "--theorem", "13", "--fn", "nosuchfamily"],
        &["check-hyper", "--theorem", "nosuch", "--fn", "majority", "--n", "3"],
        &["check-hyper", "--theorem", "13", "--fn", "majority", "--n", "3", "--p", "0.7"],
        &["influences", "--fn", "and", "--table", "x.txt"],
        &["influences"],
        &["product", "--random", "3,3"],
        &["stability", "--frobnicate"],
    ] {
        let out = pcube(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} wrote a partial report");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn failed_check_exits_1_with_full_report() {
    let out = pcube(&["isoperimetry", "--theorem", "eg1", "--s", "3", "--w", "2", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["pass"], false);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn unasserted_rows_never_fail_a_run() {
    // majority is not sparse, so the noise-sensitivity hypothesis fails
    let out = pcube(&["stability", "--fn", "majority", "--n", "5", "--check", "noise-sensitivity", "--rho", "0.9"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let row = &doc["rows"][0];
    assert_eq!(row["asserted"], false);
    assert_eq!(row["pass"], false);
}

#[test]
fn output_is_deterministic() {
    let poly = poly_file();
    let path = poly.path().to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["influences", "--fn", "majority", "--fn", "tribes:s=2,w=3", "--n", "6", "--p", "0.1,0.25,0.5", "--r-max", "3"],
        &["check-hyper", "--theorem", "replacement", "--fn", "majority", "--n", "5", "--p", "0.1,0.3", "--format", "csv"],
        &["threshold", "--fn", "majority", "--n", "7", "--grid", "40", "--format", "json"],
        &["invariance", "--poly", path, "--y", "gaussian", "--samples", "20000", "--seed", "3"],
    ];
    for args in runs {
        let a = pcube(args);
        let b = pcube(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn sweep_rows_follow_input_order() {
    let out = pcube(&["check-hyper", "--theorem", "13", "--fn", "or", "--fn", "and", "--n", "4", "--p", "0.3,0.1"]);
    let doc = json(&out);
    let names: Vec<&str> = doc["rows"].as_array().unwrap().iter().map(|r| r["instance"].as_str().unwrap()).collect();
    assert_eq!(names, ["or@n=4,p=0.3", "or@n=4,p=0.1", "and@n=4,p=0.3", "and@n=4,p=0.1"]);
}

#[test]
fn dimension_cap_follows_environment() {
    let args = ["transform", "--fn", "majority", "--n", "5"];
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_pcube"))
            .args(args)
            .env("PCUBE_NCAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("4").status.code(), Some(2));
    assert_eq!(run("5").status.code(), Some(0));
    assert_eq!(run("many").status.code(), Some(2));
    let over = pcube(&["transform", "--fn", "majority", "--n", "25"]);
    assert_eq!(over.status.code(), Some(2));
}

#[test]
fn truth_table_source_matches_generator() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "2 0.3\n0\n0\n0\n1").unwrap();
    let path = f.path().to_str().unwrap();
    let from_table = json(&pcube(&["transform", "--table", path]));
    let from_gen = json(&pcube(&["transform", "--fn", "and:k=2", "--p", "0.3"]));
    assert_eq!(from_table["data"][0]["coefficients"], from_gen["data"][0]["coefficients"]);
}

#[test]
fn timing_adds_a_column_only_on_request() {
    let base = ["stability", "--fn", "and:k=2", "--check", "warmup", "--format", "csv"];
    let plain = pcube(&base);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains("runtime_ms"));
    let mut args = base.to_vec();
    args.push("--timing");
    let timed = pcube(&args);
    assert!(String::from_utf8_lossy(&timed.stdout).lines().next().unwrap().ends_with("runtime_ms"));
}

#[test]
fn isoperimetry_csv_has_witness_columns() {
    let out = pcube(&["isoperimetry", "--theorem", "kahn-kalai", "--fn", "and:k=3", "--p", "0.1", "--k", "3.5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "instance,K,|J|,bump,threshold,min_constant,pass");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["pcube", "zoo", "--n", "6"];
    let mut out = Vec::new();
    let mut err = Vec::new();
    assert_eq!(pcube_cli::run(args, &mut out, &mut err), 0);
    assert_eq!(out, pcube(&args[1..]).stdout);
}

#[test]
fn help_exits_0() {
    let out = pcube(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("check-hyper"));
}

#[test]
fn zoo_sweep_covers_every_family() {
    let out = pcube(&["check-hyper", "--theorem", "13", "--sweep", "zoo:n=6", "--p", "0.1,0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().len();
    assert_eq!(rows, 2 * pcube::generators::zoo(6).len());
    let both = pcube(&["check-hyper", "--theorem", "13", "--sweep", "zoo:n=6", "--fn", "and"]);
    assert_eq!(both.status.code(), Some(2));
    assert!(both.stdout.is_empty());
}
