//! End-to-end runs of the `nnsft` binary.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
    stderr: String,
}

fn nnsft(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_nnsft")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = stdout.lines().last().map(|l| serde_json::from_str(l).unwrap_or(Value::Null)).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap_or(-1), json, stderr: String::from_utf8_lossy(&out.stderr).into_owned() }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn certify_five_colourings() {
    let r = nnsft(&["certify", "--model", "checkerboard", "--k", "5", "--d", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["subcommand"], "certify");
    assert_eq!(r.json["result"]["ssf"], true);
    assert_eq!(r.json["result"]["tssm_gap"], 2);
    for key in ["inputs", "result", "assumptions", "seconds"] {
        assert!(r.json.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn stripe_witness_for_four_colourings() {
    let r = nnsft(&["tssm-search", "--model", "checkerboard", "--k", "4", "--gap", "6", "--strategy", "stripes"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    let w = &r.json["result"]["witness"];
    assert_eq!(w["us_admissible"], true);
    assert_eq!(w["sv_admissible"], true);
    assert_eq!(w["usv_admissible"], false);
    assert!(w["distance"].as_u64().unwrap() >= 6);
}

#[test]
fn hard_square_pressure_bracket() {
    let r = nnsft(&["pressure", "--model", "hard_core", "--lambda", "1.0", "--d", "2", "--epsilon", "0.02"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &r.json["result"];
    let (lo, hi) = (res["lower"].as_f64().unwrap(), res["upper"].as_f64().unwrap());
    assert!(lo <= 0.4074951 && 0.4074951 <= hi, "[{lo}, {hi}]");
    assert!(hi - lo <= 0.02);
    let assumptions: Vec<&str> = r.json["assumptions"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(assumptions.iter().any(|a| a.contains("TSSM gap 2") && a.contains("SSF")), "{assumptions:?}");
}

#[test]
fn results_round_trip_through_recorded_argv() {
    for args in [
        vec!["certify", "--model", "hard_core", "--lambda", "2"],
        vec!["offenders", "--model", "hard_core", "--diameter", "2"],
        vec!["certify", "--model", "checkerboard", "--k", "4", "--spot-check", "50", "--seed", "9"],
        vec!["rate-bounds", "--g", "1", "--lambda", "10000"],
    ] {
        let first = nnsft(&args);
        let argv: Vec<String> =
            first.json["inputs"]["argv"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        let second = nnsft(&argv);
        assert_eq!(first.code, second.code);
        assert_eq!(first.json["result"], second.json["result"], "{args:?}");
        assert_eq!(first.json["inputs"], second.json["inputs"]);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["pressure", "--model", "hard_core", "--schedule", "2,3", "--epsilon", "1e-9"];
    let one = nnsft(&[&args[..], &["--threads", "1"]].concat());
    let three = nnsft(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(one.code, 3, "{}", one.stderr);
    assert_eq!(one.json["result"], three.json["result"]);
}

#[test]
fn admissibility_verdicts() {
    let ok = nnsft(&["admissible", "--model", "hard_core", "--pattern", "0,0=1;2,0=1"]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    let domino = nnsft(&["admissible", "--model", "hard_core", "--pattern", "0,0=1;1,0=1"]);
    assert_eq!(domino.code, 2);
}

#[test]
fn input_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ \"alphabet\": [\"0\"], \"axes\": 2, \"colour\": 1 }");
    let csv = dir.path().join("out.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["certify", "--config", &bad],
        vec!["certify"],
        vec!["certify", "--model", "no_such_model"],
        vec!["certify", "--model", "hard_core", "--csv", csv.to_str().unwrap()],
        vec!["admissible", "--model", "hard_core", "--pattern", "0,0=7"],
        vec!["frobnicate"],
        vec!["pressure", "--model", "hard_core", "--threads", "0"],
    ];
    for args in cases {
        let r = nnsft(&args);
        assert_eq!(r.code, 4, "{args:?}: {}", r.stderr);
        assert!(!r.stderr.is_empty(), "{args:?} gave no diagnostic");
    }
    assert!(!csv.exists());
}

#[test]
fn sft_config_files() {
    let dir = tempfile::tempdir().unwrap();
    let forbidden = write(
        dir.path(),
        "hc.json",
        r#"{ "alphabet": ["0", "1"], "axes": 2, "forbidden": { "axis_0": [["1", "1"]], "axis_1": [["1", "1"]] } }"#,
    );
    let allowed = write(
        dir.path(),
        "hc_allowed.json",
        r#"{ "alphabet": [0, 1], "axes": 2,
             "allowed": { "axis_0": [[0, 0], [0, 1], [1, 0]], "axis_1": [[0, 0], [0, 1], [1, 0]] } }"#,
    );
    let reference = nnsft(&["certify", "--model", "hard_core"]);
    for path in [&forbidden, &allowed] {
        let r = nnsft(&["certify", "--config", path]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.json["result"]["safe_symbols"], reference.json["result"]["safe_symbols"]);
        assert_eq!(r.json["result"]["ssf"], true);
    }
    let missing_axis = write(dir.path(), "partial.json", r#"{ "alphabet": ["0", "1"], "axes": 2, "allowed": { "axis_0": [["0", "0"]] } }"#);
    assert_eq!(nnsft(&["certify", "--config", &missing_axis]).code, 4);
}

#[test]
fn interaction_config_files() {
    let dir = tempfile::tempdir().unwrap();
    // hard squares with activity e written as a vertex weight and infinite edges
    let explicit = write(
        dir.path(),
        "phi.json",
        r#"{ "alphabet": ["0", "1"], "axes": 1, "vertex": { "1": -1.0 },
             "edges": { "axis_0": { "1,1": "inf" } } }"#,
    );
    let named = write(dir.path(), "model.json", r#"{ "model": { "name": "hard_core", "params": { "lambda": 2.718281828459045, "d": 1 } } }"#);
    let a = nnsft(&["entropy-bounds", "--config", &explicit, "--n-max", "2"]);
    let b = nnsft(&["entropy-bounds", "--config", &named, "--n-max", "2"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(b.code, 0, "{}", b.stderr);
    let (pa, pb) = (a.json["result"]["pressure_1d"].as_f64().unwrap(), b.json["result"]["pressure_1d"].as_f64().unwrap());
    assert!((pa - pb).abs() < 1e-9, "{pa} vs {pb}");
    // λ = e: the largest root of t² - t - e
    let want = ((1.0 + (1.0 + 4.0 * std::f64::consts::E).sqrt()) / 2.0).ln();
    assert!((pa - want).abs() < 1e-9, "{pa} vs {want}");
}

#[test]
fn csv_series() {
    let dir = tempfile::tempdir().unwrap();
    let entropy = dir.path().join("entropy.csv");
    let r = nnsft(&["entropy-bounds", "--model", "hard_core", "--n-max", "3", "--csv", entropy.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&entropy).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,block_count_upper_bound");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,"));

    let pressure = dir.path().join("pressure.csv");
    let r = nnsft(&["pressure", "--model", "hard_core", "--schedule", "2,3", "--epsilon", "0.5", "--csv", pressure.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&pressure).unwrap();
    assert!(text.starts_with("n,lower,upper,width,seconds\n"));
    assert!(text.lines().count() >= 2);
}

#[test]
fn budget_exhaustion_exits_three() {
    let r = nnsft(&["pressure", "--model", "hard_core", "--schedule", "2", "--epsilon", "1e-6"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert_eq!(r.json["result"]["converged"], false);
}

#[test]
fn models_and_rates() {
    let m = nnsft(&["models"]);
    assert_eq!(m.code, 0);
    let listed = m.json["result"].to_string();
    for name in ["hard_core", "checkerboard", "iceberg", "lipschitz", "ising", "potts"] {
        assert!(listed.contains(name), "{name} missing from {listed}");
    }
    let r = nnsft(&["rate-bounds", "--g", "1", "--lambda", "9217"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["result"]["certificate"]["guaranteed"], true);
    let r = nnsft(&["rate-bounds", "--g", "1", "--lambda", "9216"]);
    assert_eq!(r.json["result"]["certificate"]["guaranteed"], false);
}

#[test]
fn table_output() {
    let out = Command::new(env!("CARGO_BIN_EXE_nnsft")).args(["certify", "--model", "hard_core", "--format", "table"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("certify"));
    assert!(serde_json::from_str::<Value>(text.lines().last().unwrap()).is_err());
}
