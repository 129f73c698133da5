use std::io::Write;
use std::process::{Command, Output};

use specjoin_cli::document::{Method, SpectrumDocument, VerifyDocument};

fn specjoin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specjoin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn power_8_table() {
    let o = specjoin(&["spectrum", "--power-n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("power:8"));
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(
        rows,
        vec![
            vec!["0", "1", "quotient"],
            vec!["1.14285714286", "7", "structural"]
        ]
    );
    assert!(text.contains("PASS"));
}

#[test]
fn json_round_trip() {
    let o = specjoin(&["spectrum", "--power-n", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: SpectrumDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.order, 30);
    assert_eq!(doc.multiplicity_total(), 30);
    assert_eq!(doc.method, Method::Both);
    assert!(doc.deviations.unwrap().pass);
    let again: SpectrumDocument =
        serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(again, doc);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["spectrum", "--family", "wheel:9", "--format", "json"][..],
        &["verify", "--suite", "joined-union", "--format", "json"][..],
    ] {
        assert_eq!(specjoin(args).stdout, specjoin(args).stdout);
    }
}

#[test]
fn csv_header_and_rows() {
    let o = specjoin(&["spectrum", "--family", "friendship:3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap(),
        vec!["value", "multiplicity", "source"]
    );
    let total: usize = r
        .records()
        .map(|rec| rec.unwrap()[1].parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 7);
}

#[test]
fn bad_input_exits_1() {
    assert_eq!(specjoin(&["spectrum"]).status.code(), Some(1));
    assert_eq!(
        specjoin(&["spectrum", "--power-n", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        specjoin(&["spectrum", "--family", "nope:3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        specjoin(&["verify", "--suite", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(specjoin(&["--help"]).status.code(), Some(0));
}

#[test]
fn edges_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# C5\n5\n0 1\n1 2\n2 3\n3 4\n4 0").unwrap();
    let path = f.path().to_str().unwrap();
    let o = specjoin(&["spectrum", "--edges", path, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: SpectrumDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.order, 5);

    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "3\n0 1\n1 2").unwrap();
    let path = g.path().to_str().unwrap();
    assert_eq!(
        specjoin(&["spectrum", "--edges", path, "--method", "oracle"])
            .status
            .code(),
        Some(0)
    );
    let o = specjoin(&["spectrum", "--edges", path, "--method", "structural"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn zero_tolerance_exit_matches_deviation() {
    let o = specjoin(&[
        "spectrum",
        "--power-n",
        "60",
        "--tol",
        "0",
        "--format",
        "json",
    ]);
    let doc: SpectrumDocument = serde_json::from_slice(&o.stdout).unwrap();
    let d = doc.deviations.unwrap();
    let expected = if d.structural_vs_oracle > 0.0 { 2 } else { 0 };
    assert_eq!(d.pass, expected == 0);
    assert_eq!(o.status.code(), Some(expected));
}

#[test]
fn oracle_cutoff_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_specjoin"))
        .args(["spectrum", "--power-n", "50"])
        .env("SPECJOIN_ORACLE_MAX", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_specjoin"))
        .args(["spectrum", "--power-n", "50", "--method", "structural"])
        .env("SPECJOIN_ORACLE_MAX", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_json_summary() {
    let o = specjoin(&[
        "verify", "--suite", "power", "--max-n", "40", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: VerifyDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.summary.fail, 0);
    assert_eq!(doc.summary.pass + doc.summary.warn, doc.cases.len());
}

#[test]
fn report_runs() {
    let o = specjoin(&[
        "report", "--family", "pq", "--bound", "100", "--format", "json",
    ]);
    assert!(matches!(o.status.code(), Some(0 | 2)));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["bound"], 100);
}
