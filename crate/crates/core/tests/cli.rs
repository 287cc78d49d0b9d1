use std::process::{Command, Output};

use serde_json::Value;
use verlinde_core::cli::OutputRecord;

fn verlinde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verlinde"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn compute_json(args: &[&str]) -> OutputRecord {
    let mut full = vec!["compute"];
    full.extend_from_slice(args);
    let o = verlinde(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn compute_examples() {
    assert_eq!(compute_json(&["--group", "so", "--r", "7", "--genus", "3"]).value, "343");
    assert_eq!(
        compute_json(&["--group", "sc", "--type", "A", "--rank", "1", "--level", "1", "--genus", "4"]).value,
        "16"
    );
    assert_eq!(compute_json(&["--group", "sp", "--r", "1", "--level", "2", "--genus", "2"]).value, "10");
    let d4 = compute_json(&["--group", "sc", "--type", "D", "--rank", "4", "--level", "2", "--genus", "2"]);
    assert_eq!(d4.group_label, "Spin-type D4 level 2");
    let q = compute_json(&[
        "--group", "sc", "--type", "D", "--rank", "4", "--level", "2", "--genus", "2", "--quotient", "so",
    ]);
    assert_eq!(q.value, "64");
}

#[test]
fn json_round_trip() {
    for args in [
        &["compute", "--group", "so", "--r", "12", "--genus", "20"][..],
        &["compute", "--group", "so", "--r", "4", "--genus", "3"][..],
    ] {
        let o = verlinde(args);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let rec: OutputRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&rec).unwrap(), text.trim_end());
        let generic: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::from_value::<OutputRecord>(generic).unwrap(), rec);
    }
    let big = compute_json(&["--group", "so", "--r", "12", "--genus", "20"]);
    assert_eq!(big.value, num_bigint::BigUint::from(12u32).pow(20).to_string());
}

#[test]
fn record_schema() {
    let o = verlinde(&["compute", "--group", "so", "--r", "5", "--genus", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        ["genus", "group_label", "level", "precision_bits", "residual", "term_count", "value"]
    );
    assert!(v["value"].is_string());
    assert!(v["residual"].as_str().unwrap().contains('e'));
    assert_eq!(v["level"], 2);
}

#[test]
fn csv_and_markdown_formats() {
    let o = verlinde(&["compute", "--group", "so", "--r", "3", "--genus", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let value_col = headers.iter().position(|h| h == "value").unwrap();
    assert_eq!(&row[value_col], "9");

    let o = verlinde(&["compute", "--group", "so", "--r", "3", "--genus", "2", "--format", "md"]);
    assert!(stdout(&o).contains("| SO(3) | 4 | 2 | 9 |"));
}

#[test]
fn exit_code_usage() {
    assert_eq!(verlinde(&[]).status.code(), Some(2));
    assert_eq!(verlinde(&["compute", "--group", "xx", "--genus", "2"]).status.code(), Some(2));
    assert_eq!(verlinde(&["compute", "--group", "so", "--genus", "2"]).status.code(), Some(2));
    assert_eq!(verlinde(&["compute", "--group", "so", "--r", "2", "--genus", "2"]).status.code(), Some(2));
    assert_eq!(verlinde(&["compute", "--group", "so", "--r", "5", "--genus", "0"]).status.code(), Some(2));
    assert_eq!(
        verlinde(&["compute", "--group", "so", "--r", "5", "--genus", "2", "--precision", "8"]).status.code(),
        Some(2)
    );
    assert_eq!(
        verlinde(&["weights", "--type", "C", "--rank", "2", "--level", "2", "--quotient", "so"]).status.code(),
        Some(2)
    );
    assert_eq!(
        verlinde(&["weights", "--type", "A", "--rank", "1", "--level", "3", "--quotient", "so"]).status.code(),
        Some(2)
    );
    assert_eq!(verlinde(&["compare-oracle", "--r", "4", "--genus", "2"]).status.code(), Some(2));
    assert_eq!(verlinde(&["--help"]).status.code(), Some(0));
}

#[test]
fn exit_code_uncertified() {
    let o = verlinde(&["compute", "--group", "so", "--r", "12", "--genus", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    let rec: OutputRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rec.precision_bits, 1536);
    let residual: f64 = rec.residual.parse().unwrap();
    assert!(residual >= 0.399);
    assert!(String::from_utf8_lossy(&o.stderr).contains("certif"));
}

#[test]
fn weights_listings() {
    let o = verlinde(&["weights", "--type", "A", "--rank", "1", "--level", "4", "--quotient", "so", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sizes: Vec<u64> = rows.as_array().unwrap().iter().map(|r| r["orbit_size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [2, 1]);
    let members: usize = rows.as_array().unwrap().iter().map(|r| r["members"].as_array().unwrap().len()).sum();
    assert_eq!(members, 3);

    let o = verlinde(&["weights", "--type", "D", "--rank", "4", "--level", "2", "--quotient", "so", "--format", "json"]);
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 5);
    assert!(rows[0]["u"].is_array());

    let o = verlinde(&["weights", "--type", "B", "--rank", "2", "--level", "0"]);
    let md = stdout(&o);
    assert_eq!(md.lines().filter(|l| l.starts_with("| [")).count(), 1);
    assert!(md.contains("| [0,0] | 0 | (3/2, 1/2) |"));
}

#[test]
fn compare_oracle_command() {
    let o = verlinde(&["compare-oracle", "--r", "9", "--genus", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e = &v["entries"][0];
    assert_eq!(e["expected"], "6561");
    assert_eq!(e["computed"], "6561");
    assert_eq!(e["pass"], true);
}

#[test]
fn suite_with_symmetry_entries() {
    let o = verlinde(&[
        "suite", "--r-max", "5", "--genus-max", "2", "--sp-max", "2", "--sp-genus-max", "2", "--rank-max", "2",
        "--level-max", "1", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["check_name"].as_str().unwrap()).collect();
    for n in ["so_identity", "so_oracle", "sp_symmetry", "unitarity"] {
        assert!(names.contains(&n), "missing {n}");
    }
    assert_eq!(v["summary"]["failed"], 0);
}
