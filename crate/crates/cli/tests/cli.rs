use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thermoprobe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermoprobe"))
        .args(args)
        .env_remove("THERMOPROBE_MATERIALS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV written by the tool, header comments and column line
/// skipped.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn summary_value(text: &str, key: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(key))
        .unwrap_or_else(|| panic!("no `{key}` line in:\n{text}"));
    line.split('=')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn forward_reports_flux_and_interface_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("profile.csv");
    let o = thermoprobe(&[
        "-a",
        "Fe",
        "-b",
        "Ag",
        "forward",
        "--points",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("q = 443.487"), "{text}");
    assert!(text.contains("interface angle = "));

    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("# thermoprobe "));
    assert!(csv.contains("\"kind\":\"profile\""));
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().any(|r| r[0] == "4"));
    assert_eq!(rows[0], ["0", "100"]);
    assert_eq!(rows.last().unwrap()[0], "10");
}

#[test]
fn forward_adds_interface_when_off_grid() {
    let o = thermoprobe(&[
        "-a",
        "Fe",
        "-b",
        "Ag",
        "--interface",
        "3.3",
        "forward",
        "--points",
        "5",
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2][0], "3.3");
    assert!(stderr(&o).contains("u(L) = "));
}

#[test]
fn forward_writes_json_mirror() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("profile.json");
    let o = thermoprobe(&[
        "-a",
        "73",
        "-b",
        "419",
        "forward",
        "--points",
        "3",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["x", "u"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["metadata"]["parameters"]["kappa_a"], 73.0);
}

#[test]
fn estimate_reference_measurement() {
    let o = thermoprobe(&["-b", "Ag", "estimate", "--flux", "445", "--epsilon", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["admissible"], true);
    let k = report["kappa_hat"].as_f64().unwrap();
    assert!((k - 73.774).abs() < 5e-4, "{k}");
    assert!(stderr(&o).contains("kappa_hat = 73.7742"));
}

#[test]
fn estimate_beyond_asymptote_is_inadmissible() {
    // q̄_M + 1 for the Fe–Ag rig.
    let o = thermoprobe(&["-b", "Ag", "estimate", "--flux", "657.054"]);
    assert_eq!(o.status.code(), Some(3));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["admissible"], false);
    assert_eq!(report["kappa_hat"], Value::Null);
    assert!(stderr(&o).contains("q̄_M = 656.054"));
}

#[test]
fn forward_estimate_round_trip() {
    let o = thermoprobe(&[
        "--precision",
        "17",
        "-a",
        "Fe",
        "-b",
        "Ag",
        "forward",
        "--points",
        "2",
    ]);
    let q = summary_value(&stderr(&o), "q =");
    let o = thermoprobe(&["-b", "Ag", "estimate", "--flux", &q.to_string()]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((report["kappa_hat"].as_f64().unwrap() - 73.0).abs() < 1e-9);
}

#[test]
fn degenerate_drive_is_a_usage_error() {
    let o = thermoprobe(&["-b", "Ag", "--source", "25", "estimate", "--flux", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degenerate"));
}

#[test]
fn elasticity_asymptotes() {
    for (b, asymptote) in [("Ag", "656.054"), ("Cu", "649.103")] {
        let o = thermoprobe(&[
            "-b",
            b,
            "elasticity",
            "--from",
            "100",
            "--to",
            "600",
            "--n",
            "5",
        ]);
        assert!(o.status.success());
        assert!(
            stderr(&o).contains(&format!("q̄_M = {asymptote}")),
            "{}",
            stderr(&o)
        );
        assert_eq!(csv_rows(&stdout(&o)).len(), 5);
    }
}

#[test]
fn elasticity_two_samples_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = thermoprobe(&[
        "-b",
        "Ag",
        "elasticity",
        "--from",
        "100",
        "--to",
        "200",
        "--n",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&std::fs::read_to_string(out).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "100");
    assert_eq!(rows[1][0], "200");
}

#[test]
fn elasticity_past_asymptote_names_it() {
    let o = thermoprobe(&["-b", "Ag", "elasticity", "--from", "100", "--to", "700"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("asymptote q̄_M = 656.054"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn table_example_one() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("t.json");
    let o = thermoprobe(&["table", "1", "--json", json.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0][..2], ["439", "70.7676"]);
    assert!(stderr(&o).contains("admissible rows = 10 of 10"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn table_example_two_uses_lead() {
    let o = thermoprobe(&["table", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\"kappa_b\":35.0"), "{text}");
    let rows = csv_rows(&text);
    assert_eq!(rows[6][..2], ["258", "207.586"]);
}

#[test]
fn table_custom_noiseless() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.toml",
        "material_a = \"Fe\"\nmaterial_b = \"Ag\"\nnoise_mode = \"fixed-offsets\"\nepsilon = 0\ncount = 4\n",
    );
    let o = thermoprobe(&["--config", &cfg, "table"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 4);
    for r in rows {
        // q_hat, kappa_hat, data_error, abs_error, rel_error, admissible
        assert_eq!(r[1], "73");
        assert_eq!(r[2], "0");
        assert!(r[4].parse::<f64>().unwrap() < 1e-14);
    }
}

#[test]
fn table_seeded_runs_repeat() {
    let args = [
        "-a",
        "Fe",
        "-b",
        "Ag",
        "table",
        "--epsilon",
        "3",
        "--count",
        "20",
        "--seed",
        "11",
    ];
    let first = stdout(&thermoprobe(&args));
    assert_eq!(first, stdout(&thermoprobe(&args)));
    assert!(first.contains("\"seed\":11"));
    assert_eq!(csv_rows(&first).len(), 20);
}

#[test]
fn table_all_inadmissible() {
    let o = thermoprobe(&["-a", "Fe", "-b", "Ag", "table", "--flux-values", "700,800"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no admissible rows"));
}

#[test]
fn validate_passes() {
    for args in [
        vec!["-a", "Fe", "-b", "Ag", "validate"],
        vec!["-a", "Fe", "-b", "Ag", "validate", "--cells", "4"],
        vec!["-a", "Cu", "-b", "Cu", "validate"],
        vec!["-a", "Al", "-b", "Pb", "validate", "--cells", "1000"],
    ] {
        let o = thermoprobe(&args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        let text = stdout(&o);
        assert!(summary_value(&text, "max nodal deviation") <= 1e-6);
        assert!(summary_value(&text, "end flux deviation") <= 1e-6);
    }
}

#[test]
fn validate_failure_exit_code() {
    let o = thermoprobe(&[
        "-a",
        "Fe",
        "-b",
        "Ag",
        "validate",
        "--cells",
        "1000",
        "--tolerance",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "rod.toml",
        "material_a = \"Fe\"\nmaterial_b = \"Ag\"\nconvection = 1000\n",
    );
    // File overrides the default h = 10.
    let o = thermoprobe(&["--config", &cfg, "forward", "--points", "2"]);
    assert!(!stderr(&o).contains("q = 443.487"));
    // Flag overrides the file.
    let o = thermoprobe(&[
        "--config",
        &cfg,
        "--convection",
        "10",
        "forward",
        "--points",
        "2",
    ]);
    assert!(stderr(&o).contains("q = 443.487"), "{}", stderr(&o));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "lenght = 3\n");
    let o = thermoprobe(&["--config", &cfg, "-a", "Fe", "-b", "Ag", "forward"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lenght"));

    let o = thermoprobe(&["--interface", "12", "-a", "Fe", "-b", "Ag", "forward"]);
    assert_eq!(o.status.code(), Some(2));

    let o = thermoprobe(&["-a", "Zz", "-b", "Ag", "forward"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Zz"));

    let o = thermoprobe(&["estimate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn materials_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mats = write(dir.path(), "m.csv", "symbol,name,kappa\nAu,Gold,317\n");
    let o = Command::new(env!("CARGO_BIN_EXE_thermoprobe"))
        .args(["-a", "Au", "-b", "Ag", "forward", "--points", "2"])
        .env("THERMOPROBE_MATERIALS", &mats)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let o = thermoprobe(&["--materials", &mats, "materials"]);
    assert!(stdout(&o).contains("Au,Gold,317"));

    let bad = write(dir.path(), "bad.csv", "symbol,name,kappa\nAu,Gold,-3\n");
    let o = thermoprobe(&["--materials", &bad, "materials"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"));
}
