use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ostrowski"))
        .args(args)
        .env_remove("OSTROWSKI_SELFTEST_MUTATION")
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn bound_refined_reports_the_expected_total() {
    let out = run(&[
        "bound", "--expr", "x^2", "--a", "0", "--b", "1", "--p", "0.25", "--mode", "refined",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert!((report["total_bound"].as_f64().unwrap() - 0.625).abs() < 1e-12);
    assert_eq!(report["status"], "holds");
    assert!(report["tightness_ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn bound_at_breakpoint_evaluates_the_tent_function() {
    let out = run(&[
        "bound",
        "--expr",
        "abs(x - 0.5)",
        "--a",
        "0",
        "--b",
        "1",
        "--breakpoints",
        "0.5",
        "--p",
        "0.5",
        "--mode",
        "at-breakpoint",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert!((report["total_bound"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(report["status"], "holds");
}

#[test]
fn point_outside_the_interval_is_a_usage_error() {
    let out = run(&[
        "bound", "--expr", "x^2", "--a", "0", "--b", "1", "--p", "1.5", "--mode", "refined",
    ]);
    assert_eq!(code(&out), 64);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("strictly inside"), "stderr: {stderr}");
}

#[test]
fn unknown_mode_is_a_usage_error() {
    let out = run(&[
        "bound", "--expr", "x", "--a", "0", "--b", "1", "--p", "0.5", "--mode", "sideways",
    ]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sideways"));
}

#[test]
fn observed_violation_exits_two() {
    let out = run(&[
        "bound",
        "--expr",
        "15*x - 5.5 + abs(x - 0.5)",
        "--a",
        "0",
        "--b",
        "1",
        "--breakpoints",
        "0.5",
        "--p",
        "0.25",
        "--mode",
        "piecewise",
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "violated-observed");
    assert!((report["deviation"].as_f64().unwrap() - 3.75).abs() < 1e-9);
    assert!((report["total_bound"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn sweep_output_is_deterministic_and_ordered() {
    let args = [
        "sweep", "--expr", "x", "--a", "0", "--b", "1", "--grid", "5", "--mode", "refined",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "two runs differ");

    let text = String::from_utf8(first.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "p,deviation,classical,halfmax,refined,total_bound,status,tightness_ratio"
    );
    assert_eq!(lines.len(), 6);
    let ps: Vec<f64> = lines[1..]
        .iter()
        .map(|row| row.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(ps.windows(2).all(|w| w[0] < w[1]), "rows not ordered by p: {ps:?}");
    assert!(lines[1..].iter().all(|row| row.contains(",holds,")));
}

#[test]
fn sweep_on_a_constant_reports_zero_tightness() {
    let out = run(&["sweep", "--expr", "3.5", "--a", "0", "--b", "1", "--grid", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for row in text.lines().skip(1) {
        let tightness = row.split(',').next_back().unwrap();
        assert_eq!(tightness.parse::<f64>().unwrap(), 0.0, "row: {row}");
    }
}

#[test]
fn sweep_rejects_a_grid_of_one() {
    let out = run(&["sweep", "--expr", "x", "--a", "0", "--b", "1", "--grid", "1"]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
}

#[test]
fn sweep_as_json_is_an_array_of_reports() {
    let out = run(&[
        "sweep", "--expr", "x^2", "--a", "0", "--b", "1", "--grid", "3", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let entries = stdout_json(&out);
    let entries = entries.as_array().expect("array");
    assert_eq!(entries.len(), 3);
    assert!((entries[0]["p"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(entries[0]["status"], "holds");
}

#[test]
fn means_on_a_unit_pair_holds_everywhere() {
    let out = run(&["means", "--a", "1", "--b", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    for key in ["ineq_i", "ineq_ii", "ineq_iii"] {
        assert_eq!(report[key]["holds"], true, "{key}");
    }
    assert!((report["L"].as_f64().unwrap() - 1.0 / f64::ln(2.0)).abs() < 1e-12);
}

#[test]
fn means_requires_an_ordered_positive_pair() {
    let out = run(&["means", "--a", "2", "--b", "1"]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < a < b"));
}

#[test]
fn means_violation_at_scale_exits_two() {
    let out = run(&["means", "--a", "3", "--b", "6"]);
    assert_eq!(code(&out), 2);
    let report = stdout_json(&out);
    assert_eq!(report["ineq_ii"]["holds"], false);
}

#[test]
fn means_near_degenerate_pair_stays_near_one() {
    let out = run(&["means", "--a", "1", "--b", "1.000001"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    for key in ["A", "G", "H", "L"] {
        let value = report[key].as_f64().unwrap();
        assert!((value - 1.0).abs() < 1e-6, "{key} = {value}");
    }
}

#[test]
fn selftest_passes_and_prints_four_suite_lines() {
    let out = run(&["selftest"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    let suite_lines: Vec<&str> =
        text.lines().filter(|line| line.starts_with("suite ")).collect();
    assert_eq!(suite_lines.len(), 4, "{text}");
    assert!(suite_lines.iter().all(|line| line.contains(": pass")));
}

#[test]
fn selftest_catches_an_injected_sign_flip() {
    let out = Command::new(env!("CARGO_BIN_EXE_ostrowski"))
        .arg("selftest")
        .env("OSTROWSKI_SELFTEST_MUTATION", "halfmax-sign-flip")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 3);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("suite dominance-chain: FAIL"), "{text}");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"expression": "x^2", "a": 0.0, "b": 1.0, "p": 0.9,
            "mode": "refined", "norm": {{"tol": 1e-7}}}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap();

    let from_file = run(&["bound", "--config", path]);
    assert_eq!(code(&from_file), 0, "{}", String::from_utf8_lossy(&from_file.stderr));
    let report = stdout_json(&from_file);
    assert!((report["halfmax"].as_f64().unwrap() - 0.81).abs() < 1e-6);

    let overridden = run(&["bound", "--config", path, "--p", "0.25"]);
    assert_eq!(code(&overridden), 0);
    let report = stdout_json(&overridden);
    assert!((report["total_bound"].as_f64().unwrap() - 0.625).abs() < 1e-9);
}

#[test]
fn config_file_with_unknown_keys_is_rejected() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"expresion": "x"}}"#).unwrap();
    let out = run(&["bound", "--config", file.path().to_str().unwrap()]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}
