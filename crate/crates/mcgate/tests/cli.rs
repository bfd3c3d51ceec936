//! End-to-end tests of the `mcgate` binary: golden summary lines, exit
//! codes, file outputs.

use std::process::{Command, Output};

fn mcgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcgate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn decompose_exact_c4x_qasm() {
    let o = mcgate(&[
        "decompose", "--gate", "x", "--controls", "4", "--strategy", "exact",
        "--format", "qasm",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let cx_lines = out.lines().filter(|l| l.starts_with("cx ")).count();
    assert_eq!(cx_lines, 50); // 4n^2 - 12n + 10 at n = 5
    assert!(out.contains("strategy=exact n=5 cnots=50 bound=50"), "{out}");
}

#[test]
fn auto_is_exact_at_the_base_control_count() {
    let o = mcgate(&[
        "decompose", "--gate", "x", "--controls", "13", "--epsilon", "1e-3",
        "--strategy", "auto", "--format", "json",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("strategy=exact n=14"), "{}", stdout(&o));
}

#[test]
fn decompose_with_full_verification() {
    let o = mcgate(&[
        "decompose", "--gate", "rx(0.7853981633974483)", "--controls", "6",
        "--strategy", "exact", "--verify", "full", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = stdout(&o);
    let err_field = summary
        .lines()
        .find(|l| l.starts_with("strategy="))
        .and_then(|l| l.split("error=").nth(1))
        .unwrap()
        .to_string();
    let measured: f64 = err_field.trim().parse().unwrap();
    assert!(measured <= 1e-10, "measured {measured}");
}

#[test]
fn approx_requires_epsilon() {
    let o = mcgate(&["decompose", "--gate", "x", "--controls", "8", "--strategy", "approx-thm1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_gate_is_a_config_error() {
    let o = mcgate(&["decompose", "--gate", "frobnicate", "--controls", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn basecontrols_reference_values() {
    let o = mcgate(&["basecontrols", "--theta", "pi", "--epsilon", "1e-3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("nb=13 N=4096 "), "{}", stdout(&o));

    let o = mcgate(&["basecontrols", "--gate", "x", "--epsilon", "8.255e-3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("nb=10 "), "{}", stdout(&o));
}

#[test]
fn verify_roundtrip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3x.json");
    let o = mcgate(&[
        "decompose", "--gate", "x", "--controls", "3", "--strategy", "exact",
        "--format", "json", "--output", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());

    let o = mcgate(&[
        "verify", path.to_str().unwrap(), "--gate", "x", "--controls", "3",
        "--mode", "full",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("distance="));

    // drop one gate: the circuit no longer implements C^3 X
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let gates = v["gates"].as_array_mut().unwrap();
    gates.remove(gates.len() / 2);
    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(&corrupt, v.to_string()).unwrap();
    let o = mcgate(&[
        "verify", corrupt.to_str().unwrap(), "--gate", "x", "--controls", "3",
        "--mode", "full",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_pattern_mode_reports_per_pattern_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("approx.json");
    let o = mcgate(&[
        "decompose", "--gate", "x", "--controls", "9", "--epsilon", "0.3",
        "--strategy", "approx-thm3", "--format", "json", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = mcgate(&[
        "verify", path.to_str().unwrap(), "--gate", "x", "--controls", "9",
        "--mode", "patterns", "--epsilon", "0.3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("pattern all-active"), "{out}");
    assert!(out.lines().filter(|l| l.starts_with("pattern ")).count() >= 11);
}

#[test]
fn compare_reference_row() {
    let o = mcgate(&["compare", "--epsilon", "1e-3", "--n-from", "14", "--n-to", "40"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("n,exact,thm1,thm3,barenco_iten,su2_single,su2_multi\n"));
    assert!(out.lines().any(|l| l == "30,3250,6528,1424,7400,440,456"), "{out}");
}

#[test]
fn compare_measured_appends_constructed_counts() {
    let o = mcgate(&[
        "compare", "--epsilon", "0.3", "--n-from", "8", "--n-to", "14", "--measured",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(
        out.starts_with("n,exact,thm1,thm3,barenco_iten,su2_single,su2_multi,measured_thm1,measured_thm3\n"),
        "{out}"
    );
    // measured counts respect the theorem-1 bound column where both exist
    for line in out.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        if let (Ok(bound), Ok(measured)) = (cells[2].parse::<usize>(), cells[7].parse::<usize>()) {
            assert!(measured <= bound, "{line}");
        }
    }
}
