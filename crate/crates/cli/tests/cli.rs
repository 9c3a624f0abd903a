//! End-to-end runs of the `traceform` binary: subcommands, output shape and
//! exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_traceform"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn invariants_cubic() {
    let out = run(&["invariants", "x^3+2*x+11"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("-3299"), "{s}");
    assert!(s.contains("(1, 1)"), "{s}");
    assert!(s.contains("tameness at 3299: Tame"), "{s}");
}

#[test]
fn invariants_octic() {
    let out = run(&["invariants", "x^8+15"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("2^10 * 3^7 * 5^7"), "{s}");
    assert!(s.contains("(0, 4)"), "{s}");
}

#[test]
fn invariants_accepts_coefficient_lists() {
    let out = run(&["invariants", "-5,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("disc            5"), "{s}");
    assert!(s.contains("(2, 0)"), "{s}");
}

#[test]
fn parse_failure_exits_2() {
    let out = run(&["invariants", "x^+bad"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reducible_input_exits_5() {
    let out = run(&["invariants", "x^2-1"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn irreducibility_undetermined_exits_3() {
    // (x^2+1)(x^2+2): no rational root, and every mod-p degree pattern
    // admits a quadratic factor, so certification comes up empty.
    let out = run(&["invariants", "x^4+3*x^2+2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn decide_quartic_pair_equivalent() {
    let out = run(&["decide", "5,-4,5,-1,1", "7,3,-3,-2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("verdict: equivalent"), "{s}");
    assert!(s.contains("step hypothesis:tame"), "{s}");
}

#[test]
fn decide_distinct_quadratics() {
    let out = run(&["decide", "x^2-5", "x^2-13"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("verdict: not-equivalent"), "{s}");
    assert!(s.contains("discriminant"), "{s}");
}

#[test]
fn decide_spinor_pair_reports_note() {
    let out = run(&["decide", "6859,0,-190,-1,1", "102,11,-30,-2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("not isometric"), "{s}");
    assert!(s.contains("same spinor genus"), "{s}");
    assert!(s.contains("verdict: not-equivalent"), "{s}");
}

#[test]
fn decide_octic_pair_not_equivalent() {
    let out = run(&["decide", "x^8+15", "x^8+240"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("verdict: not-equivalent"), "{s}");
    assert!(s.contains("mod 2"), "{s}");
}

#[test]
fn tz_isometric_quadratics() {
    let out = run(&["tz-isometric", "x^2-5", "x^2-13"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("verdict: not-isometric"), "{s}");

    let out = run(&["tz-isometric", "x^2-5", "y^2-y-1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("verdict: isometric"), "{s}");
}

#[test]
fn tz_isometric_rejects_complex_fields() {
    let out = run(&["tz-isometric", "x^2+1", "x^2+2"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn spectra_septic_pair() {
    let out = run(&[
        "spectra",
        "1,-1,-4,1,4,0,-3,1",
        "-1,-1,-2,-3,4,2,-3,1",
        "--bound",
        "3000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("distinguished-at 2741"), "{s}");
}

#[test]
fn spectra_identical_fields_consistent() {
    let out = run(&["spectra", "x^3+2*x+11", "x^3+2*x+11", "--bound", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("consistent"));
}

#[test]
fn scan_small_table() {
    let dir = std::env::temp_dir().join(format!("tf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("small.tbl");
    std::fs::write(
        &table,
        "a | -5,0,1 | 5\nb | -1,-1,1 | 5\nc | -13,0,1 | 13\n",
    )
    .unwrap();
    let out = run(&["scan", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("group disc=5 labels=a,b"), "{s}");
    assert!(s.contains("outcome=conjugate"), "{s}");
    assert!(s.contains("equivalent-forms-nonconjugate=0"), "{s}");
    let _ = std::fs::remove_file(&table);
}

#[test]
fn scan_missing_table_exits_2() {
    let out = run(&["scan", "/nonexistent/table.tbl"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_paper_passes() {
    let out = run(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("checks passed"), "{s}");
    assert!(!s.contains("FAIL"), "{s}");
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
