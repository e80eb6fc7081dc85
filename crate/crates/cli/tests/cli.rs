//! End-to-end runs of the `gpbw` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use graded_pbw::pbw::PbwContext;
use graded_pbw_cli::chart_file;

fn manifest_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn chart(name: &str) -> String {
    manifest_path(&format!("charts/{name}.toml")).display().to_string()
}

fn gpbw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpbw"))
        .args(args)
        .output()
        .expect("run gpbw")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Runs and expects success, returning stdout.
fn ok(args: &[&str]) -> String {
    let o = gpbw(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(manifest_path(&format!("tests/golden/{name}"))).unwrap()
}

#[test]
fn pbw_examples() {
    let e1 = chart("e1");
    assert_eq!(ok(&["pbw", "--chart", &e1, "s[x]^2"]), "d[x]^2 - 1*x*d[x]\n");
    assert_eq!(ok(&["pbw", "--chart", &e1, "--direction", "inv", "d[x]^2"]), "s[x]^2 + 1*x*s[x]\n");
    assert_eq!(ok(&["pbw", "--chart", &e1, "1"]), "1\n");
    assert_eq!(ok(&["pbw", "--chart", &chart("mixed"), "1"]), "1\n");
}

#[test]
fn pbw_round_trips_through_the_command_line() {
    let c = chart("two_odd");
    let input = "x*s[b]*s[a]*s[x] - 1/2*s[x]^2";
    let fwd = ok(&["pbw", "--chart", &c, input]);
    let back = ok(&["pbw", "--chart", &c, "--direction", "inv", fwd.trim()]);
    assert_eq!(back, "1*x*s[b]*s[a]*s[x] - 1/2*s[x]^2\n");
    let again = ok(&["pbw", "--chart", &c, back.trim()]);
    assert_eq!(again, fwd);
}

#[test]
fn leading_minus_is_an_expression() {
    let out = ok(&["pbw", "--chart", &chart("e1"), "-s[x]"]);
    assert_eq!(out, "-d[x]\n");
}

#[test]
fn parse_errors_exit_two_with_a_column() {
    let o = gpbw(&["pbw", "--chart", &chart("e1"), "s[x] + * x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 8"), "{}", stderr(&o));
    let o = gpbw(&["pbw", "--chart", &chart("e1"), "s[q]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gpbw(&["tau", "--chart", &chart("e1"), "x*d[x]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn truncation_overflow_exits_three() {
    let e1 = chart("e1");
    assert_eq!(gpbw(&["pbw", "--chart", &e1, "s[x]^5"]).status.code(), Some(3));
    assert_eq!(gpbw(&["pbw", "--chart", &e1, "--direction", "inv", "d[x]^5"]).status.code(), Some(3));
    // a larger weight bound lifts the limit
    let out = ok(&["pbw", "--chart", &e1, "--max-weight", "5", "s[x]^5"]);
    assert!(out.starts_with("d[x]^5 - 10*x*d[x]^4"), "{out}");
}

#[test]
fn fedosov_on_flat_charts_is_empty() {
    for c in ["flat", "e1"] {
        assert_eq!(ok(&["fedosov", "--chart", &chart(c)]), "D2_RESIDUAL 0\n");
    }
}

#[test]
fn fedosov_golden_files() {
    assert_eq!(ok(&["fedosov", "--chart", &chart("c2")]), golden("c2_fedosov.txt"));
    assert_eq!(ok(&["fedosov", "--chart", &chart("mixed")]), golden("mixed_fedosov.txt"));
}

#[test]
fn fedosov_records_are_minus_xi() {
    for name in ["c2", "mixed", "two_odd", "graded3"] {
        let conn = chart_file::load(&manifest_path(&format!("charts/{name}.toml")), None).unwrap();
        let q = conn.chart().max_sym_weight();
        let ctx = PbwContext::with_max_weight(&conn, q + 1).unwrap();
        let mut want = String::new();
        for r in ctx.xi_form(q).unwrap().neg().records().unwrap() {
            want.push_str(&format!("{r}\n"));
        }
        want.push_str("D2_RESIDUAL 0\n");
        assert!(want.starts_with("A i="), "{name}: no correction");
        assert_eq!(ok(&["fedosov", "--chart", &chart(name)]), want, "{name}");
    }
}

#[test]
fn fedosov_text_output() {
    let out = ok(&["fedosov", "--chart", &chart("c2"), "--output", "text"]);
    assert!(out.starts_with("A = (1/3*y[x1]^2*dx[x2]"), "{out}");
    assert!(out.ends_with("D2_RESIDUAL 0\n"));
    assert_eq!(ok(&["fedosov", "--chart", &chart("flat"), "--output", "text"]), "A = 0\nD2_RESIDUAL 0\n");
}

#[test]
fn load_and_precondition_errors() {
    let o = gpbw(&["fedosov", "--chart", &chart("torsionful")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("torsion-free"));
    let o = gpbw(&["fedosov", "--chart", &chart("bad_degree")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degree 0"), "{}", stderr(&o));
    assert_eq!(gpbw(&["fedosov", "--chart", &chart("missing")]).status.code(), Some(2));
    assert_eq!(gpbw(&["tau", "--chart", &chart("torsionful"), "x1"]).status.code(), Some(4));
    assert_eq!(gpbw(&["verify", "--chart", &chart("bad_degree")]).status.code(), Some(2));
    assert_eq!(gpbw(&["verify", "--chart", &chart("e1"), "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn tau_examples() {
    let flat = chart("flat");
    for route in ["pbw", "series"] {
        assert_eq!(ok(&["tau", "--chart", &flat, "--route", route, "x^2"]), "x^2 + 2*x*y[x] + y[x]^2\n");
        assert_eq!(ok(&["tau", "--chart", &flat, "--route", route, "5"]), "5\n");
    }
    let e1 = chart("e1");
    let a = ok(&["tau", "--chart", &e1, "--route", "pbw", "x^2"]);
    let b = ok(&["tau", "--chart", &e1, "--route", "series", "x^2"]);
    assert_eq!(a, b);
    assert_eq!(a, golden("e1_tau_x2.txt"));
    assert!(a.starts_with("x^2 + 2*x*y[x] + y[x]^2 - x^2*y[x]^2 - "), "{a}");
}

#[test]
fn tau_routes_agree_on_graded_charts() {
    for (name, f) in [("mixed", "x^2*t + 3*t"), ("two_odd", "x*a*b - a"), ("graded3", "z + x*t"), ("c2", "x1*x2^2")] {
        let c = chart(name);
        let a = ok(&["tau", "--chart", &c, "--route", "pbw", f]);
        let b = ok(&["tau", "--chart", &c, "--route", "series", f]);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn verify_reports() {
    let out = ok(&["verify", "--chart", &chart("graded3"), "--suite", "coalgebra"]);
    assert!(out.starts_with("THEOREM coalgebra_morphism PASS"), "{out}");
    assert!(out.ends_with("SUMMARY pass=2 fail=0 skip=0\n"), "{out}");

    let out = ok(&["verify", "--chart", &chart("torsionful"), "--suite", "expansion"]);
    assert!(out.contains("THEOREM two_term_expansions SKIP"), "{out}");
    assert!(out.contains("THEOREM lightning_flatness SKIP"), "{out}");

    let out = ok(&["verify", "--chart", &chart("torsionful"), "--suite", "resolution"]);
    assert_eq!(out, "THEOREM resolution SKIP requires a torsion-free connection\nSUMMARY pass=0 fail=0 skip=1\n");
}

#[test]
fn verify_all_is_deterministic() {
    let c = chart("graded3");
    let first = ok(&["verify", "--chart", &c]);
    assert_eq!(first, golden("graded3_verify.txt"));
    assert_eq!(ok(&["verify", "--chart", &c]), first);
    assert!(!first.contains("FAIL"));
}

#[test]
fn verify_every_chart() {
    for name in ["flat", "e1", "c2", "mixed", "two_odd", "torsionful"] {
        let out = ok(&["verify", "--chart", &chart(name), "--cases", "8", "--seed", "7"]);
        assert!(out.contains(" fail=0 "), "{name}: {out}");
    }
}
