//! End-to-end runs of the `ttw` binary.

use std::path::Path;
use std::process::{Command, Output};

use ttw_core::coeff::CoeffRing;
use ttw_core::dunkl;
use ttw_core::opalg::{CheckStatus, OperatorExpr, VerificationReport};

fn ttw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn rejects_k_below_three() {
    for k in ["1", "-3", "0"] {
        let o = ttw(&["verify", "--k", k]);
        assert_eq!(o.status.code(), Some(2), "k = {k}");
        assert!(stderr(&o).contains("k >= 3"), "{}", stderr(&o));
    }
}

#[test]
fn rejects_even_k() {
    let o = ttw(&["verify", "--k", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("odd"), "{}", stderr(&o));
}

#[test]
fn rejects_bad_flags() {
    assert_eq!(ttw(&["verify", "--k", "3", "--level", "everything"]).status.code(), Some(2));
    assert_eq!(ttw(&["verify", "--k", "3", "--budget-terms", "0"]).status.code(), Some(2));
    assert_eq!(ttw(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn section2_level_passes_and_reports_text() {
    let o = ttw(&["verify", "--k", "3", "--level", "section2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("commutator.Dr_Dphi"));
    assert!(out.contains("oracle.Dphi"));
    assert!(out.lines().last().unwrap().contains("0 failed"));
}

#[test]
fn structured_report_round_trips_through_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("boson.json");
    let o = ttw(&[
        "verify", "--k", "3", "--level", "boson", "--format", "structured", "--out", path.to_str().unwrap(), "--seed", "9",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let reports: Vec<VerificationReport> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(reports.iter().all(|r| r.status == CheckStatus::ExactPass));
    assert!(reports.iter().filter(|r| r.name.starts_with("oracle.")).all(|r| r.seed == Some(9)));
    assert!(reports.iter().filter(|r| !r.name.starts_with("oracle.")).all(|r| r.seed.is_none()));
    let raw: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for field in ["name", "k", "status", "residual_terms", "wall_ms", "seed"] {
        assert!(raw[0].get(field).is_some(), "missing {field}");
    }
    let merged = ttw(&["report", path.to_str().unwrap()]);
    assert_eq!(merged.status.code(), Some(0));
    assert!(stdout(&merged).contains(&format!("{} checks: {} passed, 0 failed", reports.len(), reports.len())));
}

fn write_reports(path: &Path, reports: &[VerificationReport]) {
    std::fs::write(path, serde_json::to_string(reports).unwrap()).unwrap();
}

#[test]
fn report_merging() {
    let dir = tempfile::tempdir().unwrap();
    let empty = ttw(&["report"]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(stdout(&empty).contains("0 checks"));

    let ok = VerificationReport::from_count("a", 3, 0, Default::default(), None);
    let bad = VerificationReport::from_count("b", 3, 2, Default::default(), None);
    let budget = VerificationReport::budget_exhausted("c", 5, Default::default(), "cap".into());
    let (p1, p2, p3) = (dir.path().join("1.json"), dir.path().join("2.json"), dir.path().join("3.json"));
    write_reports(&p1, &[ok.clone()]);
    write_reports(&p2, &[ok, bad]);
    write_reports(&p3, &[budget]);
    let s = |p: &Path| p.to_str().unwrap().to_string();
    assert_eq!(ttw(&["report", &s(&p1)]).status.code(), Some(0));
    let failed = ttw(&["report", &s(&p1), &s(&p2)]);
    assert_eq!(failed.status.code(), Some(1));
    assert!(stdout(&failed).contains("3 checks: 2 passed, 1 failed"));
    assert_eq!(ttw(&["report", &s(&p1), &s(&p3)]).status.code(), Some(3));

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not a report").unwrap();
    let o = ttw(&["report", &s(&junk)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("malformed"));
}

fn parse_dump(k: u32, text: &str) -> OperatorExpr {
    OperatorExpr::parse(&CoeffRing::get(k).unwrap(), text).unwrap()
}

#[test]
fn dump_extended_hamiltonian_at_zero_coupling_is_the_plain_oscillator() {
    let o = ttw(&["dump", "Hext", "--k", "3", "--numeric", "a=0,b=0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ring = CoeffRing::get(3).unwrap();
    assert_eq!(parse_dump(3, &stdout(&o)), dunkl::plain_oscillator(&ring));
}

#[test]
fn dump_projected_hamiltonian() {
    let o = ttw(&["dump", "H_proj", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let ring = CoeffRing::get(3).unwrap();
    assert_eq!(parse_dump(3, &stdout(&o)), dunkl::target_h(&ring));
    assert!(stdout(&o).starts_with("# H_proj k=3"));
}

#[test]
fn dump_projected_y_is_stable_and_of_order_six() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.txt");
    let o = ttw(&["dump", "Y_proj", "--k", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read_to_string(&path).unwrap();
    assert!(first.lines().next().unwrap().contains("order=6"));
    assert_eq!(parse_dump(3, &first).max_order(), 6);
    let again = ttw(&["dump", "Y_proj", "--k", "3"]);
    assert_eq!(stdout(&again), first);
}

#[test]
fn dump_rejects_unknown_ids_and_reports_budget() {
    let o = ttw(&["dump", "Z", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown operator id"));
    let o = ttw(&["dump", "Y", "--k", "3", "--budget-terms", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn budget_exhaustion_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k5.json");
    let o = ttw(&[
        "verify", "--k", "5", "--level", "full", "--budget-terms", "2000", "--format", "structured", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let reports: Vec<VerificationReport> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let y = reports.iter().find(|r| r.name == "Y.build").unwrap();
    assert_eq!(y.status, CheckStatus::BudgetExhausted);
    assert_eq!(y.residual_terms, None);
    // everything that ran is still reported and passes
    assert!(reports.iter().filter(|r| r.name != "Y.build").all(|r| r.passed()));
    assert_eq!(reports.iter().filter(|r| r.name.starts_with("H.integral.")).count(), 5);
}
