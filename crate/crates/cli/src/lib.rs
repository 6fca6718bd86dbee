//! Verification driver: suite selection, operator dumps and report merging.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ttw_core::coeff::CoeffRing;
use ttw_core::cyclo::Rational;
use ttw_core::opalg::{CheckStatus, OperatorExpr, VerificationReport};
use ttw_core::{dunkl, oracle, ttw};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET_EXHAUSTED: i32 = 3;
}

/// Default term cap for k ≥ 5 when no budget is given.
pub const DEFAULT_BUDGET_TERMS: usize = 20_000_000;
/// Default wall-time cap (seconds) for k ≥ 5 when no budget is given.
pub const DEFAULT_BUDGET_SECONDS: u64 = 600;

/// Oracle sample sizes used by `verify`.
pub const ORACLE_POINTS: usize = 50;
pub const ORACLE_FUNCTIONS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Section2,
    Boson,
    Hamiltonians,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub k: u32,
    pub level: Level,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub budget: ttw::Budget,
}

/// Rejects k outside the supported range with a message naming the reason.
pub fn validate_k(k: i64) -> Result<u32, String> {
    if k < 3 {
        return Err(format!(
            "k = {k} is not supported: the construction requires k >= 3 (for k = 1 the model is separable)"
        ));
    }
    if k % 2 == 0 {
        return Err(format!(
            "k = {k} is not supported: only odd k is in scope (even k needs a different form of the operators)"
        ));
    }
    u32::try_from(k).map_err(|_| format!("k = {k} is too large"))
}

/// Budget for `k`: explicit caps win; k ≥ 5 falls back to the defaults.
pub fn resolve_budget(k: u32, terms: Option<usize>, seconds: Option<u64>) -> Result<ttw::Budget, String> {
    if terms == Some(0) || seconds == Some(0) {
        return Err("budget caps must be positive".into());
    }
    let defaults = k >= 5;
    Ok(ttw::Budget {
        max_terms: terms.or(defaults.then_some(DEFAULT_BUDGET_TERMS)),
        max_time: seconds.or(defaults.then_some(DEFAULT_BUDGET_SECONDS)).map(Duration::from_secs),
    })
}

fn oracle_builders(k: u32, level: Level) -> Vec<oracle::Builder> {
    use oracle::Builder;
    oracle::standard_builders(k)
        .into_iter()
        .filter(|b| match b {
            Builder::A { .. } | Builder::B { .. } => level >= Level::Boson,
            Builder::H { .. } => level >= Level::Hamiltonians,
            _ => true,
        })
        .collect()
}

/// Builds 𝓨_{2k} by both routes and records their agreement. Returns the
/// operator when the budget allowed it.
fn build_y_checked(ring: &Arc<CoeffRing>, budget: &ttw::Budget, out: &mut Vec<VerificationReport>) -> Option<OperatorExpr> {
    let k = ring.k();
    let start = Instant::now();
    let by_tree = match ttw::build_y(ring, budget) {
        Ok(y) => y,
        Err(e) => {
            out.push(VerificationReport::budget_exhausted("Y.build", k, start.elapsed(), e.to_string()));
            return None;
        }
    };
    out.push(VerificationReport::from_count(
        "Y.build",
        k,
        0,
        start.elapsed(),
        Some(format!("{} terms, {} monomials", by_tree.term_count(), by_tree.size())),
    ));
    let start = Instant::now();
    match ttw::build_y_by_subsets(ring, budget) {
        Ok(by_subsets) => {
            let residual = &by_tree - &by_subsets;
            out.push(VerificationReport::from_residual("Y.two_routes", k, &residual, start.elapsed()));
        }
        Err(e) => out.push(VerificationReport::budget_exhausted("Y.two_routes", k, start.elapsed(), e.to_string())),
    }
    Some(by_tree)
}

/// Runs the suites selected by `cfg.level` in dependency order. The report
/// order is fixed by the suite order and does not depend on scheduling.
pub fn run_verify(cfg: &RunConfig) -> Vec<VerificationReport> {
    let ring = CoeffRing::get(cfg.k).expect("k validated");
    let mut out = dunkl::check_section2(&ring);
    out.extend(dunkl::check_extended(&ring));
    if cfg.level >= Level::Boson {
        out.extend(ttw::check_boson_structure(&ring));
        out.extend(ttw::check_boson_commutators(&ring));
    }
    if cfg.level >= Level::Hamiltonians {
        out.extend(ttw::check_h_structure(&ring));
        out.extend(ttw::check_h_commutators(&ring));
        out.extend(ttw::check_h_integrals(&ring));
    }
    let y = if cfg.level >= Level::Full { build_y_checked(&ring, &cfg.budget, &mut out) } else { None };
    if let Some(y) = &y {
        out.extend(ttw::check_superintegrability(&ring, y));
    }
    if cfg.level >= Level::Hamiltonians {
        out.extend(ttw::check_reductions(&ring, y.as_ref()));
    }
    for b in oracle_builders(cfg.k, cfg.level) {
        let op = b.symbolic(&ring);
        out.push(oracle::crosscheck(&op, b, ORACLE_POINTS, ORACLE_FUNCTIONS, cfg.seed).report);
    }
    out
}

/// Failures dominate budget exhaustion.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.status == CheckStatus::Fail) {
        exit::CHECK_FAILED
    } else if reports.iter().any(|r| r.status == CheckStatus::BudgetExhausted) {
        exit::BUDGET_EXHAUSTED
    } else {
        exit::OK
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub budget_exhausted: usize,
}

pub fn totals(reports: &[VerificationReport]) -> Totals {
    let mut t = Totals::default();
    for r in reports {
        match r.status {
            CheckStatus::ExactPass => t.pass += 1,
            CheckStatus::Fail => t.fail += 1,
            CheckStatus::BudgetExhausted => t.budget_exhausted += 1,
        }
    }
    t
}

fn status_label(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::ExactPass => "PASS",
        CheckStatus::Fail => "FAIL",
        CheckStatus::BudgetExhausted => "BUDGET",
    }
}

pub fn summary_line(reports: &[VerificationReport]) -> String {
    let t = totals(reports);
    format!(
        "{} checks: {} passed, {} failed, {} budget-exhausted",
        reports.len(),
        t.pass,
        t.fail,
        t.budget_exhausted
    )
}

pub fn render_text(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let residual = r.residual_terms.map_or("-".to_string(), |n| n.to_string());
        let _ = write!(s, "{:<6} k={} {:<40} residual={:<6} {:>10.1} ms", status_label(r.status), r.k, r.name, residual, r.wall_ms);
        if let Some(seed) = r.seed {
            let _ = write!(s, " seed={seed}");
        }
        s.push('\n');
        if r.status != CheckStatus::ExactPass || r.seed.is_some() {
            if let Some(d) = &r.detail {
                for line in d.lines() {
                    let _ = writeln!(s, "       {line}");
                }
            }
        }
    }
    s.push_str(&summary_line(reports));
    s.push('\n');
    s
}

pub fn render_structured(reports: &[VerificationReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Text => render_text(reports),
        Format::Structured => render_structured(reports),
    }
}

/// Parses `a=…,b=…,omega=…` (any subset, rational values).
pub fn parse_numeric(s: &str) -> Result<[Option<Rational>; 3], String> {
    let mut out: [Option<Rational>; 3] = [None, None, None];
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected name=value, got {part:?}"))?;
        let slot = match key.trim() {
            "a" => 0,
            "b" => 1,
            "omega" | "w" => 2,
            other => return Err(format!("unknown parameter {other:?}; expected a, b or omega")),
        };
        let v: Rational = value.parse().map_err(|_| format!("{value:?} is not a rational number"))?;
        if slot == 2 && v == Rational::ZERO {
            return Err("omega must be nonzero".into());
        }
        out[slot] = Some(v);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DumpError {
    UnknownId(String),
    Budget(ttw::BudgetExceeded),
}

impl std::fmt::Display for DumpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DumpError::UnknownId(id) => write!(
                f,
                "unknown operator id {id:?}; expected Dr, Dphi, A_i, A_i+, B_i, B_i+, H_i, Hext, Xext, Y, H_proj, X_proj or Y_proj"
            ),
            DumpError::Budget(e) => e.fmt(f),
        }
    }
}

/// Operator for a `dump` id. A and B are the √(2ω)-rescaled forms.
pub fn build_operator(ring: &Arc<CoeffRing>, id: &str, budget: &ttw::Budget) -> Result<OperatorExpr, DumpError> {
    let indexed = |prefix: &str| -> Option<(i64, bool)> {
        let rest = id.strip_prefix(prefix)?;
        let (num, dagger) = match rest.strip_suffix('+') {
            Some(n) => (n, true),
            None => (rest, false),
        };
        num.parse().ok().map(|i| (i, dagger))
    };
    let y = || ttw::build_y(ring, budget).map_err(DumpError::Budget);
    Ok(match id {
        "Dr" => dunkl::build_dr(ring),
        "Dphi" => dunkl::build_dphi(ring),
        "Hext" => dunkl::build_extended_h(ring),
        "Xext" => dunkl::build_extended_x(ring),
        "H_proj" => dunkl::build_extended_h(ring).project_identity(),
        "X_proj" => dunkl::build_extended_x(ring).project_identity(),
        "Y" => y()?,
        "Y_proj" => y()?.project_identity(),
        _ => {
            if let Some((i, dagger)) = indexed("A_") {
                ttw::build_a(ring, i, dagger)
            } else if let Some((i, dagger)) = indexed("B_") {
                ttw::build_b(ring, i, dagger)
            } else if let Some((i, false)) = indexed("H_") {
                ttw::build_h(ring, i)
            } else {
                return Err(DumpError::UnknownId(id.to_string()));
            }
        }
    })
}

/// Canonical text of a dumped operator with a short comment header.
pub fn dump_text(k: u32, id: &str, op: &OperatorExpr, numeric: Option<&str>) -> String {
    let mut s = format!("# {id} k={k} terms={} order={}\n", op.term_count(), op.max_order());
    if id.starts_with("A_") || id.starts_with("B_") {
        s.push_str("# scaled by sqrt(2*omega)\n");
    }
    if let Some(n) = numeric {
        let _ = writeln!(s, "# specialized at {n}");
    }
    s.push_str(&op.to_string());
    s
}

/// Reads structured reports from each path, in order.
pub fn load_reports(paths: &[PathBuf]) -> Result<Vec<VerificationReport>, String> {
    let mut out = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        let reports: Vec<VerificationReport> =
            serde_json::from_str(&text).map_err(|e| format!("{}: malformed report: {e}", p.display()))?;
        out.extend(reports);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_validation() {
        assert!(validate_k(1).unwrap_err().contains("k >= 3"));
        assert!(validate_k(4).unwrap_err().contains("odd"));
        assert_eq!(validate_k(7), Ok(7));
    }

    #[test]
    fn budget_defaults() {
        assert!(resolve_budget(3, None, None).unwrap().max_terms.is_none());
        assert_eq!(resolve_budget(5, None, None).unwrap().max_terms, Some(DEFAULT_BUDGET_TERMS));
        assert_eq!(resolve_budget(5, Some(10), None).unwrap().max_terms, Some(10));
        assert!(resolve_budget(3, Some(0), None).is_err());
    }

    #[test]
    fn numeric_parsing() {
        let [a, b, w] = parse_numeric("a=0, b=1/2").unwrap();
        assert_eq!(a, Some(Rational::ZERO));
        assert_eq!(b, Some(Rational::new(1, 2)));
        assert!(w.is_none());
        assert!(parse_numeric("c=1").is_err());
        assert!(parse_numeric("omega=0").is_err());
    }

    #[test]
    fn operator_ids() {
        let ring = CoeffRing::get(3).unwrap();
        let b = ttw::Budget::unlimited();
        for id in ["Dr", "Dphi", "A_0", "A_2+", "B_1", "B_1+", "H_0", "Hext", "Xext", "H_proj", "X_proj"] {
            assert!(build_operator(&ring, id, &b).is_ok(), "{id}");
        }
        assert!(build_operator(&ring, "Q", &b).is_err());
        assert!(build_operator(&ring, "H_1+", &b).is_err());
    }
}
