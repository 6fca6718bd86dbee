//! Outcome records for identity checks.
//!
//! Structured form (JSON), one object per check:
//!
//! | field            | meaning                                                        |
//! |------------------|----------------------------------------------------------------|
//! | `name`           | check identifier, stable across runs                           |
//! | `k`              | dihedral order parameter                                       |
//! | `status`         | `exact-pass`, `fail` or `budget-exhausted`                     |
//! | `residual_terms` | nonzero terms left in LHS − RHS; `null` if never computed      |
//! | `wall_ms`        | wall-clock time of the check in milliseconds                   |
//! | `seed`           | RNG seed for sampled checks, `null` for exact ones             |
//! | `detail`         | optional: leading residual lines or numeric deviation summary  |

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::OperatorExpr;
use crate::coeff::Coefficient;

/// Residual lines kept in `detail`.
const DETAIL_LINES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    ExactPass,
    Fail,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub k: u32,
    pub status: CheckStatus,
    pub residual_terms: Option<usize>,
    pub wall_ms: f64,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn truncated(text: &str) -> String {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = lines[..lines.len().min(DETAIL_LINES)].join("\n");
    if lines.len() > DETAIL_LINES {
        out.push_str(&format!("\n... ({} more lines)", lines.len() - DETAIL_LINES));
    }
    out
}

impl VerificationReport {
    /// Report for a residual LHS − RHS that should vanish.
    pub fn from_residual(name: impl Into<String>, k: u32, residual: &OperatorExpr, wall: Duration) -> Self {
        let n = residual.term_count();
        VerificationReport {
            name: name.into(),
            k,
            status: if n == 0 { CheckStatus::ExactPass } else { CheckStatus::Fail },
            residual_terms: Some(n),
            wall_ms: millis(wall),
            seed: None,
            detail: (n > 0).then(|| truncated(&residual.to_string())),
        }
    }

    /// Runs `f`, which returns (lhs, rhs), and compares exactly.
    pub fn check(
        name: impl Into<String>,
        k: u32,
        f: impl FnOnce() -> (OperatorExpr, OperatorExpr),
    ) -> Self {
        let start = Instant::now();
        let (lhs, rhs) = f();
        let residual = &lhs - &rhs;
        Self::from_residual(name, k, &residual, start.elapsed())
    }

    /// As [`check`](Self::check) for scalar identities; the residual count is
    /// the number of numerator monomials of LHS − RHS.
    pub fn check_coefficient(
        name: impl Into<String>,
        k: u32,
        f: impl FnOnce() -> (Coefficient, Coefficient),
    ) -> Self {
        let start = Instant::now();
        let (lhs, rhs) = f();
        let residual = &lhs - &rhs;
        let n = residual.term_count();
        VerificationReport {
            name: name.into(),
            k,
            status: if n == 0 { CheckStatus::ExactPass } else { CheckStatus::Fail },
            residual_terms: Some(n),
            wall_ms: millis(start.elapsed()),
            seed: None,
            detail: (n > 0).then(|| truncated(&residual.to_string())),
        }
    }

    /// A yes/no property with `violations` counterexamples.
    pub fn from_count(
        name: impl Into<String>,
        k: u32,
        violations: usize,
        wall: Duration,
        detail: Option<String>,
    ) -> Self {
        VerificationReport {
            name: name.into(),
            k,
            status: if violations == 0 { CheckStatus::ExactPass } else { CheckStatus::Fail },
            residual_terms: Some(violations),
            wall_ms: millis(wall),
            seed: None,
            detail,
        }
    }

    pub fn budget_exhausted(name: impl Into<String>, k: u32, wall: Duration, detail: String) -> Self {
        VerificationReport {
            name: name.into(),
            k,
            status: CheckStatus::BudgetExhausted,
            residual_terms: None,
            wall_ms: millis(wall),
            seed: None,
            detail: Some(detail),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::ExactPass
    }

    /// A copy with timing zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            wall_ms: 0.0,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;

    #[test]
    fn status_tracks_residual() {
        let ring = CoeffRing::get(3).unwrap();
        let dr = OperatorExpr::d_r(&ring);
        let ok = VerificationReport::check("same", 3, || (dr.clone(), dr.clone()));
        assert_eq!(ok.status, CheckStatus::ExactPass);
        assert_eq!(ok.residual_terms, Some(0));
        assert!(ok.detail.is_none());
        let bad = VerificationReport::check("different", 3, || (dr.clone(), OperatorExpr::zero(&ring)));
        assert_eq!(bad.status, CheckStatus::Fail);
        assert_eq!(bad.residual_terms, Some(1));
        let json = serde_json::to_value(&bad).unwrap();
        assert_eq!(json["status"], "fail");
        for field in ["name", "k", "status", "residual_terms", "wall_ms", "seed"] {
            assert!(json.get(field).is_some(), "{field}");
        }
        let back: VerificationReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, bad);
    }
}
