//! Text form of operators: one term per line,
//!
//! ```text
//! <coeff> * Dr^p * Dphi^q * R^i * I^e
//! ```
//!
//! in key order, with `<coeff>` in the coefficient grammar. The zero operator
//! is the single line `0`. Blank lines and lines starting with `#` are
//! ignored by the parser.

use std::fmt;
use std::sync::Arc;

use super::{GroupElement, OpError, OperatorExpr, TermKey};
use crate::coeff::{CoeffRing, Coefficient};

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (key, c) in &self.terms {
            writeln!(
                f,
                "{c} * Dr^{} * Dphi^{} * R^{} * I^{}",
                key.p,
                key.q,
                key.g.rot(),
                key.g.refl() as u8
            )?;
        }
        Ok(())
    }
}

fn parse_power(s: &str, name: &str) -> Result<u32, String> {
    s.trim()
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('^'))
        .and_then(|e| e.trim().parse().ok())
        .ok_or_else(|| format!("expected `{name}^<n>`, found `{s}`"))
}

impl OperatorExpr {
    pub fn parse(ring: &Arc<CoeffRing>, s: &str) -> Result<OperatorExpr, OpError> {
        let k = ring.k();
        let mut terms = Vec::new();
        for line in s.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') || line == "0" {
                continue;
            }
            let parts: Vec<&str> = line.rsplitn(5, " * ").collect();
            if parts.len() != 5 {
                return Err(OpError::Parse(format!("malformed term line `{line}`")));
            }
            let e = parse_power(parts[0], "I").map_err(OpError::Parse)?;
            let i = parse_power(parts[1], "R").map_err(OpError::Parse)?;
            let q = parse_power(parts[2], "Dphi").map_err(OpError::Parse)?;
            let p = parse_power(parts[3], "Dr").map_err(OpError::Parse)?;
            if e > 1 || i >= 2 * k {
                return Err(OpError::Parse(format!("group part out of range in `{line}`")));
            }
            let c = Coefficient::parse(ring, parts[4])?;
            terms.push((TermKey::new(p, q, GroupElement::new(i as i64, e == 1, k)), c));
        }
        Ok(OperatorExpr::from_terms(ring, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{TrigFn, Var};

    #[test]
    fn round_trip() {
        let ring = CoeffRing::get(3).unwrap();
        let x = &(&OperatorExpr::d_r(&ring) * &OperatorExpr::var(&ring, Var::A))
            + &OperatorExpr::term(
                Coefficient::trig_fn(&ring, TrigFn::Tan, 2),
                0,
                1,
                GroupElement::new(4, true, 3),
            );
        let text = x.to_string();
        assert!(text.contains("* Dr^0 * Dphi^1 * R^4 * I^1"), "{text}");
        assert_eq!(OperatorExpr::parse(&ring, &text).unwrap(), x);
        let zero = OperatorExpr::zero(&ring);
        assert_eq!(zero.to_string(), "0\n");
        assert_eq!(OperatorExpr::parse(&ring, "0\n").unwrap(), zero);
    }

    #[test]
    fn rejects_bad_lines() {
        let ring = CoeffRing::get(3).unwrap();
        for bad in ["1 * Dr^0 * Dphi^0 * R^6 * I^0", "1 * Dr^0 * R^0 * I^0", "1 * Dr^x * Dphi^0 * R^0 * I^0"] {
            assert!(OperatorExpr::parse(&ring, bad).is_err(), "{bad}");
        }
    }
}
