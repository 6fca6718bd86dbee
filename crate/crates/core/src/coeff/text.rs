//! Text form of coefficients.
//!
//! ```text
//! coefficient := numerator | "(" numerator ") / " factors
//! numerator   := term (("+" | "-") term)*  |  "0"
//! term        := rational ("*" atom)*      (atoms: zeta^e r^e u^e a^e b^e w^e)
//! factors     := factor ("*" factor)*
//! factor      := "(zeta^" E "*u^2 + 1)" ["^" e]   (E = 2m, the pole factor P_m)
//! ```
//!
//! Exponents are integers (negative allowed for zeta, r, u and w); an atom
//! without `^e` has exponent 1. `Display` output parses back to the same
//! coefficient.

use std::fmt;
use std::sync::Arc;

use super::poly::{self, Exps};
use super::{CoeffError, CoeffRing, Coefficient};
use crate::cyclo::{split_signed_terms, Rational};

pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, p: &poly::Poly) -> fmt::Result {
    if p.is_empty() {
        return write!(f, "0");
    }
    for (idx, (m, c)) in p.iter().enumerate() {
        let e = poly::unpack(*m);
        if idx == 0 {
            write!(f, "{c}")?;
        } else if c.is_negative() {
            write!(f, " - {}", c.abs())?;
        } else {
            write!(f, " + {c}")?;
        }
        if e.z != 0 {
            write!(f, "*zeta^{}", e.z)?;
        }
        for (name, v) in [("r", e.r), ("u", e.u), ("a", e.a as i32), ("b", e.b as i32), ("w", e.w)] {
            match v {
                0 => {}
                1 => write!(f, "*{name}")?,
                _ => write!(f, "*{name}^{v}")?,
            }
        }
    }
    Ok(())
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.iter().all(|&e| e == 0) {
            return write_poly(f, &self.num);
        }
        write!(f, "(")?;
        write_poly(f, &self.num)?;
        write!(f, ") / ")?;
        let mut first = true;
        for (m, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "(zeta^{}*u^2 + 1)", 2 * m)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn parse_exp(s: Option<&str>) -> Result<i64, String> {
    match s {
        None => Ok(1),
        Some(e) => e.trim().parse::<i64>().map_err(|_| format!("bad exponent `{e}`")),
    }
}

fn parse_numerator(ring: &Arc<CoeffRing>, s: &str) -> Result<Coefficient, String> {
    let mut parts = Vec::new();
    for (negated, term) in split_signed_terms(s)? {
        let mut c = Rational::ONE;
        let mut e = Exps::default();
        let mut z: i64 = 0;
        for atom in term.split('*').map(str::trim) {
            let (name, exp) = match atom.split_once('^') {
                Some((n, x)) => (n.trim(), Some(x)),
                None => (atom, None),
            };
            match name {
                "zeta" => z += parse_exp(exp)?,
                "r" => e.r += parse_exp(exp)? as i32,
                "u" => e.u += parse_exp(exp)? as i32,
                "w" => e.w += parse_exp(exp)? as i32,
                "a" | "b" => {
                    let x = parse_exp(exp)?;
                    let x = u32::try_from(x).map_err(|_| format!("negative power of {name}"))?;
                    if name == "a" {
                        e.a += x;
                    } else {
                        e.b += x;
                    }
                }
                _ => {
                    if exp.is_some() {
                        return Err(format!("unknown atom `{atom}`"));
                    }
                    let v: Rational = name.parse().map_err(|_| format!("unknown atom `{atom}`"))?;
                    c = &c * &v;
                }
            }
        }
        if negated {
            c = -c;
        }
        parts.push(Coefficient::monomial(ring, Rational::ONE, e).scale_zeta(z, &c));
    }
    Ok(Coefficient::sum(ring, &parts))
}

fn parse_factor(ring: &Arc<CoeffRing>, s: &str) -> Result<(usize, u16), String> {
    let s = s.trim();
    let (body, mult) = match s.rfind(")^") {
        Some(pos) => (
            &s[..=pos],
            s[pos + 2..]
                .trim()
                .parse::<u16>()
                .map_err(|_| format!("bad multiplicity in `{s}`"))?,
        ),
        None => (s, 1),
    };
    let inner = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| format!("pole factor must be parenthesized: `{s}`"))?;
    let rest = inner
        .trim()
        .strip_prefix("zeta^")
        .ok_or_else(|| format!("malformed pole factor `{s}`"))?;
    let (e, tail) = rest
        .split_once('*')
        .ok_or_else(|| format!("malformed pole factor `{s}`"))?;
    if tail.replace(' ', "") != "u^2+1" {
        return Err(format!("malformed pole factor `{s}`"));
    }
    let e: i64 = e.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
    if e.rem_euclid(2) != 0 {
        return Err(format!("`{s}` is not a pole factor (odd zeta exponent)"));
    }
    let m = (e / 2).rem_euclid(ring.pole_count() as i64) as usize;
    Ok((m, mult))
}

/// Splits on `*` outside parentheses.
fn split_top_level_products(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl Coefficient {
    pub fn parse(ring: &Arc<CoeffRing>, s: &str) -> Result<Coefficient, CoeffError> {
        let s = s.trim();
        let Some((num, den)) = s.split_once(" / ") else {
            return parse_numerator(ring, s).map_err(CoeffError::Parse);
        };
        let num = num.trim();
        let num = num
            .strip_prefix('(')
            .and_then(|n| n.strip_suffix(')'))
            .ok_or_else(|| CoeffError::Parse("numerator must be parenthesized".into()))?;
        let num = parse_numerator(ring, num).map_err(CoeffError::Parse)?;
        let mut exps = vec![0u16; ring.pole_count()];
        for factor in split_top_level_products(den) {
            let (m, e) = parse_factor(ring, factor).map_err(CoeffError::Parse)?;
            exps[m] += e;
        }
        Ok(Coefficient::from_parts(ring.clone(), num.num, exps))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{TrigFn, Var};
    use super::*;

    #[test]
    fn renders_and_parses() {
        let ring = CoeffRing::get(3).unwrap();
        let tan = Coefficient::trig_fn(&ring, TrigFn::Tan, 1);
        let text = tan.to_string();
        assert!(text.contains(" / (zeta^4*u^2 + 1)"), "{text}");
        assert_eq!(Coefficient::parse(&ring, &text).unwrap(), tan);
        let x = &(&Coefficient::var(&ring, Var::A) * &Coefficient::var_pow(&ring, Var::R, -2))
            + &Coefficient::trig_fn(&ring, TrigFn::Csc2, 2);
        assert_eq!(Coefficient::parse(&ring, &x.to_string()).unwrap(), x);
        assert_eq!(
            Coefficient::parse(&ring, "0").unwrap(),
            Coefficient::zero(&ring)
        );
        assert_eq!(
            Coefficient::parse(&ring, "-1*r^-1 + 2*w").unwrap().to_string(),
            "-1*r^-1 + 2*w"
        );
    }

    #[test]
    fn rejects_garbage() {
        let ring = CoeffRing::get(3).unwrap();
        for bad in ["x", "(1) / (zeta^1*u^2 + 1)", "1 / (zeta^0*u^2 + 1)", "2*a^-1", "(1) / (u+1)"] {
            assert!(Coefficient::parse(&ring, bad).is_err(), "{bad}");
        }
    }
}
