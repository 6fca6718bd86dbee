//! Exact arithmetic in the cyclotomic field Q(ζ), ζ a primitive N-th root of
//! unity with N = 4k and k odd.
//!
//! Elements are stored in the power basis ζ^0, …, ζ^{φ(N)-1}, reduced modulo
//! the N-th cyclotomic polynomial. Every sine and cosine of a multiple of π/k
//! lives here, and so does the imaginary unit i = ζ^k.

mod rational;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use thiserror::Error;

pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("cyclotomic order {0} is not of the form 4k with k odd and k >= 3")]
    InvalidOrder(u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands live in different fields (orders {0} and {1})")]
    OrderMismatch(u32, u32),
    #[error("cannot parse cyclotomic number: {0}")]
    Parse(String),
}

/// Checks that `k` is an odd integer at least 3.
pub fn validate_k(k: u32) -> Result<(), CycloError> {
    if k >= 3 && k % 2 == 1 {
        Ok(())
    } else {
        Err(CycloError::InvalidOrder(4 * k))
    }
}

/// Precomputed reduction data for Q(ζ_N).
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    degree: usize,
    /// Monic cyclotomic polynomial, lowest degree first.
    modulus: Vec<i64>,
    /// `powers[e]` is ζ^e in the power basis, as sparse (index, coefficient) pairs.
    powers: Vec<Vec<(usize, Rational)>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Both monic integer polynomials, lowest degree first.
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![0i64; num.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

impl CycloField {
    fn build(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![Rational::ZERO; degree];
        cur[0] = Rational::ONE;
        for _ in 0..order {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.clone()))
                    .collect(),
            );
            // multiply by ζ and reduce the overflowing ζ^degree
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Rational::ZERO;
            if !top.is_zero() {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c = &*c - &(&top * &Rational::from_int(modulus[i]));
                }
            }
        }
        CycloField {
            order,
            degree,
            modulus,
            powers,
        }
    }

    /// Shared field for order `N = 4k`.
    pub fn get(order: u32) -> Result<Arc<CycloField>, CycloError> {
        if order % 4 != 0 {
            return Err(CycloError::InvalidOrder(order));
        }
        validate_k(order / 4).map_err(|_| CycloError::InvalidOrder(order))?;
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("field cache poisoned");
        Ok(map
            .entry(order)
            .or_insert_with(|| Arc::new(CycloField::build(order)))
            .clone())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(N), the number of power-basis coordinates.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// ζ^e (any integer e) in the power basis.
    pub fn power(&self, e: i64) -> &[(usize, Rational)] {
        &self.powers[e.rem_euclid(self.order as i64) as usize]
    }
}

/// An exact element of Q(ζ_N).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u32,
    coords: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u32) -> Result<Self, CycloError> {
        let f = CycloField::get(order)?;
        Ok(CyclotomicNumber {
            order,
            coords: vec![Rational::ZERO; f.degree()],
        })
    }

    pub fn one(order: u32) -> Result<Self, CycloError> {
        Self::make(order, 0, Rational::ONE)
    }

    /// `c · ζ^m`, reduced.
    pub fn make(order: u32, m: i64, c: Rational) -> Result<Self, CycloError> {
        let f = CycloField::get(order)?;
        let mut coords = vec![Rational::ZERO; f.degree()];
        if !c.is_zero() {
            for (i, v) in f.power(m) {
                coords[*i] = v * &c;
            }
        }
        Ok(CyclotomicNumber { order, coords })
    }

    pub fn rational(order: u32, c: Rational) -> Result<Self, CycloError> {
        Self::make(order, 0, c)
    }

    /// The imaginary unit ζ^k.
    pub fn imaginary_unit(order: u32) -> Result<Self, CycloError> {
        Self::make(order, (order / 4) as i64, Rational::ONE)
    }

    pub fn from_coords(order: u32, coords: Vec<Rational>) -> Result<Self, CycloError> {
        let f = CycloField::get(order)?;
        if coords.len() != f.degree() {
            return Err(CycloError::Parse(format!(
                "expected {} coordinates, got {}",
                f.degree(),
                coords.len()
            )));
        }
        Ok(CyclotomicNumber { order, coords })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    fn field(&self) -> Arc<CycloField> {
        CycloField::get(self.order).expect("validated at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Rational::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), CycloError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(CycloError::OrderMismatch(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        Ok(CyclotomicNumber {
            order: self.order,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let f = self.field();
        let mut out = vec![Rational::ZERO; f.degree()];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (t, c) in f.power((i + j) as i64) {
                    out[*t] = &out[*t] + &(&ab * c);
                }
            }
        }
        Ok(CyclotomicNumber {
            order: self.order,
            coords: out,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Complex conjugation, the automorphism ζ ↦ ζ^{-1}.
    pub fn conjugate(&self) -> Self {
        let f = self.field();
        let mut out = vec![Rational::ZERO; f.degree()];
        for (j, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, c) in f.power(-(j as i64)) {
                out[*t] = &out[*t] + &(a * c);
            }
        }
        CyclotomicNumber {
            order: self.order,
            coords: out,
        }
    }

    /// Multiplicative inverse by exact Gaussian elimination on the matrix of
    /// multiplication-by-self in the power basis.
    pub fn invert(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::ZeroInverse);
        }
        let f = self.field();
        let n = f.degree();
        // column j = self · ζ^j
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let zj = CyclotomicNumber::make(self.order, j as i64, Rational::ONE)?;
            cols.push(self.try_mul(&zj)?.coords);
        }
        // augmented rows: M y = e_0
        let mut m: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rational::ONE } else { Rational::ZERO });
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !m[r][c].is_zero())
                .ok_or(CycloError::ZeroInverse)?;
            m.swap(c, p);
            let inv = m[c][c].recip().expect("nonzero pivot");
            for x in m[c].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let factor = m[r][c].clone();
                    for j in c..=n {
                        let t = &factor * &m[c][j];
                        m[r][j] = &m[r][j] - &t;
                    }
                }
            }
        }
        Ok(CyclotomicNumber {
            order: self.order,
            coords: m.into_iter().map(|mut row| row.pop().unwrap()).collect(),
        })
    }

    /// Image under the embedding ζ ↦ e^{2πi/N}.
    pub fn to_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI / self.order as f64;
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| Complex64::from_polar(c.to_f64(), theta * j as f64))
            .sum()
    }
}

/// sin or cos selector for [`trig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Sin,
    Cos,
}

/// Exact sin(jπ/k) or cos(jπ/k) in Q(ζ_{4k}).
pub fn trig(j: i64, k: u32, which: Trig) -> Result<CyclotomicNumber, CycloError> {
    let n = 4 * k;
    let plus = CyclotomicNumber::make(n, 2 * j, Rational::ONE)?;
    let minus = CyclotomicNumber::make(n, -2 * j, Rational::ONE)?;
    Ok(match which {
        Trig::Cos => plus.try_add(&minus)?.scale(&Rational::new(1, 2)),
        // (ζ^{2j} − ζ^{-2j}) / (2i) = −(i/2)(ζ^{2j} − ζ^{-2j})
        Trig::Sin => {
            let diff = plus.try_add(&-minus)?;
            diff.try_mul(&CyclotomicNumber::make(n, k as i64, Rational::new(-1, 2))?)?
        }
    })
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: Self) -> CyclotomicNumber {
        self.try_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: Self) -> CyclotomicNumber {
        self.try_add(&-rhs.clone()).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: Self) -> CyclotomicNumber {
        self.try_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Renders as `1/2*zeta^2 - 3*zeta^0`; the zero element is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{c}*zeta^{j}")?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}*zeta^{j}", c.abs())?;
            } else {
                write!(f, " + {c}*zeta^{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicNumber<{}>({})", self.order, self)
    }
}

impl CyclotomicNumber {
    /// Parses the rendering produced by `Display`. Terms are `c*zeta^e`,
    /// `zeta^e`, `zeta`, or a bare rational `c`; exponents may exceed the
    /// basis and are reduced.
    pub fn parse(order: u32, s: &str) -> Result<Self, CycloError> {
        let mut acc = CyclotomicNumber::zero(order)?;
        for (sign, term) in split_signed_terms(s).map_err(CycloError::Parse)? {
            let (coef, exp) = parse_zeta_term(term).map_err(CycloError::Parse)?;
            let coef = if sign { -coef } else { coef };
            acc = acc.try_add(&CyclotomicNumber::make(order, exp, coef)?)?;
        }
        Ok(acc)
    }
}

/// Splits `a - b + c` into (negated?, term) pairs at top-level signs.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(bool, &str)>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty expression".into());
    }
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut neg = false;
    let mut i = 0;
    // leading sign
    if bytes[0] == b'-' {
        neg = true;
        start = 1;
        i = 1;
    } else if bytes[0] == b'+' {
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => {
                let t = s[start..i].trim();
                if t.is_empty() {
                    return Err(format!("dangling sign in `{s}`"));
                }
                out.push((neg, t));
                neg = bytes[i] == b'-';
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    let t = s[start..].trim();
    if t.is_empty() {
        return Err(format!("dangling sign in `{s}`"));
    }
    out.push((neg, t));
    Ok(out)
}

fn parse_zeta_term(t: &str) -> Result<(Rational, i64), String> {
    let mut coef = Rational::ONE;
    let mut exp = 0i64;
    for factor in t.split('*').map(str::trim) {
        if let Some(rest) = factor.strip_prefix("zeta") {
            let e = match rest.strip_prefix('^') {
                Some(e) => e.trim().parse::<i64>().map_err(|e| e.to_string())?,
                None if rest.is_empty() => 1,
                None => return Err(format!("bad factor `{factor}`")),
            };
            exp += e;
        } else {
            let c = Rational::from_str(factor).map_err(|e| e.to_string())?;
            coef = &coef * &c;
        }
    }
    Ok((coef, exp))
}

impl FromStr for Trig {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sin" => Ok(Trig::Sin),
            "cos" => Ok(Trig::Cos),
            _ => Err(format!("unknown trig function `{s}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(20), vec![1, 0, -1, 0, 1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(28).len(), 13);
    }

    #[test]
    fn rejects_bad_orders() {
        for n in [4, 8, 16, 24, 13] {
            assert_eq!(
                CyclotomicNumber::make(n, 0, Rational::ONE),
                Err(CycloError::InvalidOrder(n))
            );
        }
    }

    #[test]
    fn zeta_to_the_n_is_one() {
        let one = CyclotomicNumber::one(12).unwrap();
        assert_eq!(CyclotomicNumber::make(12, 12, Rational::ONE).unwrap(), one);
        assert_eq!(
            CyclotomicNumber::make(12, 6, Rational::ONE).unwrap(),
            -one.clone()
        );
        let i = CyclotomicNumber::make(12, 3, Rational::ONE).unwrap();
        assert_eq!(&i * &i, -one);
    }

    #[test]
    fn two_cos_pi_over_three() {
        let s = &CyclotomicNumber::make(12, 2, Rational::ONE).unwrap()
            + &CyclotomicNumber::make(12, -2, Rational::ONE).unwrap();
        assert_eq!(s, CyclotomicNumber::one(12).unwrap());
    }

    #[test]
    fn exact_trig_values() {
        assert!(trig(0, 3, Trig::Sin).unwrap().is_zero());
        assert_eq!(trig(1, 3, Trig::Cos).unwrap().as_rational(), Some(&q(1, 2)));
        assert!(trig(3, 3, Trig::Sin).unwrap().is_zero());
        assert_eq!(trig(3, 3, Trig::Cos).unwrap().as_rational(), Some(&q(-1, 1)));
        let s = trig(1, 3, Trig::Sin).unwrap();
        assert_eq!((&s * &s).as_rational(), Some(&q(3, 4)));
    }

    #[test]
    fn invert_and_conjugate() {
        let half = trig(1, 3, Trig::Cos).unwrap();
        assert_eq!(half.invert().unwrap().as_rational(), Some(&q(2, 1)));
        let i = CyclotomicNumber::imaginary_unit(12).unwrap();
        assert_eq!(i.conjugate(), -i);
        assert_eq!(
            CyclotomicNumber::zero(12).unwrap().invert(),
            Err(CycloError::ZeroInverse)
        );
    }

    #[test]
    fn mixed_orders_rejected() {
        let a = CyclotomicNumber::one(12).unwrap();
        let b = CyclotomicNumber::one(20).unwrap();
        assert_eq!(a.try_add(&b), Err(CycloError::OrderMismatch(12, 20)));
    }

    #[test]
    fn render_and_parse() {
        let x = CyclotomicNumber::parse(12, "1/2*zeta^2 - 3*zeta^0").unwrap();
        assert_eq!(x.to_string(), "1/2*zeta^2 - 3*zeta^0");
        assert_eq!(CyclotomicNumber::parse(12, "zeta^12").unwrap().to_string(), "1*zeta^0");
        assert_eq!(CyclotomicNumber::zero(12).unwrap().to_string(), "0");
        assert_eq!(CyclotomicNumber::parse(12, "0").unwrap(), CyclotomicNumber::zero(12).unwrap());
        assert!(CyclotomicNumber::parse(12, "2*zeta^").is_err());
        assert!(CyclotomicNumber::parse(12, "1 +").is_err());
    }

    fn arb_elem(order: u32) -> impl Strategy<Value = CyclotomicNumber> {
        let deg = CycloField::get(order).unwrap().degree();
        proptest::collection::vec((-20i64..20, 1i64..6), deg).prop_map(move |v| {
            CyclotomicNumber::from_coords(order, v.into_iter().map(|(n, d)| q(n, d)).collect())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_elem(20), y in arb_elem(20), z in arb_elem(20)) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(x.conjugate().conjugate(), x.clone());
            prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.invert().unwrap(), CyclotomicNumber::one(20).unwrap());
            }
        }

        #[test]
        fn pythagoras_and_half_turn(j in -40i64..40, kk in prop::sample::select(vec![3u32, 5, 7, 9])) {
            let s = trig(j, kk, Trig::Sin).unwrap();
            let c = trig(j, kk, Trig::Cos).unwrap();
            prop_assert_eq!(&(&s * &s) + &(&c * &c), CyclotomicNumber::one(4 * kk).unwrap());
            prop_assert_eq!(trig(j + kk as i64, kk, Trig::Cos).unwrap(), -c);
        }

        #[test]
        fn parse_roundtrip(x in arb_elem(28)) {
            prop_assert_eq!(CyclotomicNumber::parse(28, &x.to_string()).unwrap(), x);
        }
    }
}
