//! The commutative coefficient ring.
//!
//! A [`Coefficient`] is a rational trigonometric function of (r, φ) with
//! polynomial dependence on the formal parameters a, b and Laurent dependence
//! on ω. Angles enter through u = e^{iφ}. The numerator is a Laurent
//! polynomial in r, u, ω (polynomial in a, b) with coefficients in Q(ζ_{4k});
//! the denominator is a product of pole factors
//!
//! ```text
//! P_m = ζ^{2m} u² + 1,   m = 0, …, 2k-1.
//! ```
//!
//! P_{2j} vanishes where cos(φ + jπ/k) does and P_{2j+k} where sin(φ + jπ/k)
//! does (P_{2j+k} = −(ζ^{4j}u² − 1)), so every wall of the dihedral group is
//! covered, and the set is permuted by rotations, reflection and complex
//! conjugation. A coefficient is kept normalized: no pole factor present in
//! the denominator divides the numerator. The normalized form is unique.

mod poly;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use thiserror::Error;

use crate::cyclo::{validate_k, CycloError, CycloField, CyclotomicNumber, Rational};

pub use poly::Exps;
pub(crate) use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("k = {0} is not an odd integer >= 3")]
    InvalidK(u32),
    #[error("coefficients over different rings (k = {0} and k = {1})")]
    MixedOrder(u32, u32),
    #[error("evaluation point is within the pole margin ({detail})")]
    NearPole { detail: String },
    #[error("cannot parse coefficient: {0}")]
    Parse(String),
    #[error("specialized value for {0} must be nonzero to cancel a negative power")]
    ZeroSpecialization(&'static str),
}

impl From<CycloError> for CoeffError {
    fn from(e: CycloError) -> Self {
        match e {
            CycloError::InvalidOrder(n) => CoeffError::InvalidK(n / 4),
            other => CoeffError::Parse(other.to_string()),
        }
    }
}

/// Shared context for coefficients with a fixed k.
#[derive(Debug)]
pub struct CoeffRing {
    k: u32,
    field: Arc<CycloField>,
}

impl CoeffRing {
    pub fn get(k: u32) -> Result<Arc<CoeffRing>, CoeffError> {
        validate_k(k).map_err(|_| CoeffError::InvalidK(k))?;
        static RINGS: OnceLock<Mutex<HashMap<u32, Arc<CoeffRing>>>> = OnceLock::new();
        let cache = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("ring cache poisoned");
        if let Some(r) = map.get(&k) {
            return Ok(r.clone());
        }
        let ring = Arc::new(CoeffRing {
            k,
            field: CycloField::get(4 * k)?,
        });
        map.insert(k, ring.clone());
        Ok(ring)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// Number of distinct pole factors, 2k.
    pub fn pole_count(&self) -> usize {
        2 * self.k as usize
    }

    fn order(&self) -> i64 {
        4 * self.k as i64
    }
}

/// Generators of the coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    R,
    U,
    A,
    B,
    Omega,
}

/// Trigonometric functions of a shifted angle φ + jπ/k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigFn {
    Sin,
    Cos,
    Tan,
    Cot,
    Sec2,
    Csc2,
}

/// Substitutions induced by the dihedral generators and by conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    /// φ ↦ φ + jπ/k, i.e. u ↦ ζ^{2j} u.
    ShiftR(i64),
    /// φ ↦ −φ, i.e. u ↦ u^{-1}.
    ReflectI,
    /// Complex conjugation: u ↦ u^{-1}, ζ ↦ ζ^{-1}; r, a, b, ω are real.
    Conjugate,
}

/// Numeric values used by [`Coefficient::eval_complex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub r: f64,
    pub phi: f64,
    pub a: f64,
    pub b: f64,
    pub omega: f64,
}

#[derive(Clone)]
pub struct Coefficient {
    ring: Arc<CoeffRing>,
    num: Poly,
    den: Vec<u16>,
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        self.ring.k == other.ring.k && self.den == other.den && self.num == other.num
    }
}

impl Eq for Coefficient {}

impl Coefficient {
    pub(crate) fn from_parts(ring: Arc<CoeffRing>, num: Poly, den: Vec<u16>) -> Self {
        let mut c = Coefficient { ring, num, den };
        c.normalize();
        c
    }

    pub fn zero(ring: &Arc<CoeffRing>) -> Self {
        Coefficient {
            ring: ring.clone(),
            num: Vec::new(),
            den: vec![0; ring.pole_count()],
        }
    }

    pub fn one(ring: &Arc<CoeffRing>) -> Self {
        Self::rational(ring, Rational::ONE)
    }

    pub fn rational(ring: &Arc<CoeffRing>, c: Rational) -> Self {
        Self::monomial(ring, c, Exps::default())
    }

    pub fn integer(ring: &Arc<CoeffRing>, n: i64) -> Self {
        Self::rational(ring, Rational::from_int(n))
    }

    /// `c · ζ^z u^u r^r ω^w a^a b^b`; the ζ exponent may be any value below 4k.
    pub fn monomial(ring: &Arc<CoeffRing>, c: Rational, e: Exps) -> Self {
        let mut num = Vec::new();
        if !c.is_zero() {
            let z = e.z as i64;
            let base = poly::pack(Exps { z: 0, ..e });
            num = poly::mul_monomial(&ring.field, &vec![(base, Rational::ONE)], z, 0, &c);
        }
        Coefficient {
            ring: ring.clone(),
            num,
            den: vec![0; ring.pole_count()],
        }
    }

    pub fn constant(ring: &Arc<CoeffRing>, c: &CyclotomicNumber) -> Result<Self, CoeffError> {
        if c.order() != 4 * ring.k {
            return Err(CoeffError::MixedOrder(ring.k, c.order() / 4));
        }
        let num = c
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(z, v)| (poly::pack(Exps { z: z as u32, ..Exps::default() }), v.clone()))
            .collect();
        Ok(Coefficient {
            ring: ring.clone(),
            num,
            den: vec![0; ring.pole_count()],
        })
    }

    /// `c · ζ^z` for any integer z.
    pub fn zeta_power(ring: &Arc<CoeffRing>, z: i64, c: Rational) -> Self {
        Self::monomial(
            ring,
            c,
            Exps {
                z: z.rem_euclid(ring.order()) as u32,
                ..Exps::default()
            },
        )
    }

    /// The imaginary unit i = ζ^k.
    pub fn imaginary_unit(ring: &Arc<CoeffRing>) -> Self {
        Self::zeta_power(ring, ring.k as i64, Rational::ONE)
    }

    pub fn var(ring: &Arc<CoeffRing>, v: Var) -> Self {
        Self::var_pow(ring, v, 1)
    }

    /// A generator raised to an integer power (negative only for r, u, ω).
    pub fn var_pow(ring: &Arc<CoeffRing>, v: Var, e: i32) -> Self {
        let mut x = Exps::default();
        match v {
            Var::R => x.r = e,
            Var::U => x.u = e,
            Var::Omega => x.w = e,
            Var::A => x.a = u32::try_from(e).expect("a is polynomial"),
            Var::B => x.b = u32::try_from(e).expect("b is polynomial"),
        }
        Self::monomial(ring, Rational::ONE, x)
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn k(&self) -> u32 {
        self.ring.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.iter().all(|&e| e == 0)
            && self.num.len() == 1
            && self.num[0].0 == poly::ONE
            && self.num[0].1.is_one()
    }

    /// Number of numerator terms.
    pub fn term_count(&self) -> usize {
        self.num.len()
    }

    /// Pole-factor multiplicities, indexed by m.
    pub fn denominator(&self) -> &[u16] {
        &self.den
    }

    /// Numerator terms as (exponents, rational coefficient of ζ^z …).
    pub fn numerator_terms(&self) -> impl Iterator<Item = (Exps, &Rational)> {
        self.num.iter().map(|(m, c)| (poly::unpack(*m), c))
    }

    fn check(&self, other: &Self) -> Result<(), CoeffError> {
        if self.ring.k == other.ring.k {
            Ok(())
        } else {
            Err(CoeffError::MixedOrder(self.ring.k, other.ring.k))
        }
    }

    fn normalize(&mut self) {
        if self.num.is_empty() {
            self.den.iter_mut().for_each(|e| *e = 0);
            return;
        }
        for m in 0..self.den.len() {
            while self.den[m] > 0 {
                match poly::div_pole(&self.ring.field, &self.num, m as u32) {
                    Some(q) => {
                        self.num = q;
                        self.den[m] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    /// Numerator brought over the denominator `target` (componentwise ≥ own).
    fn lift_to(&self, target: &[u16]) -> Poly {
        let mut num = self.num.clone();
        for (m, (&t, &e)) in target.iter().zip(&self.den).enumerate() {
            for _ in e..t {
                num = poly::mul_pole(&self.ring.field, &num, m as u32);
            }
        }
        num
    }

    /// Exact sum of many coefficients over their least common denominator.
    pub fn sum<'a, I>(ring: &Arc<CoeffRing>, items: I) -> Self
    where
        I: IntoIterator<Item = &'a Coefficient>,
    {
        let items: Vec<&Coefficient> = items.into_iter().filter(|c| !c.is_zero()).collect();
        match items.len() {
            0 => return Coefficient::zero(ring),
            1 => return items[0].clone(),
            _ => {}
        }
        let mut den = vec![0u16; ring.pole_count()];
        for c in &items {
            assert_eq!(c.ring.k, ring.k, "coefficient ring mismatch in sum");
            for (d, &e) in den.iter_mut().zip(&c.den) {
                *d = (*d).max(e);
            }
        }
        let mut terms = Vec::with_capacity(items.iter().map(|c| c.num.len()).sum());
        for c in &items {
            if c.den == den {
                terms.extend_from_slice(&c.num);
            } else {
                terms.extend(c.lift_to(&den));
            }
        }
        Coefficient::from_parts(ring.clone(), poly::canonicalize(terms), den)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        Ok(Self::sum(&self.ring, [self, other]))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        Ok(Self::sum(&self.ring, [self, &other.neg_ref()]))
    }

    /// Product without normalization; callers that sum several products
    /// normalize once at the end.
    pub(crate) fn mul_unnormalized(&self, other: &Self) -> Self {
        let num = poly::mul(&self.ring.field, &self.num, &other.num);
        let den = self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect();
        Coefficient {
            ring: self.ring.clone(),
            num,
            den,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        let mut p = self.mul_unnormalized(other);
        p.normalize();
        Ok(p)
    }

    fn neg_ref(&self) -> Self {
        Coefficient {
            ring: self.ring.clone(),
            num: poly::neg(&self.num),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Coefficient::zero(&self.ring);
        }
        Coefficient {
            ring: self.ring.clone(),
            num: poly::scale(&self.num, c),
            den: self.den.clone(),
        }
    }

    /// Multiplication by `c · ζ^z`.
    pub fn scale_zeta(&self, z: i64, c: &Rational) -> Self {
        if c.is_zero() {
            return Coefficient::zero(&self.ring);
        }
        Coefficient {
            ring: self.ring.clone(),
            num: poly::mul_monomial(&self.ring.field, &self.num, z, 0, c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Coefficient::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Equality decided by cross-multiplication: N₁·D₂ = N₂·D₁.
    pub fn equals(&self, other: &Self) -> Result<bool, CoeffError> {
        self.check(other)?;
        let lhs = self.lift_to(
            &self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect::<Vec<_>>(),
        );
        let rhs = other.lift_to(
            &self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect::<Vec<_>>(),
        );
        Ok(lhs == rhs)
    }

    /// ∂/∂r. Dropping the r-free part of the numerator can leave it zero or
    /// divisible by a pole factor, so the result is renormalized.
    pub fn d_r(&self) -> Self {
        let mut out = Coefficient {
            ring: self.ring.clone(),
            num: poly::d_r(&self.num),
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    /// ∂/∂φ, acting as i·u·∂/∂u.
    pub fn d_phi(&self) -> Self {
        let ring = &self.ring;
        let field = &ring.field;
        let k = ring.k as i64;
        // i u N' / D  −  Σ_m e_m · N · (2i ζ^{2m} u²) / (P_m D)
        let mut parts = Vec::with_capacity(1 + self.den.len());
        let du = poly::u_du(&self.num);
        parts.push(Coefficient {
            ring: ring.clone(),
            num: poly::mul_monomial(field, &poly::canonicalize(du), k, 0, &Rational::ONE),
            den: self.den.clone(),
        });
        for (m, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut den = self.den.clone();
            den[m] += 1;
            parts.push(Coefficient {
                ring: ring.clone(),
                num: poly::mul_monomial(
                    field,
                    &self.num,
                    k + 2 * m as i64,
                    2,
                    &Rational::from_int(-2 * e as i64),
                ),
                den,
            });
        }
        Coefficient::sum(ring, &parts)
    }

    pub fn substitute(&self, s: Substitution) -> Self {
        let ring = &self.ring;
        let field = &ring.field;
        let n = self.den.len() as i64;
        match s {
            Substitution::ShiftR(j) => {
                if (2 * j).rem_euclid(ring.order()) == 0 {
                    return self.clone();
                }
                let mut den = vec![0u16; self.den.len()];
                for (m, &e) in self.den.iter().enumerate() {
                    den[(m as i64 + 2 * j).rem_euclid(n) as usize] = e;
                }
                Coefficient {
                    ring: ring.clone(),
                    num: poly::shift(field, &self.num, j),
                    den,
                }
            }
            Substitution::ReflectI => {
                // 1/P_m(u^{-1})^e = ζ^{-2me} u^{2e} / P_{-m}(u)^e
                let mut den = vec![0u16; self.den.len()];
                let (mut z, mut du) = (0i64, 0i32);
                for (m, &e) in self.den.iter().enumerate() {
                    den[(-(m as i64)).rem_euclid(n) as usize] = e;
                    z -= 2 * m as i64 * e as i64;
                    du += 2 * e as i32;
                }
                let num = poly::invert_u(&self.num);
                Coefficient {
                    ring: ring.clone(),
                    num: poly::mul_monomial(field, &num, z, du, &Rational::ONE),
                    den,
                }
            }
            Substitution::Conjugate => {
                // 1/conj(P_m)^e = ζ^{2me} u^{2e} / P_m^e
                let (mut z, mut du) = (0i64, 0i32);
                for (m, &e) in self.den.iter().enumerate() {
                    z += 2 * m as i64 * e as i64;
                    du += 2 * e as i32;
                }
                let num = poly::conjugate(field, &self.num);
                Coefficient {
                    ring: ring.clone(),
                    num: poly::mul_monomial(field, &num, z, du, &Rational::ONE),
                    den: self.den.clone(),
                }
            }
        }
    }

    pub fn conjugate(&self) -> Self {
        self.substitute(Substitution::Conjugate)
    }

    /// Substitutes rational values for any of a, b, ω.
    pub fn specialize(
        &self,
        a: Option<&Rational>,
        b: Option<&Rational>,
        omega: Option<&Rational>,
    ) -> Result<Self, CoeffError> {
        let inv_w = match omega {
            Some(w) => Some(w.recip()),
            None => None,
        };
        let mut terms = Vec::with_capacity(self.num.len());
        for (m, c) in &self.num {
            let mut e = poly::unpack(*m);
            let mut c = c.clone();
            if let Some(a) = a {
                c = &c * &a.pow(e.a);
                e.a = 0;
            }
            if let Some(b) = b {
                c = &c * &b.pow(e.b);
                e.b = 0;
            }
            if let Some(w) = omega {
                if e.w >= 0 {
                    c = &c * &w.pow(e.w as u32);
                } else {
                    let inv = inv_w
                        .clone()
                        .flatten()
                        .ok_or(CoeffError::ZeroSpecialization("omega"))?;
                    c = &c * &inv.pow((-e.w) as u32);
                }
                e.w = 0;
            }
            terms.push((poly::pack(e), c));
        }
        Ok(Coefficient::from_parts(
            self.ring.clone(),
            poly::canonicalize(terms),
            self.den.clone(),
        ))
    }

    /// Evaluates under ζ ↦ e^{iπ/(2k)}, u ↦ e^{iφ}. Fails when φ is within
    /// `margin` radians of a zero of a pole factor present in the
    /// denominator, or when r vanishes.
    pub fn eval_complex(&self, p: &EvalPoint, margin: f64) -> Result<Complex64, CoeffError> {
        if p.r.abs() < 1e-300 {
            return Err(CoeffError::NearPole {
                detail: "r = 0".into(),
            });
        }
        let k = self.ring.k as f64;
        let mut den = Complex64::new(1.0, 0.0);
        for (m, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let dist = pole_distance(p.phi + m as f64 * std::f64::consts::PI / (2.0 * k));
            if dist < margin {
                return Err(CoeffError::NearPole {
                    detail: format!("pole factor m = {m} at distance {dist:.3e}"),
                });
            }
            let theta = m as f64 * std::f64::consts::PI / k + 2.0 * p.phi;
            den *= (Complex64::from_polar(1.0, theta) + 1.0).powi(e as i32);
        }
        let zeta_angle = std::f64::consts::PI / (2.0 * k);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.num {
            let e = poly::unpack(*m);
            let phase = Complex64::from_polar(1.0, zeta_angle * e.z as f64 + p.phi * e.u as f64);
            let real = c.to_f64()
                * p.r.powi(e.r)
                * p.a.powi(e.a as i32)
                * p.b.powi(e.b as i32)
                * p.omega.powi(e.w);
            acc += phase * real;
        }
        Ok(acc / den)
    }

    /// sin/cos/tan/cot/sec²/csc² of φ + jπ/k.
    pub fn trig_fn(ring: &Arc<CoeffRing>, kind: TrigFn, j: i64) -> Self {
        let k = ring.k as i64;
        let order = ring.order();
        let half = Rational::new(1, 2);
        let u1 = |z: i64, c: Rational, du: i32| {
            Coefficient::monomial(
                ring,
                c,
                Exps {
                    z: z.rem_euclid(order) as u32,
                    u: du,
                    ..Exps::default()
                },
            )
        };
        let cos_idx = (2 * j).rem_euclid(2 * k) as usize;
        let sin_idx = (2 * j + k).rem_euclid(2 * k) as usize;
        let with_den = |c: Coefficient, idx: usize, e: u16| {
            let mut den = vec![0u16; ring.pole_count()];
            den[idx] = e;
            Coefficient::from_parts(ring.clone(), c.num, den)
        };
        match kind {
            // (u_j + u_j^{-1})/2 with u_j = ζ^{2j} u
            TrigFn::Cos => &u1(2 * j, half.clone(), 1) + &u1(-2 * j, half, -1),
            // (u_j − u_j^{-1})/(2i) = −(i/2)(u_j − u_j^{-1})
            TrigFn::Sin => {
                &u1(2 * j + k, Rational::new(-1, 2), 1) + &u1(-2 * j + k, Rational::new(1, 2), -1)
            }
            // −i (ζ^{4j}u² − 1) / P_{2j}
            TrigFn::Tan => with_den(
                &u1(4 * j + k, Rational::from_int(-1), 2) + &u1(k, Rational::ONE, 0),
                cos_idx,
                1,
            ),
            // i (ζ^{4j}u² + 1) / (ζ^{4j}u² − 1) = −i (ζ^{4j}u² + 1) / P_{2j+k}
            TrigFn::Cot => with_den(
                &u1(4 * j + k, Rational::from_int(-1), 2) + &u1(k, Rational::from_int(-1), 0),
                sin_idx,
                1,
            ),
            // 4 ζ^{4j} u² / P_{2j}²
            TrigFn::Sec2 => with_den(u1(4 * j, Rational::from_int(4), 2), cos_idx, 2),
            // −4 ζ^{4j} u² / P_{2j+k}²
            TrigFn::Csc2 => with_den(u1(4 * j, Rational::from_int(-4), 2), sin_idx, 2),
        }
    }

    /// sin/cos/sec²/csc² of kφ, built from u^{2k} + 1 = Π_j P_{2j} and
    /// 1 − u^{2k} = Π_j P_{2j+k}.
    pub fn trig_multiple(ring: &Arc<CoeffRing>, kind: TrigFn) -> Self {
        let k = ring.k as i32;
        let mono = |z: i64, c: Rational, du: i32| {
            Coefficient::monomial(
                ring,
                c,
                Exps {
                    z: z.rem_euclid(ring.order()) as u32,
                    u: du,
                    ..Exps::default()
                },
            )
        };
        let ik = ring.k as i64;
        match kind {
            TrigFn::Cos => &mono(0, Rational::new(1, 2), k) + &mono(0, Rational::new(1, 2), -k),
            TrigFn::Sin => &mono(ik, Rational::new(-1, 2), k) + &mono(ik, Rational::new(1, 2), -k),
            TrigFn::Sec2 | TrigFn::Csc2 => {
                let parity = if kind == TrigFn::Sec2 { 0 } else { 1 };
                let sign = if kind == TrigFn::Sec2 { 4 } else { -4 };
                let den = (0..ring.pole_count())
                    .map(|m| if m % 2 == parity { 2 } else { 0 })
                    .collect();
                let num = mono(0, Rational::from_int(sign), 2 * k).num;
                Coefficient::from_parts(ring.clone(), num, den)
            }
            TrigFn::Tan => {
                let s = Self::trig_multiple(ring, TrigFn::Sin);
                let sec2 = Self::trig_multiple(ring, TrigFn::Sec2);
                let c = Self::trig_multiple(ring, TrigFn::Cos);
                &(&s * &c) * &sec2
            }
            TrigFn::Cot => {
                let s = Self::trig_multiple(ring, TrigFn::Sin);
                let csc2 = Self::trig_multiple(ring, TrigFn::Csc2);
                let c = Self::trig_multiple(ring, TrigFn::Cos);
                &(&s * &c) * &csc2
            }
        }
    }
}

/// Running exact sum of many coefficients.
///
/// Terms are buffered over a common denominator that only grows, and merged
/// whenever the buffer doubles, so long sums stay linear in the output size.
pub(crate) struct Accumulator {
    ring: Arc<CoeffRing>,
    den: Vec<u16>,
    terms: Vec<(u64, Rational)>,
    compact_at: usize,
}

impl Accumulator {
    const MIN_BUFFER: usize = 4096;

    pub(crate) fn new(ring: &Arc<CoeffRing>) -> Self {
        Accumulator {
            ring: ring.clone(),
            den: vec![0; ring.pole_count()],
            terms: Vec::new(),
            compact_at: Self::MIN_BUFFER,
        }
    }

    fn raise_to(&mut self, den: &[u16]) {
        if self.den.iter().zip(den).all(|(a, b)| a >= b) {
            return;
        }
        let target: Vec<u16> = self.den.iter().zip(den).map(|(a, b)| *a.max(b)).collect();
        if !self.terms.is_empty() {
            let cur = Coefficient {
                ring: self.ring.clone(),
                num: poly::canonicalize(std::mem::take(&mut self.terms)),
                den: self.den.clone(),
            };
            self.terms = cur.lift_to(&target);
        }
        self.den = target;
    }

    pub(crate) fn add(&mut self, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        self.raise_to(&c.den);
        if c.den == self.den {
            self.terms.extend_from_slice(&c.num);
        } else {
            self.terms.extend(c.lift_to(&self.den));
        }
        if self.terms.len() > self.compact_at {
            self.terms = poly::canonicalize(std::mem::take(&mut self.terms));
            self.compact_at = (2 * self.terms.len()).max(Self::MIN_BUFFER);
        }
    }

    pub(crate) fn merge(&mut self, other: Accumulator) {
        if other.terms.is_empty() {
            return;
        }
        let c = Coefficient {
            ring: other.ring,
            num: poly::canonicalize(other.terms),
            den: other.den,
        };
        self.add(&c);
    }

    pub(crate) fn finish(self) -> Coefficient {
        Coefficient::from_parts(self.ring, poly::canonicalize(self.terms), self.den)
    }
}

/// Distance of `theta` from the nearest point π/2 + nπ.
fn pole_distance(theta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let x = (theta - pi / 2.0).rem_euclid(pi);
    x.min(pi - x)
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        self.try_add(rhs).expect("coefficient ring mismatch")
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self.try_sub(rhs).expect("coefficient ring mismatch")
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        self.try_mul(rhs).expect("coefficient ring mismatch")
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.neg_ref()
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.neg_ref()
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient<k={}>({})", self.ring.k, self)
    }
}
