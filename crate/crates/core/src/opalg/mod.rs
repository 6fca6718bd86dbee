//! Noncommutative operators in normal order.
//!
//! Every operator is a finite sum of terms `c · ∂_r^p · ∂_φ^q · g` with `c` a
//! [`Coefficient`] and `g` an element 𝓡^i 𝓘^ε of the dihedral group D_{2k},
//! realized on functions of the angle by
//!
//! ```text
//! (𝓡ψ)(φ) = ψ(φ + π/k),   (𝓘ψ)(φ) = ψ(−φ).
//! ```
//!
//! Terms are keyed by `(p, q, g)` and the key order is fixed, so the map of
//! nonzero coefficients is a canonical form: two operators are equal exactly
//! when their term maps are equal.

mod multiply;
mod report;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::{Accumulator, CoeffError, CoeffRing, Coefficient, Substitution, Var};
use crate::cyclo::Rational;

pub use report::{CheckStatus, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("operators over different rings (k = {0} and k = {1})")]
    MixedOrder(u32, u32),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("cannot parse operator: {0}")]
    Parse(String),
}

/// The group element 𝓡^rot 𝓘^refl of D_{2k}, with `rot` reduced mod 2k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    rot: u32,
    refl: bool,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { rot: 0, refl: false };

    pub fn new(rot: i64, refl: bool, k: u32) -> Self {
        GroupElement {
            rot: rot.rem_euclid(2 * k as i64) as u32,
            refl,
        }
    }

    pub fn rotation(rot: i64, k: u32) -> Self {
        Self::new(rot, false, k)
    }

    pub fn rot(&self) -> u32 {
        self.rot
    }

    pub fn refl(&self) -> bool {
        self.refl
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// (i₁,ε₁)·(i₂,ε₂) = (i₁ + (−1)^{ε₁} i₂, ε₁ ⊕ ε₂).
    pub fn compose(&self, other: &GroupElement, k: u32) -> GroupElement {
        let i2 = if self.refl {
            -(other.rot as i64)
        } else {
            other.rot as i64
        };
        GroupElement::new(self.rot as i64 + i2, self.refl ^ other.refl, k)
    }

    pub fn inverse(&self, k: u32) -> GroupElement {
        if self.refl {
            *self
        } else {
            GroupElement::new(-(self.rot as i64), false, k)
        }
    }

    /// All 4k elements, rotations first.
    pub fn all(k: u32) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = (0..2 * k as i64).map(|i| Self::new(i, false, k)).collect();
        out.extend((0..2 * k as i64).map(|i| Self::new(i, true, k)));
        out
    }

    /// The coefficient f ↦ f∘T_g produced by moving `g` to the right of f:
    /// g·f = (f∘T_g)·g with T_g(φ) = (−1)^ε (φ + iπ/k).
    pub fn act(&self, f: &Coefficient) -> Coefficient {
        let f = if self.refl {
            f.substitute(Substitution::ReflectI)
        } else {
            f.clone()
        };
        if self.rot == 0 {
            f
        } else {
            f.substitute(Substitution::ShiftR(self.rot as i64))
        }
    }
}

/// Position of a term in normal order; ordered by p, then q, then group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub p: u32,
    pub q: u32,
    pub g: GroupElement,
}

impl TermKey {
    pub fn new(p: u32, q: u32, g: GroupElement) -> Self {
        TermKey { p, q, g }
    }
}

/// A canonical sum of normal-ordered terms.
#[derive(Clone)]
pub struct OperatorExpr {
    ring: Arc<CoeffRing>,
    terms: BTreeMap<TermKey, Coefficient>,
}

impl PartialEq for OperatorExpr {
    fn eq(&self, other: &Self) -> bool {
        self.ring.k() == other.ring.k() && self.terms == other.terms
    }
}

impl Eq for OperatorExpr {}

impl OperatorExpr {
    pub fn zero(ring: &Arc<CoeffRing>) -> Self {
        OperatorExpr {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(ring: &Arc<CoeffRing>) -> Self {
        Self::scalar(Coefficient::one(ring))
    }

    /// Multiplication by a coefficient.
    pub fn scalar(c: Coefficient) -> Self {
        Self::term(c, 0, 0, GroupElement::IDENTITY)
    }

    pub fn term(c: Coefficient, p: u32, q: u32, g: GroupElement) -> Self {
        let mut op = Self::zero(c.ring());
        if !c.is_zero() {
            op.terms.insert(TermKey::new(p, q, g), c);
        }
        op
    }

    pub fn d_r(ring: &Arc<CoeffRing>) -> Self {
        Self::term(Coefficient::one(ring), 1, 0, GroupElement::IDENTITY)
    }

    pub fn d_phi(ring: &Arc<CoeffRing>) -> Self {
        Self::term(Coefficient::one(ring), 0, 1, GroupElement::IDENTITY)
    }

    pub fn group(ring: &Arc<CoeffRing>, g: GroupElement) -> Self {
        Self::term(Coefficient::one(ring), 0, 0, g)
    }

    /// Builds from possibly repeated keys; coefficients are summed.
    pub fn from_terms<I>(ring: &Arc<CoeffRing>, terms: I) -> Self
    where
        I: IntoIterator<Item = (TermKey, Coefficient)>,
    {
        let mut acc: BTreeMap<TermKey, Accumulator> = BTreeMap::new();
        for (key, c) in terms {
            assert_eq!(c.k(), ring.k(), "coefficient ring mismatch");
            acc.entry(key)
                .or_insert_with(|| Accumulator::new(ring))
                .add(&c);
        }
        Self::from_accumulators(ring, acc)
    }

    pub(crate) fn from_accumulators(
        ring: &Arc<CoeffRing>,
        acc: BTreeMap<TermKey, Accumulator>,
    ) -> Self {
        use rayon::prelude::*;
        let entries: Vec<(TermKey, Accumulator)> = acc.into_iter().collect();
        let terms = entries
            .into_par_iter()
            .map(|(key, a)| (key, a.finish()))
            .filter(|(_, c)| !c.is_zero())
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        OperatorExpr {
            ring: ring.clone(),
            terms,
        }
    }

    /// Exact sum of many operators.
    pub fn sum<'a, I>(ring: &Arc<CoeffRing>, items: I) -> Self
    where
        I: IntoIterator<Item = &'a OperatorExpr>,
    {
        Self::from_terms(
            ring,
            items
                .into_iter()
                .flat_map(|op| op.terms.iter().map(|(key, c)| (*key, c.clone()))),
        )
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn k(&self) -> u32 {
        self.ring.k()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Coefficient)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of numerator monomials over all terms.
    pub fn size(&self) -> usize {
        self.terms.values().map(Coefficient::term_count).sum()
    }

    fn check(&self, other: &Self) -> Result<(), OpError> {
        if self.k() == other.k() {
            Ok(())
        } else {
            Err(OpError::MixedOrder(self.k(), other.k()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, OpError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (key, c) in &other.terms {
            match terms.remove(key) {
                Some(prev) => {
                    let s = &prev + c;
                    if !s.is_zero() {
                        terms.insert(*key, s);
                    }
                }
                None => {
                    terms.insert(*key, c.clone());
                }
            }
        }
        Ok(OperatorExpr {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, OpError> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coefficients(|f| f.scale(c))
    }

    /// Left multiplication by a coefficient, c·X.
    pub fn left_mul(&self, c: &Coefficient) -> Self {
        self.map_coefficients(|f| c * f)
    }

    fn map_coefficients(&self, f: impl Fn(&Coefficient) -> Coefficient) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| (*key, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        OperatorExpr {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, OpError> {
        self.check(other)?;
        Ok(multiply::multiply(self, other))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, OpError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self, OpError> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Adjoint for the measure r dr dφ:
    /// (c ∂_r^p ∂_φ^q g)† = g⁻¹ (−∂_φ)^q (−∂_r − 1/r)^p c̄.
    pub fn adjoint(&self) -> Self {
        multiply::adjoint(self)
    }

    /// g X g⁻¹, computed termwise: coefficients are transported by `g` and
    /// ∂_φ changes sign past a reflection.
    pub fn conjugate_by_group(&self, g: GroupElement) -> Self {
        let k = self.k();
        let ginv = g.inverse(k);
        let sign = Rational::from_int(-1);
        let terms = self.terms.iter().map(|(key, c)| {
            let mut c = g.act(c);
            if g.refl() && key.q % 2 == 1 {
                c = c.scale(&sign);
            }
            let h = g.compose(&key.g, k).compose(&ginv, k);
            (TermKey::new(key.p, key.q, h), c)
        });
        Self::from_terms(&self.ring, terms)
    }

    /// Replaces every group element by the identity and merges terms.
    pub fn project_identity(&self) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(key, c)| (TermKey::new(key.p, key.q, GroupElement::IDENTITY), c.clone())),
        )
    }

    /// Coefficient of ∂_r^p ∂_φ^q with trivial group part (zero if absent).
    pub fn coefficient_of(&self, p: u32, q: u32) -> Coefficient {
        self.coefficient_at(&TermKey::new(p, q, GroupElement::IDENTITY))
    }

    pub fn coefficient_at(&self, key: &TermKey) -> Coefficient {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(&self.ring))
    }

    /// Largest p + q over all terms, −1 for the zero operator.
    pub fn max_order(&self) -> i64 {
        self.terms
            .keys()
            .map(|key| (key.p + key.q) as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn is_group_free(&self) -> bool {
        self.terms.keys().all(|key| key.g.is_identity())
    }

    /// Substitutes rational values for any of a, b, ω.
    pub fn specialize(
        &self,
        a: Option<&Rational>,
        b: Option<&Rational>,
        omega: Option<&Rational>,
    ) -> Result<Self, OpError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (key, c) in &self.terms {
            terms.push((*key, c.specialize(a, b, omega)?));
        }
        Ok(Self::from_terms(&self.ring, terms))
    }

    /// The operator of multiplication by r, u, a, b or ω.
    pub fn var(ring: &Arc<CoeffRing>, v: Var) -> Self {
        Self::scalar(Coefficient::var(ring, v))
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.try_add(rhs).expect("operator ring mismatch")
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.try_sub(rhs).expect("operator ring mismatch")
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.try_mul(rhs).expect("operator ring mismatch")
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorExpr<k={}> {{\n{}}}", self.k(), self)
    }
}
