//! The dihedral realization, the Dunkl operators D_r and D_φ for odd k, the
//! extended operators 𝓗_k and 𝓧_k, and their projection targets H_k, X_k.
//!
//! ```text
//! D_r = ∂_r − (1/r) S,        S = (a𝓡 + b) Σ_i 𝓡^{2i} 𝓘
//! D_φ = ∂_φ + a Σ_i tan(φ + iπ/k) 𝓡^{k+2i} 𝓘 − b Σ_i cot(φ + iπ/k) 𝓡^{2i} 𝓘
//! 𝓗_k = −D_r² − (1/r)(1 + 2S) D_r − (1/r²) D_φ² + ω² r²
//! 𝓧_k = −D_φ²
//! ```
//!
//! All sums run over i = 0, …, k−1. Parameters a, b, ω stay symbolic.

use std::sync::Arc;

use crate::coeff::{CoeffRing, Coefficient, TrigFn, Var};
use crate::cyclo::{trig, Rational, Trig};
use crate::opalg::{GroupElement, OperatorExpr, VerificationReport};

pub(crate) fn coef_var(ring: &Arc<CoeffRing>, v: Var, e: i32) -> Coefficient {
    Coefficient::var_pow(ring, v, e)
}

/// sin(jπ/k) or cos(jπ/k) as a constant coefficient.
pub(crate) fn trig_const(ring: &Arc<CoeffRing>, which: Trig, j: i64) -> Coefficient {
    let c = trig(j, ring.k(), which).expect("k validated by the ring");
    Coefficient::constant(ring, &c).expect("same field")
}

pub(crate) fn scalar(c: Coefficient) -> OperatorExpr {
    OperatorExpr::scalar(c)
}

pub(crate) fn group(ring: &Arc<CoeffRing>, rot: i64, refl: bool) -> OperatorExpr {
    OperatorExpr::group(ring, GroupElement::new(rot, refl, ring.k()))
}

pub fn build_r(ring: &Arc<CoeffRing>) -> OperatorExpr {
    group(ring, 1, false)
}

pub fn build_i(ring: &Arc<CoeffRing>) -> OperatorExpr {
    group(ring, 0, true)
}

/// S = (a𝓡 + b) Σ_i 𝓡^{2i} 𝓘.
pub fn exchange_sum(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let k = ring.k() as i64;
    let a = Coefficient::var(ring, Var::A);
    let b = Coefficient::var(ring, Var::B);
    let terms = (0..k).flat_map(|i| {
        [
            OperatorExpr::term(a.clone(), 0, 0, GroupElement::new(2 * i + 1, true, k as u32)),
            OperatorExpr::term(b.clone(), 0, 0, GroupElement::new(2 * i, true, k as u32)),
        ]
    });
    let terms: Vec<OperatorExpr> = terms.collect();
    OperatorExpr::sum(ring, &terms)
}

pub fn build_dr(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let s = exchange_sum(ring).left_mul(&coef_var(ring, Var::R, -1));
    &OperatorExpr::d_r(ring) - &s
}

pub fn build_dphi(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let k = ring.k();
    let a = Coefficient::var(ring, Var::A);
    let b = Coefficient::var(ring, Var::B);
    let mut parts = vec![OperatorExpr::d_phi(ring)];
    for i in 0..k as i64 {
        let tan = &a * &Coefficient::trig_fn(ring, TrigFn::Tan, i);
        let cot = -&(&b * &Coefficient::trig_fn(ring, TrigFn::Cot, i));
        parts.push(OperatorExpr::term(tan, 0, 0, GroupElement::new(k as i64 + 2 * i, true, k)));
        parts.push(OperatorExpr::term(cot, 0, 0, GroupElement::new(2 * i, true, k)));
    }
    OperatorExpr::sum(ring, &parts)
}

/// −(1/r)(1 + 2S), the first-order prefactor in 𝓗_k and in D_r†.
fn dr_companion(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let one_2s = &OperatorExpr::identity(ring) + &exchange_sum(ring).scale(&Rational::from_int(2));
    -one_2s.left_mul(&coef_var(ring, Var::R, -1))
}

/// ω² r².
fn confinement(ring: &Arc<CoeffRing>) -> OperatorExpr {
    scalar(&coef_var(ring, Var::Omega, 2) * &coef_var(ring, Var::R, 2))
}

pub fn build_extended_h(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let dr = build_dr(ring);
    let dphi = build_dphi(ring);
    let parts = [
        -(&dr * &dr),
        &dr_companion(ring) * &dr,
        -(&dphi * &dphi).left_mul(&coef_var(ring, Var::R, -2)),
        confinement(ring),
    ];
    OperatorExpr::sum(ring, &parts)
}

pub fn build_extended_x(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let dphi = build_dphi(ring);
    -(&dphi * &dphi)
}

/// k(a² + b² + 2ab𝓡) Σ_i 𝓡^{2i}.
fn rotation_sum_term(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let k = ring.k() as i64;
    let a = Coefficient::var(ring, Var::A);
    let b = Coefficient::var(ring, Var::B);
    let a2b2 = &(&a * &a) + &(&b * &b);
    let ab2 = (&a * &b).scale(&Rational::from_int(2));
    let parts: Vec<OperatorExpr> = (0..k)
        .flat_map(|i| {
            [
                OperatorExpr::term(a2b2.clone(), 0, 0, GroupElement::rotation(2 * i, k as u32)),
                OperatorExpr::term(ab2.clone(), 0, 0, GroupElement::rotation(2 * i + 1, k as u32)),
            ]
        })
        .collect();
    OperatorExpr::sum(ring, &parts).scale(&Rational::from_int(k))
}

/// D_φ² expanded in ∂-form:
/// ∂_φ² − Σ sec²(φ_i) a(a − 𝓡^{k+2i}𝓘) − Σ csc²(φ_i) b(b − 𝓡^{2i}𝓘)
///   + k(a² + b² + 2ab𝓡) Σ 𝓡^{2i}.
pub fn dphi_squared_expanded(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let k = ring.k() as i64;
    let a = Coefficient::var(ring, Var::A);
    let b = Coefficient::var(ring, Var::B);
    let mut parts = vec![OperatorExpr::d_phi(ring).pow(2), rotation_sum_term(ring)];
    for i in 0..k {
        let sec2 = Coefficient::trig_fn(ring, TrigFn::Sec2, i);
        let csc2 = Coefficient::trig_fn(ring, TrigFn::Csc2, i);
        let a_part = &scalar(a.clone()) - &group(ring, k + 2 * i, true);
        let b_part = &scalar(b.clone()) - &group(ring, 2 * i, true);
        parts.push(-a_part.left_mul(&(&sec2 * &a)));
        parts.push(-b_part.left_mul(&(&csc2 * &b)));
    }
    OperatorExpr::sum(ring, &parts)
}

/// −∂_r² − (1/r)∂_r + ω² r², the radial part shared by every Hamiltonian.
fn radial_part(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let dr = OperatorExpr::d_r(ring);
    let parts = [
        -dr.pow(2),
        -dr.left_mul(&coef_var(ring, Var::R, -1)),
        confinement(ring),
    ];
    OperatorExpr::sum(ring, &parts)
}

/// −∂_r² − (1/r)∂_r − (1/r²)[D_φ² − k(a² + b² + 2ab𝓡)Σ𝓡^{2i}] + ω²r².
pub fn build_extended_h_rewritten(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let bracket = &dphi_squared_expanded(ring) - &rotation_sum_term(ring);
    &radial_part(ring) - &bracket.left_mul(&coef_var(ring, Var::R, -2))
}

/// k²(α sec²kφ + β csc²kφ) with α = a(a−1), β = b(b−1).
fn ttw_potential(ring: &Arc<CoeffRing>) -> Coefficient {
    let k = ring.k() as i64;
    let one = Coefficient::one(ring);
    let a = Coefficient::var(ring, Var::A);
    let b = Coefficient::var(ring, Var::B);
    let alpha = &a * &(&a - &one);
    let beta = &b * &(&b - &one);
    let v = &(&alpha * &Coefficient::trig_multiple(ring, TrigFn::Sec2))
        + &(&beta * &Coefficient::trig_multiple(ring, TrigFn::Csc2));
    v.scale(&Rational::from_int(k * k))
}

/// H_k = −∂_r² − (1/r)∂_r − (1/r²)∂_φ² + ω²r² + (k²/r²)(α sec²kφ + β csc²kφ).
pub fn target_h(ring: &Arc<CoeffRing>) -> OperatorExpr {
    let parts = [
        radial_part(ring),
        -OperatorExpr::d_phi(ring).pow(2).left_mul(&coef_var(ring, Var::R, -2)),
        scalar(&ttw_potential(ring) * &coef_var(ring, Var::R, -2)),
    ];
    OperatorExpr::sum(ring, &parts)
}

/// X_k = −∂_φ² + k²(α sec²kφ + β csc²kφ).
pub fn target_x(ring: &Arc<CoeffRing>) -> OperatorExpr {
    &(-OperatorExpr::d_phi(ring).pow(2)) + &scalar(ttw_potential(ring))
}

/// The plain polar oscillator h = −∂_r² − (1/r)∂_r − (1/r²)∂_φ² + ω²r².
pub fn plain_oscillator(ring: &Arc<CoeffRing>) -> OperatorExpr {
    &radial_part(ring) - &OperatorExpr::d_phi(ring).pow(2).left_mul(&coef_var(ring, Var::R, -2))
}

fn cos_phi(ring: &Arc<CoeffRing>, j: i64) -> Coefficient {
    Coefficient::trig_fn(ring, TrigFn::Cos, j)
}

fn sin_phi(ring: &Arc<CoeffRing>, j: i64) -> Coefficient {
    Coefficient::trig_fn(ring, TrigFn::Sin, j)
}

/// Σ_i [x_i 𝓡^{k+2i}𝓘 + y_i 𝓡^{2i}𝓘] with coefficient families x, y.
fn reflection_sum(
    ring: &Arc<CoeffRing>,
    x: impl Fn(i64) -> Coefficient,
    y: impl Fn(i64) -> Coefficient,
) -> OperatorExpr {
    let k = ring.k() as i64;
    let parts: Vec<OperatorExpr> = (0..k)
        .flat_map(|i| {
            [
                OperatorExpr::term(x(i), 0, 0, GroupElement::new(k + 2 * i, true, k as u32)),
                OperatorExpr::term(y(i), 0, 0, GroupElement::new(2 * i, true, k as u32)),
            ]
        })
        .collect();
    OperatorExpr::sum(ring, &parts)
}

/// Right-hand sides of the commutators of D_r, D_φ with cos φ and sin φ,
/// in the order [D_r, cos], [D_r, sin], [D_φ, cos], [D_φ, sin].
pub fn trig_commutator_targets(ring: &Arc<CoeffRing>) -> [OperatorExpr; 4] {
    let two_a = Coefficient::var(ring, Var::A).scale(&Rational::from_int(2));
    let two_b = Coefficient::var(ring, Var::B).scale(&Rational::from_int(2));
    let cs = |j| trig_const(ring, Trig::Cos, j);
    let sn = |j| trig_const(ring, Trig::Sin, j);
    let rinv = coef_var(ring, Var::R, -1);
    let dr_cos = reflection_sum(
        ring,
        |i| &(&two_a * &cos_phi(ring, i)) * &cs(i),
        |i| &(&two_b * &sin_phi(ring, i)) * &sn(i),
    )
    .left_mul(&rinv);
    let dr_sin = reflection_sum(
        ring,
        |i| -&(&(&two_a * &cos_phi(ring, i)) * &sn(i)),
        |i| &(&two_b * &sin_phi(ring, i)) * &cs(i),
    )
    .left_mul(&rinv);
    let dphi_cos = &reflection_sum(
        ring,
        |i| -&(&(&two_a * &sin_phi(ring, i)) * &cs(i)),
        |i| &(&two_b * &cos_phi(ring, i)) * &sn(i),
    ) - &scalar(sin_phi(ring, 0));
    let dphi_sin = &reflection_sum(
        ring,
        |i| &(&two_a * &sin_phi(ring, i)) * &sn(i),
        |i| &(&two_b * &cos_phi(ring, i)) * &cs(i),
    ) + &scalar(cos_phi(ring, 0));
    [dr_cos, dr_sin, dphi_cos, dphi_sin]
}

/// Group relations, Hermiticity, exchange relations and the basic
/// commutators of D_r and D_φ, each checked exactly.
pub fn check_section2(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let id = OperatorExpr::identity(ring);
    let r = build_r(ring);
    let i = build_i(ring);
    let dr = build_dr(ring);
    let dphi = build_dphi(ring);
    let rvar = OperatorExpr::var(ring, Var::R);
    let rinv = coef_var(ring, Var::R, -1);
    let mut out = vec![
        VerificationReport::check("group.R^2k", k, || (r.pow(2 * k), id.clone())),
        VerificationReport::check("group.I^2", k, || (i.pow(2), id.clone())),
        VerificationReport::check("group.IR", k, || (&i * &r, &r.pow(2 * k - 1) * &i)),
        VerificationReport::check("group.R_dagger", k, || (r.adjoint(), r.pow(2 * k - 1))),
        VerificationReport::check("group.I_dagger", k, || (i.adjoint(), i.clone())),
        VerificationReport::check("hermiticity.Dr", k, || {
            (dr.adjoint(), &(-&dr) + &dr_companion(ring))
        }),
        VerificationReport::check("hermiticity.Dphi", k, || (dphi.adjoint(), -&dphi)),
        VerificationReport::check("exchange.R_Dr", k, || (&r * &dr, &dr * &r)),
        VerificationReport::check("exchange.I_Dr", k, || (&i * &dr, &dr * &i)),
        VerificationReport::check("exchange.R_Dphi", k, || (&r * &dphi, &dphi * &r)),
        VerificationReport::check("exchange.I_Dphi", k, || (&i * &dphi, -(&dphi * &i))),
        VerificationReport::check("commutator.Dr_Dphi", k, || {
            let rhs = (&exchange_sum(ring) * &dphi)
                .left_mul(&rinv)
                .scale(&Rational::from_int(-2));
            (dr.commutator(&dphi).unwrap(), rhs)
        }),
        VerificationReport::check("commutator.Dr_r", k, || (dr.commutator(&rvar).unwrap(), id.clone())),
        VerificationReport::check("commutator.Dphi_r", k, || {
            (dphi.commutator(&rvar).unwrap(), OperatorExpr::zero(ring))
        }),
    ];
    let targets = trig_commutator_targets(ring);
    let cos = scalar(cos_phi(ring, 0));
    let sin = scalar(sin_phi(ring, 0));
    let cases = [
        ("commutator.Dr_cos", &dr, &cos),
        ("commutator.Dr_sin", &dr, &sin),
        ("commutator.Dphi_cos", &dphi, &cos),
        ("commutator.Dphi_sin", &dphi, &sin),
    ];
    for ((name, x, y), target) in cases.into_iter().zip(targets) {
        out.push(VerificationReport::check(name, k, || (x.commutator(y).unwrap(), target)));
    }
    out
}

/// 𝓗_k against its rewritten ∂-form, D_φ² against its expansion, the
/// projections onto H_k and X_k − k²(a+b)², [𝓧_k, 𝓗_k] = 0 and the D_{2k}
/// invariance of 𝓗_k and 𝓧_k.
pub fn check_extended(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let h = build_extended_h(ring);
    let x = build_extended_x(ring);
    let ab = &Coefficient::var(ring, Var::A) + &Coefficient::var(ring, Var::B);
    let shift = (&ab * &ab).scale(&Rational::from_int((k * k) as i64));
    let mut out = vec![
        VerificationReport::check("extended.H_rewritten", k, || (h.clone(), build_extended_h_rewritten(ring))),
        VerificationReport::check("extended.Dphi_squared", k, || (-&x, dphi_squared_expanded(ring))),
        VerificationReport::check("projection.H", k, || (h.project_identity(), target_h(ring))),
        VerificationReport::check("projection.X", k, || {
            (x.project_identity(), &target_x(ring) - &scalar(shift))
        }),
        VerificationReport::check("extended.[X,H]", k, || (x.commutator(&h).unwrap(), OperatorExpr::zero(ring))),
    ];
    let gens = [("R", GroupElement::rotation(1, k)), ("I", GroupElement::new(0, true, k))];
    for (gname, g) in gens {
        out.push(VerificationReport::check(format!("invariance.H.{gname}"), k, || {
            (h.conjugate_by_group(g), h.clone())
        }));
        out.push(VerificationReport::check(format!("invariance.X.{gname}"), k, || {
            (x.conjugate_by_group(g), x.clone())
        }));
    }
    out
}
