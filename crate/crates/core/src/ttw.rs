//! Modified boson operators, oscillator Hamiltonians H_i, the symmetrized
//! product 𝓨_{2k} and the superintegrability checks.
//!
//! The boson operators carry a factor 1/√(2ω), which is not in the
//! coefficient ring. Builders therefore return the rescaled operators
//!
//! ```text
//! Ã_i  = √(2ω) A_i  = cos φ_i (ωr + D_r) − (1/r) sin φ_i D_φ
//! Ã_i† = √(2ω) A_i† = cos φ_i (ωr − D_r) + (1/r) sin φ_i D_φ
//! B̃_i  = √(2ω) B_i  = sin φ_i (ωr + D_r) + (1/r) cos φ_i D_φ
//! B̃_i† = √(2ω) B_i† = sin φ_i (ωr − D_r) − (1/r) cos φ_i D_φ
//! ```
//!
//! with φ_i = φ + iπ/k for any integer i. Every identity below is homogeneous
//! in the boson operators and is compared after multiplying through by the
//! matching power of 2ω. H_i = ½{A_i†, A_i} = {Ã_i†, Ã_i}/(4ω) itself lies in
//! the ring since ω may appear with negative exponents.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::coeff::{CoeffRing, Coefficient, TrigFn, Var};
use crate::cyclo::{Rational, Trig};
use crate::dunkl::{
    build_dphi, build_dr, build_extended_h, build_extended_x, coef_var, group, plain_oscillator,
    scalar, trig_const,
};
use crate::opalg::{GroupElement, OperatorExpr, VerificationReport};

fn cos_i(ring: &Arc<CoeffRing>, i: i64) -> Coefficient {
    Coefficient::trig_fn(ring, TrigFn::Cos, i)
}

fn sin_i(ring: &Arc<CoeffRing>, i: i64) -> Coefficient {
    Coefficient::trig_fn(ring, TrigFn::Sin, i)
}

fn omega_r(ring: &Arc<CoeffRing>) -> OperatorExpr {
    scalar(&Coefficient::var(ring, Var::Omega) * &Coefficient::var(ring, Var::R))
}

fn two_omega(ring: &Arc<CoeffRing>) -> Coefficient {
    Coefficient::var(ring, Var::Omega).scale(&Rational::from_int(2))
}

/// Ã_i (or Ã_i†), built from the defining formula for any integer i.
pub fn build_a(ring: &Arc<CoeffRing>, i: i64, dagger: bool) -> OperatorExpr {
    let dr = build_dr(ring);
    let dphi = build_dphi(ring);
    let radial = if dagger { &omega_r(ring) - &dr } else { &omega_r(ring) + &dr };
    let angular = dphi.left_mul(&(&sin_i(ring, i) * &coef_var(ring, Var::R, -1)));
    let radial = radial.left_mul(&cos_i(ring, i));
    if dagger {
        &radial + &angular
    } else {
        &radial - &angular
    }
}

/// B̃_i (or B̃_i†) by substituting φ + iπ/k for φ in the defining formula.
pub fn build_b(ring: &Arc<CoeffRing>, i: i64, dagger: bool) -> OperatorExpr {
    let dr = build_dr(ring);
    let dphi = build_dphi(ring);
    let radial = if dagger { &omega_r(ring) - &dr } else { &omega_r(ring) + &dr };
    let angular = dphi.left_mul(&(&cos_i(ring, i) * &coef_var(ring, Var::R, -1)));
    let radial = radial.left_mul(&sin_i(ring, i));
    if dagger {
        &radial - &angular
    } else {
        &radial + &angular
    }
}

/// B̃_i as (2/k) Σ_j Ã_j sin((i−j)π/k).
pub fn build_b_from_a(ring: &Arc<CoeffRing>, i: i64, dagger: bool) -> OperatorExpr {
    let k = ring.k() as i64;
    let parts: Vec<OperatorExpr> = (0..k)
        .map(|j| build_a(ring, j, dagger).left_mul(&trig_const(ring, Trig::Sin, i - j)))
        .collect();
    OperatorExpr::sum(ring, &parts).scale(&Rational::new(2, k))
}

/// 2ω[A_i, A_j†] as given in closed form:
/// cos((j−i)π/k) + 2a Σ_l cos((l−i)π/k) cos((l−j)π/k) 𝓡^{k+2l}𝓘
///               + 2b Σ_l sin((l−i)π/k) sin((l−j)π/k) 𝓡^{2l}𝓘, scaled by 2ω.
pub fn boson_commutator_target(ring: &Arc<CoeffRing>, i: i64, j: i64) -> OperatorExpr {
    let k = ring.k() as i64;
    let a2 = Coefficient::var(ring, Var::A).scale(&Rational::from_int(2));
    let b2 = Coefficient::var(ring, Var::B).scale(&Rational::from_int(2));
    let c = |x| trig_const(ring, Trig::Cos, x);
    let s = |x| trig_const(ring, Trig::Sin, x);
    let mut parts = vec![scalar(c(j - i))];
    for l in 0..k {
        parts.push(OperatorExpr::term(
            &(&a2 * &c(l - i)) * &c(l - j),
            0,
            0,
            GroupElement::new(k + 2 * l, true, k as u32),
        ));
        parts.push(OperatorExpr::term(
            &(&b2 * &s(l - i)) * &s(l - j),
            0,
            0,
            GroupElement::new(2 * l, true, k as u32),
        ));
    }
    OperatorExpr::sum(ring, &parts).left_mul(&two_omega(ring))
}

/// 2ωH_i = ½{Ã_i†, Ã_i}.
pub fn build_h_scaled(ring: &Arc<CoeffRing>, i: i64) -> OperatorExpr {
    let a = build_a(ring, i, false);
    let ad = build_a(ring, i, true);
    ad.anticommutator(&a).unwrap().scale(&Rational::new(1, 2))
}

/// H_i = ½{A_i†, A_i}.
pub fn build_h(ring: &Arc<CoeffRing>, i: i64) -> OperatorExpr {
    build_h_scaled(ring, i).left_mul(&coef_var(ring, Var::Omega, -1).scale(&Rational::new(1, 2)))
}

/// The explicit expression of 2ωH_i in terms of r, φ, D_r and D_φ.
pub fn h_scaled_explicit(ring: &Arc<CoeffRing>, i: i64) -> OperatorExpr {
    let k = ring.k() as i64;
    let dr = build_dr(ring);
    let dphi = build_dphi(ring);
    let (s, c) = (sin_i(ring, i), cos_i(ring, i));
    let rinv = coef_var(ring, Var::R, -1);
    let rinv2 = coef_var(ring, Var::R, -2);
    let a2 = Coefficient::var(ring, Var::A).scale(&Rational::from_int(2));
    let b2 = Coefficient::var(ring, Var::B).scale(&Rational::from_int(2));
    let cc = |x| trig_const(ring, Trig::Cos, x);
    let ss = |x| trig_const(ring, Trig::Sin, x);
    let refl = |rot: i64, c: Coefficient| OperatorExpr::term(c, 0, 0, GroupElement::new(rot, true, k as u32));

    let mut dr_bracket = vec![scalar(&s * &s)];
    let mut dphi_bracket = vec![scalar((&s * &c).scale(&Rational::from_int(-2)))];
    for l in 0..k {
        let (cl, sl) = (cc(l - i), ss(l - i));
        dr_bracket.push(refl(k + 2 * l, &a2 * &(&cl * &cl)));
        dr_bracket.push(refl(2 * l, &b2 * &(&sl * &sl)));
        dphi_bracket.push(refl(k + 2 * l, -&(&a2 * &(&sl * &cl))));
        dphi_bracket.push(refl(2 * l, &b2 * &(&sl * &cl)));
    }
    let dr_bracket = OperatorExpr::sum(ring, &dr_bracket);
    let dphi_bracket = OperatorExpr::sum(ring, &dphi_bracket);
    let parts = [
        -(&dr * &dr).left_mul(&(&c * &c)),
        dr.anticommutator(&dphi).unwrap().left_mul(&(&(&s * &c) * &rinv)),
        -(&dphi * &dphi).left_mul(&(&(&s * &s) * &rinv2)),
        -(&dr_bracket * &dr).left_mul(&rinv),
        (&dphi_bracket * &dphi).left_mul(&rinv2),
        scalar(&(&coef_var(ring, Var::Omega, 2) * &coef_var(ring, Var::R, 2)) * &(&c * &c)),
    ];
    OperatorExpr::sum(ring, &parts)
}

/// (4ω)²·([H_0, H_i] right-hand side), written with Ã† Ã products, which
/// equal 2ω A† A. The group sums and index expressions follow the closed
/// form literally; indices outside 0..k are handled by `build_a`, which is
/// valid for every integer.
pub fn h_commutator_target(ring: &Arc<CoeffRing>, i: i64) -> OperatorExpr {
    let k = ring.k() as i64;
    let cc = |x| trig_const(ring, Trig::Cos, x);
    let ss = |x| trig_const(ring, Trig::Sin, x);
    let a = |x| build_a(ring, x, false);
    let ad = |x| build_a(ring, x, true);
    // A_x† A_y in the rescaled operators.
    let pair = |x: i64, y: i64| &ad(x) * &a(y);
    let half = Rational::new(1, 2);
    let av = Coefficient::var(ring, Var::A);
    let bv = Coefficient::var(ring, Var::B);

    let mut parts = vec![(&pair(0, i) - &pair(i, 0)).left_mul(&cc(i))];
    for l in 0..k {
        let x = 2 * k + 2 * l - i;
        let y = k + 2 * l;
        let a_bracket = OperatorExpr::sum(
            ring,
            &[
                -(&pair(0, x) + &pair(i, y)).left_mul(&(&cc(l) * &cc(l - i))),
                (&pair(0, 0) - &pair(y, y)).left_mul(&(&cc(l - i) * &cc(l - i)).scale(&half)),
                (&pair(x, x) - &pair(i, i)).left_mul(&(&cc(l) * &cc(l)).scale(&half)),
            ],
        );
        parts.push((&a_bracket * &group(ring, k + 2 * l, true)).left_mul(&av.scale(&Rational::from_int(2))));

        let x = k + 2 * l - i;
        let y = 2 * l;
        let b_bracket = OperatorExpr::sum(
            ring,
            &[
                -(&pair(0, x) + &pair(i, y)).left_mul(&(&ss(l) * &ss(l - i))),
                (&pair(0, 0) - &pair(y, y)).left_mul(&(&ss(l - i) * &ss(l - i)).scale(&half)),
                (&pair(x, x) - &pair(i, i)).left_mul(&(&ss(l) * &ss(l)).scale(&half)),
            ],
        );
        parts.push((&b_bracket * &group(ring, 2 * l, true)).left_mul(&bv.scale(&Rational::from_int(2))));
    }
    // The remaining term carries no boson operators; rescale it by 2ω to
    // match the Ã† Ã products above.
    let ab = &av * &bv;
    let mut last = Vec::new();
    for l in 0..k {
        let w = ss(2 * l);
        last.push(OperatorExpr::term(
            &w * &(&(&av * &av) + &(&bv * &bv)),
            0,
            0,
            GroupElement::rotation(2 * l, k as u32),
        ));
        last.push(OperatorExpr::term(
            &w * &ab.scale(&Rational::from_int(-2)),
            0,
            0,
            GroupElement::rotation(k + 2 * l, k as u32),
        ));
    }
    let last = OperatorExpr::sum(ring, &last)
        .left_mul(&(&ss(2 * i) * &two_omega(ring)).scale(&Rational::new(-k, 4)));
    parts.push(last);
    // Ã†Ã = 2ω A†A; [H_0, H_i] uses A†A, so everything above is 2ω·RHS.
    // Multiply by 8ω to reach (4ω)²·RHS.
    let rhs = OperatorExpr::sum(ring, &parts);
    rhs.left_mul(&coef_var(ring, Var::Omega, 1).scale(&Rational::from_int(8)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("budget exhausted while building {what}: {reason}")]
pub struct BudgetExceeded {
    pub what: String,
    pub reason: String,
}

/// Resource caps for the large constructions. `max_terms` bounds the total
/// number of numerator monomials of any intermediate operator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_terms: Option<usize>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    fn guard(&self, what: &str, start: Instant, op: &OperatorExpr) -> Result<(), BudgetExceeded> {
        if let Some(max) = self.max_terms {
            let size = op.size();
            if size > max {
                return Err(BudgetExceeded {
                    what: what.into(),
                    reason: format!("intermediate with {size} monomials exceeds cap {max}"),
                });
            }
        }
        if let Some(limit) = self.max_time {
            let elapsed = start.elapsed();
            if elapsed > limit {
                return Err(BudgetExceeded {
                    what: what.into(),
                    reason: format!("{:.1}s elapsed, cap {:.1}s", elapsed.as_secs_f64(), limit.as_secs_f64()),
                });
            }
        }
        Ok(())
    }
}

/// 𝓨_{2k} = Σ_p Π_j 2ωH_{p(j)} over all permutations p, evaluated over the
/// tree of shared left prefixes: each node multiplies its prefix product by
/// one unused factor.
pub fn build_y(ring: &Arc<CoeffRing>, budget: &Budget) -> Result<OperatorExpr, BudgetExceeded> {
    let k = ring.k() as usize;
    let factors: Vec<OperatorExpr> = (0..k as i64).into_par_iter().map(|i| build_h_scaled(ring, i)).collect();
    let start = Instant::now();
    let leaves = prefix_tree(ring, &factors, OperatorExpr::identity(ring), &mut vec![false; k], budget, start)?;
    let y = OperatorExpr::sum(ring, &leaves);
    budget.guard("Y", start, &y)?;
    Ok(y)
}

fn prefix_tree(
    ring: &Arc<CoeffRing>,
    factors: &[OperatorExpr],
    prefix: OperatorExpr,
    used: &mut Vec<bool>,
    budget: &Budget,
    start: Instant,
) -> Result<Vec<OperatorExpr>, BudgetExceeded> {
    if used.iter().all(|&u| u) {
        return Ok(vec![prefix]);
    }
    let mut out = Vec::new();
    for j in 0..factors.len() {
        if used[j] {
            continue;
        }
        let next = &prefix * &factors[j];
        budget.guard("Y", start, &next)?;
        used[j] = true;
        let leaves = prefix_tree(ring, factors, next, used, budget, start)?;
        used[j] = false;
        if leaves.len() > 1 {
            out.push(OperatorExpr::sum(ring, &leaves));
        } else {
            out.extend(leaves);
        }
    }
    Ok(out)
}

/// 𝓨_{2k} by the subset recursion T(S) = Σ_{s∈S} T(S∖{s}) · 2ωH_s, which
/// enumerates the same permutations ordered by their last factor.
pub fn build_y_by_subsets(ring: &Arc<CoeffRing>, budget: &Budget) -> Result<OperatorExpr, BudgetExceeded> {
    let k = ring.k() as usize;
    let factors: Vec<OperatorExpr> = (0..k as i64).into_par_iter().map(|i| build_h_scaled(ring, i)).collect();
    let start = Instant::now();
    let mut table: Vec<Option<OperatorExpr>> = vec![None; 1 << k];
    table[0] = Some(OperatorExpr::identity(ring));
    for size in 1..=k {
        let masks: Vec<usize> = (1usize..1 << k).filter(|m| m.count_ones() as usize == size).collect();
        let level: Vec<Result<(usize, OperatorExpr), BudgetExceeded>> = masks
            .par_iter()
            .map(|&mask| {
                let mut parts = Vec::new();
                for s in 0..k {
                    if mask & (1 << s) != 0 {
                        let prev = table[mask & !(1 << s)].as_ref().expect("smaller subsets done");
                        let p = prev * &factors[s];
                        budget.guard("Y", start, &p)?;
                        parts.push(p);
                    }
                }
                Ok((mask, OperatorExpr::sum(ring, &parts)))
            })
            .collect();
        for r in level {
            let (mask, op) = r?;
            table[mask] = Some(op);
        }
    }
    Ok(table.pop().flatten().expect("full set computed"))
}

fn each_index<F>(k: u32, f: F) -> Vec<VerificationReport>
where
    F: Fn(i64) -> Vec<VerificationReport> + Sync,
{
    (0..k as i64).into_par_iter().flat_map(|i| f(i)).collect()
}

/// A_i, B_i: adjoints, the index extension, the dihedral action, the two
/// forms of B_i and the linear relations among the A_i.
pub fn check_boson_structure(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let ki = k as i64;
    let r_el = GroupElement::rotation(1, k);
    let i_el = GroupElement::new(0, true, k);
    let mut out = each_index(k, |i| {
        let mut v = Vec::new();
        for dagger in [false, true] {
            let tag = if dagger { "A_dagger" } else { "A" };
            let a = build_a(ring, i, dagger);
            v.push(VerificationReport::check(format!("{tag}.rotation.{i}"), k, || {
                (a.conjugate_by_group(r_el), build_a(ring, i + 1, dagger))
            }));
            v.push(VerificationReport::check(format!("{tag}.reflection.{i}"), k, || {
                (a.conjugate_by_group(i_el), -build_a(ring, ki - i, dagger))
            }));
            for lambda in [-1i64, 1, 2] {
                v.push(VerificationReport::check(format!("{tag}.index.{i}+{lambda}k"), k, || {
                    let sign = Rational::from_int(if lambda % 2 == 0 { 1 } else { -1 });
                    (build_a(ring, lambda * ki + i, dagger), a.scale(&sign))
                }));
            }
            let btag = if dagger { "B_dagger" } else { "B" };
            v.push(VerificationReport::check(format!("{btag}.from_A.{i}"), k, || {
                (build_b_from_a(ring, i, dagger), build_b(ring, i, dagger))
            }));
        }
        v.push(VerificationReport::check(format!("A.adjoint.{i}"), k, || {
            (build_a(ring, i, false).adjoint(), build_a(ring, i, true))
        }));
        v.push(VerificationReport::check(format!("B.adjoint.{i}"), k, || {
            (build_b(ring, i, false).adjoint(), build_b(ring, i, true))
        }));
        v
    });
    out.push(VerificationReport::check("A.reference", k, || {
        let dr = build_dr(ring);
        let dphi = build_dphi(ring);
        let a = &(&omega_r(ring) + &dr).left_mul(&cos_i(ring, 0))
            - &dphi.left_mul(&(&sin_i(ring, 0) * &coef_var(ring, Var::R, -1)));
        (build_a(ring, 0, false), a)
    }));
    out.push(VerificationReport::check("B.reflection.0", k, || {
        let b = build_b(ring, 0, false);
        (b.conjugate_by_group(i_el), -b)
    }));
    out.extend(check_linear_relations(ring));
    out
}

/// Σ(−1)^i A_i = 0, Σ A_i cos(iπ/k) = (k/2)A_0, and for i = 0..2k−1:
/// A_i cos(iπ/k) = (A_0 + A_{2i})/2, B_i sin(iπ/k) = (A_0 − A_{2i})/2.
pub fn check_linear_relations(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let ki = k as i64;
    let a0 = build_a(ring, 0, false);
    let half = Rational::new(1, 2);
    let mut out = vec![
        VerificationReport::check("linear.alternating_sum", k, || {
            let parts: Vec<OperatorExpr> = (0..ki)
                .map(|i| build_a(ring, i, false).scale(&Rational::from_int(if i % 2 == 0 { 1 } else { -1 })))
                .collect();
            (OperatorExpr::sum(ring, &parts), OperatorExpr::zero(ring))
        }),
        VerificationReport::check("linear.cos_sum", k, || {
            let parts: Vec<OperatorExpr> = (0..ki)
                .map(|i| build_a(ring, i, false).left_mul(&trig_const(ring, Trig::Cos, i)))
                .collect();
            (OperatorExpr::sum(ring, &parts), a0.scale(&Rational::new(ki, 2)))
        }),
    ];
    let per_i: Vec<VerificationReport> = (0..2 * ki)
        .into_par_iter()
        .flat_map(|i| {
            let a2i = build_a(ring, 2 * i, false);
            vec![
                VerificationReport::check(format!("linear.A_cos.{i}"), k, || {
                    (
                        build_a(ring, i, false).left_mul(&trig_const(ring, Trig::Cos, i)),
                        (&a0 + &a2i).scale(&half),
                    )
                }),
                VerificationReport::check(format!("linear.B_sin.{i}"), k, || {
                    (
                        build_b(ring, i, false).left_mul(&trig_const(ring, Trig::Sin, i)),
                        (&a0 - &a2i).scale(&half),
                    )
                }),
            ]
        })
        .collect();
    out.extend(per_i);
    out
}

/// [A_i, A_j] = [A_i†, A_j†] = 0 and [A_i, A_j†] in closed form for
/// 0 ≤ i ≤ j ≤ k−1, plus the symmetry [A_i, A_j†] = [A_j, A_i†].
pub fn check_boson_commutators(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let ki = k as i64;
    let pairs: Vec<(i64, i64)> = (0..ki).flat_map(|i| (i..ki).map(move |j| (i, j))).collect();
    pairs
        .into_par_iter()
        .flat_map(|(i, j)| {
            let (ai, aj) = (build_a(ring, i, false), build_a(ring, j, false));
            let (adi, adj) = (build_a(ring, i, true), build_a(ring, j, true));
            let zero = OperatorExpr::zero(ring);
            vec![
                VerificationReport::check(format!("boson.[A{i},A{j}]"), k, || (ai.commutator(&aj).unwrap(), zero.clone())),
                VerificationReport::check(format!("boson.[A{i}+,A{j}+]"), k, || {
                    (adi.commutator(&adj).unwrap(), zero.clone())
                }),
                VerificationReport::check(format!("boson.[A{i},A{j}+]"), k, || {
                    (ai.commutator(&adj).unwrap(), boson_commutator_target(ring, i, j))
                }),
                VerificationReport::check(format!("boson.symmetry.{i},{j}"), k, || {
                    (ai.commutator(&adj).unwrap(), aj.commutator(&adi).unwrap())
                }),
            ]
        })
        .collect()
}

/// Dihedral action on H_i, the explicit form of 2ωH_i, self-adjointness and
/// the sum rule 2ω Σ H_i = (k/2) 𝓗_k.
pub fn check_h_structure(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let ki = k as i64;
    let r_el = GroupElement::rotation(1, k);
    let i_el = GroupElement::new(0, true, k);
    let mut out = each_index(k, |i| {
        let h = build_h(ring, i);
        vec![
            VerificationReport::check(format!("H.rotation.{i}"), k, || {
                (h.conjugate_by_group(r_el), build_h(ring, (i + 1) % ki))
            }),
            VerificationReport::check(format!("H.reflection.{i}"), k, || {
                (h.conjugate_by_group(i_el), build_h(ring, (ki - i) % ki))
            }),
            VerificationReport::check(format!("H.explicit.{i}"), k, || {
                (build_h_scaled(ring, i), h_scaled_explicit(ring, i))
            }),
            VerificationReport::check(format!("H.adjoint.{i}"), k, || (h.adjoint(), h.clone())),
        ]
    });
    out.push(VerificationReport::check("H.sum_rule", k, || {
        let hs: Vec<OperatorExpr> = (0..ki).map(|i| build_h_scaled(ring, i)).collect();
        (OperatorExpr::sum(ring, &hs), build_extended_h(ring).scale(&Rational::new(ki, 2)))
    }));
    out
}

/// [H_0, H_i] against its closed form for i = 0..k−1.
pub fn check_h_commutators(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let h0 = build_h_scaled(ring, 0);
    each_index(k, |i| {
        vec![VerificationReport::check(format!("H.commutator.0,{i}"), k, || {
            // [2ωH_0, 2ωH_i] = (2ω)²[H_0, H_i]; the target is (4ω)² RHS.
            let lhs = h0.commutator(&build_h_scaled(ring, i)).unwrap().scale(&Rational::from_int(4));
            (lhs, h_commutator_target(ring, i))
        })]
    })
}

/// [H_i, 𝓗_k] = 0 for every i.
pub fn check_h_integrals(ring: &Arc<CoeffRing>) -> Vec<VerificationReport> {
    let k = ring.k();
    let h = build_extended_h(ring);
    each_index(k, |i| {
        vec![VerificationReport::check(format!("H.integral.{i}"), k, || {
            (build_h(ring, i).commutator(&h).unwrap(), OperatorExpr::zero(ring))
        })]
    })
}

/// −2^{−2k+4} k! k sin kφ cos kφ.
pub fn leading_coefficient_target(ring: &Arc<CoeffRing>) -> Coefficient {
    let k = ring.k() as i64;
    let fact: i64 = (1..=k).product();
    let scale = &Rational::new(-fact * k, 1) * &Rational::new(1, 1 << (2 * k - 4));
    (&Coefficient::trig_multiple(ring, TrigFn::Sin) * &Coefficient::trig_multiple(ring, TrigFn::Cos)).scale(&scale)
}

/// Checks on a built 𝓨_{2k}: D_{2k} invariance, order 2k after projection,
/// self-adjointness, commutation with 𝓗_k and the independence certificate
/// from [𝓧_k, 𝓨_{2k}].
pub fn check_superintegrability(ring: &Arc<CoeffRing>, y: &OperatorExpr) -> Vec<VerificationReport> {
    let k = ring.k();
    let r_el = GroupElement::rotation(1, k);
    let i_el = GroupElement::new(0, true, k);
    let h = build_extended_h(ring);
    let x = build_extended_x(ring);
    let start = Instant::now();
    let y_proj = y.project_identity();
    let order = y_proj.max_order();
    let mut out = vec![
        VerificationReport::from_count(
            "Y.order",
            k,
            usize::from(order != 2 * k as i64),
            start.elapsed(),
            Some(format!("max order of projection = {order}, terms = {}", y_proj.term_count())),
        ),
        VerificationReport::check("Y.invariance.R", k, || (y.conjugate_by_group(r_el), y.clone())),
        VerificationReport::check("Y.invariance.I", k, || (y.conjugate_by_group(i_el), y.clone())),
        VerificationReport::check("Y.adjoint", k, || (y.adjoint(), y.clone())),
        VerificationReport::check("superintegrability.[H,Y]", k, || {
            (h.commutator(y).unwrap(), OperatorExpr::zero(ring))
        }),
    ];
    let start = Instant::now();
    let xy = x.commutator(y).unwrap();
    let xy_proj = xy.project_identity();
    let xy_time = start.elapsed();
    out.push(VerificationReport::check_coefficient("independence.leading", k, || {
        (xy_proj.coefficient_of(2 * k, 1), leading_coefficient_target(ring))
    }));
    out.push(VerificationReport::from_count(
        "independence.nonzero",
        k,
        usize::from(xy_proj.coefficient_of(2 * k, 1).is_zero()),
        xy_time,
        None,
    ));
    out.push(VerificationReport::check("independence.projected", k, || {
        (xy_proj.clone(), x.project_identity().commutator(&y_proj).unwrap())
    }));
    out
}

/// With a = b = 0 every builder reduces to the plain polar operators, and
/// [h, project(𝓨_{2k})] = 0.
pub fn check_reductions(ring: &Arc<CoeffRing>, y: Option<&OperatorExpr>) -> Vec<VerificationReport> {
    let k = ring.k();
    let ki = k as i64;
    let zero = Rational::ZERO;
    let plain = |op: &OperatorExpr| op.specialize(Some(&zero), Some(&zero), None).unwrap();
    let h = plain_oscillator(ring);
    let mut out = vec![
        VerificationReport::check("reduction.Dr", k, || (plain(&build_dr(ring)), OperatorExpr::d_r(ring))),
        VerificationReport::check("reduction.Dphi", k, || (plain(&build_dphi(ring)), OperatorExpr::d_phi(ring))),
        VerificationReport::check("reduction.H", k, || (plain(&build_extended_h(ring)), h.clone())),
        VerificationReport::check("reduction.X", k, || {
            (plain(&build_extended_x(ring)), -OperatorExpr::d_phi(ring).pow(2))
        }),
        VerificationReport::check("reduction.sum_rule", k, || {
            let hs: Vec<OperatorExpr> = (0..ki).map(|i| plain(&build_h_scaled(ring, i))).collect();
            (OperatorExpr::sum(ring, &hs), h.scale(&Rational::new(ki, 2)))
        }),
    ];
    out.extend(each_index(k, |i| {
        (0..ki)
            .map(|j| {
                VerificationReport::check(format!("reduction.[A{i},A{j}+]"), k, || {
                    let c = plain(&build_a(ring, i, false).commutator(&build_a(ring, j, true)).unwrap());
                    let target = scalar(&trig_const(ring, Trig::Cos, j - i) * &two_omega(ring));
                    (c, target)
                })
            })
            .collect()
    }));
    if let Some(y) = y {
        out.push(VerificationReport::check("reduction.[h,Y]", k, || {
            let y0 = plain(y).project_identity();
            (h.commutator(&y0).unwrap(), OperatorExpr::zero(ring))
        }));
    }
    out
}
