//! Normal-ordering product and adjoint.
//!
//! For terms X = f ∂_r^p ∂_φ^q g and Y = h ∂_r^{p'} ∂_φ^{q'} g',
//!
//! ```text
//! X·Y = Σ_{i≤p, j≤q} s · C(p,i) C(q,j) · f · ∂_r^i ∂_φ^j (h∘T_g)
//!         · ∂_r^{p−i+p'} ∂_φ^{q−j+q'} · g g',      s = (−1)^{ε(g) q'}.
//! ```
//!
//! Contributions are summed per output key in [`Accumulator`]s, which
//! normalize once at the end. The work is split over the terms of the right
//! factor; exact arithmetic makes the merged result independent of the
//! schedule.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{GroupElement, OperatorExpr, TermKey};
use crate::coeff::{Accumulator, Coefficient};
use crate::cyclo::Rational;

type AccMap = BTreeMap<TermKey, Accumulator>;

/// Terms of the left factor sharing one group element.
struct LeftGroup<'a> {
    g: GroupElement,
    max_p: u32,
    max_q: u32,
    terms: Vec<(TermKey, &'a Coefficient)>,
}

fn left_groups(x: &OperatorExpr) -> Vec<LeftGroup<'_>> {
    let mut by_g: BTreeMap<GroupElement, LeftGroup<'_>> = BTreeMap::new();
    for (key, f) in &x.terms {
        let grp = by_g.entry(key.g).or_insert_with(|| LeftGroup {
            g: key.g,
            max_p: 0,
            max_q: 0,
            terms: Vec::new(),
        });
        grp.max_p = grp.max_p.max(key.p);
        grp.max_q = grp.max_q.max(key.q);
        grp.terms.push((*key, f));
    }
    by_g.into_values().collect()
}

fn pascal(n: u32) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::ONE]];
    for i in 1..=n as usize {
        let prev = &rows[i - 1];
        let mut row = vec![Rational::ONE; i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

/// table[i][j] = ∂_r^i ∂_φ^j c.
fn derivative_table(c: &Coefficient, max_p: u32, max_q: u32) -> Vec<Vec<Coefficient>> {
    let mut row0 = vec![c.clone()];
    for j in 1..=max_q as usize {
        row0.push(row0[j - 1].d_phi());
    }
    let mut table = vec![row0];
    for i in 1..=max_p as usize {
        let row = table[i - 1].iter().map(Coefficient::d_r).collect();
        table.push(row);
    }
    table
}

fn add_to(acc: &mut AccMap, key: TermKey, c: &Coefficient) {
    if c.is_zero() {
        return;
    }
    acc.entry(key)
        .or_insert_with(|| Accumulator::new(c.ring()))
        .add(c);
}

fn merge_maps(mut a: AccMap, b: AccMap) -> AccMap {
    for (key, acc) in b {
        match a.get_mut(&key) {
            Some(existing) => existing.merge(acc),
            None => {
                a.insert(key, acc);
            }
        }
    }
    a
}

/// Adds X·(h ∂_r^{p'} ∂_φ^{q'} g') to `acc`.
fn contribute(
    groups: &[LeftGroup<'_>],
    binom: &[Vec<Rational>],
    k: u32,
    ky: &TermKey,
    h: &Coefficient,
    acc: &mut AccMap,
) {
    for grp in groups {
        let table = derivative_table(&grp.g.act(h), grp.max_p, grp.max_q);
        let flip = grp.g.refl() && ky.q % 2 == 1;
        let gg = grp.g.compose(&ky.g, k);
        for (kx, f) in &grp.terms {
            for i in 0..=kx.p {
                for j in 0..=kx.q {
                    let d = &table[i as usize][j as usize];
                    if d.is_zero() {
                        continue;
                    }
                    let mut c = &binom[kx.p as usize][i as usize] * &binom[kx.q as usize][j as usize];
                    if flip {
                        c = -c;
                    }
                    let prod = f.mul_unnormalized(d);
                    let prod = if c.is_one() { prod } else { prod.scale(&c) };
                    let key = TermKey::new(kx.p - i + ky.p, kx.q - j + ky.q, gg);
                    add_to(acc, key, &prod);
                }
            }
        }
    }
}

fn binomials_for(x: &OperatorExpr) -> Vec<Vec<Rational>> {
    let n = x.terms.keys().map(|key| key.p.max(key.q)).max().unwrap_or(0);
    pascal(n)
}

fn product_into(x: &OperatorExpr, y: &OperatorExpr, acc: &mut AccMap) {
    let groups = left_groups(x);
    let binom = binomials_for(x);
    for (ky, h) in &y.terms {
        contribute(&groups, &binom, x.k(), ky, h, acc);
    }
}

pub(super) fn multiply(x: &OperatorExpr, y: &OperatorExpr) -> OperatorExpr {
    let ring = x.ring();
    if x.is_zero() || y.is_zero() {
        return OperatorExpr::zero(ring);
    }
    let groups = left_groups(x);
    let binom = binomials_for(x);
    let k = x.k();
    let right: Vec<(&TermKey, &Coefficient)> = y.terms.iter().collect();
    let acc = right
        .par_iter()
        .fold(AccMap::new, |mut acc, (ky, h)| {
            contribute(&groups, &binom, k, ky, h, &mut acc);
            acc
        })
        .reduce(AccMap::new, merge_maps);
    OperatorExpr::from_accumulators(ring, acc)
}

pub(super) fn adjoint(x: &OperatorExpr) -> OperatorExpr {
    let ring = x.ring();
    let k = x.k();
    // (−∂_φ)^q (−∂_r − 1/r)^p for every (p, q) that occurs
    let minus_dphi = -OperatorExpr::d_phi(ring);
    let dr_dagger = -&(&OperatorExpr::d_r(ring)
        + &OperatorExpr::scalar(Coefficient::var_pow(ring, crate::coeff::Var::R, -1)));
    let mut bases: BTreeMap<(u32, u32), OperatorExpr> = BTreeMap::new();
    for key in x.terms.keys() {
        bases
            .entry((key.p, key.q))
            .or_insert_with(|| &minus_dphi.pow(key.q) * &dr_dagger.pow(key.p));
    }
    let terms: Vec<(&TermKey, &Coefficient)> = x.terms.iter().collect();
    let acc = terms
        .par_iter()
        .fold(AccMap::new, |mut acc, (key, f)| {
            let left = multiply(
                &OperatorExpr::group(ring, key.g.inverse(k)),
                &bases[&(key.p, key.q)],
            );
            product_into(&left, &OperatorExpr::scalar(f.conjugate()), &mut acc);
            acc
        })
        .reduce(AccMap::new, merge_maps);
    OperatorExpr::from_accumulators(ring, acc)
}
