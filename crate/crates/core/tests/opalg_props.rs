//! Algebraic laws of the operator engine on operators produced by the
//! builders.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use ttw_core::coeff::{CoeffRing, Coefficient, TrigFn, Var};
use ttw_core::opalg::{GroupElement, OperatorExpr};
use ttw_core::{dunkl, ttw};

fn ring() -> Arc<CoeffRing> {
    CoeffRing::get(3).unwrap()
}

/// A pool of operators built by the pipeline, small enough for triple
/// products.
fn pool() -> &'static Vec<OperatorExpr> {
    static POOL: OnceLock<Vec<OperatorExpr>> = OnceLock::new();
    POOL.get_or_init(|| {
        let ring = ring();
        vec![
            dunkl::build_r(&ring),
            dunkl::build_i(&ring),
            dunkl::build_dr(&ring),
            dunkl::build_dphi(&ring),
            OperatorExpr::scalar(Coefficient::trig_fn(&ring, TrigFn::Cos, 0)),
            OperatorExpr::scalar(Coefficient::var(&ring, Var::R)),
            ttw::build_a(&ring, 0, false),
            ttw::build_a(&ring, 1, true),
            ttw::build_b(&ring, 2, false),
            dunkl::build_extended_x(&ring),
        ]
    })
}

fn y6() -> &'static OperatorExpr {
    static Y: OnceLock<OperatorExpr> = OnceLock::new();
    Y.get_or_init(|| ttw::build_y(&ring(), &ttw::Budget::unlimited()).unwrap())
}

fn pick() -> impl Strategy<Value = usize> {
    0..pool().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_is_associative(i in pick(), j in pick(), l in pick()) {
        let (x, y, z) = (&pool()[i], &pool()[j], &pool()[l]);
        prop_assert_eq!(&(x * y) * z, x * &(y * z));
    }

    #[test]
    fn adjoint_is_an_involutive_antihomomorphism(i in pick(), j in pick()) {
        let (x, y) = (&pool()[i], &pool()[j]);
        prop_assert_eq!(&x.adjoint().adjoint(), x);
        prop_assert_eq!((x * y).adjoint(), &y.adjoint() * &x.adjoint());
    }

    #[test]
    fn commutator_is_a_derivation(i in pick(), j in pick(), l in pick()) {
        let (x, y, z) = (&pool()[i], &pool()[j], &pool()[l]);
        let lhs = x.commutator(&(y * z)).unwrap();
        let rhs = &(&x.commutator(y).unwrap() * z) + &(y * &x.commutator(z).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

fn invariant(x: &OperatorExpr) -> bool {
    let k = x.k();
    GroupElement::all(k).into_iter().all(|g| &x.conjugate_by_group(g) == x)
}

fn projection_is_multiplicative(x: &OperatorExpr, y: &OperatorExpr) {
    assert!(invariant(x) && invariant(y), "both factors must be D_2k invariant");
    assert_eq!((x * y).project_identity(), &x.project_identity() * &y.project_identity());
}

#[test]
fn projection_multiplicative_on_h_and_x() {
    let ring = ring();
    projection_is_multiplicative(&dunkl::build_extended_h(&ring), &dunkl::build_extended_x(&ring));
}

#[test]
fn projection_multiplicative_on_h_and_y() {
    projection_is_multiplicative(&dunkl::build_extended_h(&ring()), y6());
}

#[test]
fn projection_multiplicative_on_x_and_y() {
    projection_is_multiplicative(&dunkl::build_extended_x(&ring()), y6());
}

#[test]
fn projection_is_not_multiplicative_without_invariance() {
    // D_φ anticommutes with 𝓘, so the law is genuinely conditional
    let ring = ring();
    let dphi = dunkl::build_dphi(&ring);
    assert!(!invariant(&dphi));
    assert!(invariant(&dunkl::build_dr(&ring)));
    assert_ne!((&dphi * &dphi).project_identity(), &dphi.project_identity() * &dphi.project_identity());
}

#[test]
fn extended_operators_invariant_under_all_of_d6() {
    let ring = ring();
    assert_eq!(GroupElement::all(3).len(), 12);
    for op in [dunkl::build_extended_h(&ring), dunkl::build_extended_x(&ring)] {
        for g in GroupElement::all(3) {
            assert_eq!(op.conjugate_by_group(g), op, "{g:?}");
            let gop = OperatorExpr::group(&ring, g);
            assert_eq!(&(&gop * &op) * &OperatorExpr::group(&ring, g.inverse(3)), op);
        }
    }
}

#[test]
fn conjugation_matches_explicit_products() {
    let ring = ring();
    for op in pool() {
        for g in GroupElement::all(3) {
            let explicit = &(&OperatorExpr::group(&ring, g) * op) * &OperatorExpr::group(&ring, g.inverse(3));
            assert_eq!(op.conjugate_by_group(g), explicit);
        }
    }
}

#[test]
fn leibniz_anticommutator() {
    let ring = ring();
    let cos = OperatorExpr::scalar(Coefficient::trig_fn(&ring, TrigFn::Cos, 0));
    let sin = Coefficient::trig_fn(&ring, TrigFn::Sin, 0);
    let lhs = OperatorExpr::d_phi(&ring).anticommutator(&cos).unwrap();
    let rhs = &(&cos * &OperatorExpr::d_phi(&ring)).scale(&2.into()) - &OperatorExpr::scalar(sin);
    assert_eq!(lhs, rhs);
}

#[test]
fn self_commutators_vanish() {
    let h = dunkl::build_extended_h(&ring());
    assert!(h.commutator(&h).unwrap().is_zero());
}

#[test]
fn parallel_products_are_reproducible() {
    // rayon splits the right factor; repeated runs must agree bitwise
    let ring = ring();
    let h = dunkl::build_extended_h(&ring);
    let first = (&h * y6()).to_string();
    for _ in 0..3 {
        assert_eq!((&h * y6()).to_string(), first);
    }
}
