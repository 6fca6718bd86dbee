//! Coefficient ring: the secant-sum identity by brute-force polynomial
//! expansion, numeric agreement of eval_complex with direct trigonometry, and
//! ring properties on random elements.

use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttw_core::coeff::{CoeffRing, Coefficient, EvalPoint, Substitution, TrigFn, Var};
use ttw_core::cyclo::{CyclotomicNumber, Rational};

/// Polynomials in u over Q(ζ_N), lowest degree first.
type UPoly = Vec<CyclotomicNumber>;

fn upoly_mul(a: &UPoly, b: &UPoly, order: u32) -> UPoly {
    let mut out = vec![CyclotomicNumber::zero(order).unwrap(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn upoly_add(a: &UPoly, b: &UPoly, order: u32) -> UPoly {
    let zero = CyclotomicNumber::zero(order).unwrap();
    (0..a.len().max(b.len()))
        .map(|i| &a.get(i).cloned().unwrap_or(zero.clone()) + &b.get(i).cloned().unwrap_or(zero.clone()))
        .collect()
}

/// c·u^e.
fn mono(c: CyclotomicNumber, e: usize, order: u32) -> UPoly {
    let mut p = vec![CyclotomicNumber::zero(order).unwrap(); e + 1];
    p[e] = c;
    p
}

fn zeta(order: u32, m: i64) -> CyclotomicNumber {
    CyclotomicNumber::make(order, m, Rational::ONE).unwrap()
}

fn int(order: u32, n: i64) -> CyclotomicNumber {
    CyclotomicNumber::rational(order, Rational::from_int(n)).unwrap()
}

/// Σ_i sec²(φ + iπ/k) = k² sec²(kφ), with sec(φ + iπ/k) = 2ζ^{2i}u / (ζ^{4i}u² + 1):
/// both sides over the common denominator Π_i (ζ^{4i}u² + 1)² · (u^{2k} + 1)².
fn secant_sum_by_expansion(k: u32) -> bool {
    let n = 4 * k;
    let ki = k as i64;
    let wall = |i: i64| upoly_add(&mono(int(n, 1), 0, n), &mono(zeta(n, 4 * i), 2, n), n);
    let sq = |p: &UPoly| upoly_mul(p, p, n);
    let rhs_den = sq(&upoly_add(&mono(int(n, 1), 0, n), &mono(int(n, 1), 2 * k as usize, n), n));
    let all_walls = (0..ki).fold(mono(int(n, 1), 0, n), |acc, i| upoly_mul(&acc, &sq(&wall(i)), n));
    // LHS numerator over Π_i wall_i²
    let mut lhs_num = mono(int(n, 0), 0, n);
    for i in 0..ki {
        let others = (0..ki).filter(|&j| j != i).fold(mono(int(n, 1), 0, n), |acc, j| upoly_mul(&acc, &sq(&wall(j)), n));
        lhs_num = upoly_add(&lhs_num, &upoly_mul(&mono(&int(n, 4) * &zeta(n, 4 * i), 2, n), &others, n), n);
    }
    let rhs_num = mono(int(n, 4 * ki * ki), 2 * k as usize, n);
    let left = upoly_mul(&lhs_num, &rhs_den, n);
    let right = upoly_mul(&rhs_num, &all_walls, n);
    let len = left.len().max(right.len());
    let zero = int(n, 0);
    (0..len).all(|i| left.get(i).unwrap_or(&zero) == right.get(i).unwrap_or(&zero))
}

#[test]
fn secant_sum_identity_by_brute_force() {
    for k in [3, 5] {
        assert!(secant_sum_by_expansion(k), "k = {k}");
    }
}

#[test]
fn secant_sum_identity_in_the_ring() {
    for k in [3u32, 5, 7] {
        let ring = CoeffRing::get(k).unwrap();
        let parts: Vec<Coefficient> = (0..k as i64).map(|i| Coefficient::trig_fn(&ring, TrigFn::Sec2, i)).collect();
        let lhs = Coefficient::sum(&ring, &parts);
        let rhs = Coefficient::trig_multiple(&ring, TrigFn::Sec2).scale(&Rational::from_int((k * k) as i64));
        assert_eq!(lhs, rhs, "k = {k}");
    }
}

fn safe_phi(rng: &mut ChaCha8Rng, k: u32, margin: f64) -> f64 {
    loop {
        let phi = rng.gen_range(0.0..2.0 * PI);
        if ttw_core::oracle::wall_distance(phi, k) >= margin {
            return phi;
        }
    }
}

fn point(r: f64, phi: f64) -> EvalPoint {
    EvalPoint { r, phi, a: 0.7, b: -1.3, omega: 1.1 }
}

#[test]
fn secant_sum_identity_numerically() {
    let ring = CoeffRing::get(3).unwrap();
    let parts: Vec<Coefficient> = (0..3).map(|i| Coefficient::trig_fn(&ring, TrigFn::Sec2, i)).collect();
    let lhs = Coefficient::sum(&ring, &parts);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let phi = safe_phi(&mut rng, 3, 0.05);
        let direct: f64 = (0..3).map(|i| 1.0 / (phi + i as f64 * PI / 3.0).cos().powi(2)).sum();
        let target = 9.0 / (3.0 * phi).cos().powi(2);
        let sym = lhs.eval_complex(&point(1.0, phi), 0.01).unwrap();
        assert!((direct - target).abs() <= 1e-10 * target.abs());
        assert!((sym.re - target).abs() <= 1e-10 * target.abs() && sym.im.abs() <= 1e-10 * target.abs());
    }
}

/// Every trigonometric building block against libm at 20 safe points.
#[test]
fn trig_blocks_match_direct_evaluation() {
    type Direct = fn(f64) -> f64;
    let kinds: [(TrigFn, Direct); 6] = [
        (TrigFn::Sin, f64::sin),
        (TrigFn::Cos, f64::cos),
        (TrigFn::Tan, f64::tan),
        (TrigFn::Cot, |x| 1.0 / x.tan()),
        (TrigFn::Sec2, |x| 1.0 / x.cos().powi(2)),
        (TrigFn::Csc2, |x| 1.0 / x.sin().powi(2)),
    ];
    for k in [3u32, 5] {
        let ring = CoeffRing::get(k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        for _ in 0..20 {
            let phi = safe_phi(&mut rng, k, 0.05);
            for (kind, f) in kinds {
                for j in -(k as i64)..(2 * k as i64) {
                    let want = f(phi + j as f64 * PI / k as f64);
                    let got = Coefficient::trig_fn(&ring, kind, j).eval_complex(&point(1.0, phi), 0.01).unwrap();
                    let tol = 1e-9 * want.abs().max(1.0);
                    assert!((got.re - want).abs() <= tol && got.im.abs() <= tol, "{kind:?} j={j} phi={phi}");
                }
                let want = f(k as f64 * phi);
                if !matches!(kind, TrigFn::Tan | TrigFn::Cot) || want.is_finite() {
                    let got = Coefficient::trig_multiple(&ring, kind).eval_complex(&point(1.0, phi), 0.01).unwrap();
                    assert!((got.re - want).abs() <= 1e-9 * want.abs().max(1.0), "{kind:?}(k phi)");
                }
            }
        }
    }
}

#[test]
fn pipeline_coefficients_match_direct_evaluation() {
    // coefficient of the 𝓡^{k+2i}𝓘 term of D_φ is a·tan(φ + iπ/k)
    let k = 3u32;
    let ring = CoeffRing::get(k).unwrap();
    let dphi = ttw_core::dunkl::build_dphi(&ring);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let phi = safe_phi(&mut rng, k, 0.05);
        let p = point(1.4, phi);
        for i in 0..k as i64 {
            let g = ttw_core::opalg::GroupElement::new(k as i64 + 2 * i, true, k);
            let c = dphi.coefficient_at(&ttw_core::opalg::TermKey { p: 0, q: 0, g }).eval_complex(&p, 0.01).unwrap();
            let want = p.a * (phi + i as f64 * PI / k as f64).tan();
            assert!((c.re - want).abs() <= 1e-9 * want.abs().max(1.0) && c.im.abs() <= 1e-9);
        }
    }
}

fn arb_coeff(ring: Arc<CoeffRing>) -> impl Strategy<Value = Coefficient> {
    let kinds = prop::sample::select(vec![TrigFn::Sin, TrigFn::Cos, TrigFn::Tan, TrigFn::Cot, TrigFn::Sec2, TrigFn::Csc2]);
    let factor = (kinds, -6i64..6, -2i32..3, 0i32..2, -3i64..4);
    proptest::collection::vec(factor, 1..4).prop_map(move |fs| {
        let parts: Vec<Coefficient> = fs
            .into_iter()
            .map(|(kind, j, rp, ap, c)| {
                &(&Coefficient::trig_fn(&ring, kind, j) * &Coefficient::var_pow(&ring, Var::R, rp))
                    * &Coefficient::var_pow(&ring, Var::A, ap).scale(&Rational::from_int(c))
            })
            .collect();
        Coefficient::sum(&ring, &parts)
    })
}

fn ring3() -> Arc<CoeffRing> {
    CoeffRing::get(3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ring_axioms(x in arb_coeff(ring3()), y in arb_coeff(ring3()), z in arb_coeff(ring3())) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
        prop_assert!(x.equals(&(&(&x * &y) + &x)).unwrap() == (&x * &y).is_zero());
    }

    #[test]
    fn derivatives_commute_and_obey_leibniz(x in arb_coeff(ring3()), y in arb_coeff(ring3())) {
        prop_assert_eq!(x.d_r().d_phi(), x.d_phi().d_r());
        prop_assert_eq!((&x * &y).d_phi(), &(&x.d_phi() * &y) + &(&x * &y.d_phi()));
        prop_assert_eq!((&x * &y).d_r(), &(&x.d_r() * &y) + &(&x * &y.d_r()));
    }

    #[test]
    fn substitutions_are_periodic_automorphisms(x in arb_coeff(ring3()), y in arb_coeff(ring3())) {
        let mut shifted = x.clone();
        for _ in 0..6 {
            shifted = shifted.substitute(Substitution::ShiftR(1));
        }
        prop_assert_eq!(&shifted, &x);
        prop_assert_eq!(x.substitute(Substitution::ReflectI).substitute(Substitution::ReflectI), x.clone());
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!((&x * &y).substitute(Substitution::ShiftR(2)), &x.substitute(Substitution::ShiftR(2)) * &y.substitute(Substitution::ShiftR(2)));
        prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in arb_coeff(ring3()), y in arb_coeff(ring3()), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = point(rng.gen_range(0.5..2.0), safe_phi(&mut rng, 3, 0.1));
        let (ex, ey) = (x.eval_complex(&p, 0.05).unwrap(), y.eval_complex(&p, 0.05).unwrap());
        let exy = (&x * &y).eval_complex(&p, 0.05).unwrap();
        let scale = (ex.norm() * ey.norm()).max(1.0);
        prop_assert!((exy - ex * ey).norm() <= 1e-12 * scale);
    }
}

#[test]
fn zeta_constants_lie_in_the_ring() {
    let ring = ring3();
    let half = Coefficient::constant(&ring, &(&zeta(12, 2) + &zeta(12, -2))).unwrap();
    assert!(half.is_one());
}
