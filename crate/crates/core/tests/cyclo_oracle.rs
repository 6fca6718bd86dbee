//! Exact field arithmetic against two independent routes: polynomial
//! extended Euclid modulo a separately computed cyclotomic polynomial, and
//! the complex embedding ζ ↦ e^{2πi/N}.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use ttw_core::cyclo::{CyclotomicNumber, Rational};

type QPoly = Vec<BigRational>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) - b.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect(),
    )
}

fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn divmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = trim(a.clone());
    let lead = b.last().expect("nonzero divisor").clone();
    let mut quot = vec![BigRational::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        quot[shift] = c;
        r = trim(r);
    }
    (trim(quot), r)
}

/// Φ_N from x^N − 1 = Π_{d | N} Φ_d.
fn cyclotomic(n: u32) -> QPoly {
    let mut p = vec![q(-1)];
    p.resize(n as usize, q(0));
    p.push(q(1));
    for d in (1..n).filter(|d| n % d == 0) {
        p = divmod(&p, &cyclotomic(d)).0;
    }
    p
}

/// x⁻¹ mod m by the extended Euclidean algorithm.
fn inverse_mod(x: &QPoly, m: &QPoly) -> QPoly {
    let (mut r0, mut r1) = (m.clone(), x.clone());
    let (mut s0, mut s1): (QPoly, QPoly) = (vec![], vec![q(1)]);
    while !r1.is_empty() {
        let (quot, rem) = divmod(&r0, &r1);
        let s2 = sub(&s0, &mul(&quot, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    assert_eq!(r0.len(), 1, "gcd must be a nonzero constant");
    let c = r0[0].clone();
    s0.into_iter().map(|x| x / &c).collect()
}

fn to_big(r: &Rational) -> BigRational {
    r.to_string().parse().expect("rational text")
}

fn coords(x: &CyclotomicNumber) -> QPoly {
    trim(x.coords().iter().map(to_big).collect())
}

fn from_qpoly(order: u32, p: &QPoly) -> CyclotomicNumber {
    let deg = cyclotomic(order).len() - 1;
    let mut c: Vec<Rational> = p.iter().map(|x| x.to_string().parse().unwrap()).collect();
    c.resize(deg, Rational::ZERO);
    CyclotomicNumber::from_coords(order, c).unwrap()
}

#[test]
fn independent_cyclotomic_polynomials_agree() {
    for n in [12u32, 20, 28, 36, 44] {
        let phi = cyclotomic(n);
        let lib = ttw_core::cyclo::cyclotomic_polynomial(n);
        assert_eq!(phi, lib.iter().map(|&c| q(c)).collect::<QPoly>(), "N = {n}");
    }
}

#[test]
fn inverse_of_three_plus_zeta() {
    let x = &CyclotomicNumber::rational(12, Rational::from_int(3)).unwrap()
        + &CyclotomicNumber::make(12, 1, Rational::ONE).unwrap();
    let lib = x.invert().unwrap();
    let oracle = inverse_mod(&coords(&x), &cyclotomic(12));
    assert_eq!(coords(&lib), oracle);
    assert_eq!(&x * &lib, CyclotomicNumber::one(12).unwrap());
}

fn arb_coords(order: u32) -> impl Strategy<Value = Vec<(i64, i64)>> {
    let deg = cyclotomic(order).len() - 1;
    proptest::collection::vec((-9i64..10, 1i64..5), deg)
}

fn build(order: u32, v: &[(i64, i64)]) -> CyclotomicNumber {
    CyclotomicNumber::from_coords(order, v.iter().map(|&(n, d)| Rational::new(n, d)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_matches_extended_euclid(
        (order, v) in prop::sample::select(vec![12u32, 20, 28]).prop_flat_map(|o| (Just(o), arb_coords(o)))
    ) {
        let x = build(order, &v);
        prop_assume!(!x.is_zero());
        let oracle = from_qpoly(order, &inverse_mod(&coords(&x), &cyclotomic(order)));
        prop_assert_eq!(x.invert().unwrap(), oracle);
    }

    #[test]
    fn multiplication_is_polynomial_product_mod_phi(x in arb_coords(20), y in arb_coords(20)) {
        let (a, b) = (build(20, &x), build(20, &y));
        let oracle = divmod(&mul(&coords(&a), &coords(&b)), &cyclotomic(20)).1;
        prop_assert_eq!(coords(&(&a * &b)), oracle);
    }
}

/// Random expression trees evaluated exactly and in complex floating point.
#[derive(Debug, Clone)]
enum Expr {
    Leaf(i64, i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Conj(Box<Expr>),
    Inv(Box<Expr>),
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = (-30i64..30, -5i64..6, 1i64..4).prop_map(|(m, n, d)| Expr::Leaf(m, n, d));
    leaf.prop_recursive(8, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Conj(Box::new(a))),
            inner.prop_map(|a| Expr::Inv(Box::new(a))),
        ]
    })
}

/// Exact value, float value and the largest magnitude met along the way,
/// which bounds the absolute rounding error. `None` if an inverse hits a
/// zero or a badly conditioned divisor.
fn eval(e: &Expr, order: u32) -> Option<(CyclotomicNumber, Complex64, f64)> {
    let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / order as f64);
    Some(match e {
        Expr::Leaf(m, n, d) => {
            let x = CyclotomicNumber::make(order, *m, Rational::new(*n, *d)).unwrap();
            let f = zeta.powi(*m as i32) * (*n as f64 / *d as f64);
            (x, f, f.norm())
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            let (x, f, s) = eval(a, order)?;
            let (y, g, t) = eval(b, order)?;
            let (z, h) = match e {
                Expr::Add(..) => (&x + &y, f + g),
                Expr::Sub(..) => (&x - &y, f - g),
                _ => (&x * &y, f * g),
            };
            let scale = match e {
                Expr::Mul(..) => s.max(1.0) * t.max(1.0),
                _ => s.max(t),
            };
            (z, h, scale.max(h.norm()))
        }
        Expr::Conj(a) => {
            let (x, f, s) = eval(a, order)?;
            (x.conjugate(), f.conj(), s)
        }
        Expr::Inv(a) => {
            let (x, f, s) = eval(a, order)?;
            if x.is_zero() || f.norm() < 1e-3 * s.max(1.0) {
                return None;
            }
            let h = f.inv();
            (x.invert().unwrap(), h, s.max(h.norm()).max(1.0 / f.norm()))
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn embedding_matches_exact_arithmetic(e in arb_expr(), order in prop::sample::select(vec![12u32, 20, 28])) {
        if let Some((x, f, scale)) = eval(&e, order) {
            let exact = x.to_complex();
            let tol = 1e-12 * scale.max(1.0).max(exact.norm());
            prop_assert!((exact - f).norm() <= tol, "exact {} float {} scale {}", exact, f, scale);
        }
    }
}

#[test]
fn coordinates_are_bounded_rationals() {
    // sanity on the test's own conversion helpers
    let x = CyclotomicNumber::make(12, 5, Rational::new(-7, 3)).unwrap();
    let back = from_qpoly(12, &coords(&x));
    assert_eq!(back, x);
    assert!(coords(&x).iter().all(|c| c.abs() < q(10)));
    assert!(coords(&CyclotomicNumber::one(12).unwrap()) == vec![BigRational::one()]);
}
