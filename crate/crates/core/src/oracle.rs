//! Independent numeric evaluation of the operators.
//!
//! Operators are applied to test functions ψ = r^m e^{inφ} in two ways:
//!
//! * symbolically, by [`apply_to_monomial`], which runs the normal-ordered
//!   [`OperatorExpr`] on ψ and evaluates the resulting coefficient;
//! * numerically, by [`NumOp`] closures that follow the defining formulas
//!   directly in double precision: derivatives are taken with hyper-dual
//!   numbers, trigonometric prefactors with complex floating point, and group
//!   elements by transforming the angle argument.
//!
//! The numeric side shares no code with the rewriting engine or the
//! u-encoding, so agreement checks both.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::coeff::{CoeffError, CoeffRing, Coefficient, EvalPoint, Exps};
use crate::cyclo::Rational;
use crate::opalg::{OperatorExpr, VerificationReport};

/// Maximum relative deviation accepted by [`crosscheck`].
pub const THRESHOLD: f64 = 1e-8;

/// Default distance (radians) kept between sample angles and walls.
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("sample point too close to a pole: {0}")]
    NearPole(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Truncated multivariate Taylor series in nilpotent ε_0, …, ε_{n−1} with
/// ε_j² = 0. Coefficient `c[mask]` multiplies Π_{j ∈ mask} ε_j.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperDual {
    c: Vec<Complex64>,
}

impl HyperDual {
    pub fn constant(x: Complex64) -> Self {
        HyperDual { c: vec![x] }
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    fn nvars(&self) -> usize {
        self.c.len().trailing_zeros() as usize
    }

    fn widen(&self, n: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(1 << n.max(self.nvars()), Complex64::new(0.0, 0.0));
        HyperDual { c }
    }

    /// self + ε_j.
    fn plus_eps(&self, j: usize) -> Self {
        let mut out = self.widen(j + 1);
        out.c[1 << j] += 1.0;
        out
    }

    /// Coefficient of ε_j, a series in the remaining lower variables.
    fn eps_part(&self, j: usize) -> Self {
        let full = self.widen(j + 1);
        let c = (0..1usize << j).map(|m| full.c[m | (1 << j)]).collect();
        HyperDual { c }
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let n = self.nvars().max(other.nvars());
        let (a, b) = (self.widen(n), other.widen(n));
        HyperDual {
            c: a.c.iter().zip(&b.c).map(|(x, y)| f(*x, *y)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x - y)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        HyperDual {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.nvars().max(other.nvars());
        let (a, b) = (self.widen(n), other.widen(n));
        let len = 1usize << n;
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, x) in a.c.iter().enumerate() {
            if *x == Complex64::new(0.0, 0.0) {
                continue;
            }
            // enumerate masks disjoint from i
            let free = (len - 1) & !i;
            let mut j = free;
            loop {
                out[i | j] += x * b.c[j];
                if j == 0 {
                    break;
                }
                j = (j - 1) & free;
            }
        }
        HyperDual { c: out }
    }

    /// f(x0 + δ) = Σ_j f^{(j)}(x0) δ^j / j!, with `derivs[j] = f^{(j)}(x0)`
    /// and δ nilpotent of order ≤ nvars.
    fn compose(&self, derivs: impl Fn(usize) -> Complex64) -> Self {
        let n = self.nvars();
        let mut delta = self.clone();
        delta.c[0] = Complex64::new(0.0, 0.0);
        let mut power = HyperDual::constant(Complex64::new(1.0, 0.0)).widen(n);
        let mut out = power.scale(derivs(0));
        let mut fact = 1.0;
        for j in 1..=n {
            power = power.mul(&delta);
            fact *= j as f64;
            out = out.add(&power.scale(derivs(j) / fact));
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(|_| e)
    }

    pub fn recip(&self) -> Self {
        let x0 = self.value();
        // d^j/dx^j x^{-1} = (−1)^j j! x^{−1−j}
        self.compose(|j| {
            let fact: f64 = (1..=j).map(|t| t as f64).product();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            x0.powi(-1 - j as i32) * (sign * fact)
        })
    }

    pub fn powi(&self, m: i32) -> Self {
        let x0 = self.value();
        // falling factorial m(m−1)…(m−j+1) x^{m−j}
        self.compose(|j| {
            let ff: f64 = (0..j).map(|t| (m - t as i32) as f64).product();
            if ff == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                x0.powi(m - j as i32) * ff
            }
        })
    }

    pub fn cos(&self) -> Self {
        let x0 = self.value();
        self.compose(|j| match j % 4 {
            0 => x0.cos(),
            1 => -x0.sin(),
            2 => -x0.cos(),
            _ => x0.sin(),
        })
    }

    pub fn sin(&self) -> Self {
        let x0 = self.value();
        self.compose(|j| match j % 4 {
            0 => x0.sin(),
            1 => x0.cos(),
            2 => -x0.sin(),
            _ => -x0.cos(),
        })
    }

    pub fn tan(&self) -> Self {
        self.sin().mul(&self.cos().recip())
    }

    pub fn cot(&self) -> Self {
        self.cos().mul(&self.sin().recip())
    }
}

/// A function of (r, φ) evaluated on hyper-dual arguments.
pub type Func = Arc<dyn Fn(&HyperDual, &HyperDual) -> HyperDual + Send + Sync>;

/// An operator acting on [`Func`]s.
#[derive(Clone)]
pub struct NumOp(Arc<dyn Fn(Func) -> Func + Send + Sync>);

impl NumOp {
    pub fn new(f: impl Fn(Func) -> Func + Send + Sync + 'static) -> Self {
        NumOp(Arc::new(f))
    }

    pub fn apply(&self, f: Func) -> Func {
        (self.0)(f)
    }

    pub fn zero() -> Self {
        NumOp::new(|_| Arc::new(|_: &HyperDual, _: &HyperDual| HyperDual::real(0.0)))
    }

    pub fn identity() -> Self {
        NumOp::new(|f| f)
    }

    /// Multiplication by the function c(r, φ).
    pub fn mul_by(c: impl Fn(&HyperDual, &HyperDual) -> HyperDual + Send + Sync + 'static) -> Self {
        let c = Arc::new(c);
        NumOp::new(move |f| {
            let c = c.clone();
            Arc::new(move |r: &HyperDual, phi: &HyperDual| c(r, phi).mul(&f(r, phi)))
        })
    }

    pub fn constant(s: f64) -> Self {
        Self::mul_by(move |_, _| HyperDual::real(s))
    }

    pub fn d_r() -> Self {
        NumOp::new(|f| {
            Arc::new(move |r: &HyperDual, phi: &HyperDual| {
                let j = r.nvars().max(phi.nvars());
                f(&r.plus_eps(j), phi).eps_part(j)
            })
        })
    }

    pub fn d_phi() -> Self {
        NumOp::new(|f| {
            Arc::new(move |r: &HyperDual, phi: &HyperDual| {
                let j = r.nvars().max(phi.nvars());
                f(r, &phi.plus_eps(j)).eps_part(j)
            })
        })
    }

    /// 𝓡^rot 𝓘^refl: ψ ↦ ψ(r, ±(φ + rot·π/k)).
    pub fn group(rot: i64, refl: bool, k: u32) -> Self {
        let shift = rot as f64 * PI / k as f64;
        NumOp::new(move |f| {
            Arc::new(move |r: &HyperDual, phi: &HyperDual| {
                let mut t = phi.add(&HyperDual::real(shift));
                if refl {
                    t = t.scale(Complex64::new(-1.0, 0.0));
                }
                f(r, &t)
            })
        })
    }

    /// self ∘ other.
    pub fn then(&self, other: &NumOp) -> NumOp {
        let (a, b) = (self.clone(), other.clone());
        NumOp::new(move |f| a.apply(b.apply(f)))
    }

    pub fn plus(&self, other: &NumOp) -> NumOp {
        let (a, b) = (self.clone(), other.clone());
        NumOp::new(move |f| {
            let (fa, fb) = (a.apply(f.clone()), b.apply(f));
            Arc::new(move |r: &HyperDual, phi: &HyperDual| fa(r, phi).add(&fb(r, phi)))
        })
    }

    pub fn minus(&self, other: &NumOp) -> NumOp {
        self.plus(&other.scaled(-1.0))
    }

    pub fn scaled(&self, s: f64) -> NumOp {
        Self::constant(s).then(self)
    }

    pub fn sum(ops: impl IntoIterator<Item = NumOp>) -> NumOp {
        ops.into_iter().fold(NumOp::zero(), |acc, op| acc.plus(&op))
    }
}

/// Numeric values of the symbolic parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    pub omega: f64,
}

fn shifted(phi: &HyperDual, i: i64, k: u32) -> HyperDual {
    phi.add(&HyperDual::real(i as f64 * PI / k as f64))
}

fn r_pow(m: i32) -> impl Fn(&HyperDual, &HyperDual) -> HyperDual + Send + Sync + 'static {
    move |r: &HyperDual, _: &HyperDual| r.powi(m)
}

/// Raw defining formulas of the operators, as numeric closures.
pub mod raw {
    use super::*;

    /// (a𝓡 + b) Σ_i 𝓡^{2i} 𝓘.
    fn exchange_sum(k: u32, p: Params) -> NumOp {
        NumOp::sum((0..k as i64).flat_map(|i| {
            [
                NumOp::group(2 * i + 1, true, k).scaled(p.a),
                NumOp::group(2 * i, true, k).scaled(p.b),
            ]
        }))
    }

    pub fn d_r(k: u32, p: Params) -> NumOp {
        NumOp::d_r().minus(&NumOp::mul_by(r_pow(-1)).then(&exchange_sum(k, p)))
    }

    pub fn d_phi(k: u32, p: Params) -> NumOp {
        let terms = (0..k as i64).flat_map(|i| {
            let tan = NumOp::mul_by(move |_, phi| shifted(phi, i, k).tan().scale(Complex64::new(p.a, 0.0)));
            let cot = NumOp::mul_by(move |_, phi| shifted(phi, i, k).cot().scale(Complex64::new(-p.b, 0.0)));
            [
                tan.then(&NumOp::group(k as i64 + 2 * i, true, k)),
                cot.then(&NumOp::group(2 * i, true, k)),
            ]
        });
        NumOp::d_phi().plus(&NumOp::sum(terms))
    }

    fn cos_i(i: i64, k: u32) -> NumOp {
        NumOp::mul_by(move |_, phi| shifted(phi, i, k).cos())
    }

    fn sin_i(i: i64, k: u32) -> NumOp {
        NumOp::mul_by(move |_, phi| shifted(phi, i, k).sin())
    }

    fn omega_r(p: Params) -> NumOp {
        NumOp::mul_by(move |r, _| r.scale(Complex64::new(p.omega, 0.0)))
    }

    /// A_i, A_i† with the 1/√(2ω) normalization.
    pub fn a(i: i64, dagger: bool, k: u32, p: Params) -> NumOp {
        let dr = d_r(k, p);
        let radial = if dagger { omega_r(p).minus(&dr) } else { omega_r(p).plus(&dr) };
        let angular = NumOp::mul_by(r_pow(-1)).then(&sin_i(i, k)).then(&d_phi(k, p));
        let radial = cos_i(i, k).then(&radial);
        let op = if dagger { radial.plus(&angular) } else { radial.minus(&angular) };
        op.scaled(1.0 / (2.0 * p.omega).sqrt())
    }

    /// B_i, B_i† with the 1/√(2ω) normalization.
    pub fn b(i: i64, dagger: bool, k: u32, p: Params) -> NumOp {
        let dr = d_r(k, p);
        let radial = if dagger { omega_r(p).minus(&dr) } else { omega_r(p).plus(&dr) };
        let angular = NumOp::mul_by(r_pow(-1)).then(&cos_i(i, k)).then(&d_phi(k, p));
        let radial = sin_i(i, k).then(&radial);
        let op = if dagger { radial.minus(&angular) } else { radial.plus(&angular) };
        op.scaled(1.0 / (2.0 * p.omega).sqrt())
    }

    /// H_i = ½(A_i† A_i + A_i A_i†).
    pub fn h(i: i64, k: u32, p: Params) -> NumOp {
        let (a, ad) = (a(i, false, k, p), a(i, true, k, p));
        ad.then(&a).plus(&a.then(&ad)).scaled(0.5)
    }

    /// −D_r² − (1/r)[1 + 2S]D_r − (1/r²)D_φ² + ω²r².
    pub fn extended_h(k: u32, p: Params) -> NumOp {
        let dr = d_r(k, p);
        let dphi = d_phi(k, p);
        let one_2s = NumOp::identity().plus(&exchange_sum(k, p).scaled(2.0));
        NumOp::sum([
            dr.then(&dr).scaled(-1.0),
            NumOp::mul_by(r_pow(-1)).then(&one_2s).then(&dr).scaled(-1.0),
            NumOp::mul_by(r_pow(-2)).then(&dphi).then(&dphi).scaled(-1.0),
            NumOp::mul_by(move |r, _| r.powi(2).scale(Complex64::new(p.omega * p.omega, 0.0))),
        ])
    }

    /// −D_φ².
    pub fn extended_x(k: u32, p: Params) -> NumOp {
        let dphi = d_phi(k, p);
        dphi.then(&dphi).scaled(-1.0)
    }
}

/// Operators that have both a symbolic builder and a raw numeric formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builder {
    Zero,
    Dr,
    Dphi,
    A { i: i64, dagger: bool },
    B { i: i64, dagger: bool },
    H { i: i64 },
    ExtendedH,
    ExtendedX,
}

impl Builder {
    pub fn name(&self) -> String {
        match self {
            Builder::Zero => "zero".into(),
            Builder::Dr => "Dr".into(),
            Builder::Dphi => "Dphi".into(),
            Builder::A { i, dagger } => format!("A_{i}{}", if *dagger { "+" } else { "" }),
            Builder::B { i, dagger } => format!("B_{i}{}", if *dagger { "+" } else { "" }),
            Builder::H { i } => format!("H_{i}"),
            Builder::ExtendedH => "Hext".into(),
            Builder::ExtendedX => "Xext".into(),
        }
    }

    /// The symbolic operator. A and B are returned rescaled by √(2ω).
    pub fn symbolic(&self, ring: &Arc<CoeffRing>) -> OperatorExpr {
        match *self {
            Builder::Zero => OperatorExpr::zero(ring),
            Builder::Dr => crate::dunkl::build_dr(ring),
            Builder::Dphi => crate::dunkl::build_dphi(ring),
            Builder::A { i, dagger } => crate::ttw::build_a(ring, i, dagger),
            Builder::B { i, dagger } => crate::ttw::build_b(ring, i, dagger),
            Builder::H { i } => crate::ttw::build_h(ring, i),
            Builder::ExtendedH => crate::dunkl::build_extended_h(ring),
            Builder::ExtendedX => crate::dunkl::build_extended_x(ring),
        }
    }

    pub fn numeric(&self, k: u32, p: Params) -> NumOp {
        match *self {
            Builder::Zero => NumOp::zero(),
            Builder::Dr => raw::d_r(k, p),
            Builder::Dphi => raw::d_phi(k, p),
            Builder::A { i, dagger } => raw::a(i, dagger, k, p),
            Builder::B { i, dagger } => raw::b(i, dagger, k, p),
            Builder::H { i } => raw::h(i, k, p),
            Builder::ExtendedH => raw::extended_h(k, p),
            Builder::ExtendedX => raw::extended_x(k, p),
        }
    }

    /// Factor relating the symbolic operator to the raw one.
    fn symbolic_scale(&self, p: Params) -> f64 {
        match self {
            Builder::A { .. } | Builder::B { .. } => 1.0 / (2.0 * p.omega).sqrt(),
            _ => 1.0,
        }
    }
}

/// ψ(r, φ) = r^m e^{inφ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestFunction {
    pub m: i32,
    pub n: i32,
}

impl TestFunction {
    /// A fixed list; the first six are used by default.
    pub const STANDARD: [TestFunction; 8] = [
        TestFunction { m: 0, n: 0 },
        TestFunction { m: 1, n: 0 },
        TestFunction { m: 0, n: 1 },
        TestFunction { m: 2, n: -1 },
        TestFunction { m: -1, n: 2 },
        TestFunction { m: 3, n: 3 },
        TestFunction { m: 1, n: -4 },
        TestFunction { m: -2, n: 5 },
    ];

    pub fn func(&self) -> Func {
        let (m, n) = (self.m, self.n);
        Arc::new(move |r: &HyperDual, phi: &HyperDual| {
            r.powi(m).mul(&phi.scale(Complex64::new(0.0, n as f64)).exp())
        })
    }

    pub fn coefficient(&self, ring: &Arc<CoeffRing>) -> Coefficient {
        Coefficient::monomial(
            ring,
            Rational::ONE,
            Exps {
                r: self.m,
                u: self.n,
                ..Exps::default()
            },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub r: f64,
    pub phi: f64,
    pub params: Params,
    pub margin: f64,
}

/// Smallest distance from φ to a wall, i.e. to a zero of some
/// cos(φ + jπ/k) or sin(φ + jπ/k). Walls sit at multiples of π/(2k).
pub fn wall_distance(phi: f64, k: u32) -> f64 {
    let step = PI / (2.0 * k as f64);
    let x = phi.rem_euclid(step);
    x.min(step - x)
}

impl SamplePoint {
    pub fn eval_point(&self) -> EvalPoint {
        EvalPoint {
            r: self.r,
            phi: self.phi,
            a: self.params.a,
            b: self.params.b,
            omega: self.params.omega,
        }
    }

    fn check(&self, k: u32) -> Result<(), OracleError> {
        let d = wall_distance(self.phi, k);
        if self.r <= 0.0 || d < self.margin {
            return Err(OracleError::NearPole(format!(
                "r = {}, phi = {} at distance {d:.3e} from a wall (margin {})",
                self.r, self.phi, self.margin
            )));
        }
        Ok(())
    }
}

/// `n` points with r ∈ [0.5, 2], a, b ∈ [−2, 2], ω ∈ [0.5, 2] and φ at least
/// `margin` away from every wall, drawn from ChaCha8 seeded with `seed`.
pub fn sample_points(k: u32, n: usize, seed: u64, margin: f64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let phi = rng.gen_range(0.0..2.0 * PI);
        let r = rng.gen_range(0.5..2.0);
        let params = Params {
            a: rng.gen_range(-2.0..2.0),
            b: rng.gen_range(-2.0..2.0),
            omega: rng.gen_range(0.5..2.0),
        };
        if wall_distance(phi, k) >= margin {
            out.push(SamplePoint { r, phi, params, margin });
        }
    }
    out
}

/// X ψ as an exact coefficient: each term c ∂_r^p ∂_φ^q g acts by
/// transforming ψ under g, differentiating, and multiplying by c.
pub fn apply_to_monomial(op: &OperatorExpr, f: TestFunction) -> Coefficient {
    let ring = op.ring();
    let psi = f.coefficient(ring);
    let parts: Vec<Coefficient> = op
        .terms()
        .map(|(key, c)| {
            let mut x = key.g.act(&psi);
            for _ in 0..key.p {
                x = x.d_r();
            }
            for _ in 0..key.q {
                x = x.d_phi();
            }
            c * &x
        })
        .collect();
    Coefficient::sum(ring, &parts)
}

/// Raw-formula evaluation of (op ψ)(r₀, φ₀).
pub fn numeric_apply(op: &NumOp, f: TestFunction, point: &SamplePoint, k: u32) -> Result<Complex64, OracleError> {
    point.check(k)?;
    let g = op.apply(f.func());
    Ok(g(&HyperDual::real(point.r), &HyperDual::real(point.phi)).value())
}

/// |x − y| / max(1, |x|, |y|): relative for values of size ≥ 1, absolute
/// below, so exact zeros on both sides do not divide by zero.
pub fn deviation(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / 1f64.max(x.norm()).max(y.norm())
}

/// Outcome of a symbolic-vs-numeric comparison.
#[derive(Debug, Clone)]
pub struct Crosscheck {
    pub report: VerificationReport,
    pub max_deviation: f64,
    pub samples: usize,
}

/// Compares `op` with the raw formula of `builder` on `n_points` seeded
/// points and the first `n_functions` standard test functions.
pub fn crosscheck(
    op: &OperatorExpr,
    builder: Builder,
    n_points: usize,
    n_functions: usize,
    seed: u64,
) -> Crosscheck {
    let start = Instant::now();
    let k = op.k();
    let fns: Vec<TestFunction> = TestFunction::STANDARD.iter().cycle().take(n_functions).copied().collect();
    let symbolic: Vec<Coefficient> = fns.iter().map(|f| apply_to_monomial(op, *f)).collect();
    let points = sample_points(k, n_points, seed, DEFAULT_MARGIN);
    let pairs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..fns.len()).map(move |f| (p, f))).collect();
    let results: Vec<Result<f64, String>> = pairs
        .par_iter()
        .map(|&(pi, fi)| {
            let pt = &points[pi];
            let num = numeric_apply(&builder.numeric(k, pt.params), fns[fi], pt, k).map_err(|e| e.to_string())?;
            let sym = symbolic[fi]
                .eval_complex(&pt.eval_point(), pt.margin / 2.0)
                .map_err(|e| e.to_string())?
                * builder.symbolic_scale(pt.params);
            Ok(deviation(num, sym))
        })
        .collect();
    let mut max_dev: f64 = 0.0;
    let mut bad = 0;
    let mut first_error = None;
    for r in &results {
        match r {
            Ok(d) => {
                max_dev = max_dev.max(*d);
                if !(*d <= THRESHOLD) {
                    bad += 1;
                }
            }
            Err(e) => {
                bad += 1;
                first_error.get_or_insert_with(|| e.clone());
            }
        }
    }
    let mut detail = format!("max deviation {max_dev:.3e} over {} samples", results.len());
    if let Some(e) = first_error {
        detail.push_str(&format!("; {e}"));
    }
    let report = VerificationReport::from_count(
        format!("oracle.{}", builder.name()),
        k,
        bad,
        start.elapsed(),
        Some(detail),
    )
    .with_seed(seed);
    Crosscheck {
        report,
        max_deviation: max_dev,
        samples: results.len(),
    }
}

/// The standard oracle suite: D_r, D_φ, A_i, A_i†, B_i, B_i†, H_i, 𝓗_k, 𝓧_k.
pub fn standard_builders(k: u32) -> Vec<Builder> {
    let mut out = vec![Builder::Dr, Builder::Dphi];
    for i in 0..k as i64 {
        for dagger in [false, true] {
            out.push(Builder::A { i, dagger });
            out.push(Builder::B { i, dagger });
        }
        out.push(Builder::H { i });
    }
    out.push(Builder::ExtendedH);
    out.push(Builder::ExtendedX);
    out
}

pub fn check_oracle(ring: &Arc<CoeffRing>, n_points: usize, n_functions: usize, seed: u64) -> Vec<VerificationReport> {
    standard_builders(ring.k())
        .into_iter()
        .map(|b| crosscheck(&b.symbolic(ring), b, n_points, n_functions, seed).report)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperdual_derivatives() {
        // d²/dx² of x³ at 2 = 12 via two nested variables
        let x = HyperDual::real(2.0).plus_eps(0).plus_eps(1);
        let y = x.powi(3);
        assert!((y.c[3] - Complex64::new(12.0, 0.0)).norm() < 1e-12);
        let t = HyperDual::real(0.3).plus_eps(0).tan();
        assert!((t.c[1].re - 1.0 / 0.3f64.cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn plain_derivatives_on_monomials() {
        let p = SamplePoint {
            r: 1.3,
            phi: 0.4,
            params: Params { a: 0.0, b: 0.0, omega: 1.0 },
            margin: DEFAULT_MARGIN,
        };
        let f = TestFunction { m: 3, n: 2 };
        let v = numeric_apply(&raw::d_r(3, p.params), f, &p, 3).unwrap();
        let expected = Complex64::from_polar(3.0 * 1.3f64.powi(2), 0.8);
        assert!((v - expected).norm() < 1e-12);
        let c = numeric_apply(&raw::d_phi(3, p.params), TestFunction { m: 0, n: 0 }, &p, 3).unwrap();
        assert_eq!(c, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn symbolic_application() {
        let ring = CoeffRing::get(3).unwrap();
        let f = TestFunction { m: 0, n: 2 };
        let got = apply_to_monomial(&OperatorExpr::d_phi(&ring), f);
        let expected = &Coefficient::monomial(&ring, Rational::from_int(2), Exps { u: 2, ..Exps::default() })
            * &Coefficient::imaginary_unit(&ring);
        assert_eq!(got, expected);
        let rot = crate::dunkl::build_r(&ring);
        let got = apply_to_monomial(&rot, TestFunction { m: 0, n: 1 });
        assert_eq!(got, &Coefficient::zeta_power(&ring, 2, Rational::ONE) * &Coefficient::var(&ring, crate::coeff::Var::U));
    }

    #[test]
    fn rejects_points_near_walls() {
        let p = SamplePoint {
            r: 1.0,
            phi: PI / 6.0 + 0.01,
            params: Params { a: 1.0, b: 1.0, omega: 1.0 },
            margin: DEFAULT_MARGIN,
        };
        assert!(matches!(
            numeric_apply(&raw::d_phi(3, p.params), TestFunction { m: 0, n: 1 }, &p, 3),
            Err(OracleError::NearPole(_))
        ));
    }
}
