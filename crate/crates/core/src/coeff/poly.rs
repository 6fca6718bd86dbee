//! Sparse Laurent polynomials in (ζ, u, r, ω, a, b) with rational
//! coefficients, the numerator representation of [`super::Coefficient`].
//!
//! A monomial is packed into a `u64`. Signed exponents are stored with an
//! offset so that multiplying monomials is one integer addition followed by
//! reduction of the ζ exponent back into the power basis.

use crate::cyclo::{CycloField, Rational};

const Z_SHIFT: u32 = 0;
const U_SHIFT: u32 = 8;
const R_SHIFT: u32 = 24;
const W_SHIFT: u32 = 36;
const A_SHIFT: u32 = 44;
const B_SHIFT: u32 = 52;

const U_OFF: i64 = 1 << 15;
const R_OFF: i64 = 1 << 11;
const W_OFF: i64 = 1 << 7;

const Z_MASK: u64 = 0xff;
const U_MASK: u64 = 0xffff << U_SHIFT;
const R_MASK: u64 = 0xfff << R_SHIFT;
const W_MASK: u64 = 0xff << W_SHIFT;

/// Packed value of the monomial 1.
pub const ONE: u64 = ((U_OFF as u64) << U_SHIFT) | ((R_OFF as u64) << R_SHIFT) | ((W_OFF as u64) << W_SHIFT);

/// Exponents of a monomial ζ^z u^u r^r ω^w a^a b^b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Exps {
    pub z: u32,
    pub u: i32,
    pub r: i32,
    pub w: i32,
    pub a: u32,
    pub b: u32,
}

pub fn pack(e: Exps) -> u64 {
    debug_assert!(e.z < 256);
    debug_assert!((e.u as i64 + U_OFF) >= 0 && (e.u as i64 + U_OFF) < (1 << 16));
    debug_assert!((e.r as i64 + R_OFF) >= 0 && (e.r as i64 + R_OFF) < (1 << 12));
    debug_assert!((e.w as i64 + W_OFF) >= 0 && (e.w as i64 + W_OFF) < (1 << 8));
    debug_assert!(e.a < 256 && e.b < 256);
    ((e.z as u64) << Z_SHIFT)
        | (((e.u as i64 + U_OFF) as u64) << U_SHIFT)
        | (((e.r as i64 + R_OFF) as u64) << R_SHIFT)
        | (((e.w as i64 + W_OFF) as u64) << W_SHIFT)
        | ((e.a as u64) << A_SHIFT)
        | ((e.b as u64) << B_SHIFT)
}

pub fn unpack(m: u64) -> Exps {
    Exps {
        z: (m & Z_MASK) as u32,
        u: (((m & U_MASK) >> U_SHIFT) as i64 - U_OFF) as i32,
        r: (((m & R_MASK) >> R_SHIFT) as i64 - R_OFF) as i32,
        w: (((m & W_MASK) >> W_SHIFT) as i64 - W_OFF) as i32,
        a: ((m >> A_SHIFT) & 0xff) as u32,
        b: ((m >> B_SHIFT) & 0xff) as u32,
    }
}

#[inline]
pub fn z_of(m: u64) -> u32 {
    (m & Z_MASK) as u32
}

#[inline]
pub fn u_of(m: u64) -> i32 {
    (((m & U_MASK) >> U_SHIFT) as i64 - U_OFF) as i32
}

#[inline]
pub fn r_of(m: u64) -> i32 {
    (((m & R_MASK) >> R_SHIFT) as i64 - R_OFF) as i32
}

#[inline]
fn with_z(m: u64, z: u32) -> u64 {
    (m & !Z_MASK) | z as u64
}

#[inline]
fn add_u(m: u64, du: i32) -> u64 {
    (m as i64 + ((du as i64) << U_SHIFT)) as u64
}

#[inline]
fn set_u(m: u64, u: i32) -> u64 {
    (m & !U_MASK) | (((u as i64 + U_OFF) as u64) << U_SHIFT)
}

#[inline]
fn add_r(m: u64, dr: i32) -> u64 {
    (m as i64 + ((dr as i64) << R_SHIFT)) as u64
}

/// Everything except the ζ and u exponents.
#[inline]
pub fn rest_of(m: u64) -> u64 {
    m & !(Z_MASK | U_MASK)
}

#[inline]
fn mul_raw(x: u64, y: u64) -> u64 {
    x + y - ONE
}

/// Sorted, duplicate-free, zero-free list of terms.
pub type Poly = Vec<(u64, Rational)>;

/// Sorts by monomial, merges equal monomials, drops zeros.
pub fn canonicalize(mut terms: Vec<(u64, Rational)>) -> Poly {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Poly = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        if let Some((lm, lc)) = out.last_mut() {
            if *lm == m {
                *lc = &*lc + &c;
                continue;
            }
        }
        out.push((m, c));
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Pushes `c · ζ^z · rest` with `z` an arbitrary exponent, expanded into the
/// power basis.
#[inline]
fn push_reduced(field: &CycloField, out: &mut Vec<(u64, Rational)>, m: u64, z: i64, c: &Rational) {
    if (z as usize) < field.degree() && z >= 0 {
        out.push((with_z(m, z as u32), c.clone()));
    } else {
        for (t, v) in field.power(z) {
            out.push((with_z(m, *t as u32), c * v));
        }
    }
}

pub fn neg(x: &Poly) -> Poly {
    x.iter().map(|(m, c)| (*m, -c)).collect()
}

pub fn scale(x: &Poly, c: &Rational) -> Poly {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(m, v)| (*m, v * c)).collect()
}

pub fn mul(field: &CycloField, x: &Poly, y: &Poly) -> Poly {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let (small, big) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let mut out = Vec::with_capacity(small.len() * big.len());
    for (ms, cs) in small {
        let zs = z_of(*ms) as i64;
        for (mb, cb) in big {
            let m = mul_raw(*ms, *mb);
            let z = zs + z_of(*mb) as i64;
            push_reduced(field, &mut out, m, z, &(cs * cb));
        }
    }
    canonicalize(out)
}

/// Multiplies by the monomial `c · ζ^z u^du`.
pub fn mul_monomial(field: &CycloField, x: &Poly, z: i64, du: i32, c: &Rational) -> Poly {
    let mut out = Vec::with_capacity(x.len() * 2);
    for (m, v) in x {
        push_reduced(field, &mut out, add_u(*m, du), z_of(*m) as i64 + z, &(v * c));
    }
    canonicalize(out)
}

/// Multiplies by the pole factor ζ^{2m} u² + 1.
pub fn mul_pole(field: &CycloField, x: &Poly, m: u32) -> Poly {
    let mut out = Vec::with_capacity(x.len() * 3);
    out.extend_from_slice(x);
    for (mono, v) in x {
        push_reduced(field, &mut out, add_u(*mono, 2), z_of(*mono) as i64 + 2 * m as i64, v);
    }
    canonicalize(out)
}

/// Dense ζ-coordinates multiplied by ζ^e.
fn dense_mul_zeta(field: &CycloField, v: &[Rational], e: i64) -> Vec<Rational> {
    let mut out = vec![Rational::ZERO; field.degree()];
    for (t, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (s, c) in field.power(t as i64 + e) {
            out[*s] = &out[*s] + &(x * c);
        }
    }
    out
}

/// Exact division by ζ^{2m} u² + 1, `None` if it does not divide.
pub fn div_pole(field: &CycloField, x: &Poly, m: u32) -> Option<Poly> {
    if x.is_empty() {
        return Some(Vec::new());
    }
    let deg = field.degree();
    let gamma_exp = 2 * m as i64;
    let mut out: Vec<(u64, Rational)> = Vec::with_capacity(x.len());
    let mut start = 0;
    while start < x.len() {
        let rest = rest_of(x[start].0);
        let mut end = start;
        while end < x.len() && rest_of(x[end].0) == rest {
            end += 1;
        }
        let group = &x[start..end];
        let lo = u_of(group[0].0);
        let hi = u_of(group[group.len() - 1].0);
        let d = (hi - lo) as usize;
        if d < 2 {
            return None;
        }
        let mut c = vec![vec![Rational::ZERO; deg]; d + 1];
        for (mono, v) in group {
            c[(u_of(*mono) - lo) as usize][z_of(*mono) as usize] = v.clone();
        }
        // c_j = q_j + γ q_{j-2}
        let mut q: Vec<Vec<Rational>> = Vec::with_capacity(d - 1);
        for j in 0..=d - 2 {
            let mut qj = c[j].clone();
            if j >= 2 {
                let g = dense_mul_zeta(field, &q[j - 2], gamma_exp);
                for (a, b) in qj.iter_mut().zip(g) {
                    *a = &*a - &b;
                }
            }
            q.push(qj);
        }
        for j in d - 1..=d {
            let expect = if j >= 2 {
                dense_mul_zeta(field, &q[j - 2], gamma_exp)
            } else {
                vec![Rational::ZERO; deg]
            };
            if expect != c[j] {
                return None;
            }
        }
        let base = set_u(rest, 0);
        for (j, qj) in q.iter().enumerate() {
            for (t, v) in qj.iter().enumerate() {
                if !v.is_zero() {
                    out.push((with_z(set_u(base, lo + j as i32), t as u32), v.clone()));
                }
            }
        }
        start = end;
    }
    out.sort_unstable_by_key(|t| t.0);
    Some(out)
}

/// ∂/∂r.
pub fn d_r(x: &Poly) -> Poly {
    let mut out = Vec::with_capacity(x.len());
    for (m, c) in x {
        let e = r_of(*m);
        if e != 0 {
            out.push((add_r(*m, -1), c * &Rational::from_int(e as i64)));
        }
    }
    canonicalize(out)
}

/// u ∂/∂u (the ∂_φ derivative without its factor i).
pub fn u_du(x: &Poly) -> Poly {
    let mut out = Vec::with_capacity(x.len());
    for (m, c) in x {
        let e = u_of(*m);
        if e != 0 {
            out.push((*m, c * &Rational::from_int(e as i64)));
        }
    }
    out
}

/// u ↦ ζ^{2j} u.
pub fn shift(field: &CycloField, x: &Poly, j: i64) -> Poly {
    if (2 * j).rem_euclid(field.order() as i64) == 0 {
        return x.clone();
    }
    let mut out = Vec::with_capacity(x.len() * 2);
    for (m, c) in x {
        let z = z_of(*m) as i64 + 2 * j * u_of(*m) as i64;
        push_reduced(field, &mut out, *m, z, c);
    }
    canonicalize(out)
}

/// u ↦ u^{-1}.
pub fn invert_u(x: &Poly) -> Poly {
    let out = x.iter().map(|(m, c)| (set_u(*m, -u_of(*m)), c.clone())).collect();
    canonicalize(out)
}

/// u ↦ u^{-1}, ζ ↦ ζ^{-1}.
pub fn conjugate(field: &CycloField, x: &Poly) -> Poly {
    let mut out = Vec::with_capacity(x.len() * 2);
    for (m, c) in x {
        let flipped = set_u(*m, -u_of(*m));
        push_reduced(field, &mut out, flipped, -(z_of(*m) as i64), c);
    }
    canonicalize(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip_and_multiply() {
        let e1 = Exps { z: 3, u: -5, r: 2, w: -1, a: 4, b: 0 };
        let e2 = Exps { z: 1, u: 7, r: -3, w: 2, a: 1, b: 6 };
        assert_eq!(unpack(pack(e1)), e1);
        let p = unpack(mul_raw(pack(e1), pack(e2)));
        assert_eq!(p, Exps { z: 4, u: 2, r: -1, w: 1, a: 5, b: 6 });
        assert_eq!(unpack(ONE), Exps::default());
    }

    #[test]
    fn pole_division_inverts_multiplication() {
        let f = CycloField::get(12).unwrap();
        let x: Poly = canonicalize(vec![
            (pack(Exps { z: 1, u: -1, a: 1, ..Default::default() }), Rational::new(3, 2)),
            (pack(Exps { z: 0, u: 2, r: 1, ..Default::default() }), Rational::from_int(-1)),
            (pack(Exps { z: 3, u: 0, r: 1, ..Default::default() }), Rational::from_int(5)),
        ]);
        for m in 0..6 {
            let y = mul_pole(&f, &x, m);
            assert_eq!(div_pole(&f, &y, m), Some(x.clone()));
            assert_eq!(div_pole(&f, &x, m), None);
        }
    }
}
