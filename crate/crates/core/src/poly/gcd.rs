//! Exact division and multivariate gcd.
//!
//! The gcd follows the classical recursive scheme: split off contents
//! with respect to a main variable (chosen as the variable of minimal
//! degree), run a subresultant polynomial remainder sequence on the
//! primitive parts, and recurse on the contents. No modular arithmetic;
//! desk-scale degrees keep the PRS cheap.

use super::{Monomial, PolyError, Polynomial};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact quotient `a / b` over the integers, or `None` when `b` does not
/// divide `a`. For primitive `b` this also decides divisibility over the
/// rationals (Gauss's lemma).
pub fn divide_exact(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    if a.is_zero() {
        return Some(Polynomial::zero(a.vars()));
    }
    let vars = a.vars().clone();
    let bm = b.leading_monomial().clone();
    let bc = b.leading_coeff().clone();
    let mut r = a.clone();
    let mut q = Polynomial::zero(&vars);
    while !r.is_zero() {
        let rm = r.leading_monomial().clone();
        let rc = r.leading_coeff().clone();
        let m = rm.checked_div(&bm)?;
        let (c, rem) = num_integer::Integer::div_rem(&rc, &bc);
        if !rem.is_zero() {
            return None;
        }
        q = q.try_add(&Polynomial::from_term(&vars, m.clone(), c.clone())).ok()?;
        let sub = b.mul_term(&m, &c).ok()?;
        r = r.try_sub(&sub).ok()?;
    }
    Some(q)
}

// ---- Univariate view helpers (main variable v, polynomial coefficients) ----

pub(super) fn deg_in(p: &Polynomial, v: usize) -> i64 {
    p.degree_in(v).map(|d| d as i64).unwrap_or(-1)
}

/// Leading coefficient of `p` seen as univariate in `v`, as a polynomial
/// with zero `v`-degree.
fn lead_coeff_in(p: &Polynomial, v: usize) -> Polynomial {
    let d = p.degree_in(v).expect("leading coefficient of zero polynomial");
    let vars = p.vars().clone();
    let terms = p
        .terms()
        .filter(|(m, _)| m.exps()[v] == d)
        .map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e[v] = 0;
            (Monomial::new(e), c.clone())
        })
        .collect::<Vec<_>>();
    Polynomial::from_terms(&vars, terms)
}

/// Coefficient polynomials of `p` in `v`, ascending from `v^0`.
pub(super) fn coeffs_in(p: &Polynomial, v: usize) -> Vec<Polynomial> {
    let vars = p.vars().clone();
    let d = match p.degree_in(v) {
        None => return vec![],
        Some(d) => d as usize,
    };
    let mut out = vec![Polynomial::zero(&vars); d + 1];
    for (m, c) in p.terms() {
        let k = m.exps()[v] as usize;
        let mut e = m.exps().to_vec();
        e[v] = 0;
        out[k] = out[k]
            .try_add(&Polynomial::from_term(&vars, Monomial::new(e), c.clone()))
            .expect("same context");
    }
    out
}

fn mul_var_pow(p: &Polynomial, v: usize, k: u32) -> Polynomial {
    if k == 0 {
        return p.clone();
    }
    let mono = Monomial::var(p.vars().len(), v, k);
    p.mul_term(&mono, &BigInt::one()).expect("exponent bound")
}

/// Content with respect to `v`: gcd of the `v`-coefficient polynomials.
fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let coeffs = coeffs_in(p, v);
    let mut g = Polynomial::zero(p.vars());
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.primitive_part() } else { gcd_inner(&g, &c) };
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` in the variable `v`: the remainder of
/// `lc_v(b)^(deg a − deg b + 1) · a` under division by `b`.
fn prem(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = deg_in(b, v);
    debug_assert!(db >= 0);
    let lcb = lead_coeff_in(b, v);
    let mut r = a.clone();
    let mut e = (deg_in(a, v) - db + 1).max(0);
    while !r.is_zero() && deg_in(&r, v) >= db {
        let lcr = lead_coeff_in(&r, v);
        let shift = (deg_in(&r, v) - db) as u32;
        // r <- lcb*r - lcr*v^shift*b cancels the leading v-slice exactly
        r = &(&lcb * &r) - &mul_var_pow(&(&lcr * b), v, shift);
        e -= 1;
    }
    // pad the multiplier up to the exact power the subresultant algebra expects
    let mut pad = Polynomial::one(a.vars());
    for _ in 0..e {
        pad = &pad * &lcb;
    }
    &pad * &r
}

/// Primitive gcd of two polynomials (inputs need not be primitive); the
/// result carries the canonical positive leading sign. Internal: callers
/// guarantee not both inputs are zero.
fn gcd_inner(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let ap = a.primitive_part();
    let bp = b.primitive_part();
    if ap.is_constant() || bp.is_constant() {
        return Polynomial::one(a.vars());
    }
    // main variable: minimal max-degree among variables that occur
    let nvars = a.vars().len();
    let mut v = None;
    let mut best = i64::MAX;
    for i in 0..nvars {
        let d = deg_in(&ap, i).max(deg_in(&bp, i));
        if d > 0 && d < best {
            best = d;
            v = Some(i);
        }
    }
    let v = v.expect("non-constant polynomial has a live variable");

    let ca = content_in(&ap, v);
    let cb = content_in(&bp, v);
    let pa = divide_exact(&ap, &ca).expect("content divides");
    let pb = divide_exact(&bp, &cb).expect("content divides");
    let c = gcd_inner(&ca, &cb);

    let pp = if deg_in(&pa, v) == 0 || deg_in(&pb, v) == 0 {
        Polynomial::one(a.vars())
    } else {
        subresultant_prs_gcd(&pa, &pb, v)
    };
    (&c * &pp).primitive_part()
}

/// Subresultant PRS on two `v`-primitive inputs of positive `v`-degree.
fn subresultant_prs_gcd(pa: &Polynomial, pb: &Polynomial, v: usize) -> Polynomial {
    let one = Polynomial::one(pa.vars());
    let (mut big, mut small) = if deg_in(pa, v) >= deg_in(pb, v) {
        (pa.clone(), pb.clone())
    } else {
        (pb.clone(), pa.clone())
    };
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = deg_in(&big, v) - deg_in(&small, v);
        debug_assert!(delta >= 0);
        let r = prem(&big, &small, v);
        if r.is_zero() {
            let cont = content_in(&small, v);
            return divide_exact(&small, &cont)
                .expect("content divides")
                .primitive_part();
        }
        if deg_in(&r, v) == 0 {
            return one;
        }
        big = small;
        // divisor g*h^delta is exact by the subresultant theorem
        let mut div = g.clone();
        for _ in 0..delta {
            div = &div * &h;
        }
        small = divide_exact(&r, &div).expect("subresultant division is exact");
        g = lead_coeff_in(&big, v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => {
                let mut num = g.clone();
                for _ in 1..delta {
                    num = &num * &g;
                }
                let mut den = h.clone();
                for _ in 2..delta {
                    den = &den * &h;
                }
                divide_exact(&num, &den).expect("subresultant h-update is exact")
            }
        };
    }
}

/// Primitive greatest common divisor with canonical sign.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    if a.vars() != b.vars() {
        return Err(PolyError::VarMismatch);
    }
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::Invalid("gcd of two zero polynomials".into()));
    }
    Ok(gcd_inner(a, b))
}

/// Fold of [`poly_gcd`] over a family; at least one entry must be nonzero.
pub fn poly_gcd_many(polys: &[Polynomial]) -> Result<Polynomial, PolyError> {
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.primitive_part(),
            Some(g) => {
                if g.is_constant() {
                    g
                } else {
                    gcd_inner(&g, p)
                }
            }
        });
    }
    acc.ok_or_else(|| PolyError::Invalid("gcd of an all-zero family".into()))
}
