//! Dense univariate polynomials over the integers.
//!
//! This is the workhorse for real-root isolation and for the fast
//! integer resultants used by curve implicitization, where the sparse
//! multivariate representation would be needlessly slow.

use crate::poly::{PolyError, Polynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients ascending from the constant term; the top entry is
/// nonzero (the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<BigInt>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { c: coeffs }
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn one() -> Self {
        UPoly { c: vec![BigInt::one()] }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lc(&self) -> &BigInt {
        self.c.last().expect("leading coefficient of zero polynomial")
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.c.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        UPoly::new(out)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        UPoly::new(out)
    }

    pub fn neg(&self) -> UPoly {
        UPoly { c: self.c.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> UPoly {
        UPoly::new(self.c.iter().map(|c| c * k).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.c.iter().cloned());
        UPoly { c: out }
    }

    pub fn derivative(&self) -> UPoly {
        if self.c.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_z(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_q(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Gcd of the absolute coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.c {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the content and normalize the leading coefficient to be
    /// positive.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        UPoly::new(self.c.iter().map(|c| c / &g).collect())
    }

    /// `1 + max |a_i| / |a_n|`: every complex root has modulus below this.
    pub fn cauchy_bound(&self) -> BigRational {
        let n = self.degree().expect("root bound of zero polynomial");
        let lc = self.lc().abs();
        let mut top = BigInt::zero();
        for c in &self.c[..n] {
            let a = c.abs();
            if a > top {
                top = a;
            }
        }
        BigRational::one() + BigRational::new(top, lc)
    }

    /// Largest `k` with `x^k` dividing the polynomial.
    pub fn trailing_zero_order(&self) -> usize {
        self.c.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Divide by `x^k` (must divide exactly).
    pub fn shift_down(&self, k: usize) -> UPoly {
        assert!(self.c.iter().take(k).all(|c| c.is_zero()), "x^k does not divide");
        UPoly::new(self.c.iter().skip(k).cloned().collect())
    }

    /// View a multivariate polynomial that only involves variable `var`
    /// as a dense univariate one.
    pub fn from_poly(p: &Polynomial, var: usize) -> Result<UPoly, PolyError> {
        let deg = p.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (m, c) in p.terms() {
            for (i, &e) in m.exps().iter().enumerate() {
                if i != var && e != 0 {
                    return Err(PolyError::Invalid(
                        "polynomial involves more than the chosen variable".into(),
                    ));
                }
            }
            out[m.exps()[var] as usize] += c;
        }
        Ok(UPoly::new(out))
    }
}

/// Pseudo-remainder: the remainder of `lc(b)^(deg a - deg b + 1) * a`
/// divided by `b`. Requires `b` nonzero and `deg a >= deg b`.
pub(crate) fn pseudo_rem(a: &UPoly, b: &UPoly) -> UPoly {
    let db = b.degree().expect("pseudo-division by zero");
    let da = a.degree().unwrap_or(0);
    debug_assert!(da >= db);
    let lcb = b.lc().clone();
    let mut r = a.clone();
    let mut e = (da - db + 1) as i64;
    while !r.is_zero() && r.degree().unwrap() >= db {
        let dr = r.degree().unwrap();
        let lcr = r.lc().clone();
        r = r.scale(&lcb).sub(&b.scale(&lcr).shift_up(dr - db));
        e -= 1;
    }
    let mut pad = BigInt::one();
    for _ in 0..e {
        pad *= &lcb;
    }
    r.scale(&pad)
}

/// Primitive gcd with positive leading coefficient (primitive PRS).
pub fn gcd_upoly(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let (mut big, mut small) = if a.degree() >= b.degree() {
        (a.primitive(), b.primitive())
    } else {
        (b.primitive(), a.primitive())
    };
    loop {
        if small.degree() == Some(0) {
            return UPoly::one();
        }
        let r = pseudo_rem(&big, &small);
        if r.is_zero() {
            return small;
        }
        big = small;
        small = r.primitive();
    }
}

/// Product of gcd-free factors: `p / gcd(p, p')`, primitive with positive
/// leading coefficient. Shares every root of `p`, each with multiplicity
/// one.
pub fn squarefree_part(p: &UPoly) -> UPoly {
    let g = gcd_upoly(p, &p.derivative());
    if g.degree() == Some(0) {
        return p.primitive();
    }
    divide_exact_upoly(&p.primitive(), &g).expect("gcd divides").primitive()
}

/// Exact quotient over the integers, or `None`.
pub fn divide_exact_upoly(a: &UPoly, b: &UPoly) -> Option<UPoly> {
    assert!(!b.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return Some(UPoly::zero());
    }
    let db = b.degree().unwrap();
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.c.len()];
    while !r.is_zero() {
        let dr = r.degree().unwrap();
        if dr < db {
            return None;
        }
        let (c, rem) = r.lc().div_rem(b.lc());
        if !rem.is_zero() {
            return None;
        }
        q[dr - db] = c.clone();
        r = r.sub(&b.scale(&c).shift_up(dr - db));
    }
    Some(UPoly::new(q))
}

/// Resultant of two integer polynomials via the subresultant remainder
/// sequence with exact scalar bookkeeping (no content gcds, so the cost
/// stays proportional to the answer's size). Degenerate cases: the
/// resultant with a constant `c` is `c^(deg of the other)`, and the
/// resultant of two constants is 1.
pub fn resultant_upoly(a: &UPoly, b: &UPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let mut aa = a.clone();
    let mut bb = b.clone();
    // multiplier accumulated as an exact fraction
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    if aa.degree() < bb.degree() {
        std::mem::swap(&mut aa, &mut bb);
        let (da, db) = (aa.degree().unwrap(), bb.degree().unwrap());
        if (da * db) % 2 == 1 {
            num = -num;
        }
    }
    // subresultant divisors
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = aa.degree().unwrap();
        let db = bb.degree().unwrap();
        if db == 0 {
            let mut pw = BigInt::one();
            for _ in 0..da {
                pw *= bb.lc();
            }
            let total = num * pw;
            let (q, r) = total.div_rem(&den);
            assert!(r.is_zero(), "resultant bookkeeping must stay integral");
            return q;
        }
        let e = da - db + 1;
        let rt = pseudo_rem(&aa, &bb);
        if rt.is_zero() {
            return BigInt::zero();
        }
        // divide by the subresultant factor g*h^(e-1); exact by theory
        let delta = e - 1;
        let mut div = g.clone();
        for _ in 0..delta {
            div *= &h;
        }
        let r = UPoly::new(
            rt.c
                .iter()
                .map(|c| {
                    let (q, rem) = c.div_rem(&div);
                    debug_assert!(rem.is_zero(), "subresultant division is exact");
                    q
                })
                .collect(),
        );
        let dr = r.degree().unwrap_or(0);
        // Res(a,b) = (-1)^(da*db) * lc(b)^(da-dr-e*db) * div^db * Res(b,r)
        if (da * db) % 2 == 1 {
            num = -num;
        }
        let exp = da as i64 - dr as i64 - (e * db) as i64;
        if exp >= 0 {
            for _ in 0..exp {
                num *= bb.lc();
            }
        } else {
            for _ in 0..(-exp) {
                den *= bb.lc();
            }
        }
        for _ in 0..db {
            num *= &div;
        }
        // standard g/h updates for the next division
        g = bb.lc().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => {
                let mut n = g.clone();
                for _ in 1..delta {
                    n *= &g;
                }
                let mut d = h.clone();
                for _ in 2..delta {
                    d *= &h;
                }
                let (q, rem) = n.div_rem(&d);
                debug_assert!(rem.is_zero(), "subresultant h-update is exact");
                q
            }
        };
        aa = bb;
        bb = r;
    }
}
