//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! Canonical form throughout: terms are kept in a graded-lexicographic
//! ordered map (total degree first, then lex with the first variable
//! strongest), zero coefficients are never stored, and the "canonical
//! sign" of a polynomial makes the leading graded-lex coefficient
//! positive. Exponents are machine 32-bit integers; arithmetic that
//! would overflow that bound reports an error instead of wrapping.
//!
//! Key components:
//! * [`VarSet`] — shared, ordered variable context;
//! * [`Monomial`] — exponent vector with cached total degree;
//! * [`Polynomial`] — the ring element, with arithmetic, substitution,
//!   content/primitive decomposition and (de)homogenisation;
//! * [`parse`] — the expression grammar (`+ - * ^`, no implicit
//!   multiplication);
//! * [`gcd`] — exact division and subresultant-PRS gcd;
//! * [`resultant`] — Sylvester resultants via fraction-free elimination.

mod gcd;
mod parse;
mod resultant;

pub use gcd::{divide_exact, poly_gcd, poly_gcd_many};
pub use resultant::{bareiss_det, resultant_univar};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("mismatched variable contexts")]
    VarMismatch,
    #[error("exponent exceeds the 32-bit bound")]
    ExponentOverflow,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("{0}")]
    Invalid(String),
}

// ---- Variable context ----

/// Ordered list of variable names shared by the polynomials of one ring.
/// Cheap to clone; equality compares the name lists.
#[derive(Debug, Clone, Eq)]
pub struct VarSet(Arc<Vec<String>>);

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        VarSet(Arc::new(names))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// New context with `name` appended (for homogenisation).
    pub fn with_appended(&self, name: &str) -> VarSet {
        let mut v = self.0.as_ref().clone();
        v.push(name.to_string());
        VarSet(Arc::new(v))
    }

    /// New context with variable `i` removed (for dehomogenisation).
    pub fn without(&self, i: usize) -> VarSet {
        let mut v = self.0.as_ref().clone();
        v.remove(i);
        VarSet(Arc::new(v))
    }
}

/// Coordinate names for `P^d`: X,Y,Z,W for small dimension, X0..Xd above.
pub fn coord_vars(dim: usize) -> VarSet {
    let n = dim + 1;
    if n <= 4 {
        VarSet::new(["X", "Y", "Z", "W"][..n].iter().copied())
    } else {
        VarSet::new((0..n).map(|i| format!("X{i}")))
    }
}

/// Parameter names for curves in `P^1`.
pub fn param_vars() -> VarSet {
    VarSet::new(["t", "u"])
}

// ---- Monomials ----

/// Exponent vector with cached total degree. Ordered graded-lex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u64,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().map(|&e| e as u64).sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial::new(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Product, or `None` on 32-bit exponent overflow.
    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            let s = *a as u64 + *b as u64;
            if s > u32::MAX as u64 {
                return None;
            }
            exps.push(s as u32);
        }
        Some(Monomial::new(exps))
    }

    /// Componentwise quotient if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial::new(exps))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---- Polynomials ----

/// Sparse polynomial in canonical graded-lex form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(vars: &VarSet) -> Self {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarSet, c: impl Into<BigInt>) -> Self {
        let mut p = Polynomial::zero(vars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        Polynomial::constant(vars, 1)
    }

    pub fn variable(vars: &VarSet, i: usize) -> Self {
        let mut p = Polynomial::zero(vars);
        p.terms.insert(Monomial::var(vars.len(), i, 1), BigInt::one());
        p
    }

    /// Monomial with coefficient; drops zero coefficients.
    pub fn from_term(vars: &VarSet, mono: Monomial, coeff: BigInt) -> Self {
        assert_eq!(mono.exps().len(), vars.len());
        let mut p = Polynomial::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(mono, coeff);
        }
        p
    }

    pub fn from_terms(
        vars: &VarSet,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(text: &str, vars: &VarSet) -> Result<Polynomial, PolyError> {
        parse::parse_polynomial(text, vars)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.leading_monomial().is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Greatest monomial in graded-lex order. Panics on the zero polynomial.
    pub fn leading_monomial(&self) -> &Monomial {
        self.terms.keys().next_back().expect("leading term of zero polynomial")
    }

    pub fn leading_coeff(&self) -> &BigInt {
        self.terms.values().next_back().expect("leading term of zero polynomial")
    }

    pub fn coeff(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in variable `i`; `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps()[i]).max()
    }

    /// Largest absolute coefficient value (zero polynomial gives 0).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch)
        }
    }

    // ---- Ring operations ----

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_vars(other)?;
        let mut out = Polynomial::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb).ok_or(PolyError::ExponentOverflow)?;
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { vars: self.vars.clone(), terms }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { vars: self.vars.clone(), terms }
    }

    pub fn mul_term(&self, mono: &Monomial, coeff: &BigInt) -> Result<Polynomial, PolyError> {
        if coeff.is_zero() {
            return Ok(Polynomial::zero(&self.vars));
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mm = m.checked_mul(mono).ok_or(PolyError::ExponentOverflow)?;
            out.terms.insert(mm, c * coeff);
        }
        Ok(out)
    }

    /// Power by repeated squaring.
    pub fn try_pow(&self, n: u32) -> Result<Polynomial, PolyError> {
        let mut result = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    // ---- Content, primitive part, canonical sign ----

    /// Gcd of absolute coefficient values. Zero polynomial gives 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `(content, primitive)` with positive content and the primitive
    /// part sign-normalised so its leading graded-lex coefficient is
    /// positive; `content * primitive = ±self`. Zero gives `(0, 0)`.
    pub fn content_primitive(&self) -> (BigInt, Polynomial) {
        if self.is_zero() {
            return (BigInt::zero(), self.clone());
        }
        let content = self.content();
        let negate = self.leading_coeff().is_negative();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let q = c / &content;
                (m.clone(), if negate { -q } else { q })
            })
            .collect();
        (content, Polynomial { vars: self.vars.clone(), terms })
    }

    /// Primitive, sign-normalised part.
    pub fn primitive_part(&self) -> Polynomial {
        self.content_primitive().1
    }

    /// Divide all coefficients by an exact integer divisor.
    pub fn div_exact_int(&self, d: &BigInt) -> Polynomial {
        assert!(!d.is_zero());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let (q, r) = c.div_rem(d);
                assert!(r.is_zero(), "inexact integer division of coefficients");
                (m.clone(), q)
            })
            .collect();
        Polynomial { vars: self.vars.clone(), terms }
    }

    // ---- Calculus and substitution ----

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] = e - 1;
            out.add_term(Monomial::new(exps), c * BigInt::from(e));
        }
        out
    }

    /// Substitute a polynomial for every variable. All images must share
    /// one target context, and every variable of `self` must be assigned.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.vars.len() {
            return Err(PolyError::Invalid(format!(
                "substitution needs {} images, got {}",
                self.vars.len(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(Polynomial::zero(&VarSet::new(Vec::<String>::new()))),
        };
        for p in images {
            if p.vars != target {
                return Err(PolyError::VarMismatch);
            }
        }
        // lazily built power tables, one per source variable
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let power = |v: usize, e: u32, powers: &mut Vec<Vec<Polynomial>>| -> Result<Polynomial, PolyError> {
            while powers[v].len() <= e as usize {
                let next = powers[v].last().unwrap().try_mul(&images[v])?;
                powers[v].push(next);
            }
            Ok(powers[v][e as usize].clone())
        };
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(&target, c.clone());
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    acc = acc.try_mul(&power(v, e, &mut powers)?)?;
                }
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }

    /// Evaluate at an integer point.
    pub fn eval_bigint(&self, coords: &[BigInt]) -> BigInt {
        assert_eq!(coords.len(), self.vars.len());
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= coords[v].pow(e);
                }
            }
            acc += t;
        }
        acc
    }

    // ---- Homogeneity ----

    /// Common degree of all terms, if the polynomial is homogeneous.
    /// The zero polynomial counts as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(0),
            Some(m) => m.degree(),
        };
        if it.all(|m| m.degree() == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// Homogenise with a fresh variable appended to the context, padding
    /// every term up to `target_degree`.
    pub fn homogenize(&self, new_var: &str, target_degree: u64) -> Result<Polynomial, PolyError> {
        if self.vars.index_of(new_var).is_some() {
            return Err(PolyError::Invalid(format!(
                "homogenisation variable `{new_var}` already in context"
            )));
        }
        if let Some(d) = self.total_degree() {
            if d > target_degree {
                return Err(PolyError::Invalid(format!(
                    "target degree {target_degree} below total degree {d}"
                )));
            }
        }
        let vars = self.vars.with_appended(new_var);
        let mut out = Polynomial::zero(&vars);
        for (m, c) in &self.terms {
            let pad = target_degree - m.degree();
            if pad > u32::MAX as u64 {
                return Err(PolyError::ExponentOverflow);
            }
            let mut exps = m.exps().to_vec();
            exps.push(pad as u32);
            out.terms.insert(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Set variable `var` to 1 and drop it from the context.
    pub fn dehomogenize(&self, var: usize) -> Polynomial {
        let vars = self.vars.without(var);
        let mut out = Polynomial::zero(&vars);
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            exps.remove(var);
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Rename/reorder into another context of the same size (used when a
    /// parameter ring `t,u` doubles as a generic bivariate ring).
    pub fn with_vars(&self, vars: &VarSet) -> Polynomial {
        assert_eq!(vars.len(), self.vars.len());
        Polynomial { vars: vars.clone(), terms: self.terms.clone() }
    }
}

// Operator sugar for contexts that are known to match; panics otherwise.
impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

// ---- Display ----

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote_factor = false;
            if !mag.is_one() || m.is_one() {
                write!(f, "{mag}")?;
                wrote_factor = true;
            }
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_factor {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.vars.name(v))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}
