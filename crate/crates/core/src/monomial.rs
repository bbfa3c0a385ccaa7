//! Monomial self-maps of the torus inside P^d, driven entirely by an
//! integer exponent matrix.
//!
//! Iterates, inverses and degree sequences reduce to matrix arithmetic,
//! so horizons far beyond what generic composition could reach stay
//! cheap. Coefficients are kept in factored form (sign and prime
//! exponents) because iteration raises them to exponentially large
//! powers.

use crate::matrix::IntMatrix;
use crate::poly::{coord_vars, Monomial, Polynomial};
use crate::ratmap::RationalMap;
use crate::roots::{max_root_modulus, RadiusEstimate};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonomialError {
    #[error("coefficient count must match the matrix dimension")]
    SizeMismatch,
    #[error("coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("the exponent matrix is singular: the map is not dominant")]
    Singular,
    #[error("the exponent matrix is not invertible over the integers")]
    NotUnimodular,
    #[error("exponents too large to expand into polynomial form")]
    Overflow,
    #[error("the projectivized components reduce to constants")]
    Constant,
}

/// A nonzero rational in factored form: sign and prime exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredQ {
    negative: bool,
    exps: BTreeMap<u64, BigInt>,
}

impl FactoredQ {
    pub fn one() -> Self {
        FactoredQ { negative: false, exps: BTreeMap::new() }
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.exps.is_empty()
    }

    pub fn from_rational(q: &BigRational) -> Result<Self, MonomialError> {
        if q.is_zero() {
            return Err(MonomialError::ZeroCoefficient);
        }
        let mut out = FactoredQ { negative: q.is_negative(), exps: BTreeMap::new() };
        out.absorb(&q.numer().abs(), 1);
        out.absorb(q.denom(), -1);
        Ok(out)
    }

    /// Trial-divide `n` and add `dir` times its factorization.
    fn absorb(&mut self, n: &BigInt, dir: i64) {
        let mut n = n.clone();
        assert!(n.is_positive() || n.is_one());
        let mut p = 2u64;
        while n > BigInt::one() {
            let bp = BigInt::from(p);
            if (&bp * &bp) > n {
                // remainder is prime
                let key = n.to_u64().expect("coefficient factor fits u64");
                *self.exps.entry(key).or_default() += dir;
                break;
            }
            while (&n % &bp).is_zero() {
                n /= &bp;
                *self.exps.entry(p).or_default() += dir;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        self.exps.retain(|_, e| !e.is_zero());
    }

    pub fn mul(&self, other: &FactoredQ) -> FactoredQ {
        let mut exps = self.exps.clone();
        for (p, e) in &other.exps {
            *exps.entry(*p).or_default() += e;
        }
        exps.retain(|_, e| !e.is_zero());
        FactoredQ { negative: self.negative != other.negative, exps }
    }

    pub fn pow(&self, k: &BigInt) -> FactoredQ {
        if k.is_zero() {
            return FactoredQ::one();
        }
        let mut exps = BTreeMap::new();
        for (p, e) in &self.exps {
            exps.insert(*p, e * k);
        }
        let negative = self.negative && k.is_odd();
        FactoredQ { negative, exps }
    }

    pub fn inverse(&self) -> FactoredQ {
        self.pow(&BigInt::from(-1))
    }

    /// Expand back to numerator and denominator.
    pub fn to_fraction(&self) -> Result<(BigInt, BigInt), MonomialError> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.exps {
            let mag = e.abs().to_u32().ok_or(MonomialError::Overflow)?;
            if mag > 1_000_000 {
                return Err(MonomialError::Overflow);
            }
            let f = BigInt::from(*p).pow(mag);
            if e.is_negative() {
                den *= f;
            } else {
                num *= f;
            }
        }
        if self.negative {
            num = -num;
        }
        Ok((num, den))
    }
}

/// `x_i -> c_i * prod_j x_j^(a_ij)` on the affine torus, projectivized
/// with the last coordinate of P^d as the common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    a: IntMatrix,
    coeffs: Vec<FactoredQ>,
}

impl MonomialMap {
    pub fn new(a: IntMatrix, coeffs: Vec<BigRational>) -> Result<Self, MonomialError> {
        if coeffs.len() != a.size() {
            return Err(MonomialError::SizeMismatch);
        }
        let coeffs = coeffs
            .iter()
            .map(FactoredQ::from_rational)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MonomialMap { a, coeffs })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn coeffs(&self) -> &[FactoredQ] {
        &self.coeffs
    }

    /// Dimension d of the ambient P^d.
    pub fn dim(&self) -> usize {
        self.a.size()
    }

    pub fn is_dominant(&self) -> bool {
        !self.a.det().is_zero()
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let a = self.a.mul(&other.a);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for i in 0..self.coeffs.len() {
            let mut c = self.coeffs[i].clone();
            for (j, d) in other.coeffs.iter().enumerate() {
                c = c.mul(&d.pow(self.a.get(i, j)));
            }
            coeffs.push(c);
        }
        MonomialMap { a, coeffs }
    }

    pub fn identity(dim: usize) -> MonomialMap {
        MonomialMap { a: IntMatrix::identity(dim), coeffs: vec![FactoredQ::one(); dim] }
    }

    pub fn iterate(&self, n: u32) -> MonomialMap {
        let mut acc = MonomialMap::identity(self.dim());
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Exact inverse, when the exponent matrix is invertible over the
    /// integers.
    pub fn inverse(&self) -> Result<MonomialMap, MonomialError> {
        let b = self.a.inverse_unimodular().ok_or(MonomialError::NotUnimodular)?;
        let d = self.dim();
        let mut coeffs = Vec::with_capacity(d);
        for i in 0..d {
            let mut c = FactoredQ::one();
            for j in 0..d {
                c = c.mul(&self.coeffs[j].pow(&-b.get(i, j).clone()));
            }
            coeffs.push(c);
        }
        Ok(MonomialMap { a: b, coeffs })
    }

    /// Exponent shifts that clear all denominators of the projectivized
    /// map: per-variable shifts, the denominator-coordinate shift, and
    /// the resulting common degree.
    fn homogenization_shifts(&self) -> (Vec<BigInt>, BigInt, BigInt) {
        let d = self.dim();
        let mut ev = Vec::with_capacity(d);
        for j in 0..d {
            let mn = (0..d).map(|i| self.a.get(i, j).clone()).min().unwrap();
            ev.push((-mn).max(BigInt::zero()));
        }
        let mut max_s = BigInt::zero();
        for i in 0..d {
            let s: BigInt = (0..d).map(|j| self.a.get(i, j).clone()).sum();
            if s > max_s {
                max_s = s;
            }
        }
        let degree = ev.iter().sum::<BigInt>() + &max_s;
        (ev, max_s, degree)
    }

    /// Degree of the reduced projectivization. The construction is
    /// exponent-minimal, so no further reduction can occur.
    pub fn projective_degree(&self) -> u64 {
        let (_, _, degree) = self.homogenization_shifts();
        degree.to_u64().expect("degree fits u64")
    }

    /// Degrees of the projectivized iterates, `n = 0` included, computed
    /// through matrix powers only.
    pub fn degree_sequence(&self, n: u32) -> Vec<(u32, u64)> {
        let mut rows = Vec::with_capacity(n as usize + 1);
        let mut acc = MonomialMap::identity(self.dim());
        rows.push((0, 1));
        for k in 1..=n {
            acc = self.compose(&acc);
            rows.push((k, acc.projective_degree()));
        }
        rows
    }

    /// Expand into a tuple of integer forms on P^d.
    pub fn to_rational_map(&self) -> Result<RationalMap, MonomialError> {
        let d = self.dim();
        let vars = coord_vars(d);
        let (ev, ez, _) = self.homogenization_shifts();
        let mut fractions = Vec::with_capacity(d);
        let mut lcm_den = BigInt::one();
        for c in &self.coeffs {
            let (num, den) = c.to_fraction()?;
            lcm_den = lcm_den.lcm(&den);
            fractions.push((num, den));
        }
        let to_u32 = |b: &BigInt| b.to_u32().ok_or(MonomialError::Overflow);
        let mut comps = Vec::with_capacity(d + 1);
        for i in 0..d {
            let mut exps = Vec::with_capacity(d + 1);
            for j in 0..d {
                exps.push(to_u32(&(self.a.get(i, j) + &ev[j]))?);
            }
            let s: BigInt = (0..d).map(|j| self.a.get(i, j).clone()).sum();
            exps.push(to_u32(&(&ez - s))?);
            let (num, den) = &fractions[i];
            let coeff = num * (&lcm_den / den);
            comps.push(Polynomial::from_term(&vars, Monomial::new(exps), coeff));
        }
        let mut exps: Vec<u32> = Vec::with_capacity(d + 1);
        for e in &ev {
            exps.push(to_u32(e)?);
        }
        exps.push(to_u32(&ez)?);
        comps.push(Polynomial::from_term(&vars, Monomial::new(exps), lcm_den));
        RationalMap::new(comps).map_err(|_| MonomialError::Constant)
    }

    /// Certified table of the spectral radii of the exterior powers of
    /// the exponent matrix, for k = 0..=dim. For dominant monomial maps
    /// these radii are the dynamical degrees.
    pub fn lambda_table(&self, width: &BigRational) -> Vec<RadiusEstimate> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let cp = self.a.exterior_power(k).char_poly();
            out.push(max_root_modulus(&cp, width));
        }
        out
    }
}
