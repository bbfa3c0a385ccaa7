//! Real-root isolation by Sturm sequences, and certified root moduli.
//!
//! Everything here is exact: intervals have rational endpoints and root
//! counts come from Sturm's theorem, so a returned enclosure is a proof.
//! The only floating-point numbers are the convenience `value` fields
//! derived from exact enclosures at the end.

use crate::numeric::bigrational_to_f64;
use crate::univar::{pseudo_rem, squarefree_part, UPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Sturm chain of a squarefree polynomial. Each element is primitive;
/// signs are preserved (every pseudo-remainder is corrected to a positive
/// scalar multiple of the true remainder before negation).
pub struct SturmChain {
    seq: Vec<UPoly>,
}

impl SturmChain {
    pub fn new(p: &UPoly) -> Self {
        let p0 = p.primitive();
        let p1 = p0.derivative().primitive();
        let mut seq = vec![p0, p1];
        loop {
            let a = &seq[seq.len() - 2];
            let b = &seq[seq.len() - 1];
            if b.is_zero() || b.degree() == Some(0) {
                break;
            }
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            let mut r = pseudo_rem(a, b);
            // pseudo_rem scales by lc(b)^(da-db+1); flip back when that is negative
            if b.lc().is_negative() && (da - db + 1) % 2 == 1 {
                r = r.neg();
            }
            // only positive scalars may be divided out here: the chain's
            // sign pattern is the whole point
            let next = strip_content(&r.neg());
            if next.is_zero() {
                break;
            }
            seq.push(next);
        }
        SturmChain { seq }
    }

    /// Sign variations of the chain at `x` (zeros skipped).
    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.seq {
            let v = p.eval_q(x);
            if v.is_zero() {
                continue;
            }
            let s = v.is_positive();
            if let Some(prev) = last {
                if prev != s {
                    count += 1;
                }
            }
            last = Some(s);
        }
        count
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    /// Both endpoints must be non-roots of the base polynomial.
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        debug_assert!(lo < hi);
        debug_assert!(!self.seq[0].eval_q(lo).is_zero());
        debug_assert!(!self.seq[0].eval_q(hi).is_zero());
        self.variations(lo) - self.variations(hi)
    }
}

/// Divide out the (positive) content, keeping the sign of every
/// coefficient, unlike `UPoly::primitive` which also normalizes the
/// leading sign.
fn strip_content(p: &UPoly) -> UPoly {
    if p.is_zero() {
        return UPoly::zero();
    }
    let g = p.content();
    UPoly::new(p.coeffs().iter().map(|c| c / &g).collect())
}

/// A split point in `(lo, hi)` that is not a root of `p`: the midpoint,
/// or a nearby rational when the midpoint happens to be a root.
fn non_root_split(p: &UPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = (lo + hi) / &two;
    if !p.eval_q(&mid).is_zero() {
        return mid;
    }
    // a polynomial has finitely many roots; walk a sequence of distinct
    // rationals accumulating toward the left endpoint
    let mut denom = BigInt::from(3);
    loop {
        let cand = lo + (hi - lo) / BigRational::from_integer(denom.clone());
        if !p.eval_q(&cand).is_zero() {
            return cand;
        }
        denom += 1;
    }
}

/// Disjoint isolating intervals for all real roots of a squarefree
/// polynomial, sorted ascending. Each open interval `(lo, hi)` contains
/// exactly one root, the endpoints are non-roots, and the polynomial
/// changes sign across it.
pub fn isolate_real_roots(p: &UPoly) -> Vec<(BigRational, BigRational)> {
    assert!(!p.is_zero());
    if p.degree() == Some(0) {
        return vec![];
    }
    let chain = SturmChain::new(p);
    let bound = p.cauchy_bound();
    let lo = -bound.clone();
    let hi = bound;
    let total = chain.count_in(&lo, &hi);
    let mut out = vec![];
    let mut stack = vec![(lo, hi, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let m = non_root_split(p, &lo, &hi);
                let left = chain.count_in(&lo, &m);
                let right = count - left;
                stack.push((lo, m.clone(), left));
                stack.push((m, hi, right));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Shrink an isolating interval of a simple root by bisection until its
/// width is below `width`. An exact rational root is returned as a point
/// interval.
pub fn refine_root(
    p: &UPoly,
    interval: (BigRational, BigRational),
    width: &BigRational,
) -> (BigRational, BigRational) {
    let (mut lo, mut hi) = interval;
    if lo == hi {
        return (lo, hi);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let slo = p.eval_q(&lo).is_positive();
    debug_assert!(
        slo != p.eval_q(&hi).is_positive(),
        "no sign change across interval"
    );
    while &hi - &lo >= *width {
        let mid = (&lo + &hi) / &two;
        let v = p.eval_q(&mid);
        if v.is_zero() {
            return (mid.clone(), mid);
        }
        if v.is_positive() == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Largest modulus among the complex roots of an integer polynomial,
/// together with an exact enclosure when that modulus is attained by a
/// real root.
///
/// `certified` means `interval` provably contains the max modulus and is
/// at most the requested width. When the dominating roots are all
/// non-real the modulus is still computed exactly as an algebraic number
/// (the square root of the largest real root of a product polynomial),
/// but only a float approximation is reported and `certified` is false.
#[derive(Clone, Debug)]
pub struct RadiusEstimate {
    pub value: f64,
    pub interval: Option<(BigRational, BigRational)>,
    pub certified: bool,
}

/// `R(s) = Res_y(q(y), y^e q(s/y))` has as roots exactly the pairwise
/// products of roots of `q`; its largest real root is the squared max
/// root modulus, attained by a root times its conjugate. Requires
/// `q(0) != 0`.
fn product_root_poly(q: &UPoly) -> UPoly {
    use crate::poly::{Monomial, Polynomial, VarSet};
    let e = q.degree().expect("nonzero") as u32;
    let vars = VarSet::new(["s", "y"]);
    let mut qy = vec![];
    let mut qs = vec![];
    for (i, c) in q.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let i = i as u32;
        qy.push((Monomial::new(vec![0, i]), c.clone()));
        // y^e * q(s/y) picks up s^i y^(e-i)
        qs.push((Monomial::new(vec![i, e - i]), c.clone()));
    }
    let a = Polynomial::from_terms(&vars, qy);
    let b = Polynomial::from_terms(&vars, qs);
    let r = crate::poly::resultant_univar(&a, &b, 1).expect("positive degree in y");
    UPoly::from_poly(&r, 0).expect("resultant eliminated y")
}

pub fn max_root_modulus(p: &UPoly, width: &BigRational) -> RadiusEstimate {
    assert!(!p.is_zero(), "zero polynomial has no root data");
    let k = p.trailing_zero_order();
    let q = p.shift_down(k);
    if q.degree() == Some(0) {
        // every root is zero
        let z = BigRational::zero();
        return RadiusEstimate { value: 0.0, interval: Some((z.clone(), z)), certified: true };
    }
    let qsf = squarefree_part(&q);
    if qsf.degree() == Some(1) {
        // rational root -c0/c1: modulus is exact
        let root = BigRational::new(-qsf.coeff(0), qsf.coeff(1)).abs();
        return RadiusEstimate {
            value: bigrational_to_f64(&root),
            interval: Some((root.clone(), root)),
            certified: true,
        };
    }
    let rsf = squarefree_part(&product_root_poly(&qsf));
    let r_roots = isolate_real_roots(&rsf);
    // the squared max modulus is always a real root of the product polynomial
    let top = r_roots.last().expect("product polynomial has a real root").clone();

    // a real root of q attaining the max modulus must be an extreme one
    let q_roots = isolate_real_roots(&qsf);
    let mut candidates = vec![];
    if let Some(first) = q_roots.first() {
        candidates.push(first.clone());
    }
    if q_roots.len() > 1 {
        candidates.push(q_roots.last().unwrap().clone());
    }

    for cand in candidates {
        if let Some(iv) = square_sits_in_top(&qsf, cand, &top) {
            let iv = refine_root(&qsf, iv, width);
            let (alo, ahi) = if iv.0.is_negative() {
                (-&iv.1, -&iv.0)
            } else {
                iv
            };
            let mid = (&alo + &ahi) / BigRational::from_integer(BigInt::from(2));
            return RadiusEstimate {
                value: bigrational_to_f64(&mid),
                interval: Some((alo, ahi)),
                certified: true,
            };
        }
    }

    // the dominating roots are all non-real
    let tight = refine_root(&rsf, top, width);
    let mid = (&tight.0 + &tight.1) / BigRational::from_integer(BigInt::from(2));
    RadiusEstimate { value: bigrational_to_f64(&mid).sqrt(), interval: None, certified: false }
}

/// Decide whether the root `r` isolated by `cand` satisfies `r^2 == s*`,
/// where `s*` is the root of the product polynomial isolated by the open
/// interval `top`. On success returns a sign-definite enclosure of `r`.
///
/// `r^2` is itself a real root of the product polynomial, and `top`'s
/// endpoints are non-roots of it, so shrinking `cand` must eventually
/// place the square of its enclosure strictly inside or strictly outside
/// `top`.
fn square_sits_in_top(
    q: &UPoly,
    cand: (BigRational, BigRational),
    top: &(BigRational, BigRational),
) -> Option<(BigRational, BigRational)> {
    let zero = BigRational::zero();
    let mut iv = cand;
    let mut budget = 4096u32;
    loop {
        let point = iv.0 == iv.1;
        if point || iv.0 >= zero || iv.1 <= zero {
            let (alo, ahi) = if iv.1 <= zero {
                (iv.1.abs(), iv.0.abs())
            } else {
                (iv.0.abs(), iv.1.abs())
            };
            let sq = (&alo * &alo, &ahi * &ahi);
            if sq.0 > top.0 && sq.1 < top.1 {
                return Some(iv);
            }
            if point {
                return None;
            }
            if sq.1 <= top.0 || sq.0 >= top.1 {
                return None;
            }
        }
        let w = (&iv.1 - &iv.0) / BigRational::from_integer(BigInt::from(2));
        iv = refine_root(q, iv, &w);
        budget -= 1;
        assert!(budget > 0, "root separation refinement did not converge");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(coeffs: &[i64]) -> UPoly {
        UPoly::from_i64(coeffs)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn isolation_counts() {
        // x^2 - 2: two real roots
        let p = u(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!(roots[0].1 <= roots[1].0);
        // x^2 + 1: none
        assert!(isolate_real_roots(&u(&[1, 0, 1])).is_empty());
        // (x-1)(x-2)(x+5)
        let p = u(&[-1, 1]).mul(&u(&[-2, 1])).mul(&u(&[5, 1]));
        assert_eq!(isolate_real_roots(&p).len(), 3);
    }

    #[test]
    fn refine_sqrt2() {
        let p = u(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p);
        let width = q(1, 1_000_000_000_000);
        let (lo, hi) = refine_root(&p, roots[1].clone(), &width);
        let mid = bigrational_to_f64(&((&lo + &hi) / q(2, 1)));
        assert!((mid - std::f64::consts::SQRT_2).abs() < 1e-9);
        assert!(&hi - &lo < width);
    }

    #[test]
    fn exact_rational_root_detected() {
        // roots 1/2 and 3; bisection on (0, 1) hits 1/2 exactly
        let p = u(&[3, -7, 2]);
        let iv = (q(0, 1), q(1, 1));
        let (lo, hi) = refine_root(&p, iv, &q(1, 1_000_000));
        if lo == hi {
            assert_eq!(lo, q(1, 2));
        } else {
            assert!(lo < q(1, 2) && q(1, 2) < hi);
        }
    }

    #[test]
    fn radius_golden_ratio_certified() {
        // x^2 - x - 1
        let est = max_root_modulus(&u(&[-1, -1, 1]), &q(1, 1_000_000_000_000));
        assert!(est.certified);
        let (lo, hi) = est.interval.unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((est.value - phi).abs() < 1e-9);
        assert!(bigrational_to_f64(&lo) <= phi && phi <= bigrational_to_f64(&hi) + 1e-15);
        assert!(&hi - &lo < q(1, 1_000_000_000_000));
    }

    #[test]
    fn radius_complex_pair_uncertified() {
        // x^2 - 2x + 2 has roots 1 ± i, radius sqrt(2)
        let est = max_root_modulus(&u(&[2, -2, 1]), &q(1, 1_000_000_000_000));
        assert!(!est.certified);
        assert!(est.interval.is_none());
        assert!((est.value - std::f64::consts::SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn radius_negative_real() {
        // x + 1: radius 1, attained by the real root -1
        let est = max_root_modulus(&u(&[1, 1]), &q(1, 1_000_000));
        assert!(est.certified);
        assert_eq!(est.value, 1.0);
        let (lo, hi) = est.interval.unwrap();
        assert_eq!(lo, q(1, 1));
        assert_eq!(hi, q(1, 1));
    }

    #[test]
    fn radius_nilpotent() {
        // x^3
        let est = max_root_modulus(&u(&[0, 0, 0, 1]), &q(1, 100));
        assert!(est.certified);
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn radius_mixed_real_and_complex() {
        // (x - 1)(x^2 + 4): radius 2 from the complex pair, real root 1
        let p = u(&[-1, 1]).mul(&u(&[4, 0, 1]));
        let est = max_root_modulus(&p, &q(1, 1_000_000));
        assert!(!est.certified);
        assert!((est.value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn radius_real_dominates_complex() {
        // (x + 3)(x^2 + 1): radius 3 attained by a real root
        let p = u(&[3, 1]).mul(&u(&[1, 0, 1]));
        let est = max_root_modulus(&p, &q(1, 1_000_000));
        assert!(est.certified);
        assert!((est.value - 3.0).abs() < 1e-6);
    }

    #[test]
    fn radius_opposite_integer_roots() {
        // x^2 - 4: radius 2, attained at both ±2; the enclosure is only
        // as tight as requested
        let est = max_root_modulus(&u(&[-4, 0, 1]), &q(1, 1_000_000));
        assert!(est.certified);
        assert!((est.value - 2.0).abs() < 1e-6);
        let (lo, hi) = est.interval.unwrap();
        assert!(lo <= q(2, 1) && q(2, 1) <= hi);
    }

    #[test]
    fn radius_squaring_powers() {
        // char polys of [[1]], [[2]], [[4]]
        for (c, want) in [(1i64, 1.0f64), (2, 2.0), (4, 4.0)] {
            let est = max_root_modulus(&u(&[-c, 1]), &q(1, 100_000_000));
            assert!(est.certified);
            assert!((est.value - want).abs() < 1e-12);
        }
    }
}
