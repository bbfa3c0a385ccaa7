//! Fraction-free determinants and univariate resultants of multivariate
//! polynomials.

use super::gcd::{coeffs_in, deg_in, divide_exact};
use super::{PolyError, Polynomial};

/// Determinant of a square matrix of polynomials by the Bareiss
/// fraction-free elimination. All intermediate divisions are exact.
pub fn bareiss_det(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "square matrix required");
    if n == 0 {
        panic!("empty matrix has no determinant here");
    }
    let vars = m[0][0].vars().clone();
    let zero = Polynomial::zero(&vars);
    let one = Polynomial::one(&vars);
    let mut sign = 1i32;
    let mut prev = one;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let pivot = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match pivot {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = divide_exact(&num, &prev).expect("Bareiss division is exact");
            }
            m[i][k] = zero.clone();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

/// Resultant of `a` and `b` with respect to the variable of index `var`,
/// i.e. the determinant of the Sylvester matrix of the two polynomials
/// viewed as univariate in that variable. Both inputs must have positive
/// degree in `var`; the result has zero degree in it.
pub fn resultant_univar(
    a: &Polynomial,
    b: &Polynomial,
    var: usize,
) -> Result<Polynomial, PolyError> {
    if a.vars() != b.vars() {
        return Err(PolyError::VarMismatch);
    }
    let da = deg_in(a, var);
    let db = deg_in(b, var);
    if da < 1 || db < 1 {
        return Err(PolyError::Invalid(
            "resultant requires positive degree in the eliminated variable".into(),
        ));
    }
    let (da, db) = (da as usize, db as usize);
    let ac = coeffs_in(a, var); // ascending
    let bc = coeffs_in(b, var);
    let vars = a.vars().clone();
    let zero = Polynomial::zero(&vars);
    let n = da + db;
    let mut m = vec![vec![zero; n]; n];
    for i in 0..db {
        for (k, c) in ac.iter().enumerate() {
            // row i holds a's coefficients descending, starting at column i
            m[i][i + da - k] = c.clone();
        }
    }
    for i in 0..da {
        for (k, c) in bc.iter().enumerate() {
            m[db + i][i + db - k] = c.clone();
        }
    }
    Ok(bareiss_det(m))
}
