//! Square integer matrices: exact determinants, powers, exterior powers
//! and characteristic polynomials.

use crate::poly::{Polynomial, VarSet};
use crate::univar::UPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    a: Vec<BigInt>, // row-major
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        IntMatrix { n, a: entries }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "square matrix required");
            a.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { n, a }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = vec![BigInt::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = BigInt::one();
        }
        IntMatrix { n, a }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.a[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.a
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = aik * other.get(k, j);
                    out[i * n + j] += t;
                }
            }
        }
        IntMatrix { n, a: out }
    }

    pub fn pow(&self, mut k: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.a[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let d = std::mem::take(&mut m[n - 1][n - 1]);
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Inverse of a matrix with determinant ±1, via the adjugate. `None`
    /// when the determinant is anything else (the inverse would not be
    /// integral).
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let d = self.det();
        if d.abs() != BigInt::one() {
            return None;
        }
        let n = self.n;
        let mut inv = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j).det();
                let c = if (i + j) % 2 == 0 { minor } else { -minor };
                // adjugate transposes the cofactors; 1/det equals det here
                inv[j * n + i] = c * &d;
            }
        }
        Some(IntMatrix { n, a: inv })
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.n;
        let mut a = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                a.push(self.get(i, j).clone());
            }
        }
        IntMatrix { n: n - 1, a }
    }

    /// Submatrix determinant on the given row and column index sets.
    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let k = rows.len();
        let mut a = Vec::with_capacity(k * k);
        for &i in rows {
            for &j in cols {
                a.push(self.get(i, j).clone());
            }
        }
        IntMatrix { n: k, a }.det()
    }

    /// k-th exterior power: the C(n,k) x C(n,k) matrix of k x k minors,
    /// rows and columns indexed by k-subsets in lexicographic order.
    pub fn exterior_power(&self, k: usize) -> IntMatrix {
        assert!(k <= self.n, "exterior power degree exceeds dimension");
        if k == 0 {
            return IntMatrix::identity(1);
        }
        let subsets = k_subsets(self.n, k);
        let m = subsets.len();
        let mut a = Vec::with_capacity(m * m);
        for rows in &subsets {
            for cols in &subsets {
                a.push(self.minor_det(rows, cols));
            }
        }
        IntMatrix { n: m, a }
    }

    /// Monic characteristic polynomial `det(xI - M)`.
    pub fn char_poly(&self) -> UPoly {
        let vars = VarSet::new(["x"]);
        let x = Polynomial::variable(&vars, 0);
        let n = self.n;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let c = Polynomial::constant(&vars, -self.get(i, j).clone());
                row.push(if i == j { &x + &c } else { c });
            }
            rows.push(row);
        }
        let det = crate::poly::bareiss_det(rows);
        UPoly::from_poly(&det, 0).expect("univariate in x")
    }
}

/// All k-element subsets of {0..n-1} in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
