//! Dominant rational self-maps of projective space, given by tuples of
//! homogeneous forms with integer coefficients.
//!
//! A map is stored fully reduced: the components are jointly primitive
//! (no common polynomial factor, unit integer content) and the leading
//! coefficient of the first nonzero component is positive, so equal maps
//! have equal representations.

use crate::poly::{divide_exact, poly_gcd_many, Polynomial, VarSet};
use crate::projective::{apply_forms, PointError, ProjPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("component {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("components have unequal degrees")]
    MixedDegrees,
    #[error("a self-map of P^d needs d+1 components over d+1 variables")]
    WrongComponentCount,
    #[error("components live in different variable contexts")]
    VarMismatch,
    #[error("all components are zero")]
    ZeroMap,
    #[error("the components reduce to constants")]
    ConstantMap,
    #[error("the map is not dominant: its Jacobian determinant vanishes identically")]
    NotDominant,
    #[error("topological degree draws kept disagreeing; the map may be too degenerate")]
    DegreeUndetermined,
    #[error("only maps of P^2 are supported here")]
    DimensionUnsupported,
    #[error("point error: {0}")]
    Point(#[from] PointError),
    #[error("exponent exceeds the 32-bit bound")]
    ExponentOverflow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    vars: VarSet,
    comps: Vec<Polynomial>,
    degree: u64,
}

impl RationalMap {
    /// Build a map from components, validating and fully reducing them.
    pub fn new(comps: Vec<Polynomial>) -> Result<Self, MapError> {
        if comps.is_empty() {
            return Err(MapError::WrongComponentCount);
        }
        let vars = comps[0].vars().clone();
        if comps.iter().any(|c| c.vars() != &vars) {
            return Err(MapError::VarMismatch);
        }
        if comps.len() != vars.len() {
            return Err(MapError::WrongComponentCount);
        }
        if comps.iter().all(|c| c.is_zero()) {
            return Err(MapError::ZeroMap);
        }
        let mut degree = None;
        for (index, c) in comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = c
                .homogeneous_degree()
                .ok_or(MapError::NotHomogeneous { index })?;
            if let Some(prev) = degree {
                if prev != d {
                    return Err(MapError::MixedDegrees);
                }
            } else {
                degree = Some(d);
            }
        }
        let comps = reduce_components(comps);
        let degree = comps
            .iter()
            .find(|c| !c.is_zero())
            .and_then(|c| c.homogeneous_degree())
            .expect("nonzero component");
        if degree == 0 {
            return Err(MapError::ConstantMap);
        }
        Ok(RationalMap { vars, comps, degree })
    }

    pub fn identity(vars: &VarSet) -> Self {
        let comps = (0..vars.len())
            .map(|i| Polynomial::variable(vars, i))
            .collect();
        RationalMap { vars: vars.clone(), comps, degree: 1 }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    /// Dimension d of the source (and target) P^d.
    pub fn dim(&self) -> usize {
        self.comps.len() - 1
    }

    /// Common degree of the reduced defining forms.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, PointError> {
        apply_forms(&self.comps, p)
    }

    /// `self` after `other`: substitute the components of `other` into
    /// those of `self`, then reduce.
    pub fn compose(&self, other: &RationalMap) -> Result<RationalMap, MapError> {
        if self.vars != other.vars {
            return Err(MapError::VarMismatch);
        }
        let mut comps = Vec::with_capacity(self.comps.len());
        for c in &self.comps {
            comps.push(
                c.substitute(&other.comps)
                    .map_err(|_| MapError::ExponentOverflow)?,
            );
        }
        RationalMap::new(comps)
    }

    /// `f^n`, composed sequentially with reduction at every step;
    /// `f^0` is the identity.
    pub fn iterate(&self, n: u32) -> Result<RationalMap, MapError> {
        let mut acc = RationalMap::identity(&self.vars);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Degrees of the reduced iterates `f^0, f^1, ..., f^n`.
    pub fn degree_sequence(&self, n: u32) -> Result<Vec<(u32, u64)>, MapError> {
        let mut rows = Vec::with_capacity(n as usize + 1);
        let mut acc = RationalMap::identity(&self.vars);
        rows.push((0, 1));
        for k in 1..=n {
            acc = self.compose(&acc)?;
            rows.push((k, acc.degree()));
        }
        Ok(rows)
    }

    /// Determinant of the matrix of partial derivatives of the
    /// components. Vanishes identically exactly when the map fails to be
    /// dominant (characteristic zero).
    pub fn jacobian_det(&self) -> Polynomial {
        let n = self.comps.len();
        let rows: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.comps[i].derivative(j)).collect())
            .collect();
        crate::poly::bareiss_det(rows)
    }

    pub fn is_dominant(&self) -> bool {
        !self.jacobian_det().is_zero()
    }

    /// Check that `g` inverts `self` as a rational map: both compositions
    /// must reduce to the identity.
    pub fn verify_inverse(&self, g: &RationalMap) -> Result<bool, MapError> {
        let id = RationalMap::identity(&self.vars);
        Ok(self.compose(g)? == id && g.compose(self)? == id)
    }

    /// Number of preimages of a generic point, for maps of P^2.
    ///
    /// The fiber over a random point Q is cut out by two curves; their
    /// resultant in the last variable is a binary form whose roots are
    /// the fiber's shadows together with Q-independent junk supported on
    /// the base locus. The junk is identified as the gcd across
    /// independent draws and subtracted in degree. Three draws must
    /// agree pairwise; disagreement triggers a retry with fresh points.
    pub fn topological_degree_dim2(&self, seed: u64) -> Result<u64, MapError> {
        if self.dim() != 2 {
            return Err(MapError::DimensionUnsupported);
        }
        if !self.is_dominant() {
            return Err(MapError::NotDominant);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        'attempt: for _ in 0..8 {
            let mut shadows = Vec::with_capacity(3);
            for _ in 0..3 {
                match self.fiber_shadow(&mut rng)? {
                    Some(b) => shadows.push(b),
                    None => continue 'attempt,
                }
            }
            let mut counts = vec![];
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    let g = crate::poly::poly_gcd(&shadows[i], &shadows[j])
                        .expect("nonzero forms");
                    let stable = g.total_degree().expect("nonzero gcd");
                    let di = shadows[i].total_degree().expect("nonzero shadow");
                    if di < stable {
                        continue 'attempt;
                    }
                    counts.push(di - stable);
                }
            }
            if counts.windows(2).all(|w| w[0] == w[1]) {
                return Ok(counts[0]);
            }
        }
        Err(MapError::DegreeUndetermined)
    }

    /// Binary form in the first two variables whose roots lie under the
    /// fiber of a random point, or `None` when the draw was degenerate.
    fn fiber_shadow(&self, rng: &mut ChaCha8Rng) -> Result<Option<Polynomial>, MapError> {
        let q: Vec<BigInt> = (0..3).map(|_| BigInt::from(rng.gen_range(1..=100i64))).collect();
        let f = &self.comps;
        let c1 = &f[0].scale(&q[1]) - &f[1].scale(&q[0]);
        let c2 = &f[1].scale(&q[2]) - &f[2].scale(&q[1]);
        if c1.is_zero() || c2.is_zero() {
            return Ok(None);
        }
        let g = crate::poly::poly_gcd(&c1, &c2).expect("nonzero");
        let c1 = divide_exact(&c1, &g).expect("gcd divides");
        let c2 = divide_exact(&c2, &g).expect("gcd divides");
        if c1.is_constant() || c2.is_constant() {
            return Ok(None);
        }
        let z = 2; // eliminate the last coordinate
        let d1 = c1.degree_in(z).unwrap_or(0);
        let d2 = c2.degree_in(z).unwrap_or(0);
        let b = match (d1, d2) {
            (0, 0) => return Ok(None),
            (0, _) => c1.try_pow(d2).map_err(|_| MapError::ExponentOverflow)?,
            (_, 0) => c2.try_pow(d1).map_err(|_| MapError::ExponentOverflow)?,
            _ => crate::poly::resultant_univar(&c1, &c2, z).expect("positive degree"),
        };
        debug_assert!(!b.is_zero(), "coprime curves have nonzero resultant");
        Ok(Some(b.primitive_part()))
    }
}

/// Divide the components by their common polynomial factor and common
/// integer content, and fix the global sign so the first nonzero
/// component has positive leading coefficient.
fn reduce_components(comps: Vec<Polynomial>) -> Vec<Polynomial> {
    let g = poly_gcd_many(&comps).expect("not all zero");
    let mut out: Vec<Polynomial> = comps
        .iter()
        .map(|c| divide_exact(c, &g).expect("gcd divides"))
        .collect();
    let mut content = BigInt::zero();
    for c in &out {
        if !c.is_zero() {
            content = content.gcd(&c.content());
        }
    }
    let lead_negative = out
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.leading_coeff().is_negative())
        .unwrap_or(false);
    if lead_negative {
        content = -content;
    }
    for c in out.iter_mut() {
        *c = c.div_exact_int(&content);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coord_vars;

    fn map(forms: &[&str]) -> RationalMap {
        let vars = coord_vars(forms.len() - 1);
        RationalMap::new(
            forms
                .iter()
                .map(|s| Polynomial::parse(s, &vars).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn construction_reduces() {
        // common factor X and content 2 both stripped
        let m = map(&["2*X^2", "2*X*Y", "2*X*Z"]);
        assert_eq!(m.degree(), 1);
        assert_eq!(m, RationalMap::identity(m.vars()).clone());
        // global sign normalization
        let m = map(&["-X^2", "-Y^2", "-Z^2"]);
        assert!(m.components()[0].leading_coeff() > &BigInt::zero());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let vars = coord_vars(2);
        let p = |s: &str| Polynomial::parse(s, &vars).unwrap();
        assert_eq!(
            RationalMap::new(vec![p("X + 1"), p("Y"), p("Z")]).unwrap_err(),
            MapError::NotHomogeneous { index: 0 }
        );
        assert_eq!(
            RationalMap::new(vec![p("X^2"), p("Y"), p("Z")]).unwrap_err(),
            MapError::MixedDegrees
        );
        assert_eq!(
            RationalMap::new(vec![p("X"), p("Y")]).unwrap_err(),
            MapError::WrongComponentCount
        );
        assert_eq!(
            RationalMap::new(vec![p("3"), p("5"), p("7")]).unwrap_err(),
            MapError::ConstantMap
        );
    }

    #[test]
    fn composition_and_iterates() {
        let sq = map(&["X^2", "Y^2", "Z^2"]);
        let f4 = sq.compose(&sq).unwrap();
        assert_eq!(f4.degree(), 4);
        assert_eq!(f4, sq.iterate(2).unwrap());
        assert_eq!(sq.iterate(0).unwrap(), RationalMap::identity(sq.vars()));
        let degs = sq.degree_sequence(5).unwrap();
        let want: Vec<(u32, u64)> = (0..=5).map(|k| (k, 1u64 << k)).collect();
        assert_eq!(degs, want);
    }

    #[test]
    fn cremona_involution_degrees_drop() {
        // the standard quadratic involution: squares reduce to degree 1
        let s = map(&["Y*Z", "X*Z", "X*Y"]);
        let degs = s.degree_sequence(4).unwrap();
        assert_eq!(degs, vec![(0, 1), (1, 2), (2, 1), (3, 2), (4, 1)]);
        assert!(s.verify_inverse(&s).unwrap());
    }

    #[test]
    fn fibonacci_map_degree_sequence() {
        // [2YZ : XY : Z^2]: degrees follow the Fibonacci numbers
        let f = map(&["2*Y*Z", "X*Y", "Z^2"]);
        let degs = f.degree_sequence(10).unwrap();
        let mut fib = vec![1u64, 2];
        while fib.len() <= 10 {
            let k = fib.len();
            fib.push(fib[k - 1] + fib[k - 2]);
        }
        for (k, d) in &degs {
            assert_eq!(*d, fib[*k as usize], "iterate {k}");
        }
    }

    #[test]
    fn dominance() {
        assert!(map(&["X^2", "Y^2", "Z^2"]).is_dominant());
        assert!(map(&["2*Y*Z", "X*Y", "Z^2"]).is_dominant());
        // image lies in a conic: not dominant
        let vars = coord_vars(2);
        let p = |s: &str| Polynomial::parse(s, &vars).unwrap();
        let squash = RationalMap::new(vec![p("X^2"), p("X*Y"), p("Y^2")]).unwrap();
        assert!(!squash.is_dominant());
    }

    #[test]
    fn inverse_verification() {
        let f = map(&["2*Y*Z", "X*Y", "Z^2"]);
        // inverse of [2YZ : XY : Z^2]
        let g = map(&["4*Y*Z", "X^2", "2*X*Z"]);
        assert!(f.verify_inverse(&g).unwrap());
        assert!(g.verify_inverse(&f).unwrap());
        let sq = map(&["X^2", "Y^2", "Z^2"]);
        assert!(!f.verify_inverse(&sq).unwrap());
        assert!(!sq.verify_inverse(&sq).unwrap());
    }

    #[test]
    fn topological_degrees() {
        assert_eq!(map(&["X^2", "Y^2", "Z^2"]).topological_degree_dim2(7).unwrap(), 4);
        assert_eq!(map(&["Y*Z", "X*Z", "X*Y"]).topological_degree_dim2(7).unwrap(), 1);
        assert_eq!(map(&["2*Y*Z", "X*Y", "Z^2"]).topological_degree_dim2(7).unwrap(), 1);
        // degree-3 regular map
        assert_eq!(map(&["X^3", "Y^3", "Z^3"]).topological_degree_dim2(7).unwrap(), 9);
        // determinism in the seed
        let f = map(&["2*Y*Z", "X*Y", "Z^2"]);
        assert_eq!(
            f.topological_degree_dim2(123).unwrap(),
            f.topological_degree_dim2(123).unwrap()
        );
    }

    #[test]
    fn application() {
        let f = map(&["2*Y*Z", "X*Y", "Z^2"]);
        let p = ProjPoint::from_i64(&[1, 1, 1]).unwrap();
        let q = f.apply(&p).unwrap();
        assert_eq!(q, ProjPoint::from_i64(&[2, 1, 1]).unwrap());
        let bad = ProjPoint::from_i64(&[1, 0, 0]).unwrap();
        assert_eq!(f.apply(&bad), Err(PointError::Indeterminate));
    }
}
