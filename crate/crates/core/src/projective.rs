//! Points of projective space over the rationals, in normalized integer
//! coordinates, and their Weil heights.

use crate::numeric::ln_abs_bigint;
use crate::poly::Polynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error("the map is indeterminate at the point")]
    Indeterminate,
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed point: {0}")]
    Parse(String),
}

/// A point of P^d(Q): coprime integer coordinates with the first nonzero
/// one positive. The representation is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(mut coords: Vec<BigInt>) -> Result<Self, PointError> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(PointError::ZeroPoint);
        }
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
        }
        let flip = coords.iter().find(|c| !c.is_zero()).unwrap().is_negative();
        if flip {
            g = -g;
        }
        for c in &mut coords {
            *c = &*c / &g;
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self, PointError> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Logarithmic Weil height: `ln max |x_i|` over the normalized
    /// coprime coordinates. Zero exactly at the coordinate-wise unit
    /// points.
    pub fn weil_height(&self) -> f64 {
        let max = self
            .coords
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("nonempty");
        ln_abs_bigint(&max)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for ProjPoint {
    type Err = PointError;

    /// Accepts `[a:b:c]` with integer entries; whitespace around entries
    /// is ignored.
    fn from_str(s: &str) -> Result<Self, PointError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| PointError::Parse(format!("expected [a:b:...], got {t:?}")))?;
        let mut coords = vec![];
        for part in inner.split(':') {
            let part = part.trim();
            let v = BigInt::from_str(part)
                .map_err(|_| PointError::Parse(format!("bad coordinate {part:?}")))?;
            coords.push(v);
        }
        ProjPoint::new(coords)
    }
}

/// Evaluate a tuple of forms at a point; the result is normalized. All
/// forms vanishing simultaneously means the point is indeterminate for
/// the map the forms define.
pub fn apply_forms(forms: &[Polynomial], p: &ProjPoint) -> Result<ProjPoint, PointError> {
    let nv = forms
        .first()
        .map(|f| f.vars().len())
        .unwrap_or(0);
    if nv != p.coords.len() {
        return Err(PointError::DimensionMismatch { expected: nv, found: p.coords.len() });
    }
    let vals: Vec<BigInt> = forms.iter().map(|f| f.eval_bigint(&p.coords)).collect();
    ProjPoint::new(vals).map_err(|_| PointError::Indeterminate)
}

/// One row per iterate, starting with the source point at `n = 0`.
#[derive(Clone, Debug)]
pub struct PointOrbitRow {
    pub n: u32,
    pub point: ProjPoint,
    pub height: f64,
}

/// An orbit cut short (by an indeterminate point, say) keeps the rows
/// computed so far next to the reason it stopped.
#[derive(Debug)]
pub struct PointOrbitTable {
    pub rows: Vec<PointOrbitRow>,
    pub error: Option<PointError>,
}

impl PointOrbitTable {
    pub fn heights(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.height).collect()
    }

    pub fn truncated(&self) -> bool {
        self.error.is_some()
    }
}

pub fn point_orbit_heights(
    forms: &[Polynomial],
    start: &ProjPoint,
    horizon: u32,
) -> PointOrbitTable {
    let mut rows = Vec::with_capacity(horizon as usize + 1);
    let mut p = start.clone();
    rows.push(PointOrbitRow { n: 0, height: p.weil_height(), point: p.clone() });
    for n in 1..=horizon {
        match apply_forms(forms, &p) {
            Ok(q) => p = q,
            Err(e) => return PointOrbitTable { rows, error: Some(e) },
        }
        rows.push(PointOrbitRow { n, height: p.weil_height(), point: p.clone() });
    }
    PointOrbitTable { rows, error: None }
}
