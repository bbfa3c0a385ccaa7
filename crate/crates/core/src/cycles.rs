//! Hypersurface cycles, parametrized rational curves, exact plane-curve
//! implicitization, and pushforward of curve cycles.
//!
//! A parametrized curve is a tuple of jointly coprime binary forms
//! `(g_0, ..., g_d)` in the parameters `(t, u)`. For plane curves the
//! implicit equation is recovered exactly: the bivariate resultant
//! `Res_t(x*g2 - g0, y*g2 - g1)` equals `c * q(x, y)^m` with `q`
//! irreducible, where `V(q)` is the image and `m` is the degree of the
//! parametrization onto it, so `m * deg q = deg gamma`. The resultant is
//! sampled on an integer grid, rebuilt by Newton interpolation, and the
//! `m`-th root is peeled off term by term; the output is certified by
//! re-expansion and by the exact vanishing of `q(g0, g1, g2)`.
//!
//! Heights use the natural logarithm throughout; growth-rate roots do not
//! depend on the base.

use crate::numeric::ln_abs_bigint;
use crate::poly::{
    coord_vars, divide_exact, param_vars, poly_gcd, poly_gcd_many, resultant_univar, Monomial,
    PolyError, Polynomial, VarSet,
};
use crate::projective::ProjPoint;
use crate::ratmap::RationalMap;
use crate::univar::{resultant_upoly, UPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CycleError {
    #[error("hypersurface form must be nonconstant and homogeneous")]
    BadForm,
    #[error("parametrization needs homogeneous binary forms of one common degree, not all zero")]
    BadParametrization,
    #[error("parametrization collapses to a point")]
    DegenerateParametrization,
    #[error("implicitization is implemented for plane curves")]
    NotPlane,
    #[error("pushforward contracted the cycle")]
    TotalCollapse,
    #[error("map is not dominant")]
    NotDominant,
    #[error("cycle and map live in different coordinate rings")]
    ContextMismatch,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

// ---- Cycles ----

/// An effective hypersurface, stored as a primitive homogeneous form with
/// positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersurface {
    form: Polynomial,
}

impl Hypersurface {
    pub fn new(form: Polynomial) -> Result<Self, CycleError> {
        if form.is_zero() || form.is_constant() || !form.is_homogeneous() {
            return Err(CycleError::BadForm);
        }
        Ok(Hypersurface { form: form.primitive_part() })
    }

    pub fn form(&self) -> &Polynomial {
        &self.form
    }

    pub fn degree(&self) -> u64 {
        self.form.total_degree().expect("nonzero form")
    }

    /// Natural log of the largest coefficient magnitude.
    pub fn log_max_coeff(&self) -> f64 {
        ln_abs_bigint(&self.form.max_abs_coeff())
    }

    /// Height of the reduced hypersurface: degree plus coefficient size.
    pub fn height(&self) -> f64 {
        self.degree() as f64 + self.log_max_coeff()
    }
}

/// A formal nonnegative sum of hypersurfaces with multiplicities. Heights
/// and degrees extend linearly over the parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    parts: Vec<(Hypersurface, u64)>,
}

impl Cycle {
    pub fn empty() -> Self {
        Cycle { parts: vec![] }
    }

    pub fn one(surface: Hypersurface, mult: u64) -> Self {
        assert!(mult >= 1, "cycle multiplicity must be positive");
        Cycle { parts: vec![(surface, mult)] }
    }

    /// Build from parts, merging repeated hypersurfaces and dropping
    /// multiplicity-zero entries.
    pub fn new(parts: Vec<(Hypersurface, u64)>) -> Self {
        let mut merged: Vec<(Hypersurface, u64)> = vec![];
        for (h, m) in parts {
            if m == 0 {
                continue;
            }
            match merged.iter_mut().find(|(k, _)| *k == h) {
                Some((_, acc)) => *acc += m,
                None => merged.push((h, m)),
            }
        }
        Cycle { parts: merged }
    }

    pub fn parts(&self) -> &[(Hypersurface, u64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total multiplicity over all parts.
    pub fn multiplicity(&self) -> u64 {
        self.parts.iter().map(|(_, m)| m).sum()
    }

    /// Degree counted with multiplicities.
    pub fn degree(&self) -> u64 {
        self.parts.iter().map(|(h, m)| m * h.degree()).sum()
    }

    /// Multiplicity-weighted log-max-coefficient.
    pub fn log_max_coeff(&self) -> f64 {
        self.parts.iter().map(|(h, m)| *m as f64 * h.log_max_coeff()).sum()
    }

    /// Height, linear over parts: sum of m_i * h(V_i).
    pub fn height(&self) -> f64 {
        self.parts.iter().map(|(h, m)| *m as f64 * h.height()).sum()
    }
}

/// One row of a cycle-orbit table. The height decomposes as
/// `height = degree + log_max_coeff` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleOrbitRow {
    pub n: u32,
    pub degree: u64,
    pub log_max_coeff: f64,
    pub height: f64,
    pub mult: u64,
}

impl CycleOrbitRow {
    pub fn from_cycle(n: u32, cycle: &Cycle) -> Self {
        let degree = cycle.degree();
        let log_max_coeff = cycle.log_max_coeff();
        CycleOrbitRow {
            n,
            degree,
            log_max_coeff,
            height: degree as f64 + log_max_coeff,
            mult: cycle.multiplicity(),
        }
    }
}

// ---- Parametrized curves ----

/// A rational curve in projective space, given by binary forms in `(t, u)`
/// of one common degree, reduced so the forms are jointly coprime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCurve {
    forms: Vec<Polynomial>,
    degree: u64,
}

impl ParamCurve {
    pub fn new(forms: Vec<Polynomial>) -> Result<Self, CycleError> {
        if forms.len() < 2 {
            return Err(CycleError::BadParametrization);
        }
        let pv = param_vars();
        let mut common: Option<u64> = None;
        for f in &forms {
            if f.vars() != &pv {
                return Err(CycleError::BadParametrization);
            }
            if f.is_zero() {
                continue;
            }
            let d = f.homogeneous_degree().ok_or(CycleError::BadParametrization)?;
            match common {
                None => common = Some(d),
                Some(e) if e != d => return Err(CycleError::BadParametrization),
                _ => {}
            }
        }
        if common.is_none() {
            return Err(CycleError::BadParametrization);
        }
        let forms = reduce_forms(forms);
        let degree = forms
            .iter()
            .find(|f| !f.is_zero())
            .and_then(|f| f.homogeneous_degree())
            .expect("a nonzero form survives reduction");
        if degree == 0 {
            return Err(CycleError::DegenerateParametrization);
        }
        Ok(ParamCurve { forms, degree })
    }

    /// The line through two points, parametrized as `t*p + u*q`; the points
    /// must be distinct.
    pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ParamCurve, CycleError> {
        if p.dim() != q.dim() {
            return Err(CycleError::BadParametrization);
        }
        let pv = param_vars();
        let t = Polynomial::variable(&pv, 0);
        let u = Polynomial::variable(&pv, 1);
        let forms = p
            .coords()
            .iter()
            .zip(q.coords())
            .map(|(a, b)| &t.scale(a) + &u.scale(b))
            .collect();
        ParamCurve::new(forms)
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    pub fn dim(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// The reparametrized image `f ∘ gamma`, reduced to joint coprimality.
    pub fn push_forward(&self, map: &RationalMap) -> Result<ParamCurve, CycleError> {
        if map.dim() + 1 != self.forms.len() {
            return Err(CycleError::ContextMismatch);
        }
        let comps = map
            .components()
            .iter()
            .map(|c| c.substitute(&self.forms))
            .collect::<Result<Vec<_>, _>>()?;
        if comps.iter().all(|c| c.is_zero()) {
            return Err(CycleError::TotalCollapse);
        }
        ParamCurve::new(comps)
    }
}

/// Divide out the common polynomial factor and integer content, then fix
/// the sign so the first nonzero form has positive leading coefficient.
fn reduce_forms(forms: Vec<Polynomial>) -> Vec<Polynomial> {
    let g = poly_gcd_many(&forms).expect("not all zero");
    let mut out: Vec<Polynomial> = forms
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

// ---- Implicitization ----

/// Exact implicit equation of the image of a parametrized plane curve,
/// together with the degree `m` of the parametrization onto its image;
/// the cycle class of the image is `m * C`.
pub fn implicitize_param_curve(curve: &ParamCurve) -> Result<(Hypersurface, u64), CycleError> {
    if curve.forms.len() != 3 {
        return Err(CycleError::NotPlane);
    }
    let d = curve.degree;
    let cv = coord_vars(2);
    // a vanishing component means the image is a coordinate line, and the
    // remaining pair of coprime forms maps onto it with degree D
    for (i, f) in curve.forms.iter().enumerate() {
        if f.is_zero() {
            return Ok((Hypersurface::new(Polynomial::variable(&cv, i))?, d));
        }
    }
    let ghat: Vec<UPoly> = curve.forms.iter().map(dehom_u).collect();
    let r_xy = sample_resultant_grid(&ghat)?;
    extract_image(r_xy, d, &ghat)
}

/// Independent implicitization through a symbolic trivariate resultant.
/// Much slower than the sampled path but structurally unrelated to it;
/// kept as a cross-check for small degrees.
pub fn implicitize_reference(curve: &ParamCurve) -> Result<(Hypersurface, u64), CycleError> {
    if curve.forms.len() != 3 {
        return Err(CycleError::NotPlane);
    }
    let d = curve.degree;
    let cv = coord_vars(2);
    for (i, f) in curve.forms.iter().enumerate() {
        if f.is_zero() {
            return Ok((Hypersurface::new(Polynomial::variable(&cv, i))?, d));
        }
    }
    let ghat: Vec<UPoly> = curve.forms.iter().map(dehom_u).collect();
    let v3 = VarSet::new(["x", "y", "t"]);
    let g0 = upoly_in(&v3, &ghat[0], 2);
    let g1 = upoly_in(&v3, &ghat[1], 2);
    let g2 = upoly_in(&v3, &ghat[2], 2);
    let x = Polynomial::variable(&v3, 0);
    let y = Polynomial::variable(&v3, 1);
    let fx = &(&x * &g2) - &g0;
    let gy = &(&y * &g2) - &g1;
    let dtf = fx.degree_in(2).unwrap_or(0);
    let dtg = gy.degree_in(2).unwrap_or(0);
    let r3 = match (dtf, dtg) {
        (0, 0) => return Err(CycleError::Internal("constant parametrization".into())),
        (0, _) => fx.try_pow(dtg)?,
        (_, 0) => gy.try_pow(dtf)?,
        _ => resultant_univar(&fx, &gy, 2)?,
    };
    let r_xy = r3.dehomogenize(2);
    extract_image(r_xy, d, &ghat)
}

/// Coefficient list of a binary form at `u := 1`, as a polynomial in `t`.
fn dehom_u(f: &Polynomial) -> UPoly {
    let mut c: Vec<BigInt> = vec![];
    for (m, co) in f.terms() {
        let k = m.exps()[0] as usize;
        if c.len() <= k {
            c.resize(k + 1, BigInt::zero());
        }
        c[k] += co;
    }
    UPoly::new(c)
}

/// A dense `t`-polynomial replayed into a larger variable context.
fn upoly_in(vars: &VarSet, g: &UPoly, var: usize) -> Polynomial {
    let n = vars.len();
    Polynomial::from_terms(
        vars,
        g.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Monomial::var(n, var, k as u32), c.clone())),
    )
}

/// `v*g2 - gk`, the specialization of one pencil member.
fn specialize(g2: &UPoly, gk: &UPoly, v: &BigInt) -> UPoly {
    g2.scale(v).sub(gk)
}

/// The first `n` integers (0, 1, -1, 2, -2, ...) whose specialization
/// keeps the generic `t`-degree.
fn grid_nodes(n: usize, g2: &UPoly, gk: &UPoly, generic: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n);
    let mut k: i64 = 0;
    while out.len() < n {
        let cands = if k == 0 { vec![0] } else { vec![k, -k] };
        for c in cands {
            if out.len() == n {
                break;
            }
            let v = BigInt::from(c);
            if specialize(g2, gk, &v).degree() == Some(generic) {
                out.push(v);
            }
        }
        k += 1;
    }
    out
}

/// `Res_t(x*g2 - g0, y*g2 - g1)` as a polynomial in `(x, y)`, rebuilt from
/// integer samples. Nodes where a specialization drops below its generic
/// `t`-degree are skipped; such drops only change the resultant by a
/// global constant factor, which the root extraction absorbs.
fn sample_resultant_grid(ghat: &[UPoly]) -> Result<Polynomial, CycleError> {
    let d2 = ghat[2].degree().expect("nonzero form");
    let da_f = d2.max(ghat[0].degree().expect("nonzero form"));
    let db_g = d2.max(ghat[1].degree().expect("nonzero form"));
    // x appears in db_g Sylvester rows and y in da_f rows
    let nx = db_g + 1;
    let ny = da_f + 1;
    let xs = grid_nodes(nx, &ghat[2], &ghat[0], da_f);
    let ys = grid_nodes(ny, &ghat[2], &ghat[1], db_g);
    let gbs: Vec<UPoly> = ys.iter().map(|b| specialize(&ghat[2], &ghat[1], b)).collect();
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(nx);
    for a in &xs {
        let fa = specialize(&ghat[2], &ghat[0], a);
        let vals: Vec<BigRational> = gbs
            .iter()
            .map(|gb| BigRational::from(resultant_upoly(&fa, gb)))
            .collect();
        rows.push(newton_interp(&ys, &vals));
    }
    let axy = VarSet::new(["x", "y"]);
    let mut terms: Vec<(Monomial, BigInt)> = vec![];
    for k in 0..ny {
        let col: Vec<BigRational> = rows.iter().map(|r| r[k].clone()).collect();
        let xc = newton_interp(&xs, &col);
        for (i, c) in xc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return Err(CycleError::Internal(
                    "resultant interpolation produced a fraction".into(),
                ));
            }
            terms.push((Monomial::new(vec![i as u32, k as u32]), c.to_integer()));
        }
    }
    Ok(Polynomial::from_terms(&axy, terms))
}

/// Coefficients (ascending) of the unique interpolant through the nodes.
fn newton_interp(xs: &[BigInt], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let dx = BigRational::from(&xs[i] - &xs[i - j]);
            let v = (&dd[i] - &dd[i - 1]) / dx;
            dd[i] = v;
        }
    }
    let mut coeffs = vec![dd[n - 1].clone()];
    for j in (0..n - 1).rev() {
        // coeffs := coeffs * (x - xs[j]) + dd[j]
        let xj = BigRational::from(xs[j].clone());
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &xj);
        }
        next[0] = &next[0] + &dd[j];
        coeffs = next;
    }
    coeffs
}

/// Strip content, peel off the maximal perfect-power root, homogenize,
/// and certify by re-expansion plus exact composed vanishing. The
/// multiplicity satisfies `m * deg q = d` or the call fails hard.
fn extract_image(
    r_xy: Polynomial,
    d: u64,
    ghat: &[UPoly],
) -> Result<(Hypersurface, u64), CycleError> {
    if r_xy.is_zero() || r_xy.is_constant() {
        return Err(CycleError::Internal("sampled resultant is degenerate".into()));
    }
    let r = r_xy.primitive_part();
    let deg = r.total_degree().expect("nonconstant");
    let mut found: Option<(Polynomial, u64)> = None;
    let mut m = d;
    while m >= 1 {
        if d % m == 0 && deg % m == 0 {
            if let Some(root) = poly_nth_root(&r, m) {
                found = Some((root, m));
                break;
            }
        }
        m -= 1;
    }
    let (q, m) = found.ok_or_else(|| CycleError::Internal("no power decomposition".into()))?;
    let q = q.primitive_part();
    let e = q.total_degree().expect("nonconstant root");
    if m * e != d {
        return Err(CycleError::Internal(format!(
            "degree bookkeeping failed: {m} * {e} != {d}"
        )));
    }
    let qh = q.homogenize("z", e)?.with_vars(&coord_vars(2));
    if !compose_vanishes(&qh, ghat) {
        return Err(CycleError::Internal(
            "image form does not annihilate the parametrization".into(),
        ));
    }
    Ok((Hypersurface::new(qh)?, m))
}

/// `q` with `q^m == ±p`, recovered by graded-lex term peeling; `None`
/// when no such `q` exists over the integers. For even `m` the sign of
/// `p` is normalized to a positive leading coefficient first.
pub fn poly_nth_root(p: &Polynomial, m: u64) -> Option<Polynomial> {
    if m == 0 || p.is_zero() {
        return None;
    }
    if m == 1 {
        return Some(p.clone());
    }
    if m > u32::MAX as u64 {
        return None;
    }
    let p = if p.leading_coeff().is_negative() && m % 2 == 0 { p.neg() } else { p.clone() };
    let lm = p.leading_monomial();
    let exps: Option<Vec<u32>> = lm
        .exps()
        .iter()
        .map(|&x| if x as u64 % m == 0 { Some((x as u64 / m) as u32) } else { None })
        .collect();
    let root_mono = Monomial::new(exps?);
    let c0 = signed_nth_root(p.leading_coeff(), m)?;
    let vars = p.vars().clone();
    let mut q = Polynomial::from_term(&vars, root_mono.clone(), c0.clone());
    // denominators for the correction terms; the root's leading term is fixed
    let lead_pow = mono_pow(&root_mono, m - 1)?;
    let denom = BigInt::from(m) * num_traits::pow(c0, (m - 1) as usize);
    let mut prev: Option<Monomial> = None;
    loop {
        let qm = q.try_pow(m as u32).ok()?;
        let diff = &p - &qm;
        if diff.is_zero() {
            return Some(q);
        }
        let delta_mono = diff.leading_monomial().checked_div(&lead_pow)?;
        // corrections must decrease strictly, otherwise p is not a power
        if delta_mono >= root_mono {
            return None;
        }
        if let Some(pm) = &prev {
            if &delta_mono >= pm {
                return None;
            }
        }
        let (dc, rem) = diff.leading_coeff().div_rem(&denom);
        if !rem.is_zero() {
            return None;
        }
        q = q.try_add(&Polynomial::from_term(&vars, delta_mono.clone(), dc)).ok()?;
        prev = Some(delta_mono);
    }
}

fn mono_pow(m: &Monomial, k: u64) -> Option<Monomial> {
    let mut out = Monomial::one(m.exps().len());
    for _ in 0..k {
        out = out.checked_mul(m)?;
    }
    Some(out)
}

fn signed_nth_root(c: &BigInt, m: u64) -> Option<BigInt> {
    if c.is_zero() {
        return Some(BigInt::zero());
    }
    if c.is_negative() && m % 2 == 0 {
        return None;
    }
    let a = c.abs();
    let r = a.nth_root(m as u32);
    if num_traits::pow(r.clone(), m as usize) != a {
        return None;
    }
    Some(if c.is_negative() { -r } else { r })
}

/// Exact check that `qh(g0, g1, g2) == 0`. Verified after `u := 1`, which
/// keeps every coefficient of the homogeneous composition because the
/// composed form is homogeneous of known degree.
fn compose_vanishes(qh: &Polynomial, ghat: &[UPoly]) -> bool {
    let e = match qh.total_degree() {
        Some(e) if e <= u32::MAX as u64 => e as u32,
        _ => return false,
    };
    let mut buckets: BTreeMap<u32, BTreeMap<u32, BigInt>> = BTreeMap::new();
    let mut maxz = 0u32;
    for (mo, c) in qh.terms() {
        let ex = mo.exps();
        buckets.entry(ex[0]).or_default().insert(ex[1], c.clone());
        maxz = maxz.max(ex[2]);
    }
    let mut ztab: Vec<UPoly> = Vec::with_capacity(maxz as usize + 1);
    ztab.push(UPoly::one());
    for k in 1..=maxz as usize {
        let nxt = ztab[k - 1].mul(&ghat[2]);
        ztab.push(nxt);
    }
    // outer Horner in g0 over the x-exponent, inner Horner in g1
    let mut acc = UPoly::zero();
    for i in (0..=e).rev() {
        acc = acc.mul(&ghat[0]);
        if let Some(row) = buckets.get(&i) {
            let jmax = *row.keys().next_back().expect("nonempty bucket");
            let mut inner = UPoly::zero();
            for j in (0..=jmax).rev() {
                inner = inner.mul(&ghat[1]);
                if let Some(c) = row.get(&j) {
                    inner = inner.add(&ztab[(e - i - j) as usize].scale(c));
                }
            }
            acc = acc.add(&inner);
        }
    }
    acc.is_zero()
}

// ---- Pushforward and orbits ----

/// Pushforward of a hypersurface under a birational map, computed as the
/// total transform by the given inverse with the exceptional components
/// stripped off: in characteristic zero the Jacobian of the inverse cuts
/// out exactly the divisors the inverse contracts, so dividing by the gcd
/// until coprime leaves the strict transform, with multiplicity 1.
pub fn pushforward_by_inverse(
    inverse: &RationalMap,
    v: &Hypersurface,
) -> Result<Cycle, CycleError> {
    if v.form().vars() != inverse.vars() {
        return Err(CycleError::ContextMismatch);
    }
    let total = v.form().substitute(inverse.components())?;
    if total.is_zero() {
        return Err(CycleError::TotalCollapse);
    }
    let mut g = total.primitive_part();
    let jac = inverse.jacobian_det();
    if jac.is_zero() {
        return Err(CycleError::NotDominant);
    }
    let jac = jac.primitive_part();
    loop {
        let c = poly_gcd(&g, &jac).expect("nonzero inputs");
        if c.is_constant() {
            break;
        }
        g = divide_exact(&g, &c).expect("gcd divides");
        if g.is_constant() {
            return Err(CycleError::TotalCollapse);
        }
    }
    Ok(Cycle::one(Hypersurface::new(g)?, 1))
}

/// What drives a cycle orbit: a parametrized curve pushed through the map
/// and implicitized each step, or a hypersurface pulled back through a
/// verified inverse.
#[derive(Debug, Clone)]
pub enum OrbitSource {
    Param(ParamCurve),
    Implicit { start: Hypersurface, inverse: RationalMap },
}

/// Orbit rows plus the cycles behind them; on failure the rows computed
/// so far are retained alongside the error.
#[derive(Debug)]
pub struct OrbitTable {
    pub rows: Vec<CycleOrbitRow>,
    pub cycles: Vec<Cycle>,
    pub error: Option<CycleError>,
}

/// Cycle-orbit height table for `n = 0..=horizon`. The `map` argument
/// drives the parametrized strategy; the inverse-pullback strategy runs
/// off the inverse supplied in the source.
pub fn curve_orbit_heights(
    map: &RationalMap,
    source: &OrbitSource,
    horizon: u32,
) -> OrbitTable {
    let mut rows = vec![];
    let mut cycles = vec![];
    let error = match source {
        OrbitSource::Param(start) => {
            let mut gamma = start.clone();
            let mut step = || -> Result<(), CycleError> {
                for n in 0..=horizon {
                    if n > 0 {
                        gamma = gamma.push_forward(map)?;
                    }
                    let (h, m) = implicitize_param_curve(&gamma)?;
                    let cyc = Cycle::one(h, m);
                    rows.push(CycleOrbitRow::from_cycle(n, &cyc));
                    cycles.push(cyc);
                }
                Ok(())
            };
            step().err()
        }
        OrbitSource::Implicit { start, inverse } => {
            let mut current = Cycle::one(start.clone(), 1);
            let mut step = || -> Result<(), CycleError> {
                for n in 0..=horizon {
                    if n > 0 {
                        let (h, _) = &current.parts()[0];
                        current = pushforward_by_inverse(inverse, h)?;
                    }
                    rows.push(CycleOrbitRow::from_cycle(n, &current));
                    cycles.push(current.clone());
                }
                Ok(())
            };
            step().err()
        }
    };
    OrbitTable { rows, cycles, error }
}
