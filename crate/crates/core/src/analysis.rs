//! Growth-rate estimation for degree and height sequences, exact linear
//! recurrence detection, and the conjecture checks built on top of them.
//!
//! The split between "certified" and "estimated" numbers is load-bearing:
//! a verdict of `violated` is only ever issued when both sides of a claim
//! are exact or carry certified enclosures. Float estimates can support
//! `consistent` or `inconclusive`, never a violation.

use crate::cycles::{curve_orbit_heights, OrbitSource};
use crate::numeric::bigrational_to_f64;
use crate::projective::{point_orbit_heights, ProjPoint};
use crate::ratmap::{MapError, RationalMap};
use crate::roots::{max_root_modulus, RadiusEstimate};
use crate::univar::UPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Default relative tolerance for comparisons that involve estimates.
pub const DEFAULT_TOL: f64 = 0.05;

/// Estimates backed by fewer sequence terms than this cannot support any
/// verdict beyond `inconclusive`.
pub const MIN_BACKING: usize = 6;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("sequence too short: need {need} terms, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("growth estimation needs nonnegative finite entries")]
    BadEntry,
    #[error("the recurrence-exact method is produced by detect_recurrence, not direct estimation")]
    BadMethod,
    #[error("recurrence search needs max_order >= 1")]
    BadOrder,
    #[error("tolerance must be positive and finite")]
    BadTolerance,
    #[error("the supplied map is not a verified inverse")]
    NotInverse,
    #[error("mismatched dimensions or table lengths")]
    Mismatch,
    #[error(transparent)]
    Map(#[from] MapError),
}

// ---- Growth estimation ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMethod {
    Root,
    Ratio,
    Regression,
    RecurrenceExact,
}

/// A growth-rate reading from a positive sequence. `residual` measures
/// window stability: the spread of the estimate over the last three
/// truncations of the sequence (or the enclosure width for exact
/// readings). Only recurrence-backed readings can be certified.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthEstimate {
    pub value: f64,
    pub method: GrowthMethod,
    pub window: (u32, u32),
    pub residual: f64,
    pub certified: bool,
}

fn growth_value(w: &[f64], method: GrowthMethod) -> (f64, (u32, u32)) {
    let n = w.len() - 1;
    match method {
        GrowthMethod::Root => ((w[n] / w[0]).powf(1.0 / n as f64), (0, n as u32)),
        GrowthMethod::Ratio => {
            let s = n / 2;
            (
                (w[n] / w[s]).powf(1.0 / (n - s) as f64),
                (s as u32, n as u32),
            )
        }
        GrowthMethod::Regression => {
            let s = (n / 2).min(n - 2);
            let cnt = (n - s + 1) as f64;
            let xbar = (s + n) as f64 / 2.0;
            let ybar = w[s..=n].iter().map(|v| v.ln()).sum::<f64>() / cnt;
            let mut num = 0.0;
            let mut den = 0.0;
            for (i, v) in w.iter().enumerate().take(n + 1).skip(s) {
                let dx = i as f64 - xbar;
                num += dx * (v.ln() - ybar);
                den += dx * dx;
            }
            ((num / den).exp(), (s as u32, n as u32))
        }
        GrowthMethod::RecurrenceExact => unreachable!("guarded by estimate_growth"),
    }
}

/// Estimate the exponential growth rate of a nonnegative sequence. The
/// entries are lifted to `max(a_n, 1)` first, so flat or logarithmically
/// small sequences read as rate 1 instead of producing noise.
pub fn estimate_growth(seq: &[f64], method: GrowthMethod) -> Result<GrowthEstimate, AnalysisError> {
    if method == GrowthMethod::RecurrenceExact {
        return Err(AnalysisError::BadMethod);
    }
    if seq.len() < 3 {
        return Err(AnalysisError::TooShort { need: 3, got: seq.len() });
    }
    if seq.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(AnalysisError::BadEntry);
    }
    let w: Vec<f64> = seq.iter().map(|v| v.max(1.0)).collect();
    let (value, window) = growth_value(&w, method);
    let mut vals: Vec<f64> = vec![];
    for end in w.len().saturating_sub(3)..w.len() {
        if end >= 2 {
            vals.push(growth_value(&w[..=end], method).0);
        }
    }
    let residual = vals.iter().cloned().fold(f64::MIN, f64::max)
        - vals.iter().cloned().fold(f64::MAX, f64::min);
    Ok(GrowthEstimate { value, method, window, residual, certified: false })
}

// ---- Exact recurrence detection ----

/// A linear recurrence `a[n+m] = sum_i coeffs[i] * a[n+i]` verified
/// against every available term of the sequence it was fit on.
#[derive(Debug, Clone)]
pub struct RecurrenceModel {
    pub order: usize,
    pub coeffs: Vec<BigRational>,
    /// Integer multiple of `x^m - c_{m-1} x^{m-1} - ... - c_0`, with
    /// positive leading coefficient.
    pub char_poly: UPoly,
    pub span: (u32, u32),
}

impl RecurrenceModel {
    fn from_coeffs(order: usize, coeffs: Vec<BigRational>, span: (u32, u32)) -> Self {
        let mut l = BigInt::one();
        for c in &coeffs {
            l = num_integer::lcm(l, c.denom().clone());
        }
        let mut cs = Vec::with_capacity(order + 1);
        for c in &coeffs {
            let v = c * BigRational::from(l.clone());
            debug_assert!(v.is_integer());
            cs.push(-v.to_integer());
        }
        cs.push(l);
        RecurrenceModel { order, coeffs, char_poly: UPoly::new(cs), span }
    }

    /// Check the recurrence on every window of the sequence.
    pub fn validates(&self, seq: &[BigInt]) -> bool {
        if seq.len() < self.order + 1 {
            return false;
        }
        let a: Vec<BigRational> =
            seq.iter().map(|x| BigRational::from(x.clone())).collect();
        for n in 0..seq.len() - self.order {
            let mut acc = BigRational::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                acc += c * &a[n + i];
            }
            if acc != a[n + self.order] {
                return false;
            }
        }
        true
    }
}

/// Reduced-row-echelon solve of an augmented system; returns a particular
/// solution (free variables set to zero) or `None` when inconsistent.
fn solve_consistent(mut mat: Vec<Vec<BigRational>>, ncols: usize) -> Option<Vec<BigRational>> {
    let mut pivots: Vec<(usize, usize)> = vec![];
    let mut r = 0;
    for c in 0..ncols {
        if r == mat.len() {
            break;
        }
        let Some(pr) = (r..mat.len()).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = mat[r][c].clone();
        for j in c..=ncols {
            mat[r][j] = &mat[r][j] / &inv;
        }
        for i in 0..mat.len() {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in c..=ncols {
                    let v = &mat[i][j] - &(&f * &mat[r][j]);
                    mat[i][j] = v;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    for row in &mat {
        if row[..ncols].iter().all(|x| x.is_zero()) && !row[ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![BigRational::zero(); ncols];
    for (r, c) in pivots {
        sol[c] = mat[r][ncols].clone();
    }
    Some(sol)
}

/// Find the minimal-order linear recurrence (order at most `max_order`)
/// satisfied by every term of `seq`, if any. Needs enough terms that the
/// fit is meaningfully overdetermined.
pub fn detect_recurrence(
    seq: &[BigInt],
    max_order: usize,
) -> Result<Option<RecurrenceModel>, AnalysisError> {
    if max_order == 0 {
        return Err(AnalysisError::BadOrder);
    }
    if seq.len() < 2 * max_order + 2 {
        return Err(AnalysisError::TooShort { need: 2 * max_order + 2, got: seq.len() });
    }
    let a: Vec<BigRational> =
        seq.iter().map(|x| BigRational::from(x.clone())).collect();
    for m in 1..=max_order {
        let rows: Vec<Vec<BigRational>> = (0..seq.len() - m)
            .map(|n| {
                let mut row = a[n..n + m].to_vec();
                row.push(a[n + m].clone());
                row
            })
            .collect();
        if let Some(c) = solve_consistent(rows, m) {
            let model = RecurrenceModel::from_coeffs(m, c, (0, (seq.len() - 1) as u32));
            debug_assert!(model.validates(seq));
            return Ok(Some(model));
        }
    }
    Ok(None)
}

/// Dominant root modulus of the recurrence's characteristic polynomial,
/// enclosed to the requested width when it is attained by a real root.
pub fn dominant_root(
    model: &RecurrenceModel,
    width: f64,
) -> Result<RadiusEstimate, AnalysisError> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(AnalysisError::BadTolerance);
    }
    let w = BigRational::from_float(width).ok_or(AnalysisError::BadTolerance)?;
    Ok(max_root_modulus(&model.char_poly, &w))
}

/// Package a detected recurrence as a growth reading.
pub fn growth_from_recurrence(
    model: &RecurrenceModel,
    width: f64,
) -> Result<GrowthEstimate, AnalysisError> {
    let r = dominant_root(model, width)?;
    let residual = match &r.interval {
        Some((lo, hi)) => bigrational_to_f64(&(hi - lo)),
        None => width,
    };
    Ok(GrowthEstimate {
        value: r.value,
        method: GrowthMethod::RecurrenceExact,
        window: model.span,
        residual,
        certified: r.certified,
    })
}

// ---- Labeled quantities and conjecture reports ----

/// How a number was obtained: exact integer/rational arithmetic, a
/// certified real-root enclosure, or a floating-point estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    Certified,
    FloatEstimate,
}

/// A labeled number with provenance, an error bound (half-width of the
/// enclosure; 0 for exact values), and bookkeeping about how many
/// sequence terms back an estimate.
#[derive(Debug, Clone, Serialize)]
pub struct Quantity {
    pub label: String,
    pub value: f64,
    pub provenance: Provenance,
    pub err: f64,
    #[serde(skip)]
    pub samples: usize,
    #[serde(skip)]
    pub window: Option<(u32, u32)>,
}

impl Quantity {
    pub fn exact(label: impl Into<String>, value: f64) -> Self {
        Quantity {
            label: label.into(),
            value,
            provenance: Provenance::Exact,
            err: 0.0,
            samples: usize::MAX,
            window: None,
        }
    }

    pub fn certified(label: impl Into<String>, value: f64, err: f64) -> Self {
        Quantity {
            label: label.into(),
            value,
            provenance: Provenance::Certified,
            err,
            samples: usize::MAX,
            window: None,
        }
    }

    pub fn estimate(label: impl Into<String>, value: f64, err: f64, samples: usize) -> Self {
        Quantity {
            label: label.into(),
            value,
            provenance: Provenance::FloatEstimate,
            err,
            samples,
            window: None,
        }
    }

    pub fn from_growth(label: impl Into<String>, g: &GrowthEstimate, samples: usize) -> Self {
        Quantity {
            label: label.into(),
            value: g.value,
            provenance: if g.certified { Provenance::Certified } else { Provenance::FloatEstimate },
            err: g.residual.abs(),
            samples: if g.certified { usize::MAX } else { samples },
            window: Some(g.window),
        }
    }

    /// Wrap a root-modulus enclosure; `fallback_err` covers the
    /// uncertified case, where no interval is available.
    pub fn from_radius(label: impl Into<String>, r: &RadiusEstimate, fallback_err: f64) -> Self {
        match &r.interval {
            Some((lo, hi)) if r.certified => {
                let half = bigrational_to_f64(&(hi - lo)) / 2.0;
                if half == 0.0 {
                    Quantity::exact(label, r.value)
                } else {
                    Quantity::certified(label, r.value, half)
                }
            }
            _ => Quantity::estimate(label, r.value, fallback_err, usize::MAX),
        }
    }

    fn is_firm(&self) -> bool {
        self.provenance != Provenance::FloatEstimate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violated,
    Inconclusive,
}

/// One checked claim. `gap` is the relative discrepancy in the direction
/// that would falsify the claim (0 when the claim holds on the nose) and
/// `tolerance` is the effective threshold the verdict used: certified
/// enclosure widths when both sides are firm, the caller's tolerance
/// otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub claim: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub verdict: Verdict,
    pub gap: f64,
    pub tolerance: f64,
    pub surrogate: String,
    pub window: String,
}

#[derive(Debug, Clone, Copy)]
enum Relation {
    Eq,
    Ge,
    Le,
}

fn judge(relation: Relation, lhs: &Quantity, rhs: &Quantity, tol: f64) -> (Verdict, f64, f64) {
    let scale = rhs.value.abs().max(1.0);
    let raw = match relation {
        Relation::Eq => (lhs.value - rhs.value).abs(),
        Relation::Ge => (rhs.value - lhs.value).max(0.0),
        Relation::Le => (lhs.value - rhs.value).max(0.0),
    };
    let gap = raw / scale;
    let firm = lhs.is_firm() && rhs.is_firm();
    let eff_tol = if firm { ((lhs.err + rhs.err) / scale).max(1e-12) } else { tol };
    let backed = lhs.samples >= MIN_BACKING && rhs.samples >= MIN_BACKING;
    let verdict = if !backed {
        Verdict::Inconclusive
    } else if gap <= eff_tol {
        Verdict::Consistent
    } else if firm {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    (verdict, gap, eff_tol)
}

fn report(
    claim: String,
    relation: Relation,
    lhs: &Quantity,
    rhs: &Quantity,
    tol: f64,
) -> ConjectureReport {
    let (verdict, gap, tolerance) = judge(relation, lhs, rhs, tol);
    let window = lhs
        .window
        .or(rhs.window)
        .map(|(a, b)| format!("n={a}..={b}"))
        .unwrap_or_default();
    ConjectureReport {
        claim,
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        verdict,
        gap,
        tolerance,
        surrogate: lhs.label.clone(),
        window,
    }
}

fn product_quantity(label: String, a: &Quantity, b: &Quantity) -> Quantity {
    let provenance = match (a.provenance, b.provenance) {
        (Provenance::Exact, Provenance::Exact) => Provenance::Exact,
        (Provenance::FloatEstimate, _) | (_, Provenance::FloatEstimate) => {
            Provenance::FloatEstimate
        }
        _ => Provenance::Certified,
    };
    Quantity {
        label,
        value: a.value * b.value,
        provenance,
        err: a.value.abs() * b.err + b.value.abs() * a.err + a.err * b.err,
        samples: a.samples.min(b.samples),
        window: a.window.or(b.window),
    }
}

// ---- Conjecture checks ----

/// Compare each available arithmetic-degree surrogate `alpha_k` against
/// `max(lambda_k, lambda_{k-1})`: the conjectured equality, the proved
/// one-sided bound `alpha_k >= max(...)`, and the proved upper bound
/// `alpha_k <= lambda_1^k`.
pub fn check_product_formula(
    lambdas: &[Quantity],
    alphas: &[Option<Quantity>],
    tol: f64,
) -> Vec<ConjectureReport> {
    let mut out = vec![];
    let d = lambdas.len() - 1;
    for (k, alpha) in alphas.iter().enumerate().take(d + 1).skip(1) {
        let Some(a) = alpha else { continue };
        let pick = if lambdas[k].value >= lambdas[k - 1].value { &lambdas[k] } else { &lambdas[k - 1] };
        let mut rhs = pick.clone();
        rhs.label = format!("max(lambda_{k}, lambda_{})", k - 1);
        out.push(report(
            format!("alpha_{k} == max(lambda_{k}, lambda_{})", k - 1),
            Relation::Eq,
            a,
            &rhs,
            tol,
        ));
        out.push(report(
            format!("alpha_{k} >= max(lambda_{k}, lambda_{})", k - 1),
            Relation::Ge,
            a,
            &rhs,
            tol,
        ));
        let l1 = &lambdas[1];
        let powv = l1.value.powi(k as i32);
        let upper = Quantity {
            label: format!("lambda_1^{k}"),
            value: powv,
            provenance: l1.provenance,
            err: (l1.value + l1.err).powi(k as i32) - powv,
            samples: l1.samples,
            window: l1.window,
        };
        out.push(report(
            format!("alpha_{k} <= lambda_1^{k}"),
            Relation::Le,
            a,
            &upper,
            tol,
        ));
    }
    out
}

/// `v_k^2 >= v_{k-1} * v_{k+1}` for each interior index.
pub fn check_log_concavity(values: &[Quantity], tol: f64) -> Vec<ConjectureReport> {
    let mut out = vec![];
    for k in 1..values.len().saturating_sub(1) {
        let lhs = product_quantity(
            format!("{}^2", values[k].label),
            &values[k],
            &values[k],
        );
        let rhs = product_quantity(
            format!("{} * {}", values[k - 1].label, values[k + 1].label),
            &values[k - 1],
            &values[k + 1],
        );
        out.push(report(
            format!(
                "{}^2 >= {} * {}",
                values[k].label,
                values[k - 1].label,
                values[k + 1].label
            ),
            Relation::Ge,
            &lhs,
            &rhs,
            tol,
        ));
    }
    out
}

/// Duality for a birational map: `alpha_k(f) == alpha_{d+1-k}(f^{-1})`.
/// The inverse must actually invert `f`; the tables are indexed
/// `k = 0..=d+1` with `None` for unavailable entries.
pub fn check_birational_duality(
    f: &RationalMap,
    f_inv: &RationalMap,
    alphas_f: &[Option<Quantity>],
    alphas_inv: &[Option<Quantity>],
    tol: f64,
) -> Result<Vec<ConjectureReport>, AnalysisError> {
    if !f.verify_inverse(f_inv)? {
        return Err(AnalysisError::NotInverse);
    }
    if alphas_f.len() != alphas_inv.len() {
        return Err(AnalysisError::Mismatch);
    }
    let top = alphas_f.len() - 1;
    let mut out = vec![];
    for k in 0..=top {
        let j = top - k;
        if let (Some(a), Some(b)) = (&alphas_f[k], &alphas_inv[j]) {
            out.push(report(
                format!("alpha_{k}(f) == alpha_{j}(f^-1)"),
                Relation::Eq,
                a,
                b,
                tol,
            ));
        }
    }
    Ok(out)
}

/// Point-growth check at `p`: the proved bound `alpha(P) <= lambda_1`,
/// plus the equality claim when the estimate lands within tolerance.
/// A truncated orbit downgrades everything to inconclusive.
pub fn check_ks_point(
    f: &RationalMap,
    p: &ProjPoint,
    horizon: u32,
    lambda1: &Quantity,
    tol: f64,
) -> Result<Vec<ConjectureReport>, AnalysisError> {
    if p.dim() != f.dim() {
        return Err(AnalysisError::Mismatch);
    }
    let table = point_orbit_heights(f.components(), p, horizon);
    let alpha = if table.rows.len() >= 3 {
        let est = estimate_growth(&table.heights(), GrowthMethod::Ratio)
            .expect("heights are nonnegative and long enough");
        Quantity::from_growth(format!("alpha(P) surrogate, P = {p}"), &est, table.rows.len())
    } else {
        let mut q = Quantity::estimate(
            format!("alpha(P) surrogate, P = {p} (orbit too short)"),
            1.0,
            0.0,
            table.rows.len(),
        );
        q.window = Some((0, table.rows.len().saturating_sub(1) as u32));
        q
    };
    let mut out = vec![report(
        "alpha(P) <= lambda_1".to_string(),
        Relation::Le,
        &alpha,
        lambda1,
        tol,
    )];
    let scale = lambda1.value.abs().max(1.0);
    if (alpha.value - lambda1.value).abs() / scale <= tol {
        out.push(report(
            "alpha(P) == lambda_1".to_string(),
            Relation::Eq,
            &alpha,
            lambda1,
            tol,
        ));
    }
    if table.truncated() {
        for r in &mut out {
            r.verdict = Verdict::Inconclusive;
            r.claim.push_str(" [orbit truncated]");
        }
    }
    Ok(out)
}

/// For a map polarized by a degree-`q` structure every dynamical and
/// arithmetic degree is pinned: `lambda_k == q^k` and `alpha_k == q^k`.
pub fn check_polarized(
    q: u64,
    lambdas: &[Quantity],
    alphas: &[Option<Quantity>],
    tol: f64,
) -> Vec<ConjectureReport> {
    let mut out = vec![];
    let powq = |k: usize| Quantity::exact(format!("{q}^{k}"), (q as f64).powi(k as i32));
    for (k, l) in lambdas.iter().enumerate() {
        out.push(report(
            format!("lambda_{k} == {q}^{k}"),
            Relation::Eq,
            l,
            &powq(k),
            tol,
        ));
    }
    for (k, alpha) in alphas.iter().enumerate() {
        if let Some(a) = alpha {
            out.push(report(
                format!("alpha_{k} == {q}^{k}"),
                Relation::Eq,
                a,
                &powq(k),
                tol,
            ));
        }
    }
    out
}

// ---- Degree tables ----

/// `(lambda_0, lambda_1, lambda_2)` for a self-map of P^2: the trivial
/// degree, the degree-sequence growth (certified through a detected
/// recurrence when possible), and the exact topological degree.
pub fn lambda_table_p2(
    map: &RationalMap,
    horizon: u32,
    seed: u64,
    root_width: f64,
) -> Result<Vec<Quantity>, AnalysisError> {
    if map.dim() != 2 {
        return Err(AnalysisError::Mismatch);
    }
    let rows = map.degree_sequence(horizon)?;
    let seq: Vec<BigInt> = rows.iter().map(|(_, d)| BigInt::from(*d)).collect();
    let l0 = Quantity::exact("lambda_0", 1.0);
    let max_order = (seq.len().saturating_sub(2) / 2).min(3);
    let detected = if max_order >= 1 { detect_recurrence(&seq, max_order)? } else { None };
    let l1 = match detected {
        Some(model) => {
            let g = growth_from_recurrence(&model, root_width)?;
            let mut q = Quantity::from_growth(
                format!("lambda_1 (degree recurrence of order {})", model.order),
                &g,
                seq.len(),
            );
            q.window = Some(model.span);
            q
        }
        None => {
            let floats: Vec<f64> = seq.iter().map(|d| d.to_f64().unwrap_or(f64::MAX)).collect();
            let est = estimate_growth(&floats, GrowthMethod::Regression)?;
            Quantity::from_growth("lambda_1 (degree growth estimate)", &est, seq.len())
        }
    };
    let l2 = Quantity::exact(
        "lambda_2 (topological degree)",
        map.topological_degree_dim2(seed)? as f64,
    );
    Ok(vec![l0, l1, l2])
}

/// Arithmetic-degree surrogate table, indexed `k = 0..=d+1`.
///
/// `alpha_0` is exactly 1; `alpha_1` is the best point-orbit height
/// growth over the given points; `alpha_2` (on P^2) the best cycle-orbit
/// height growth over the given curves; `alpha_{d+1}` is pinned exactly
/// for polarized maps (`q^{d+1}`) or through duality for maps with a
/// verified inverse. Entries with no usable surrogate stay `None`.
pub fn alpha_table(
    map: &RationalMap,
    points: &[ProjPoint],
    curves: &[OrbitSource],
    horizon: u32,
    verified_inverse: bool,
    polarized_q: Option<u64>,
) -> Vec<Option<Quantity>> {
    let d = map.dim();
    let mut out: Vec<Option<Quantity>> = vec![None; d + 2];
    out[0] = Some(Quantity::exact("alpha_0", 1.0));
    let mut best_point: Option<Quantity> = None;
    for p in points {
        let t = point_orbit_heights(map.components(), p, horizon);
        if t.rows.len() < 3 {
            continue;
        }
        let est = estimate_growth(&t.heights(), GrowthMethod::Ratio)
            .expect("heights are nonnegative and long enough");
        let q = Quantity::from_growth(format!("point orbit of {p}"), &est, t.rows.len());
        if best_point.as_ref().map_or(true, |b| q.value > b.value) {
            best_point = Some(q);
        }
    }
    out[1] = best_point;
    if d == 2 {
        let mut best_curve: Option<Quantity> = None;
        for src in curves {
            let t = curve_orbit_heights(map, src, horizon);
            if t.rows.len() < 3 {
                continue;
            }
            let heights: Vec<f64> = t.rows.iter().map(|r| r.height).collect();
            let est = estimate_growth(&heights, GrowthMethod::Ratio)
                .expect("heights are nonnegative and long enough");
            let label = match src {
                OrbitSource::Param(c) => {
                    format!("cycle orbit of a parametrized curve of degree {}", c.degree())
                }
                OrbitSource::Implicit { start, .. } => {
                    format!("cycle orbit of {{{} = 0}}", start.form())
                }
            };
            let q = Quantity::from_growth(label, &est, t.rows.len());
            if best_curve.as_ref().map_or(true, |b| q.value > b.value) {
                best_curve = Some(q);
            }
        }
        out[2] = best_curve;
    }
    if let Some(q) = polarized_q {
        out[d + 1] = Some(Quantity::exact(
            format!("alpha_{} (polarized)", d + 1),
            (q as f64).powi(d as i32 + 1),
        ));
    } else if verified_inverse {
        out[d + 1] = Some(Quantity::exact(
            format!("alpha_{} (duality with alpha_0 of the inverse)", d + 1),
            1.0,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::ParamCurve;
    use crate::poly::{coord_vars, param_vars, Polynomial};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    fn map3(forms: &[&str; 3]) -> RationalMap {
        let vars = coord_vars(2);
        RationalMap::new(forms.iter().map(|s| Polynomial::parse(s, &vars).unwrap()).collect())
            .unwrap()
    }

    const PHI: f64 = 1.618033988749895;

    #[test]
    fn fibonacci_recurrence_and_root() {
        let seq = bi(&[2, 3, 5, 8, 13, 21, 34, 55]);
        let model = detect_recurrence(&seq, 3).unwrap().unwrap();
        assert_eq!(model.order, 2);
        assert_eq!(model.coeffs, vec![BigRational::one(), BigRational::one()]);
        assert_eq!(model.char_poly, UPoly::new(bi(&[-1, -1, 1])));
        assert!(model.validates(&seq));
        let root = dominant_root(&model, 1e-10).unwrap();
        assert!(root.certified);
        assert!((root.value - PHI).abs() < 1e-9);
        let (lo, hi) = root.interval.unwrap();
        assert!(bigrational_to_f64(&lo) > 1.61803398 && bigrational_to_f64(&hi) < 1.61803399);
    }

    #[test]
    fn simple_recurrences() {
        let pow2 = bi(&[2, 4, 8, 16, 32, 64]);
        let m = detect_recurrence(&pow2, 2).unwrap().unwrap();
        assert_eq!(m.order, 1);
        assert_eq!(m.coeffs, vec![BigRational::from(BigInt::from(2))]);
        let r = dominant_root(&m, 1e-9).unwrap();
        assert!(r.certified && (r.value - 2.0).abs() < 1e-9);

        // rational coefficients: a_{n+1} = (3/2) a_n
        let geom = bi(&[8, 12, 18, 27]);
        let m = detect_recurrence(&geom, 1).unwrap().unwrap();
        assert_eq!(m.order, 1);
        assert_eq!(m.char_poly, UPoly::new(bi(&[-3, 2])));
        let r = dominant_root(&m, 1e-9).unwrap();
        assert!(r.certified && (r.value - 1.5).abs() < 1e-12);
    }

    #[test]
    fn primes_have_no_recurrence() {
        let primes = bi(&[2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(detect_recurrence(&primes, 3).unwrap().is_none());
    }

    #[test]
    fn complex_dominant_root_is_uncertified() {
        // a_{n+2} = 2 a_{n+1} - 2 a_n has characteristic roots 1 ± i
        let seq = bi(&[1, 1, 0, -2, -4, -4, 0, 8]);
        let model = detect_recurrence(&seq, 3).unwrap().unwrap();
        assert_eq!(model.order, 2);
        assert_eq!(model.char_poly, UPoly::new(bi(&[2, -2, 1])));
        let root = dominant_root(&model, 1e-9).unwrap();
        assert!(!root.certified);
        assert!((root.value - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn recurrence_preconditions() {
        assert!(matches!(
            detect_recurrence(&bi(&[1, 2, 3]), 1),
            Err(AnalysisError::TooShort { need: 4, got: 3 })
        ));
        assert!(matches!(detect_recurrence(&bi(&[1, 2, 3, 4]), 0), Err(AnalysisError::BadOrder)));
    }

    #[test]
    fn constant_sequence_reads_one() {
        let seq = [5.0, 5.0, 5.0, 5.0, 5.0];
        for method in [GrowthMethod::Root, GrowthMethod::Ratio, GrowthMethod::Regression] {
            let e = estimate_growth(&seq, method).unwrap();
            assert!((e.value - 1.0).abs() < 1e-12, "{method:?}");
            assert!(e.residual.abs() < 1e-12);
            assert!(!e.certified);
        }
    }

    #[test]
    fn geometric_sequence_reads_exactly() {
        let seq: Vec<f64> = (0..9).map(|n| 3.0 * 2f64.powi(n)).collect();
        for method in [GrowthMethod::Root, GrowthMethod::Ratio, GrowthMethod::Regression] {
            let e = estimate_growth(&seq, method).unwrap();
            assert!((e.value - 2.0).abs() < 1e-9, "{method:?} gave {}", e.value);
        }
    }

    #[test]
    fn fibonacci_estimates_near_phi() {
        let seq: Vec<f64> =
            [2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0, 89.0, 144.0].to_vec();
        let ratio = estimate_growth(&seq, GrowthMethod::Ratio).unwrap();
        assert!((ratio.value - PHI).abs() < 0.01);
        let reg = estimate_growth(&seq, GrowthMethod::Regression).unwrap();
        assert!((reg.value - PHI).abs() < 0.02);
        let root = estimate_growth(&seq, GrowthMethod::Root).unwrap();
        assert!((root.value - PHI).abs() < 0.02);
        assert!(ratio.residual < 0.05);
    }

    #[test]
    fn estimate_preconditions() {
        assert!(matches!(
            estimate_growth(&[1.0, 2.0], GrowthMethod::Root),
            Err(AnalysisError::TooShort { .. })
        ));
        assert!(matches!(
            estimate_growth(&[1.0, -2.0, 3.0], GrowthMethod::Root),
            Err(AnalysisError::BadEntry)
        ));
        assert!(matches!(
            estimate_growth(&[1.0, 2.0, 4.0], GrowthMethod::RecurrenceExact),
            Err(AnalysisError::BadMethod)
        ));
        let seq = bi(&[2, 4, 8, 16, 32, 64]);
        let m = detect_recurrence(&seq, 1).unwrap().unwrap();
        assert!(matches!(dominant_root(&m, 0.0), Err(AnalysisError::BadTolerance)));
        assert!(matches!(dominant_root(&m, -1.0), Err(AnalysisError::BadTolerance)));
    }

    #[test]
    fn log_concavity_checks() {
        let bad = [
            Quantity::exact("v_0", 1.0),
            Quantity::exact("v_1", 1.0),
            Quantity::exact("v_2", 4.0),
        ];
        let reports = check_log_concavity(&bad, DEFAULT_TOL);
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].verdict, Verdict::Violated);
        assert!(reports[0].gap > 0.7);

        let good = [
            Quantity::exact("lambda_0", 1.0),
            Quantity::certified("lambda_1", PHI, 1e-9),
            Quantity::certified("lambda_2", PHI, 1e-9),
            Quantity::exact("lambda_3", 1.0),
        ];
        for r in check_log_concavity(&good, DEFAULT_TOL) {
            assert_eq!(r.verdict, Verdict::Consistent, "{}", r.claim);
        }
    }

    #[test]
    fn product_formula_polarized_squaring() {
        let lambdas = [
            Quantity::exact("lambda_0", 1.0),
            Quantity::exact("lambda_1", 2.0),
            Quantity::exact("lambda_2", 4.0),
        ];
        let alphas = [
            Some(Quantity::exact("alpha_0", 1.0)),
            Some(Quantity::estimate("alpha_1", 2.0, 1e-9, 11)),
            Some(Quantity::estimate("alpha_2", 4.0, 1e-6, 11)),
            Some(Quantity::exact("alpha_3", 8.0)),
        ];
        let reports = check_product_formula(&lambdas, &alphas, DEFAULT_TOL);
        assert_eq!(reports.len(), 6);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Consistent, "{}", r.claim);
        }
        for r in check_polarized(2, &lambdas, &alphas, DEFAULT_TOL) {
            assert_eq!(r.verdict, Verdict::Consistent, "{}", r.claim);
        }
        // a wrong certified table is actually flagged
        let wrong = [
            Quantity::exact("lambda_0", 1.0),
            Quantity::exact("lambda_1", 3.0),
            Quantity::exact("lambda_2", 4.0),
        ];
        let flagged = check_polarized(2, &wrong, &[], DEFAULT_TOL);
        assert_eq!(flagged[1].verdict, Verdict::Violated);
    }

    #[test]
    fn short_backing_is_inconclusive() {
        let lambdas = [Quantity::exact("lambda_0", 1.0), Quantity::exact("lambda_1", 2.0)];
        let alphas = [None, Some(Quantity::estimate("alpha_1", 1.4, 0.1, 4))];
        let reports = check_product_formula(&lambdas, &alphas, DEFAULT_TOL);
        assert!(!reports.is_empty());
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Inconclusive, "{}", r.claim);
        }
    }

    #[test]
    fn duality_requires_a_real_inverse() {
        let sq = map3(&["X^2", "Y^2", "Z^2"]);
        let err = check_birational_duality(&sq, &sq, &[], &[], DEFAULT_TOL);
        assert!(matches!(err, Err(AnalysisError::NotInverse)));

        let f = map3(&["2*Y*Z", "X*Y", "Z^2"]);
        let g = map3(&["4*Y*Z", "X^2", "2*X*Z"]);
        let a = vec![
            Some(Quantity::exact("alpha_0", 1.0)),
            Some(Quantity::estimate("alpha_1", PHI, 1e-3, 15)),
            Some(Quantity::estimate("alpha_2", PHI, 1e-2, 8)),
            Some(Quantity::exact("alpha_3", 1.0)),
        ];
        let reports = check_birational_duality(&f, &g, &a, &a, DEFAULT_TOL).unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Consistent, "{}", r.claim);
        }
    }

    #[test]
    fn ks_point_growth() {
        let sq = map3(&["X^2", "Y^2", "Z^2"]);
        let l1 = Quantity::exact("lambda_1", 2.0);
        let p = ProjPoint::from_i64(&[2, 3, 1]).unwrap();
        let reports = check_ks_point(&sq, &p, 10, &l1, 1e-6).unwrap();
        assert_eq!(reports.len(), 2);
        assert!((reports[0].lhs.value - 2.0).abs() < 1e-6);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Consistent, "{}", r.claim);
        }

        // a fixed point only supports the one-sided bound
        let fixed = ProjPoint::from_i64(&[1, 1, 1]).unwrap();
        let reports = check_ks_point(&sq, &fixed, 10, &l1, 1e-6).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].verdict, Verdict::Consistent);
        assert!((reports[0].lhs.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_point_truncated_orbit() {
        let cremona = map3(&["Y*Z", "X*Z", "X*Y"]);
        let l1 = Quantity::exact("lambda_1", 2.0);
        let p = ProjPoint::from_i64(&[0, 1, 0]).unwrap();
        let reports = check_ks_point(&cremona, &p, 10, &l1, DEFAULT_TOL).unwrap();
        assert!(!reports.is_empty());
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Inconclusive, "{}", r.claim);
            assert!(r.claim.contains("truncated"));
        }
    }

    #[test]
    fn lambda_table_for_squaring_map() {
        let sq = map3(&["X^2", "Y^2", "Z^2"]);
        let t = lambda_table_p2(&sq, 8, 7, 1e-9).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].value, 1.0);
        assert!((t[1].value - 2.0).abs() < 1e-9);
        assert!(t[1].provenance != Provenance::FloatEstimate);
        assert_eq!(t[2].value, 4.0);
        assert_eq!(t[2].provenance, Provenance::Exact);
    }

    #[test]
    fn alpha_table_for_squaring_map() {
        let sq = map3(&["X^2", "Y^2", "Z^2"]);
        let pts = [ProjPoint::from_i64(&[2, 3, 1]).unwrap()];
        let pv = param_vars();
        let line = ParamCurve::new(
            ["t", "u - t", "u"].iter().map(|s| Polynomial::parse(s, &pv).unwrap()).collect(),
        )
        .unwrap();
        let curves = [OrbitSource::Param(line)];
        let table = alpha_table(&sq, &pts, &curves, 4, false, Some(2));
        assert_eq!(table.len(), 4);
        assert_eq!(table[0].as_ref().unwrap().value, 1.0);
        assert!((table[1].as_ref().unwrap().value - 2.0).abs() < 1e-9);
        let a2 = table[2].as_ref().unwrap();
        assert!(a2.value > 2.5, "curve surrogate reads {}", a2.value);
        assert_eq!(table[3].as_ref().unwrap().value, 8.0);
    }
}
