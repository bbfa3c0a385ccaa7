//! Plain-text experiment specs.
//!
//! A spec is line-oriented: `#` starts a comment, blank lines are ignored,
//! and content lives in up to five sections.
//!
//! ```text
//! [map]
//! f = 2*Y*Z, X*Y, Z^2          # d+1 forms of a self-map of P^d
//! inverse = 4*Y*Z, X^2, 2*X*Z  # optional claimed inverse, verified at load
//! # ...or a monomial map x_i -> c_i * prod x_j^(A_ij):
//! # A = [[0, 1], [1, 1]]
//! # c = 2, 1
//! # ...or the same keys read from another file:
//! # file = map.txt
//!
//! [points]
//! p = [1 : 1 : 1]
//!
//! [cycles]
//! line = curve: t, u - t, u
//! vert = hypersurface: Y
//!
//! [checks]
//! product_formula
//! log_concavity
//! duality
//! ks_point
//! polarized q = 2
//!
//! [options]
//! horizon = 10
//! seed = 0
//! tol = 0.05
//! ```
//!
//! Polynomials use the library grammar: integers, named variables, `+`,
//! `-`, `*`, `^`, parentheses, no implicit multiplication. Coordinates on
//! `P^2` are `X, Y, Z`; curve parametrizations use `t, u`.
//!
//! Command-line flags override `[options]`, which override built-in
//! defaults. Maps must be dominant and a supplied inverse must verify;
//! anything else is rejected here, before any task runs.

use dynadeg_core::cycles::{Hypersurface, ParamCurve};
use dynadeg_core::matrix::IntMatrix;
use dynadeg_core::monomial::MonomialMap;
use dynadeg_core::poly::{coord_vars, param_vars, Polynomial, VarSet};
use dynadeg_core::projective::ProjPoint;
use dynadeg_core::ratmap::RationalMap;
use num_rational::BigRational;
use num_traits::One;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("spec line {line}: {msg}")]
    AtLine { line: usize, msg: String },
    #[error("{0}")]
    General(String),
}

fn at(line: usize, msg: String) -> SpecError {
    SpecError::AtLine { line, msg }
}

#[derive(Debug, Clone)]
pub enum CycleSpec {
    Hypersurface(Hypersurface),
    Curve(ParamCurve),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    ProductFormula,
    LogConcavity,
    Duality,
    KsPoint,
    Polarized { q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Param,
    InversePullback,
}

/// A fully resolved experiment: the map is expanded and dominant, the
/// inverse (when present) is verified, and every point and cycle lives in
/// the map's dimension.
#[derive(Debug)]
pub struct ExperimentSpec {
    pub map: RationalMap,
    pub monomial: Option<MonomialMap>,
    pub inverse: Option<RationalMap>,
    pub points: Vec<(String, ProjPoint)>,
    pub cycles: Vec<(String, CycleSpec)>,
    /// `None` when the section is absent (commands pick sensible sets);
    /// `Some(vec![])` when present but empty.
    pub checks: Option<Vec<Check>>,
    pub horizon: Option<u32>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub strategy: Option<Strategy>,
}

struct Line {
    no: usize,
    text: String,
}

fn strip_comment(raw: &str) -> &str {
    match raw.find('#') {
        Some(i) => raw[..i].trim(),
        None => raw.trim(),
    }
}

fn keyval(l: &Line) -> Result<(String, String), SpecError> {
    let (k, v) = l
        .text
        .split_once('=')
        .ok_or_else(|| at(l.no, "expected key = value".into()))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn check_name(name: &str, line: usize) -> Result<(), SpecError> {
    let ok = !name.is_empty()
        && name.len() <= 64
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(at(line, format!("name {name:?} must be 1-64 characters of [A-Za-z0-9_-]")))
    }
}

fn parse_forms(
    list: &str,
    vars: &VarSet,
    line: usize,
) -> Result<Vec<Polynomial>, SpecError> {
    list.split(',')
        .map(|s| {
            Polynomial::parse(s, vars)
                .map_err(|e| at(line, format!("bad form {:?}: {e}", s.trim())))
        })
        .collect()
}

impl ExperimentSpec {
    pub fn parse(text: &str, base: Option<&Path>) -> Result<ExperimentSpec, SpecError> {
        let known = ["map", "points", "cycles", "checks", "options"];
        let mut buckets: Vec<(String, Vec<Line>)> = vec![];
        let mut current: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let s = strip_comment(raw);
            if s.is_empty() {
                continue;
            }
            if let Some(name) = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                let name = name.trim();
                if !known.contains(&name) {
                    return Err(at(no, format!("unknown section [{name}]")));
                }
                if buckets.iter().any(|(n, _)| n == name) {
                    return Err(at(no, format!("duplicate section [{name}]")));
                }
                buckets.push((name.to_string(), vec![]));
                current = Some(buckets.len() - 1);
                continue;
            }
            match current {
                Some(ix) => buckets[ix].1.push(Line { no, text: s.to_string() }),
                None => return Err(at(no, "content before any [section] header".into())),
            }
        }
        let section = |name: &str| buckets.iter().find(|(n, _)| n == name).map(|(_, l)| l.as_slice());

        let map_lines = section("map")
            .ok_or_else(|| SpecError::General("a [map] section is required".into()))?;
        let (map, monomial, inverse) = parse_map_section(map_lines, base)?;
        let dim = map.dim();

        let points = match section("points") {
            Some(lines) => parse_points(lines, dim)?,
            None => vec![],
        };
        let cycles = match section("cycles") {
            Some(lines) => parse_cycles(lines, dim)?,
            None => vec![],
        };
        for (i, (name, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|(n, _)| n == name) || cycles.iter().any(|(n, _)| n == name) {
                return Err(SpecError::General(format!(
                    "the name {name:?} is used more than once across [points] and [cycles]"
                )));
            }
        }
        for (i, (name, _)) in cycles.iter().enumerate() {
            if cycles[..i].iter().any(|(n, _)| n == name) {
                return Err(SpecError::General(format!(
                    "the name {name:?} is used more than once across [points] and [cycles]"
                )));
            }
        }

        let checks = match section("checks") {
            Some(lines) => Some(parse_checks(lines)?),
            None => None,
        };
        let (horizon, seed, tol, out, strategy) = match section("options") {
            Some(lines) => parse_options(lines)?,
            None => (None, None, None, None, None),
        };
        Ok(ExperimentSpec {
            map,
            monomial,
            inverse,
            points,
            cycles,
            checks,
            horizon,
            seed,
            tol,
            out,
            strategy,
        })
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }
}

fn parse_map_section(
    lines: &[Line],
    base: Option<&Path>,
) -> Result<(RationalMap, Option<MonomialMap>, Option<RationalMap>), SpecError> {
    let mut entries: Vec<(usize, String, String)> = vec![];
    for l in lines {
        let (k, v) = keyval(l)?;
        if k == "file" {
            let path = match base {
                Some(b) => b.join(&v),
                None => PathBuf::from(&v),
            };
            let text = fs::read_to_string(&path).map_err(|e| {
                at(l.no, format!("cannot read map file {}: {e}", path.display()))
            })?;
            for (j, raw) in text.lines().enumerate() {
                let s = strip_comment(raw);
                if s.is_empty() {
                    continue;
                }
                let (ik, iv) = s.split_once('=').ok_or_else(|| {
                    at(l.no, format!("{} line {}: expected key = value", path.display(), j + 1))
                })?;
                let ik = ik.trim();
                if ik == "file" {
                    return Err(at(l.no, "a map file cannot include further files".into()));
                }
                entries.push((l.no, ik.to_string(), iv.trim().to_string()));
            }
        } else {
            entries.push((l.no, k, v));
        }
    }

    let known = ["dim", "f", "inverse", "A", "c"];
    for (i, (no, k, _)) in entries.iter().enumerate() {
        if !known.contains(&k.as_str()) {
            return Err(at(*no, format!("unknown [map] key {k:?}")));
        }
        if entries[..i].iter().any(|(_, pk, _)| pk == k) {
            return Err(at(*no, format!("duplicate [map] key {k:?}")));
        }
    }
    let get = |key: &str| {
        entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(no, _, v)| (*no, v.as_str()))
    };

    let declared_dim: Option<usize> = match get("dim") {
        Some((no, v)) => {
            let d: usize = v
                .parse()
                .map_err(|e| at(no, format!("bad dim {v:?}: {e}")))?;
            if d == 0 {
                return Err(at(no, "dim must be at least 1".into()));
            }
            Some(d)
        }
        None => None,
    };

    let (map, monomial) = match (get("f"), get("A")) {
        (Some(_), Some((no, _))) => {
            return Err(at(no, "give forms (f = ...) or monomial data (A = ...), not both".into()))
        }
        (Some((no, list)), None) => {
            if let Some((cno, _)) = get("c") {
                return Err(at(cno, "c = ... belongs to monomial maps; forms carry their own coefficients".into()));
            }
            let parts: Vec<&str> = list.split(',').collect();
            if parts.len() < 2 {
                return Err(at(no, "a self-map of P^d needs d + 1 comma-separated forms".into()));
            }
            let dim = parts.len() - 1;
            if let Some(dd) = declared_dim {
                if dd != dim {
                    return Err(at(no, format!("dim = {dd} but f lists {} components", parts.len())));
                }
            }
            let vars = coord_vars(dim);
            let forms = parse_forms(list, &vars, no)?;
            let map = RationalMap::new(forms).map_err(|e| at(no, e.to_string()))?;
            if !map.is_dominant() {
                return Err(at(no, "the map is not dominant: its Jacobian determinant vanishes identically".into()));
            }
            (map, None)
        }
        (None, Some((no, mat))) => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(mat).map_err(|e| {
                at(no, format!("A must be a square integer matrix like [[0, 1], [1, 1]]: {e}"))
            })?;
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(at(no, "A must be square and nonempty".into()));
            }
            if let Some(dd) = declared_dim {
                if dd != n {
                    return Err(at(no, format!("dim = {dd} but A is {n} x {n}")));
                }
            }
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = IntMatrix::from_i64(&refs);
            let coeffs: Vec<BigRational> = match get("c") {
                Some((cno, cv)) => {
                    let parts: Vec<&str> = cv.split(',').collect();
                    if parts.len() != n {
                        return Err(at(cno, format!("c needs {n} comma-separated rationals")));
                    }
                    parts
                        .iter()
                        .map(|s| {
                            BigRational::from_str(s.trim())
                                .map_err(|e| at(cno, format!("bad rational {:?}: {e}", s.trim())))
                        })
                        .collect::<Result<_, _>>()?
                }
                None => vec![BigRational::one(); n],
            };
            let m = MonomialMap::new(a, coeffs).map_err(|e| at(no, e.to_string()))?;
            if !m.is_dominant() {
                return Err(at(no, "the exponent matrix is singular: the map is not dominant".into()));
            }
            let map = m
                .to_rational_map()
                .map_err(|e| at(no, format!("cannot expand the monomial map: {e}")))?;
            (map, Some(m))
        }
        (None, None) => {
            return Err(SpecError::General("the [map] section needs f = ... or A = ...".into()))
        }
    };

    let inverse = match get("inverse") {
        Some((no, list)) => {
            let parts: Vec<&str> = list.split(',').collect();
            if parts.len() != map.dim() + 1 {
                return Err(at(no, format!("inverse needs {} components", map.dim() + 1)));
            }
            let forms = parse_forms(list, map.vars(), no)?;
            let inv = RationalMap::new(forms).map_err(|e| at(no, e.to_string()))?;
            match map.verify_inverse(&inv) {
                Ok(true) => Some(inv),
                Ok(false) => {
                    return Err(at(no, "the claimed inverse fails verification against the map".into()))
                }
                Err(e) => return Err(at(no, e.to_string())),
            }
        }
        None => None,
    };
    Ok((map, monomial, inverse))
}

fn parse_points(lines: &[Line], dim: usize) -> Result<Vec<(String, ProjPoint)>, SpecError> {
    let mut out = vec![];
    for l in lines {
        let (name, val) = keyval(l)?;
        check_name(&name, l.no)?;
        let p = ProjPoint::from_str(&val).map_err(|e| at(l.no, e.to_string()))?;
        if p.dim() != dim {
            return Err(at(
                l.no,
                format!("point {name} has {} coordinates; the map needs {}", p.dim() + 1, dim + 1),
            ));
        }
        out.push((name, p));
    }
    Ok(out)
}

fn parse_cycles(lines: &[Line], dim: usize) -> Result<Vec<(String, CycleSpec)>, SpecError> {
    let mut out = vec![];
    for l in lines {
        let (name, val) = keyval(l)?;
        check_name(&name, l.no)?;
        let (kind, rest) = val.split_once(':').ok_or_else(|| {
            at(l.no, "expected hypersurface: FORM or curve: FORM, FORM, ...".into())
        })?;
        let cycle = match kind.trim() {
            "hypersurface" => {
                let form = Polynomial::parse(rest, &coord_vars(dim))
                    .map_err(|e| at(l.no, format!("bad form {:?}: {e}", rest.trim())))?;
                let h = Hypersurface::new(form).map_err(|e| at(l.no, e.to_string()))?;
                CycleSpec::Hypersurface(h)
            }
            "curve" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != dim + 1 {
                    return Err(at(l.no, format!("a curve in P^{dim} needs {} forms in t, u", dim + 1)));
                }
                let forms = parse_forms(rest, &param_vars(), l.no)?;
                let c = ParamCurve::new(forms).map_err(|e| at(l.no, e.to_string()))?;
                CycleSpec::Curve(c)
            }
            other => return Err(at(l.no, format!("unknown cycle kind {other:?}"))),
        };
        out.push((name, cycle));
    }
    Ok(out)
}

fn parse_checks(lines: &[Line]) -> Result<Vec<Check>, SpecError> {
    let mut out: Vec<Check> = vec![];
    for l in lines {
        let c = match l.text.as_str() {
            "product_formula" => Check::ProductFormula,
            "log_concavity" => Check::LogConcavity,
            "duality" => Check::Duality,
            "ks_point" => Check::KsPoint,
            t => {
                let rest = t.strip_prefix("polarized").ok_or_else(|| {
                    at(l.no, format!("unknown check {t:?}"))
                })?;
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| at(l.no, "polarized needs q = N".into()))?;
                if k.trim() != "q" {
                    return Err(at(l.no, "polarized needs q = N".into()));
                }
                let q: u64 = v
                    .trim()
                    .parse()
                    .map_err(|e| at(l.no, format!("bad polarization degree: {e}")))?;
                if q < 2 {
                    return Err(at(l.no, "a polarization degree must be at least 2".into()));
                }
                Check::Polarized { q }
            }
        };
        if out.iter().any(|x| std::mem::discriminant(x) == std::mem::discriminant(&c)) {
            return Err(at(l.no, format!("duplicate check {:?}", l.text)));
        }
        out.push(c);
    }
    Ok(out)
}

type Options = (Option<u32>, Option<u64>, Option<f64>, Option<PathBuf>, Option<Strategy>);

fn parse_options(lines: &[Line]) -> Result<Options, SpecError> {
    let mut horizon: Option<u32> = None;
    let mut seed: Option<u64> = None;
    let mut tol: Option<f64> = None;
    let mut out: Option<PathBuf> = None;
    let mut strategy: Option<Strategy> = None;
    for l in lines {
        let (k, v) = keyval(l)?;
        let dup = |set: bool| -> Result<(), SpecError> {
            if set {
                Err(at(l.no, format!("duplicate option {k:?}")))
            } else {
                Ok(())
            }
        };
        match k.as_str() {
            "horizon" => {
                dup(horizon.is_some())?;
                let h: u32 = v.parse().map_err(|e| at(l.no, format!("bad horizon: {e}")))?;
                if h < 1 {
                    return Err(at(l.no, "horizon must be at least 1".into()));
                }
                horizon = Some(h);
            }
            "seed" => {
                dup(seed.is_some())?;
                seed = Some(v.parse().map_err(|e| at(l.no, format!("bad seed: {e}")))?);
            }
            "tol" => {
                dup(tol.is_some())?;
                let t: f64 = v.parse().map_err(|e| at(l.no, format!("bad tol: {e}")))?;
                if !(t > 0.0) || !t.is_finite() {
                    return Err(at(l.no, "tol must be positive and finite".into()));
                }
                tol = Some(t);
            }
            "out" => {
                dup(out.is_some())?;
                out = Some(PathBuf::from(v));
            }
            "strategy" => {
                dup(strategy.is_some())?;
                strategy = Some(match v.as_str() {
                    "param" => Strategy::Param,
                    "inverse-pullback" => Strategy::InversePullback,
                    other => {
                        return Err(at(l.no, format!("unknown strategy {other:?} (param | inverse-pullback)")))
                    }
                });
            }
            other => return Err(at(l.no, format!("unknown option {other:?}"))),
        }
    }
    Ok((horizon, seed, tol, out, strategy))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = "\
# a birational map of P^2 and everything the harness can use
[map]
f = 2*Y*Z, X*Y, Z^2
inverse = 4*Y*Z, X^2, 2*X*Z

[points]
p = [1 : 1 : 1]

[cycles]
line = curve: t, u - t, u
vert = hypersurface: X + Y - Z

[checks]
product_formula
log_concavity
duality
ks_point

[options]
horizon = 12
seed = 7
tol = 0.04
strategy = param
";

    #[test]
    fn full_spec_round_trip() {
        let s = ExperimentSpec::parse(FULL, None).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.map.degree(), 2);
        assert!(s.inverse.is_some());
        assert!(s.monomial.is_none());
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].0, "p");
        assert_eq!(s.cycles.len(), 2);
        assert!(matches!(s.cycles[0].1, CycleSpec::Curve(_)));
        assert!(matches!(s.cycles[1].1, CycleSpec::Hypersurface(_)));
        assert_eq!(s.checks.as_ref().unwrap().len(), 4);
        assert_eq!(s.horizon, Some(12));
        assert_eq!(s.seed, Some(7));
        assert_eq!(s.tol, Some(0.04));
        assert_eq!(s.strategy, Some(Strategy::Param));
    }

    #[test]
    fn monomial_spec() {
        let text = "[map]\nA = [[0, 1], [1, 1]]\nc = 2, 1\n\n[checks]\npolarized q = 2\n";
        let s = ExperimentSpec::parse(text, None).unwrap();
        let m = s.monomial.unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(s.map.degree(), 2);
        assert_eq!(s.checks.unwrap(), vec![Check::Polarized { q: 2 }]);

        let singular = "[map]\nA = [[1, 1], [1, 1]]\n";
        let e = ExperimentSpec::parse(singular, None).unwrap_err();
        assert!(e.to_string().contains("singular"), "{e}");
    }

    #[test]
    fn rejections() {
        let cases: &[(&str, &str)] = &[
            ("", "required"),
            ("[map]\nf = X^2, Y^2, Z^2\nA = [[2]]\n", "not both"),
            ("[map]\nf = X, Y\ndim = 2\n", "dim = 2"),
            ("[map]\nf = X^2, Y^2, X*Y\n", "not dominant"),
            ("[map]\nf = X^2, Y^2, Z^2\ninverse = X^2, Y^2, Z^2\n", "fails verification"),
            ("[map]\nf = X, Y, Z\n[map]\nf = X, Y, Z\n", "duplicate section"),
            ("[garbage]\n", "unknown section"),
            ("x = 1\n", "before any"),
            ("[map]\nf = X, Y, Z\n[points]\np = [1 : 0]\n", "coordinates"),
            ("[map]\nf = X, Y, Z\n[points]\nbad name = [1 : 0 : 0]\n", "name"),
            ("[map]\nf = X, Y, Z\n[cycles]\nc = circle: X\n", "unknown cycle kind"),
            ("[map]\nf = X, Y, Z\n[checks]\nfoo\n", "unknown check"),
            ("[map]\nf = X, Y, Z\n[checks]\npolarized q = 1\n", "at least 2"),
            ("[map]\nf = X, Y, Z\n[options]\nhorizon = 0\n", "at least 1"),
            ("[map]\nf = X, Y, Z\n[options]\ntol = -1\n", "positive"),
            ("[map]\nf = X, Y, Z\n[points]\np = [1:1:1]\np = [1:2:3]\n", "more than once"),
        ];
        for (text, needle) in cases {
            let e = ExperimentSpec::parse(text, None).unwrap_err();
            assert!(
                e.to_string().contains(needle),
                "for {text:?} expected {needle:?} in {e}"
            );
        }
    }

    #[test]
    fn map_file_include() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("map.txt"), "f = X^2, Y^2, Z^2\n# comment\n").unwrap();
        let s = ExperimentSpec::parse("[map]\nfile = map.txt\n", Some(dir.path())).unwrap();
        assert_eq!(s.map.degree(), 2);
        let e = ExperimentSpec::parse("[map]\nfile = missing.txt\n", Some(dir.path())).unwrap_err();
        assert!(e.to_string().contains("cannot read"), "{e}");
    }
}
