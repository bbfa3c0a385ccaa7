//! The five subcommands: shared run context, per-task outputs, manifest
//! bookkeeping, and the iterate term-count guard.

use crate::output::{self, Sink};
use crate::spec::{Check, CycleSpec, ExperimentSpec, Strategy};
use crate::CliError;
use dynadeg_core::analysis::{
    self, AnalysisError, ConjectureReport, GrowthMethod, Quantity, Verdict,
};
use dynadeg_core::cycles::{
    implicitize_param_curve, pushforward_by_inverse, Cycle, CycleOrbitRow, OrbitSource,
};
use dynadeg_core::numeric::bigrational_to_f64;
use dynadeg_core::projective::{point_orbit_heights, ProjPoint};
use dynadeg_core::ratmap::{MapError, RationalMap};
use dynadeg_core::roots::RadiusEstimate;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const DEFAULT_OUT: &str = "dynadeg-out";
const DEFAULT_HORIZON: u32 = 10;
/// Abort an iteration task once an iterate carries more terms than this;
/// rows computed so far are kept and the manifest records the stop.
const TERM_BUDGET: usize = 1_000_000;
/// Width requested from certified root isolation.
const ROOT_WIDTH: f64 = 1e-9;

pub struct Ctx {
    pub spec: ExperimentSpec,
    pub spec_digest: String,
    pub out: PathBuf,
    pub horizon: u32,
    pub seed: u64,
    /// Whether the seed was given explicitly (flag or spec) rather than
    /// defaulted; randomized tasks insist on an explicit one.
    pub seed_explicit: bool,
    pub tol: f64,
    pub strategy: Strategy,
}

impl Ctx {
    pub fn new(
        spec: ExperimentSpec,
        spec_text: &str,
        out: Option<PathBuf>,
        seed: Option<u64>,
        tol: Option<f64>,
        horizon: Option<u32>,
    ) -> Result<Ctx, CliError> {
        let horizon = horizon.or(spec.horizon).unwrap_or(DEFAULT_HORIZON);
        if horizon < 1 {
            return Err(CliError::Validation("horizon must be at least 1".into()));
        }
        let tol = tol.or(spec.tol).unwrap_or(analysis::DEFAULT_TOL);
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(CliError::Validation("tol must be positive and finite".into()));
        }
        let explicit_seed = seed.or(spec.seed);
        let out = out
            .or_else(|| spec.out.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let strategy = spec.strategy.unwrap_or(Strategy::Param);
        Ok(Ctx {
            spec_digest: output::sha256_hex(spec_text.as_bytes()),
            spec,
            out,
            horizon,
            seed: explicit_seed.unwrap_or(0),
            seed_explicit: explicit_seed.is_some(),
            tol,
            strategy,
        })
    }

    fn record(&self, task: crate::output::TaskEntry) -> Result<(), CliError> {
        output::update_manifest(&self.out, &self.spec_digest, self.seed, task)
    }
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

// ---- degrees ----

#[derive(Serialize)]
struct GrowthOut {
    method: &'static str,
    value: f64,
    window: (u32, u32),
    residual: f64,
    certified: bool,
    provenance: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<[String; 2]>,
}

#[derive(Serialize)]
struct GrowthReport {
    sequence: &'static str,
    horizon: u32,
    rows: usize,
    estimates: Vec<GrowthOut>,
}

#[derive(Serialize)]
struct RecurrenceOut {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    char_poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'static str>,
}

fn provenance_of_radius(r: &RadiusEstimate) -> &'static str {
    match (&r.interval, r.certified) {
        (Some((lo, hi)), true) if lo == hi => "exact",
        (_, true) => "certified",
        _ => "float-estimate",
    }
}

fn float_estimate(seq: &[f64], method: GrowthMethod, name: &'static str) -> Option<GrowthOut> {
    let est = analysis::estimate_growth(seq, method).ok()?;
    Some(GrowthOut {
        method: name,
        value: est.value,
        window: est.window,
        residual: est.residual,
        certified: false,
        provenance: "float-estimate",
        interval: None,
    })
}

pub fn cmd_degrees(ctx: &Ctx) -> Result<ExitCode, CliError> {
    let f = &ctx.spec.map;
    let mut rows: Vec<(u32, u64)> = vec![(0, 1)];
    let mut note = String::new();
    let mut status = "ok";
    let mut acc = RationalMap::identity(f.vars());
    for n in 1..=ctx.horizon {
        acc = f
            .compose(&acc)
            .map_err(|e| CliError::Computation(format!("iterate {n}: {e}")))?;
        rows.push((n, acc.degree()));
        let terms: usize = acc.components().iter().map(|c| c.terms().count()).sum();
        if terms > TERM_BUDGET {
            note = format!("stopped after n = {n}: iterate carries {terms} terms (budget {TERM_BUDGET})");
            status = "partial";
            break;
        }
    }

    let mut sink = Sink::new(ctx.out.clone());
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|(n, d)| vec![n.to_string(), d.to_string()])
        .collect();
    sink.write("degrees.csv", &output::csv_from_rows(&["n", "degree"], &csv_rows))?;

    let seq_f: Vec<f64> = rows.iter().map(|(_, d)| *d as f64).collect();
    let mut estimates = vec![];
    for (m, name) in [
        (GrowthMethod::Root, "root"),
        (GrowthMethod::Ratio, "ratio"),
        (GrowthMethod::Regression, "regression"),
    ] {
        if let Some(g) = float_estimate(&seq_f, m, name) {
            estimates.push(g);
        }
    }

    let seq_i: Vec<BigInt> = rows.iter().map(|(_, d)| BigInt::from(*d)).collect();
    let max_order = (seq_i.len().saturating_sub(2) / 2).min(3);
    let model = if max_order >= 1 {
        analysis::detect_recurrence(&seq_i, max_order).expect("order and length are in range")
    } else {
        None
    };
    if let Some(model) = &model {
        let root = analysis::dominant_root(model, ROOT_WIDTH)
            .map_err(|e| CliError::Computation(e.to_string()))?;
        let residual = root
            .interval
            .as_ref()
            .map(|(lo, hi)| bigrational_to_f64(&(hi - lo)))
            .unwrap_or(ROOT_WIDTH);
        estimates.push(GrowthOut {
            method: "recurrence-exact",
            value: root.value,
            window: model.span,
            residual,
            certified: root.certified,
            provenance: provenance_of_radius(&root),
            interval: root
                .interval
                .as_ref()
                .map(|(lo, hi)| [lo.to_string(), hi.to_string()]),
        });
    }
    let growth = GrowthReport {
        sequence: "degree",
        horizon: ctx.horizon,
        rows: rows.len(),
        estimates,
    };
    sink.write("growth.json", &output::json_bytes(&growth))?;

    let rec = match &model {
        Some(m) => RecurrenceOut {
            found: true,
            order: Some(m.order),
            coeffs: Some(m.coeffs.iter().map(|c| c.to_string()).collect()),
            char_poly: Some(output::upoly_string(&m.char_poly, "x")),
            span: Some(m.span),
            provenance: Some("exact"),
        },
        None => RecurrenceOut {
            found: false,
            order: None,
            coeffs: None,
            char_poly: None,
            span: None,
            provenance: None,
        },
    };
    sink.write("recurrence.json", &output::json_bytes(&rec))?;

    let degrees: Vec<String> = rows.iter().map(|(_, d)| d.to_string()).collect();
    println!("degrees (n = 0..={}): {}", rows.last().expect("nonempty").0, degrees.join(", "));
    for g in &growth.estimates {
        println!("growth [{}] {} ({})", g.method, fmt6(g.value), g.provenance);
    }
    match &model {
        Some(m) => println!(
            "recurrence: order {}, characteristic polynomial {}",
            m.order,
            output::upoly_string(&m.char_poly, "x")
        ),
        None => println!("recurrence: none detected up to order {max_order}"),
    }
    if !note.is_empty() {
        println!("note: {note}");
    }

    ctx.record(sink.finish("degrees", status, &note))?;
    println!("wrote degrees.csv growth.json recurrence.json in {}", ctx.out.display());
    Ok(ExitCode::SUCCESS)
}

// ---- orbit ----

fn truncation_note(done: usize, reason: &dyn std::fmt::Display) -> String {
    format!("orbit truncated at n = {done}: {reason}")
}

fn budget_note(n: u32, terms: usize) -> String {
    format!("stopped after n = {n}: cycle carries {terms} terms (budget {TERM_BUDGET})")
}

/// The library's cycle-orbit loop with the term-count guard added; rows
/// computed before a failure or a budget stop are kept.
fn orbit_rows_budgeted(
    map: &RationalMap,
    source: &OrbitSource,
    horizon: u32,
) -> (Vec<CycleOrbitRow>, Option<String>) {
    let mut rows: Vec<CycleOrbitRow> = vec![];
    match source {
        OrbitSource::Param(start) => {
            let mut gamma = start.clone();
            for n in 0..=horizon {
                if n > 0 {
                    gamma = match gamma.push_forward(map) {
                        Ok(g) => g,
                        Err(e) => {
                            let note = truncation_note(rows.len(), &e);
                            return (rows, Some(note));
                        }
                    };
                }
                let (h, m) = match implicitize_param_curve(&gamma) {
                    Ok(v) => v,
                    Err(e) => {
                        let note = truncation_note(rows.len(), &e);
                        return (rows, Some(note));
                    }
                };
                rows.push(CycleOrbitRow::from_cycle(n, &Cycle::one(h, m)));
                let terms: usize = gamma.forms().iter().map(|f| f.terms().count()).sum();
                if terms > TERM_BUDGET {
                    return (rows, Some(budget_note(n, terms)));
                }
            }
        }
        OrbitSource::Implicit { start, inverse } => {
            let mut current = Cycle::one(start.clone(), 1);
            for n in 0..=horizon {
                if n > 0 {
                    let h = current.parts()[0].0.clone();
                    current = match pushforward_by_inverse(inverse, &h) {
                        Ok(c) => c,
                        Err(e) => {
                            let note = truncation_note(rows.len(), &e);
                            return (rows, Some(note));
                        }
                    };
                }
                rows.push(CycleOrbitRow::from_cycle(n, &current));
                let terms: usize = current
                    .parts()
                    .iter()
                    .map(|(h, _)| h.form().terms().count())
                    .sum();
                if terms > TERM_BUDGET {
                    return (rows, Some(budget_note(n, terms)));
                }
            }
        }
    }
    (rows, None)
}

pub fn cmd_orbit(ctx: &Ctx) -> Result<ExitCode, CliError> {
    let spec = &ctx.spec;
    if spec.points.is_empty() && spec.cycles.is_empty() {
        return Err(CliError::Validation(
            "orbit needs at least one point or cycle in the spec".into(),
        ));
    }
    let mut sink = Sink::new(ctx.out.clone());
    let mut notes: Vec<String> = vec![];

    for (name, p) in &spec.points {
        let table = point_orbit_heights(spec.map.components(), p, ctx.horizon);
        let rows: Vec<Vec<String>> = table
            .rows
            .iter()
            .map(|r| vec![r.n.to_string(), r.height.to_string()])
            .collect();
        sink.write(&format!("orbit_{name}.csv"), &output::csv_from_rows(&["n", "height"], &rows))?;
        let mut line = format!("point {name}: {} rows", table.rows.len());
        if let Some(e) = &table.error {
            let n = truncation_note(table.rows.len(), e);
            line.push_str(&format!(" ({n})"));
            notes.push(format!("point {name}: {n}"));
        }
        println!("{line}");
    }

    for (name, c) in &spec.cycles {
        let source = match c {
            CycleSpec::Curve(curve) => match ctx.strategy {
                Strategy::Param => OrbitSource::Param(curve.clone()),
                Strategy::InversePullback => {
                    let inv = spec.inverse.as_ref().ok_or_else(|| {
                        CliError::Validation(format!(
                            "cycle {name}: the inverse-pullback strategy needs inverse = ... in [map]"
                        ))
                    })?;
                    let (h, _) = implicitize_param_curve(curve).map_err(|e| {
                        CliError::Computation(format!("cycle {name}: implicitization failed: {e}"))
                    })?;
                    OrbitSource::Implicit { start: h, inverse: inv.clone() }
                }
            },
            CycleSpec::Hypersurface(h) => {
                let inv = spec.inverse.as_ref().ok_or_else(|| {
                    CliError::Validation(format!(
                        "cycle {name}: hypersurface orbits need inverse = ... in [map]"
                    ))
                })?;
                OrbitSource::Implicit { start: h.clone(), inverse: inv.clone() }
            }
        };
        let (rows, note) = orbit_rows_budgeted(&spec.map, &source, ctx.horizon);
        let csv: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.degree.to_string(),
                    r.log_max_coeff.to_string(),
                    r.height.to_string(),
                    r.mult.to_string(),
                ]
            })
            .collect();
        sink.write(
            &format!("orbit_{name}.csv"),
            &output::csv_from_rows(&["n", "degree", "logmaxcoeff", "height", "multiplicity"], &csv),
        )?;
        let mut line = format!("cycle {name}: {} rows", rows.len());
        if let Some(r) = rows.last() {
            line.push_str(&format!(
                ", final degree {} height {} multiplicity {}",
                r.degree,
                fmt6(r.height),
                r.mult
            ));
        }
        if let Some(n) = note {
            line.push_str(&format!(" ({n})"));
            notes.push(format!("cycle {name}: {n}"));
        }
        println!("{line}");
    }

    let status = if notes.is_empty() { "ok" } else { "partial" };
    let note = notes.join("; ");
    ctx.record(sink.finish("orbit", status, &note))?;
    println!("wrote orbit tables in {}", ctx.out.display());
    Ok(ExitCode::SUCCESS)
}

// ---- monomial ----

#[derive(Serialize)]
struct LambdaOut {
    k: usize,
    char_poly: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<[String; 2]>,
    certified: bool,
    provenance: &'static str,
}

#[derive(Serialize)]
struct MonomialOut {
    dim: usize,
    matrix: Vec<Vec<String>>,
    det: String,
    projective_degree: u64,
    lambda: Vec<LambdaOut>,
}

pub fn cmd_monomial(ctx: &Ctx) -> Result<ExitCode, CliError> {
    let m = ctx.spec.monomial.as_ref().ok_or_else(|| {
        CliError::Validation(
            "the monomial command needs monomial data (A = ..., c = ...) in [map]".into(),
        )
    })?;
    let width = BigRational::from_float(ROOT_WIDTH).expect("width is finite");
    let radii = m.lambda_table(&width);
    let lambda: Vec<LambdaOut> = radii
        .iter()
        .enumerate()
        .map(|(k, r)| LambdaOut {
            k,
            char_poly: output::upoly_string(&m.matrix().exterior_power(k).char_poly(), "x"),
            value: r.value,
            interval: r
                .interval
                .as_ref()
                .map(|(lo, hi)| [lo.to_string(), hi.to_string()]),
            certified: r.certified,
            provenance: provenance_of_radius(r),
        })
        .collect();
    let d = m.dim();
    let matrix: Vec<Vec<String>> = (0..d)
        .map(|i| (0..d).map(|j| m.matrix().get(i, j).to_string()).collect())
        .collect();
    let out = MonomialOut {
        dim: d,
        matrix,
        det: m.matrix().det().to_string(),
        projective_degree: m.projective_degree(),
        lambda,
    };
    let mut sink = Sink::new(ctx.out.clone());
    sink.write("monomial.json", &output::json_bytes(&out))?;
    for l in &out.lambda {
        println!("lambda_{} = {} ({}; {} = 0)", l.k, fmt6(l.value), l.provenance, l.char_poly);
    }
    ctx.record(sink.finish("monomial", "ok", ""))?;
    println!("wrote monomial.json in {}", ctx.out.display());
    Ok(ExitCode::SUCCESS)
}

// ---- conjectures ----

#[derive(Serialize)]
struct CheckGroup {
    check: &'static str,
    reports: Vec<ConjectureReport>,
}

#[derive(Serialize)]
struct Counts {
    consistent: usize,
    violated: usize,
    inconclusive: usize,
}

#[derive(Serialize)]
struct ConjecturesOut {
    tolerance: f64,
    horizon: u32,
    lambda: Vec<Quantity>,
    alpha: Vec<Option<Quantity>>,
    checks: Vec<CheckGroup>,
    notes: Vec<String>,
    counts: Counts,
}

fn map_analysis_err(e: AnalysisError) -> CliError {
    match e {
        AnalysisError::Map(MapError::DegreeUndetermined | MapError::ExponentOverflow) => {
            CliError::Computation(e.to_string())
        }
        _ => CliError::Validation(e.to_string()),
    }
}

/// Placeholder report for a check whose prerequisites the spec does not
/// meet; always inconclusive.
fn unmet(claim: String, tol: f64) -> ConjectureReport {
    let placeholder = Quantity::estimate("unavailable", 1.0, 0.0, 0);
    ConjectureReport {
        claim,
        lhs: placeholder.clone(),
        rhs: placeholder,
        verdict: Verdict::Inconclusive,
        gap: 0.0,
        tolerance: tol,
        surrogate: "unavailable".into(),
        window: String::new(),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "consistent",
        Verdict::Violated => "VIOLATED",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn default_checks(spec: &ExperimentSpec) -> Vec<Check> {
    let mut v = vec![Check::ProductFormula, Check::LogConcavity];
    if spec.inverse.is_some() {
        v.push(Check::Duality);
    }
    if !spec.points.is_empty() {
        v.push(Check::KsPoint);
    }
    v
}

fn orbit_sources(spec: &ExperimentSpec, inverse_of_map: Option<&RationalMap>) -> Vec<OrbitSource> {
    spec.cycles
        .iter()
        .filter_map(|(_, c)| match c {
            CycleSpec::Curve(cu) => Some(OrbitSource::Param(cu.clone())),
            CycleSpec::Hypersurface(h) => inverse_of_map.map(|inv| OrbitSource::Implicit {
                start: h.clone(),
                inverse: inv.clone(),
            }),
        })
        .collect()
}

pub fn cmd_conjectures(ctx: &Ctx) -> Result<ExitCode, CliError> {
    let spec = &ctx.spec;
    let f = &spec.map;
    if spec.dim() != 2 {
        return Err(CliError::Validation(
            "conjecture checks are implemented for self-maps of P^2".into(),
        ));
    }
    if spec.monomial.is_none() && !ctx.seed_explicit {
        return Err(CliError::Validation(
            "conjecture checks on a general map sample the topological degree; \
             set seed = ... in [options] or pass --seed"
                .into(),
        ));
    }
    let requested = match &spec.checks {
        Some(list) => list.clone(),
        None => default_checks(spec),
    };
    let polarized_q = requested.iter().find_map(|c| match c {
        Check::Polarized { q } => Some(*q),
        _ => None,
    });

    let lambdas: Vec<Quantity> = match &spec.monomial {
        Some(m) => {
            let width = BigRational::from_float(ROOT_WIDTH).expect("width is finite");
            m.lambda_table(&width)
                .iter()
                .enumerate()
                .map(|(k, r)| Quantity::from_radius(format!("lambda_{k}"), r, ctx.tol))
                .collect()
        }
        None => analysis::lambda_table_p2(f, ctx.horizon, ctx.seed, ROOT_WIDTH)
            .map_err(map_analysis_err)?,
    };

    let points: Vec<ProjPoint> = spec.points.iter().map(|(_, p)| p.clone()).collect();
    let curves = orbit_sources(spec, spec.inverse.as_ref());
    let verified_inverse = spec.inverse.is_some();
    let alphas = analysis::alpha_table(f, &points, &curves, ctx.horizon, verified_inverse, polarized_q);

    let mut groups: Vec<CheckGroup> = vec![];
    let mut notes: Vec<String> = vec![];
    for check in &requested {
        match check {
            Check::ProductFormula => {
                groups.push(CheckGroup {
                    check: "product_formula",
                    reports: analysis::check_product_formula(&lambdas, &alphas, ctx.tol),
                });
            }
            Check::LogConcavity => {
                let mut reports = vec![];
                for k in 1..alphas.len().saturating_sub(1) {
                    match (&alphas[k - 1], &alphas[k], &alphas[k + 1]) {
                        (Some(a), Some(b), Some(c)) => {
                            reports.extend(analysis::check_log_concavity(
                                &[a.clone(), b.clone(), c.clone()],
                                ctx.tol,
                            ));
                        }
                        _ => {
                            notes.push(format!(
                                "log_concavity at k = {k} skipped: no alpha surrogate for the whole triple"
                            ));
                            reports.push(unmet(
                                format!("alpha_{k}^2 >= alpha_{} * alpha_{} (surrogates unavailable)", k - 1, k + 1),
                                ctx.tol,
                            ));
                        }
                    }
                }
                groups.push(CheckGroup { check: "log_concavity", reports });
            }
            Check::Duality => match &spec.inverse {
                None => {
                    notes.push("duality skipped: the spec supplies no inverse".into());
                    groups.push(CheckGroup {
                        check: "duality",
                        reports: vec![unmet(
                            "alpha_k(f) == alpha_{d+1-k}(f^-1) (no inverse in the spec)".into(),
                            ctx.tol,
                        )],
                    });
                }
                Some(inv) => {
                    let inv_curves = orbit_sources(spec, Some(f));
                    let alphas_inv =
                        analysis::alpha_table(inv, &points, &inv_curves, ctx.horizon, true, None);
                    let reports =
                        analysis::check_birational_duality(f, inv, &alphas, &alphas_inv, ctx.tol)
                            .map_err(map_analysis_err)?;
                    groups.push(CheckGroup { check: "duality", reports });
                }
            },
            Check::KsPoint => {
                if spec.points.is_empty() {
                    notes.push("ks_point skipped: the spec lists no points".into());
                    groups.push(CheckGroup {
                        check: "ks_point",
                        reports: vec![unmet(
                            "alpha(P) == lambda_1 (no points in the spec)".into(),
                            ctx.tol,
                        )],
                    });
                } else {
                    let mut reports = vec![];
                    for (name, p) in &spec.points {
                        let mut rs =
                            analysis::check_ks_point(f, p, ctx.horizon, &lambdas[1], ctx.tol)
                                .map_err(map_analysis_err)?;
                        for r in &mut rs {
                            r.claim = format!("[{name}] {}", r.claim);
                        }
                        reports.extend(rs);
                    }
                    groups.push(CheckGroup { check: "ks_point", reports });
                }
            }
            Check::Polarized { q } => {
                groups.push(CheckGroup {
                    check: "polarized",
                    reports: analysis::check_polarized(*q, &lambdas, &alphas, ctx.tol),
                });
            }
        }
    }

    let mut counts = Counts { consistent: 0, violated: 0, inconclusive: 0 };
    for g in &groups {
        for r in &g.reports {
            match r.verdict {
                Verdict::Consistent => counts.consistent += 1,
                Verdict::Violated => counts.violated += 1,
                Verdict::Inconclusive => counts.inconclusive += 1,
            }
        }
    }

    for g in &groups {
        println!("== {} ==", g.check);
        for r in &g.reports {
            println!(
                "[{}] {}: lhs {} rhs {} (gap {:.2e}, tol {:.2e})",
                verdict_str(r.verdict),
                r.claim,
                fmt6(r.lhs.value),
                fmt6(r.rhs.value),
                r.gap,
                r.tolerance
            );
        }
    }
    for n in &notes {
        println!("note: {n}");
    }
    let summary = format!(
        "{} consistent, {} violated, {} inconclusive",
        counts.consistent, counts.violated, counts.inconclusive
    );
    println!("{summary}");

    let violated = counts.violated > 0;
    let out = ConjecturesOut {
        tolerance: ctx.tol,
        horizon: ctx.horizon,
        lambda: lambdas,
        alpha: alphas,
        checks: groups,
        notes: notes.clone(),
        counts,
    };
    let mut sink = Sink::new(ctx.out.clone());
    sink.write("conjectures.json", &output::json_bytes(&out))?;
    let note = if notes.is_empty() { summary } else { format!("{summary}; {}", notes.join("; ")) };
    ctx.record(sink.finish("conjectures", "ok", &note))?;
    println!("wrote conjectures.json in {}", ctx.out.display());
    Ok(if violated { ExitCode::from(4) } else { ExitCode::SUCCESS })
}

// ---- plotdata ----

/// Value column whose logs become plot data, per table kind.
fn plot_column(file: &str) -> Option<&'static str> {
    if file == "degrees.csv" {
        Some("degree")
    } else if file.starts_with("orbit_") && file.ends_with(".csv") {
        Some("height")
    } else {
        None
    }
}

pub fn cmd_plotdata(out: &Path) -> Result<ExitCode, CliError> {
    let manifest = output::read_manifest(out)?;
    let mut sink = Sink::new(out.to_path_buf());
    let mut series: Vec<(String, String)> = vec![];
    for task in &manifest.tasks {
        for o in &task.outputs {
            let Some(col) = plot_column(&o.file) else { continue };
            let path = out.join(&o.file);
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::Validation(format!("run table {} is missing: {e}", o.file))
            })?;
            let mut rdr = csv::Reader::from_reader(text.as_bytes());
            let headers = rdr
                .headers()
                .map_err(|e| CliError::Validation(format!("corrupt table {}: {e}", o.file)))?
                .clone();
            let ni = headers.iter().position(|h| h == "n").ok_or_else(|| {
                CliError::Validation(format!("table {} has no n column", o.file))
            })?;
            let ci = headers.iter().position(|h| h == col).ok_or_else(|| {
                CliError::Validation(format!("table {} has no {col} column", o.file))
            })?;
            let mut body = format!("# n ln({col})\n");
            for rec in rdr.records() {
                let rec = rec
                    .map_err(|e| CliError::Validation(format!("corrupt table {}: {e}", o.file)))?;
                let v: f64 = rec[ci]
                    .parse()
                    .map_err(|e| CliError::Validation(format!("corrupt table {}: {e}", o.file)))?;
                body.push_str(&format!("{} {}\n", &rec[ni], v.max(1.0).ln()));
            }
            let stem = o.file.trim_end_matches(".csv");
            let plot = format!("plot_{stem}.dat");
            sink.write(&plot, body.as_bytes())?;
            series.push((o.file.clone(), plot));
        }
    }
    if series.is_empty() {
        return Err(CliError::Validation(
            "the run has no plottable tables; run degrees or orbit first".into(),
        ));
    }
    for (src, dst) in &series {
        println!("plot data: {src} -> {dst}");
    }
    let note = format!("{} series", series.len());
    output::update_manifest(
        out,
        &manifest.spec_digest,
        manifest.seed,
        sink.finish("plotdata", "ok", &note),
    )?;
    Ok(ExitCode::SUCCESS)
}
