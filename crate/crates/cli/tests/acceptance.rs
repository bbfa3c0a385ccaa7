//! Acceptance gate: nine numbered criteria, each printing one
//! `criterion N: PASS/FAIL` line (visible under `--nocapture`) and
//! enforcing a wall-clock budget. Expected values are either exact
//! consequences of the construction (Fibonacci degrees, powers of two)
//! or were computed in advance with independent oracles and frozen here.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use dynadeg_core::analysis::{
    alpha_table, check_birational_duality, check_log_concavity, check_polarized,
    check_product_formula, detect_recurrence, dominant_root, estimate_growth, lambda_table_p2,
    GrowthMethod, Quantity, Verdict,
};
use dynadeg_core::cycles::{
    curve_orbit_heights, implicitize_param_curve, implicitize_reference, OrbitSource, ParamCurve,
};
use dynadeg_core::matrix::IntMatrix;
use dynadeg_core::monomial::MonomialMap;
use dynadeg_core::poly::{
    coord_vars, divide_exact, param_vars, poly_gcd, resultant_univar, Monomial, Polynomial, VarSet,
};
use dynadeg_core::projective::{point_orbit_heights, ProjPoint};
use dynadeg_core::ratmap::RationalMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

macro_rules! check {
    ($n:expr, $cond:expr, $($why:tt)+) => {
        if !$cond {
            let why = format!($($why)+);
            println!("criterion {}: FAIL - {}", $n, why);
            panic!("criterion {}: {}", $n, why);
        }
    };
}

fn finish(n: u32, started: Instant, budget: Duration, details: &str) {
    let elapsed = started.elapsed();
    if elapsed > budget {
        println!("criterion {n}: FAIL - over time budget ({elapsed:.2?} > {budget:?})");
        panic!("criterion {n}: exceeded its time budget ({elapsed:.2?} > {budget:?})");
    }
    println!("criterion {n}: PASS - {details} [{elapsed:.2?}]");
}

fn map(comps: &[&str; 3]) -> RationalMap {
    let vars = coord_vars(2);
    RationalMap::new(comps.iter().map(|s| Polynomial::parse(s, &vars).unwrap()).collect())
        .unwrap()
}

fn fib() -> RationalMap {
    map(&["2*Y*Z", "X*Y", "Z^2"])
}

fn fib_inv() -> RationalMap {
    map(&["4*Y*Z", "X^2", "2*X*Z"])
}

fn squaring() -> RationalMap {
    map(&["X^2", "Y^2", "Z^2"])
}

fn curve(forms: &[&str]) -> ParamCurve {
    let vars = param_vars();
    ParamCurve::new(forms.iter().map(|s| Polynomial::parse(s, &vars).unwrap()).collect()).unwrap()
}

fn consistent(n: u32, reports: &[dynadeg_core::analysis::ConjectureReport], what: &str) {
    for rep in reports {
        check!(
            n,
            matches!(rep.verdict, Verdict::Consistent),
            "{what}: '{}' is {:?} (lhs {}, rhs {}, gap {:.4e}, tol {:.1e})",
            rep.claim,
            rep.verdict,
            rep.lhs.value,
            rep.rhs.value,
            rep.gap,
            rep.tolerance
        );
    }
}

const PHI: f64 = 1.618033988749895;

#[test]
fn criterion_1_fibonacci_degrees() {
    let t0 = Instant::now();
    let f = fib();
    let rows = f.degree_sequence(10).unwrap();
    let got: Vec<u64> = rows.iter().skip(1).map(|&(_, d)| d).collect();
    let want = [2u64, 3, 5, 8, 13, 21, 34, 55, 89, 144];
    check!(1, got == want, "degrees n=1..10 are {got:?}, wanted {want:?}");

    let seq: Vec<BigInt> = rows.iter().map(|&(_, d)| BigInt::from(d)).collect();
    let model = detect_recurrence(&seq, 3).unwrap();
    check!(1, model.is_some(), "no linear recurrence detected in the degree sequence");
    let model = model.unwrap();
    check!(1, model.order == 2, "recurrence order is {}, wanted 2", model.order);
    check!(
        1,
        model.coeffs == vec![BigRational::one(), BigRational::one()],
        "recurrence coefficients are {:?}, wanted (1, 1)",
        model.coeffs
    );

    let root = dominant_root(&model, 1e-9).unwrap();
    check!(1, root.certified, "dominant root is not certified");
    let (lo, hi) = root.interval.clone().expect("certified roots carry an interval");
    let denom = BigInt::from(100_000_000u64);
    let lo_bound = BigRational::new(BigInt::from(161_803_398u64), denom.clone());
    let hi_bound = BigRational::new(BigInt::from(161_803_399u64), denom);
    check!(
        1,
        lo >= lo_bound && hi <= hi_bound,
        "root enclosure is not inside [1.61803398, 1.61803399] (value {})",
        root.value
    );
    finish(
        1,
        t0,
        Duration::from_secs(5),
        &format!("degrees 2..144 exact, recurrence (1,1), certified root {:.10}", root.value),
    );
}

#[test]
fn criterion_2_monomial_lambda_tables() {
    let t0 = Instant::now();
    let width = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    let max_width = BigRational::new(BigInt::one(), BigInt::from(100_000_000u64));

    let cases: [(&[&[i64]], [f64; 3]); 2] = [
        (&[&[0, 1], &[1, 1]], [1.0, PHI, 1.0]),
        (&[&[2, 0], &[0, 2]], [1.0, 2.0, 4.0]),
    ];
    for (rows, want) in cases {
        let a = IntMatrix::from_i64(rows);
        let m = MonomialMap::new(a, vec![BigRational::one(), BigRational::one()]).unwrap();
        let table = m.lambda_table(&width);
        check!(2, table.len() == 3, "expected 3 entries, got {}", table.len());
        for (k, (r, want)) in table.iter().zip(want).enumerate() {
            check!(2, r.certified, "lambda_{k} is not certified");
            let (lo, hi) = r.interval.clone().expect("certified entries carry an interval");
            check!(2, &hi - &lo <= max_width, "lambda_{k} enclosure is wider than 1e-8");
            check!(
                2,
                (r.value - want).abs() <= 1e-8,
                "lambda_{k} = {}, wanted {want}",
                r.value
            );
        }
    }
    finish(
        2,
        t0,
        Duration::from_secs(1),
        "(1, 1.6180339887, 1) and (1, 2, 4), all certified to width <= 1e-8",
    );
}

#[test]
fn criterion_3_inverse_verification() {
    let t0 = Instant::now();
    check!(3, fib().verify_inverse(&fib_inv()).unwrap(), "the birational pair is rejected");
    let s = squaring();
    check!(3, !s.verify_inverse(&s).unwrap(), "(squaring, squaring) is accepted as inverses");
    finish(3, t0, Duration::from_secs(1), "accepts the birational pair, rejects the non-inverse");
}

#[test]
fn criterion_4_ramification_multiplicities() {
    let t0 = Instant::now();
    let g = map(&["X^2", "Y*Z", "Z^2"]);
    let coords = coord_vars(2);

    // The line Y = 0 is invariant and the restricted map doubles the
    // pushforward multiplicity each step.
    let table = curve_orbit_heights(&g, &OrbitSource::Param(curve(&["t", "0", "u"])), 8);
    check!(4, table.error.is_none(), "Y-orbit stopped early: {:?}", table.error);
    check!(4, table.rows.len() == 9, "Y-orbit has {} rows, wanted 9", table.rows.len());
    let y_form = Polynomial::parse("Y", &coords).unwrap();
    for (row, cycle) in table.rows.iter().zip(&table.cycles) {
        let pow = 1u64 << row.n;
        check!(4, row.mult == pow, "multiplicity at n={} is {}, wanted {pow}", row.n, row.mult);
        check!(
            4,
            (row.height - pow as f64).abs() < 1e-12,
            "height at n={} is {}, wanted {pow}",
            row.n,
            row.height
        );
        let parts = cycle.parts();
        check!(
            4,
            parts.len() == 1 && parts[0].0.form() == &y_form,
            "cycle at n={} is not supported on the line Y",
            row.n
        );
    }
    let y_heights: Vec<f64> = table.rows.iter().map(|r| r.height).collect();

    // The diagonal X = Y maps to X*Z^(2^n - 1) - Y^(2^n) with multiplicity one.
    let table = curve_orbit_heights(&g, &OrbitSource::Param(curve(&["t", "t", "u"])), 8);
    check!(4, table.error.is_none(), "diagonal orbit stopped early: {:?}", table.error);
    check!(4, table.rows.len() == 9, "diagonal orbit has {} rows, wanted 9", table.rows.len());
    for (row, cycle) in table.rows.iter().zip(&table.cycles) {
        let pow = 1u32 << row.n;
        let expected = if row.n == 0 {
            Polynomial::parse("X - Y", &coords).unwrap()
        } else {
            Polynomial::from_terms(
                &coords,
                [
                    (Monomial::new(vec![1, 0, pow - 1]), BigInt::one()),
                    (Monomial::new(vec![0, pow, 0]), -BigInt::one()),
                ],
            )
        };
        let parts = cycle.parts();
        check!(
            4,
            parts.len() == 1 && parts[0].0.form() == &expected && row.mult == 1,
            "image at n={} is not X*Z^{} - Y^{} with multiplicity 1",
            row.n,
            pow - 1,
            pow
        );
        check!(
            4,
            (row.height - pow as f64).abs() < 1e-12,
            "height at n={} is {}, wanted {pow}",
            row.n,
            row.height
        );
    }
    let diag_heights: Vec<f64> = table.rows.iter().map(|r| r.height).collect();

    for (name, heights) in [("Y", y_heights), ("X - Y", diag_heights)] {
        for method in [GrowthMethod::Ratio, GrowthMethod::Root] {
            let est = estimate_growth(&heights, method).unwrap();
            check!(
                4,
                (est.value - 2.0).abs() <= 1e-6,
                "{name} growth via {method:?} is {}, wanted 2 within 1e-6",
                est.value
            );
        }
    }
    finish(
        4,
        t0,
        Duration::from_secs(5),
        "multiplicities 2^n on Y, forms X*Z^(2^n-1) - Y^(2^n) on the diagonal, growth = 2",
    );
}

#[test]
fn criterion_5_squaring_curve_heights() {
    let t0 = Instant::now();
    let s = squaring();
    let start = curve(&["t", "u - t", "u"]);
    let table = curve_orbit_heights(&s, &OrbitSource::Param(start.clone()), 5);
    check!(5, table.error.is_none(), "orbit stopped early: {:?}", table.error);
    check!(5, table.rows.len() == 6, "orbit has {} rows, wanted 6", table.rows.len());

    let coords = coord_vars(2);
    let form0 = Polynomial::parse("X + Y - Z", &coords).unwrap();
    let form1 =
        Polynomial::parse("X^2 - 2*X*Y + Y^2 - 2*X*Z - 2*Y*Z + Z^2", &coords).unwrap();
    check!(
        5,
        table.cycles[0].parts()[0].0.form() == &form0,
        "n=0 form is {}, wanted X + Y - Z",
        table.cycles[0].parts()[0].0.form()
    );
    check!(
        5,
        table.cycles[1].parts()[0].0.form() == &form1,
        "n=1 form is {}, wanted the full conic",
        table.cycles[1].parts()[0].0.form()
    );
    for row in &table.rows {
        check!(
            5,
            row.degree == 1 << row.n && row.mult == 1,
            "n={}: degree {} mult {}, wanted degree {} mult 1",
            row.n,
            row.degree,
            row.mult,
            1u64 << row.n
        );
    }

    let heights: Vec<f64> = table.rows.iter().map(|r| r.height).collect();
    let ratios: Vec<f64> = (1..heights.len()).map(|n| heights[n].ln() - heights[n - 1].ln()).collect();
    let last = *ratios.last().unwrap();
    let ln4 = 4f64.ln();
    check!(5, ratios.iter().all(|&r| r < ln4), "a log-ratio reached log 4: {ratios:?}");
    check!(5, ratios.iter().all(|&r| r <= last), "the n=5 log-ratio is not the largest: {ratios:?}");
    check!(5, last > ratios[0], "log-ratios show no net increase: {ratios:?}");
    check!(
        5,
        (last - ln4).abs() <= 0.25 * ln4,
        "final log-ratio {last:.4} is not within 25% of log 4 = {ln4:.4}"
    );

    // Independent oracle: Sylvester-determinant implicitization of the
    // same parametrizations for n <= 3.
    let mut c = start;
    for n in 0..=3u32 {
        let grid = implicitize_param_curve(&c).unwrap();
        let sylvester = implicitize_reference(&c).unwrap();
        check!(5, grid == sylvester, "implicitization strategies disagree at n={n}");
        if n < 3 {
            c = c.push_forward(&s).unwrap();
        }
    }
    finish(
        5,
        t0,
        Duration::from_secs(60),
        &format!(
            "heights {:?}, log-ratios end at {:.4} (log 4 = {:.4})",
            heights.iter().map(|h| (h * 1e4).round() / 1e4).collect::<Vec<_>>(),
            last,
            ln4
        ),
    );
}

#[test]
fn criterion_6_point_height_growth() {
    let t0 = Instant::now();
    let s = squaring();
    let p = ProjPoint::from_i64(&[2, 3, 1]).unwrap();
    let table = point_orbit_heights(s.components(), &p, 10);
    check!(6, !table.truncated() && table.rows.len() == 11, "squaring orbit truncated");
    let est = estimate_growth(&table.heights(), GrowthMethod::Ratio).unwrap();
    check!(
        6,
        (est.value - 2.0).abs() <= 1e-6,
        "squaring point growth is {}, wanted 2 within 1e-6",
        est.value
    );

    let f = fib();
    let seq: Vec<BigInt> =
        f.degree_sequence(10).unwrap().iter().map(|&(_, d)| BigInt::from(d)).collect();
    let model = detect_recurrence(&seq, 3).unwrap().expect("degree recurrence");
    let phi = dominant_root(&model, 1e-9).unwrap();
    check!(6, phi.certified, "reference growth rate is not certified");
    let q = ProjPoint::from_i64(&[1, 1, 1]).unwrap();
    let table = point_orbit_heights(f.components(), &q, 14);
    check!(6, !table.truncated() && table.rows.len() == 15, "orbit of (1,1,1) truncated");
    let est_f = estimate_growth(&table.heights(), GrowthMethod::Ratio).unwrap();
    let rel = (est_f.value - phi.value).abs() / phi.value;
    check!(
        6,
        rel <= 0.02,
        "point growth at (1,1,1) over 14 steps is {}, off the certified {} by {:.2}%",
        est_f.value,
        phi.value,
        rel * 100.0
    );
    finish(
        6,
        t0,
        Duration::from_secs(5),
        &format!("squaring growth {:.8}; (1,1,1) growth {:.6} within {:.2}% of phi", est.value, est_f.value, rel * 100.0),
    );
}

#[test]
fn criterion_7_log_concavity_and_duality() {
    let t0 = Instant::now();
    for vals in [vec![1.0, PHI, PHI, 1.0], vec![1.0, 2.0, 4.0, 8.0]] {
        let qs: Vec<Quantity> = vals
            .iter()
            .enumerate()
            .map(|(k, &v)| Quantity::exact(format!("alpha_{k}"), v))
            .collect();
        let reports = check_log_concavity(&qs, 0.05);
        check!(7, reports.len() == 2, "expected 2 interior checks for {vals:?}");
        consistent(7, &reports, "log-concavity");
    }

    let f = fib();
    let g = fib_inv();
    let p = ProjPoint::from_i64(&[2, 3, 1]).unwrap();
    let line = curve(&["t", "u", "t + u"]);
    let af = alpha_table(&f, &[p.clone()], &[OrbitSource::Param(line.clone())], 6, true, None);
    let ag = alpha_table(&g, &[p], &[OrbitSource::Param(line)], 6, true, None);
    let reports = check_birational_duality(&f, &g, &af, &ag, 0.05).unwrap();
    check!(7, reports.len() == 4, "expected 4 duality reports, got {}", reports.len());
    consistent(7, &reports, "birational duality");
    finish(
        7,
        t0,
        Duration::from_secs(5),
        "log-concavity consistent on both tables; duality consistent within 5%",
    );
}

#[test]
fn criterion_8_product_formula() {
    let t0 = Instant::now();
    let tol = 0.05;
    let p = ProjPoint::from_i64(&[2, 3, 1]).unwrap();

    // Birational pair: certified lambda_1 from the degree recurrence,
    // alpha surrogates from a witness point and a line orbit.
    let f = fib();
    let lambdas = lambda_table_p2(&f, 12, 0, 1e-9).unwrap();
    let line = curve(&["t", "u", "t + u"]);
    let alphas = alpha_table(&f, &[p.clone()], &[OrbitSource::Param(line)], 6, true, None);
    let reports = check_product_formula(&lambdas, &alphas, tol);
    check!(8, reports.len() == 6, "expected 6 reports for the birational pair, got {}", reports.len());
    consistent(8, &reports, "product formula (birational pair)");
    for k in 1..=2 {
        let Some(a) = &alphas[k] else { continue };
        let m = lambdas[k].value.max(lambdas[k - 1].value);
        check!(
            8,
            a.value >= m - tol * m.max(1.0),
            "alpha_{k} = {} sits below max(lambda_{k}, lambda_{}) = {m}",
            a.value,
            k - 1
        );
    }

    // Squaring map: exact monomial lambdas, point witness, polarized q = 2.
    let s = squaring();
    let two = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
    let m2 = MonomialMap::new(two, vec![BigRational::one(), BigRational::one()]).unwrap();
    let width = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    let lam: Vec<Quantity> = m2
        .lambda_table(&width)
        .iter()
        .enumerate()
        .map(|(k, r)| Quantity::from_radius(format!("lambda_{k}"), r, 1e-9))
        .collect();
    let alph = alpha_table(&s, &[p], &[], 10, false, Some(2));
    let reports = check_product_formula(&lam, &alph, tol);
    check!(8, !reports.is_empty(), "no product-formula reports for the squaring map");
    consistent(8, &reports, "product formula (squaring)");
    for k in 1..=2 {
        let Some(a) = &alph[k] else { continue };
        let m = lam[k].value.max(lam[k - 1].value);
        check!(
            8,
            a.value >= m - tol * m.max(1.0),
            "alpha_{k} = {} sits below max(lambda_{k}, lambda_{}) = {m}",
            a.value,
            k - 1
        );
    }
    let polarized = check_polarized(2, &lam, &alph, tol);
    check!(8, !polarized.is_empty(), "no polarized reports");
    consistent(8, &polarized, "polarized q = 2");
    finish(
        8,
        t0,
        Duration::from_secs(10),
        "alpha >= max(lambda_k, lambda_(k-1)) and equality consistent on both maps; q = 2 polarized consistent",
    );
}

// ---- Criterion 9: randomized property suites ----

fn rand_poly(rng: &mut ChaCha8Rng, vars: &VarSet, max_terms: usize, max_exp: u32) -> Polynomial {
    let terms: Vec<(Monomial, BigInt)> = (0..rng.gen_range(0..=max_terms))
        .map(|_| {
            let exps: Vec<u32> = (0..vars.len()).map(|_| rng.gen_range(0..=max_exp)).collect();
            (Monomial::new(exps), BigInt::from(rng.gen_range(-9i64..=9)))
        })
        .collect();
    Polynomial::from_terms(vars, terms)
}

fn nonzero_poly(rng: &mut ChaCha8Rng, vars: &VarSet, max_terms: usize, max_exp: u32) -> Polynomial {
    loop {
        let p = rand_poly(rng, vars, max_terms, max_exp);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random polynomial with positive degree in variable 0, as the
/// resultant requires.
fn poly_in_x(rng: &mut ChaCha8Rng, vars: &VarSet, max_terms: usize, max_exp: u32) -> Polynomial {
    loop {
        let p = rand_poly(rng, vars, max_terms, max_exp);
        if p.terms().any(|(m, _)| m.exps()[0] > 0) {
            return p;
        }
    }
}

fn deg_in_x(p: &Polynomial) -> u32 {
    p.terms().map(|(m, _)| m.exps()[0]).max().unwrap_or(0)
}

fn ring_laws(rng: &mut ChaCha8Rng) -> usize {
    let vars = coord_vars(2);
    let zero = Polynomial::zero(&vars);
    let one = Polynomial::one(&vars);
    let cases = 120;
    for i in 0..cases {
        let p = rand_poly(rng, &vars, 4, 3);
        let q = rand_poly(rng, &vars, 4, 3);
        let r = rand_poly(rng, &vars, 4, 3);
        check!(9, &(&p + &q) + &r == &p + &(&q + &r), "ring case {i}: addition associativity");
        check!(9, &p + &q == &q + &p, "ring case {i}: addition commutativity");
        check!(9, &p - &p == zero, "ring case {i}: subtraction of self");
        check!(9, &p * &q == &q * &p, "ring case {i}: multiplication commutativity");
        check!(9, &(&p * &q) * &r == &p * &(&q * &r), "ring case {i}: multiplication associativity");
        check!(9, &p * &(&q + &r) == &(&p * &q) + &(&p * &r), "ring case {i}: distributivity");
        check!(9, &p * &one == p, "ring case {i}: multiplicative identity");
        if !q.is_zero() {
            check!(
                9,
                divide_exact(&(&p * &q), &q).as_ref() == Some(&p),
                "ring case {i}: exact division does not invert multiplication"
            );
        }
    }
    cases
}

fn gcd_resultant_laws(rng: &mut ChaCha8Rng) -> usize {
    let vars = coord_vars(1);
    let cases = 100;
    for i in 0..cases {
        let a = nonzero_poly(rng, &vars, 3, 3);
        let b = nonzero_poly(rng, &vars, 3, 3);
        let c = nonzero_poly(rng, &vars, 2, 2);
        let g = poly_gcd(&a, &b).unwrap();
        let qa = divide_exact(&a, &g);
        let qb = divide_exact(&b, &g);
        check!(9, qa.is_some() && qb.is_some(), "gcd case {i}: gcd does not divide both inputs");
        let cof = poly_gcd(&qa.unwrap(), &qb.unwrap()).unwrap();
        check!(9, cof.is_constant(), "gcd case {i}: cofactors still share {cof}");
        // gcd(ac, bc) = gcd(a, b) * primitive(c) up to sign
        let g2 = poly_gcd(&(&a * &c), &(&b * &c)).unwrap();
        let h = divide_exact(&g2, &g);
        check!(9, h.is_some(), "gcd case {i}: gcd(ac, bc) is not a multiple of gcd(a, b)");
        let h = h.unwrap();
        check!(
            9,
            divide_exact(&c, &h).is_some() && h.total_degree() == c.total_degree(),
            "gcd case {i}: gcd(ac, bc)/gcd(a, b) = {h} is not the primitive part of {c}"
        );

        let a = poly_in_x(rng, &vars, 3, 2);
        let b = poly_in_x(rng, &vars, 3, 2);
        let c = poly_in_x(rng, &vars, 3, 2);
        let res_ab_c = resultant_univar(&(&a * &b), &c, 0).unwrap();
        let res_a_c = resultant_univar(&a, &c, 0).unwrap();
        let res_b_c = resultant_univar(&b, &c, 0).unwrap();
        check!(
            9,
            res_ab_c == &res_a_c * &res_b_c,
            "resultant case {i}: Res(ab, c) != Res(a, c) * Res(b, c)"
        );
        let res_ac = resultant_univar(&a, &c, 0).unwrap();
        let res_ca = resultant_univar(&c, &a, 0).unwrap();
        let flipped =
            if (deg_in_x(&a) * deg_in_x(&c)) % 2 == 1 { (&res_ca).neg() } else { res_ca };
        check!(9, res_ac == flipped, "resultant case {i}: swap sign rule fails");
        check!(
            9,
            resultant_univar(&(&a * &c), &(&b * &c), 0).unwrap().is_zero(),
            "resultant case {i}: shared factor does not kill the resultant"
        );
    }
    cases
}

fn rand_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
    IntMatrix::new(n, (0..n * n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
}

fn cauchy_binet(rng: &mut ChaCha8Rng) -> usize {
    let cases = 100;
    for i in 0..cases {
        let n = rng.gen_range(2..=4);
        let a = rand_matrix(rng, n, 5);
        let b = rand_matrix(rng, n, 5);
        let ab = a.mul(&b);
        for k in 1..=n {
            check!(
                9,
                ab.exterior_power(k) == a.exterior_power(k).mul(&b.exterior_power(k)),
                "exterior-power case {i}: wedge^{k} is not functorial at n = {n}"
            );
        }
        check!(9, ab.det() == a.det() * b.det(), "exterior-power case {i}: det not multiplicative");
    }
    cases
}

fn submultiplicativity(rng: &mut ChaCha8Rng) -> usize {
    let cases = 100;
    let mut done = 0;
    while done < cases {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-2i64..=2)).collect();
        let a = IntMatrix::from_i64(&[&e[0..2], &e[2..4]]);
        if a.det() == BigInt::zero() {
            continue;
        }
        let Ok(m) = MonomialMap::new(a, vec![BigRational::one(), BigRational::one()]) else {
            continue;
        };
        let Ok(f) = m.to_rational_map() else { continue };
        let degs: Vec<u64> =
            f.degree_sequence(4).unwrap().iter().map(|&(_, d)| d).collect();
        for i in 0..degs.len() {
            for j in 0..degs.len() - i {
                check!(
                    9,
                    degs[i + j] <= degs[i] * degs[j],
                    "degree case {done}: deg(f^{}) = {} exceeds {} * {}",
                    i + j,
                    degs[i + j],
                    degs[i],
                    degs[j]
                );
            }
        }
        done += 1;
    }
    done
}

fn strategy_agreement() {
    let f = fib();
    let line = curve(&["t", "u", "t + u"]);
    let (start, mult) = implicitize_param_curve(&line).unwrap();
    check!(9, mult == 1, "the starting line implicitizes with multiplicity {mult}");
    let param = curve_orbit_heights(&f, &OrbitSource::Param(line), 4);
    let implicit =
        curve_orbit_heights(&f, &OrbitSource::Implicit { start, inverse: fib_inv() }, 4);
    check!(
        9,
        param.error.is_none() && implicit.error.is_none(),
        "a strategy stopped early: {:?} / {:?}",
        param.error,
        implicit.error
    );
    check!(9, param.rows.len() == 5 && implicit.rows.len() == 5, "strategies ran short");
    for n in 0..5 {
        check!(
            9,
            param.cycles[n] == implicit.cycles[n],
            "strategies disagree at n = {n}: {:?} vs {:?}",
            param.cycles[n],
            implicit.cycles[n]
        );
    }
}

const DETERMINISM_SPEC: &str = "\
[map]
dim = 2
f = 2*Y*Z, X*Y, Z^2
inverse = 4*Y*Z, X^2, 2*X*Z

[points]
p0 = [2 : 3 : 1]

[checks]
product_formula
log_concavity
duality
ks_point

[options]
horizon = 8
";

fn determinism_digests() {
    use sha2::{Digest, Sha256};
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("exp.spec");
    std::fs::write(&spec_path, DETERMINISM_SPEC).unwrap();
    let mut digests = vec![];
    for run in 0..2 {
        let out = dir.path().join(format!("out{run}"));
        for task in ["degrees", "conjectures"] {
            let status = std::process::Command::new(env!("CARGO_BIN_EXE_dynadeg"))
                .args([
                    "--spec",
                    spec_path.to_str().unwrap(),
                    "--out",
                    out.to_str().unwrap(),
                    "--seed",
                    "11",
                    task,
                ])
                .stdout(std::process::Stdio::null())
                .status()
                .unwrap();
            check!(9, status.success(), "{task} run {run} exited with {status}");
        }
        let mut names: Vec<String> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        // The manifest records wall-clock timestamps; every data artifact
        // must be byte-identical across runs.
        names.retain(|n| n != "manifest.json");
        check!(9, names.len() >= 3, "run {run} produced only {names:?}");
        let mut hasher = Sha256::new();
        for name in &names {
            hasher.update(name.as_bytes());
            hasher.update(std::fs::read(out.join(name)).unwrap());
        }
        digests.push(format!("{:x}", hasher.finalize()));
    }
    check!(9, digests[0] == digests[1], "identical runs produced different digests");
}

#[test]
fn criterion_9_property_suites() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x00d1ce);
    let ring = ring_laws(&mut rng);
    let gcd_res = gcd_resultant_laws(&mut rng);
    let wedge = cauchy_binet(&mut rng);
    let degs = submultiplicativity(&mut rng);
    strategy_agreement();
    determinism_digests();
    finish(
        9,
        t0,
        Duration::from_secs(120),
        &format!(
            "{ring} ring cases, {gcd_res} gcd/resultant cases, {wedge} exterior-power cases, \
             {degs} degree cases, strategy agreement, determinism digests"
        ),
    );
}
