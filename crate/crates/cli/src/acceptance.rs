//! The release acceptance campaign: ten self-contained checks, each pinning
//! a different layer of the library against an independent reference —
//! frozen worked values, closed-form constants, brute-force enumeration,
//! exact spectra, and the hypothesis checkers — under fixed random seeds
//! and explicit time budgets.

use crate::commands::{build_sweep_ctx, run_sweep};
use crate::oracle;
use rand::Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};
use weyl_certify_core::bounds_nd::K0;
use weyl_certify_core::certificate::Verdict;
use weyl_certify_core::error::Error as CoreError;
use weyl_certify_core::certify::{self, CertifyOptions};
use weyl_certify_core::geometry::{
    complement_in_mar, metrics, whitney::check_properties, whitney::whitney,
    whitney::WhitneyOptions, RectilinearDomain,
};
use weyl_certify_core::spectra::Spectrum;
use weyl_certify_core::{admissible, bounds1d, bounds_nd, constants};

/// One executed criterion: its verdict and a human-readable account.
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

type CheckResult = std::result::Result<String, String>;

const CRITERIA: [(&str, fn() -> CheckResult); 10] = [
    ("worked index thresholds", c01_worked_thresholds),
    ("dimensional constants vs closed forms", c02_constants),
    ("fast counters vs brute enumeration", c03_counters_vs_enumeration),
    ("interval Riesz-mean sandwich", c04_riesz_sandwich),
    ("product and cube bound soundness sweep", c05_soundness_sweep),
    ("two-sided count bounds at eigenvalues", c06_bracket_at_eigenvalues),
    ("interior decomposition properties", c07_decomposition_properties),
    ("loss threshold solver", c08_loss_threshold_solver),
    ("end-to-end loss certification", c09_end_to_end),
    ("removed-family hypothesis checker", c10_family_checker),
];

/// Run the campaign (or the listed subset), never panicking outward: a
/// criterion that panics internally is reported as a failure.
pub fn run(only: Option<&[usize]>) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .enumerate()
        .map(|(i, pair)| (i + 1, pair.0, pair.1))
        .filter(|(idx, _, _)| only.is_none_or(|sel| sel.contains(idx)))
        .map(|(index, name, check)| {
            let t0 = Instant::now();
            let outcome = std::panic::catch_unwind(check);
            let elapsed_ms = t0.elapsed().as_millis();
            let (pass, detail) = match outcome {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(p) => {
                    let msg = p
                        .downcast_ref::<&str>()
                        .map(|s| s.to_string())
                        .or_else(|| p.downcast_ref::<String>().cloned())
                        .unwrap_or_else(|| "non-string payload".into());
                    (false, format!("panicked: {msg}"))
                }
            };
            CriterionResult { index, name, pass, detail, elapsed_ms }
        })
        .collect()
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

/// 1. The three frozen worked thresholds, exactly, in under a millisecond.
fn c01_worked_thresholds() -> CheckResult {
    let cases: [(f64, f64, u32, f64, u64); 3] = [
        (95.0, 100.0, 2, 1.0, 2_623),
        (99.0, 100.0, 2, 1.0, 341_694),
        (80.0, 100.0, 2, 1.0, 34),
    ];
    let t0 = Instant::now();
    let mut got = Vec::new();
    for &(vo, v1, n1, l2, want) in &cases {
        match bounds_nd::k0_threshold(vo, v1, n1, l2).map_err(|e| e.to_string())? {
            K0::FirstK(k) if k == want => got.push(k),
            other => {
                return Err(format!(
                    "threshold({vo}, {v1}, {n1}, {l2}) = {other:?}, want first index {want}"
                ))
            }
        }
    }
    let el = t0.elapsed();
    if el > Duration::from_millis(1) {
        return Err(format!("three thresholds took {el:?}, budget 1 ms"));
    }
    Ok(format!(
        "thresholds {got:?} exact in {:.1} µs",
        el.as_secs_f64() * 1e6
    ))
}

/// 2. Dimensional constants against hand closed forms, and the symbolic
///    half-integer Beta values against the floating Gamma route.
fn c02_constants() -> CheckResult {
    const TOL: f64 = 1e-12;
    let mut worst = 0.0_f64;
    let check = |name: &str, got: f64, want: f64| -> Result<(), String> {
        let r = rel(got, want);
        if r > TOL {
            return Err(format!(
                "{name}: got {got:.17e}, want {want:.17e} (rel. dev. {r:.3e})"
            ));
        }
        Ok(())
    };
    let d1 = constants::dim_constants(1).map_err(|e| e.to_string())?;
    let d2 = constants::dim_constants(2).map_err(|e| e.to_string())?;
    check("c1(1)", d1.c1, 2.0 / 3.0)?;
    check("c1(2)", d2.c1, 3.0 * PI / 16.0)?;
    check("c2(1)", d1.c2, 2.0 * 2.0_f64.sqrt() * PI)?;
    check("c2(2)", d2.c2, 9.0 * 3.0_f64.sqrt())?;
    check("c3(1)", constants::c3(1.0).map_err(|e| e.to_string())?, 0.125)?;
    check("c3(1.5)", constants::c3(1.5).map_err(|e| e.to_string())?, 1.0 / 9.0)?;
    let mut pairs = 0u32;
    for a2 in 1..=9u32 {
        for b2 in 1..=9u32 {
            let sym = constants::beta_half_sym(a2, b2)
                .map_err(|e| e.to_string())?
                .to_f64();
            let via_gamma = constants::gamma(a2 as f64 / 2.0)
                * constants::gamma(b2 as f64 / 2.0)
                / constants::gamma((a2 + b2) as f64 / 2.0);
            let r = rel(sym, via_gamma);
            if r > TOL {
                return Err(format!(
                    "Beta({}/2, {}/2): symbolic {sym:.17e} vs Gamma route {via_gamma:.17e} (rel. dev. {r:.3e})",
                    a2, b2
                ));
            }
            if r > worst {
                worst = r;
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "six closed forms exact to 1e-12; {pairs} half-integer Beta/Gamma identities, worst rel. dev. {worst:.2e}"
    ))
}

/// 3. The lattice counters against naive brute-force enumeration on random
///    boxes in dimensions 2, 3, 4 — strict and closed counting.
fn c03_counters_vs_enumeration() -> CheckResult {
    let t0 = Instant::now();
    let mut r = oracle::rng(1003, 0);
    let mut boxes = 0u32;
    for i in 0..210usize {
        let n = [2usize, 3, 4][i % 3];
        let hi = [3.0, 1.5, 0.9][i % 3];
        let sides = oracle::random_sides(&mut r, n, 0.5, hi);
        let lambda = 10.0 + r.gen::<f64>() * 4990.0;
        let s = Spectrum::from_sides(&sides).map_err(|e| e.to_string())?;
        let fast = (
            s.count(lambda).map_err(|e| e.to_string())?,
            s.count_closed(lambda).map_err(|e| e.to_string())?,
        );
        let brute = (
            oracle::naive_box_count(&sides, lambda, false),
            oracle::naive_box_count(&sides, lambda, true),
        );
        if fast != brute {
            return Err(format!(
                "sides {sides:?}, λ = {lambda}: counter (strict, closed) = {fast:?} vs enumeration {brute:?}"
            ));
        }
        boxes += 1;
    }
    let el = t0.elapsed();
    if el > Duration::from_secs(60) {
        return Err(format!("took {:.1} s, budget 60 s", el.as_secs_f64()));
    }
    Ok(format!(
        "{boxes} random boxes across dimensions 2/3/4: strict and closed counts match enumeration; {:.1} s",
        el.as_secs_f64()
    ))
}

/// 4. One-dimensional Riesz means sandwiched by their closed-form bounds.
fn c04_riesz_sandwich() -> CheckResult {
    let t0 = Instant::now();
    let mut r = oracle::rng(1004, 0);
    let mut comparisons = 0u64;
    for _ in 0..100 {
        let len = 0.3 + r.gen::<f64>() * 3.7;
        let s = Spectrum::from_sides(&[len]).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let lambda = 1.0 + r.gen::<f64>() * 1999.0;
            let exact_half =
                lambda.sqrt() * s.riesz_mean(0.5, lambda).map_err(|e| e.to_string())?;
            let exact_one = lambda * s.riesz_mean(1.0, lambda).map_err(|e| e.to_string())?;
            // The half and p > 1 uppers declare the ground state as their
            // window; below it the exact mean must vanish.
            let below_window_ok = |r: Result<f64, CoreError>,
                                   exact: f64|
             -> Result<Option<f64>, String> {
                match r {
                    Ok(v) => Ok(Some(v)),
                    Err(CoreError::OutOfValidity(_)) if exact == 0.0 => Ok(None),
                    Err(CoreError::OutOfValidity(_)) => Err(format!(
                        "L = {len}, λ = {lambda}: bound declared out of window but the exact mean is {exact:.6e}"
                    )),
                    Err(e) => Err(e.to_string()),
                }
            };
            let lo = bounds1d::riesz_half_lower_interval(len, lambda).map_err(|e| e.to_string())?;
            let hi_one = bounds1d::riesz1_upper(len, lambda).map_err(|e| e.to_string())?;
            if lo > exact_half {
                return Err(format!(
                    "L = {len}, λ = {lambda}: half-mean lower {lo:.12e} > exact {exact_half:.12e}"
                ));
            }
            if let Some(hi_half) = below_window_ok(bounds1d::riesz_half_upper(len, lambda), exact_half)? {
                if exact_half > hi_half {
                    return Err(format!(
                        "L = {len}, λ = {lambda}: exact half-mean {exact_half:.12e} > upper {hi_half:.12e}"
                    ));
                }
            }
            if exact_one > hi_one {
                return Err(format!(
                    "L = {len}, λ = {lambda}: exact first mean {exact_one:.12e} > upper {hi_one:.12e}"
                ));
            }
            comparisons += 3;
            for &p in &[1.5, 2.0] {
                let exact_p =
                    lambda.powf(p) * s.riesz_mean(p, lambda).map_err(|e| e.to_string())?;
                if let Some(hi_p) = below_window_ok(bounds1d::riesz_p_upper(len, p, lambda), exact_p)? {
                    if exact_p > hi_p {
                        return Err(format!(
                            "L = {len}, λ = {lambda}, p = {p}: exact mean {exact_p:.12e} > upper {hi_p:.12e}"
                        ));
                    }
                }
                comparisons += 1;
            }
        }
    }
    let el = t0.elapsed();
    if el > Duration::from_secs(30) {
        return Err(format!("took {:.1} s, budget 30 s", el.as_secs_f64()));
    }
    Ok(format!(
        "100 lengths × 50 λ: half-mean bracketed, first and higher means dominated ({comparisons} comparisons); {:.1} s",
        el.as_secs_f64()
    ))
}

/// 5. Every product/cube/box bound on the right side of the exact count
///    across a 200-point λ grid on 52 box domains.
fn c05_soundness_sweep() -> CheckResult {
    let t0 = Instant::now();
    let mut domains: Vec<(String, RectilinearDomain)> = vec![
        ("unit-square".into(), oracle::box_domain(&[1.0, 1.0])),
        ("unit-cube".into(), oracle::box_domain(&[1.0, 1.0, 1.0])),
    ];
    let mut r = oracle::rng(1005, 0);
    for i in 0..50usize {
        let n = if i < 30 {
            2
        } else if i < 44 {
            3
        } else {
            4
        };
        let hi = match n {
            2 => 3.0,
            3 => 1.5,
            _ => 0.9,
        };
        let mut sides = oracle::random_sides(&mut r, n, 0.5, hi);
        if i % 5 == 0 {
            // Force cubes into the mix so the cube-only bounds are exercised.
            sides = vec![sides[0]; n];
        }
        domains.push((format!("box-{i}"), oracle::box_domain(&sides)));
    }
    let mut evals: BTreeMap<&'static str, u64> = BTreeMap::new();
    for (name, d) in &domains {
        let ctx = build_sweep_ctx(d).map_err(|e| format!("{name}: {e}"))?;
        let sw = run_sweep(&ctx, 1e4, 200, None).map_err(|e| format!("{name}: {e}"))?;
        for (i, c) in sw.cols.iter().enumerate() {
            *evals.entry(c.tag).or_insert(0) += sw.evals[i];
            if sw.violations[i] > 0 {
                return Err(format!(
                    "{name}: {} on the wrong side at {} of 200 grid points (worst excess {:.3e})",
                    c.tag, sw.violations[i], sw.max_slack[i]
                ));
            }
        }
    }
    for tag in [
        "product-upper",
        "improved-2d-upper",
        "improved-3d-upper",
        "bly-upper",
        "removed-cubes-upper",
        "convex-upper",
        "convex-lower",
        "whitney-lower",
        "whitney-lower-constructive",
        "rect-lower-2d",
        "cube-lower",
        "cube-lower-windowed",
    ] {
        if evals.get(tag).copied().unwrap_or(0) == 0 {
            return Err(format!("bound {tag} was never evaluated inside its window"));
        }
    }
    let el = t0.elapsed();
    if el > Duration::from_secs(300) {
        return Err(format!("took {:.1} s, budget 300 s", el.as_secs_f64()));
    }
    Ok(format!(
        "{} domains × 200 λ ≤ 1e4: zero violations over {} bound evaluations (windowed cube form: {}); {:.1} s",
        domains.len(),
        evals.values().sum::<u64>(),
        evals["cube-lower-windowed"],
        el.as_secs_f64()
    ))
}

/// 6. The two-sided Lipschitz count bounds bracket the index at every
///    eigenvalue up to 1e4 on squares, cubes, and random box unions.
fn c06_bracket_at_eigenvalues() -> CheckResult {
    let t0 = Instant::now();
    let mut domains: Vec<(String, RectilinearDomain)> = vec![
        ("unit-square".into(), oracle::box_domain(&[1.0, 1.0])),
        ("unit-cube".into(), oracle::box_domain(&[1.0, 1.0, 1.0])),
    ];
    let mut r = oracle::rng(1006, 0);
    for i in 0..20usize {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let count = 2 + i % 3;
        domains.push((format!("union-{i}"), oracle::random_union(&mut r, n, count)));
    }
    let mut total = 0u64;
    for (name, d) in &domains {
        let m = metrics(d).map_err(|e| format!("{name}: {e}"))?;
        let comp_m = match complement_in_mar(d).map_err(|e| format!("{name}: {e}"))? {
            Some(c) => Some(metrics(&c).map_err(|e| format!("{name}: {e}"))?),
            None => None,
        };
        let s = Spectrum::try_new(d).map_err(|e| format!("{name}: {e}"))?;
        let stream = s
            .eigenvalue_stream(1e4, 5_000_000)
            .map_err(|e| format!("{name}: {e}"))?;
        if stream.truncated {
            return Err(format!("{name}: eigenvalue stream truncated below 1e4"));
        }
        let mut vals = stream.values;
        vals.sort_by(f64::total_cmp);
        for (idx, &lk) in vals.iter().enumerate() {
            let k = (idx + 1) as f64;
            let up = certify::remainder_upper_lipschitz(&m, comp_m.as_ref(), lk)
                .map_err(|e| format!("{name}: {e}"))?;
            let lo = certify::remainder_lower_lipschitz(&m, lk)
                .map_err(|e| format!("{name}: {e}"))?;
            if !up.valid || !lo.valid {
                return Err(format!(
                    "{name}: eigenvalue {lk:.6e} sits below the validity window — no eigenvalue may be skipped"
                ));
            }
            if lo.value > k {
                return Err(format!(
                    "{name}: lower bound {:.6e} exceeds index {k} at λ = {lk:.6e}",
                    lo.value
                ));
            }
            if up.value < k {
                return Err(format!(
                    "{name}: upper bound {:.6e} falls below index {k} at λ = {lk:.6e}",
                    up.value
                ));
            }
        }
        total += vals.len() as u64;
    }
    let el = t0.elapsed();
    if el > Duration::from_secs(300) {
        return Err(format!("took {:.1} s, budget 300 s", el.as_secs_f64()));
    }
    Ok(format!(
        "{} domains, {total} eigenvalues ≤ 1e4 bracketed index-by-index with no skips; {:.1} s",
        domains.len(),
        el.as_secs_f64()
    ))
}

/// 7. Structural properties of the interior decomposition at depth 8 on 50
///    random rectilinear domains, plus the refinement-floor bracket on boxes.
fn c07_decomposition_properties() -> CheckResult {
    let t0 = Instant::now();
    let mut r = oracle::rng(1007, 0);
    let mut singles = 0u32;
    let mut cubes_total = 0u64;
    let mut pairs_total = 0u64;
    for i in 0..50usize {
        let n = if i % 10 < 7 { 2 } else { 3 };
        let d = oracle::random_rectilinear(&mut r, n);
        let w = whitney(&d, &WhitneyOptions { depth: 8 }).map_err(|e| format!("domain {i}: {e}"))?;
        let rep = check_properties(&d, &w).map_err(|e| format!("domain {i}: {e}"))?;
        if !rep.ok {
            let first = rep
                .violations
                .first()
                .cloned()
                .unwrap_or_else(|| "coverage accounting failed".into());
            return Err(format!("domain {i} ({n}-dimensional): {first}"));
        }
        if d.is_single_box() && d.removed().is_empty() {
            singles += 1;
            if rep.k0_bracket != Some(true) {
                return Err(format!(
                    "domain {i}: refinement floor outside the inradius bracket"
                ));
            }
        }
        cubes_total += rep.cubes_checked as u64;
        pairs_total += rep.pairs_checked;
    }
    if singles == 0 {
        return Err("the random mix produced no single-box domain".into());
    }
    Ok(format!(
        "50 domains at depth 8: {cubes_total} cubes and {pairs_total} neighbour pairs pass size/distance/touching/coverage; floor bracket holds on {singles} boxes; {:.1} s",
        t0.elapsed().as_secs_f64()
    ))
}

/// 8. The loss-threshold solver: tiny residuals, the hard floor, and strict
///    monotonicity in the loss across twenty random geometries.
fn c08_loss_threshold_solver() -> CheckResult {
    let t0 = Instant::now();
    let mut r = oracle::rng(1008, 0);
    let mut solves = 0u64;
    let mut worst = 0.0_f64;
    for i in 0..20usize {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let sides = oracle::random_sides(&mut r, n, 0.5, 3.0);
        let m = metrics(&oracle::box_domain(&sides)).map_err(|e| e.to_string())?;
        for &convex in &[false, true] {
            let mut prev = f64::INFINITY;
            for j in 1..=9u32 {
                let eps = j as f64 / 10.0;
                let lam = certify::lambda_epsilon(&m, eps, convex).map_err(|e| e.to_string())?;
                let resid = (certify::loss_bound_at(&m, convex, lam).map_err(|e| e.to_string())?
                    - eps)
                    .abs();
                if resid > 1e-10 {
                    return Err(format!(
                        "sides {sides:?}, ε = {eps}, convex = {convex}: residual {resid:.3e} > 1e-10"
                    ));
                }
                if resid > worst {
                    worst = resid;
                }
                if !(lam >= 1.0 / (m.width * m.width)) {
                    return Err(format!(
                        "sides {sides:?}, ε = {eps}: threshold {lam:.6e} below width⁻²"
                    ));
                }
                if !(lam < prev) {
                    return Err(format!(
                        "sides {sides:?}, convex = {convex}: threshold not strictly decreasing at ε = {eps}"
                    ));
                }
                prev = lam;
                solves += 1;
            }
        }
    }
    let el = t0.elapsed();
    if el > Duration::from_secs(1) {
        return Err(format!("took {:.3} s, budget 1 s", el.as_secs_f64()));
    }
    Ok(format!(
        "{solves} solves on 20 boxes: worst residual {worst:.2e}, threshold ≥ width⁻² and strictly decreasing in ε; {:.0} ms",
        el.as_secs_f64() * 1e3
    ))
}

/// 9. Full certification runs: the unit square at ε = 0.5 within the count
///    budget, a 1×2 rectangle at ε = 0.25, and a fast λ-capped partial run.
fn c09_end_to_end() -> CheckResult {
    let t0 = Instant::now();
    let opts = CertifyOptions { lambda_cap: None, force_lipschitz: false };

    let square = oracle::box_domain(&[1.0, 1.0]);
    let cert = certify::certify_epsilon_polya(&square, 0.5, &opts).map_err(|e| e.to_string())?;
    if !matches!(cert.verdict, Verdict::Certified) {
        return Err(format!("unit square at ε = 0.5: verdict {:?}", cert.verdict));
    }
    let w = cert.work_log.as_ref().ok_or("unit square: missing work log")?;
    if w.count_evaluations > 1_000_000 {
        return Err(format!(
            "unit square: {} count evaluations, budget 1e6",
            w.count_evaluations
        ));
    }
    let (sq_evals, sq_steps) = (w.count_evaluations, w.interval_steps);

    let rect = oracle::box_domain(&[1.0, 2.0]);
    let cert2 = certify::certify_epsilon_polya(&rect, 0.25, &opts).map_err(|e| e.to_string())?;
    if !matches!(cert2.verdict, Verdict::Certified) {
        return Err(format!("1×2 rectangle at ε = 0.25: verdict {:?}", cert2.verdict));
    }

    let t_cap = Instant::now();
    let capped_opts = CertifyOptions { lambda_cap: Some(1e6), force_lipschitz: false };
    let capped =
        certify::certify_epsilon_polya(&square, 0.5, &capped_opts).map_err(|e| e.to_string())?;
    let cap_el = t_cap.elapsed();
    if !matches!(capped.verdict, Verdict::Inconclusive { .. }) {
        return Err(format!(
            "capped run should be a partial (inconclusive) certificate, got {:?}",
            capped.verdict
        ));
    }
    let reached = capped
        .work_log
        .as_ref()
        .ok_or("capped run: missing work log")?
        .lambda_reached;
    if reached < 1e6 * (1.0 - 1e-9) {
        return Err(format!("capped run stopped at λ = {reached:.6e}, cap 1e6"));
    }
    if cap_el > Duration::from_secs(30) {
        return Err(format!(
            "capped run took {:.1} s, budget 30 s",
            cap_el.as_secs_f64()
        ));
    }
    let el = t0.elapsed();
    if el > Duration::from_secs(600) {
        return Err(format!("took {:.1} s, budget 600 s", el.as_secs_f64()));
    }
    Ok(format!(
        "unit square certified with {sq_evals} count evaluations ({sq_steps} interval steps); 1×2 rectangle certified; capped run reached λ = {reached:.3e} in {:.2} s; total {:.1} s",
        cap_el.as_secs_f64(),
        el.as_secs_f64()
    ))
}

/// 10. The built-in removed-cube family passes the rectangle-removal
///     hypothesis checker with the published base volume and surface cap.
fn c10_family_checker() -> CheckResult {
    let fam = admissible::remark_family(2, 40).map_err(|e| e.to_string())?;
    let s = fam.surface_sum().map_err(|e| e.to_string())?;
    let cap = 2.0 * (2.0 + 2.0_f64.sqrt());
    if s > cap * (1.0 + 1e-12) {
        return Err(format!("surface sum {s:.15} exceeds 2(2+√2) = {cap:.15}"));
    }
    let base = 8.0 * (1.0 + 2.0_f64.sqrt()) * PI + 0.01;
    let cert =
        admissible::check_rectangle_removal(&fam, base, 1).map_err(|e| e.to_string())?;
    let margin = cert
        .numbers
        .get("margin")
        .copied()
        .ok_or("checker reported no margin")?;
    if !matches!(cert.verdict, Verdict::Certified) {
        return Err(format!(
            "checker verdict {:?} (margin {margin:.3e})",
            cert.verdict
        ));
    }
    if margin < 0.0 {
        return Err(format!("negative margin {margin:.3e}"));
    }
    Ok(format!(
        "family of {} size classes / {} cubes (tail bound {:.3e}): surface sum {:.12} ≤ {cap:.12}, removal margin {margin:.4e}",
        fam.cubes.len(),
        fam.cube_count(),
        fam.tail_bound,
        s
    ))
}
