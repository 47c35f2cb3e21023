//! Subcommand implementations. Every command returns an [`Outcome`] mapped
//! to the process exit code: 0 for success/certified, 1 for refuted claims
//! or violated invariants, 2 for inconclusive results and input errors.

use crate::Outcome;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use weyl_certify_core::bounds_nd::{BoundValue, Direction};
use weyl_certify_core::certificate::{Certificate, Verdict};
use weyl_certify_core::error::{Error, Result};
use weyl_certify_core::geometry::{
    complement_in_mar, metrics, whitney::check_properties, whitney::whitney,
    whitney::WhitneyOptions, DomainMetrics, RectilinearDomain,
};
use weyl_certify_core::spectra::Spectrum;
use weyl_certify_core::{admissible, bounds1d, bounds_nd, certify, constants, io};

/// Atomic text write: temp sibling file, then rename.
pub fn write_text_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp_name = format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out"),
        std::process::id()
    );
    let tmp = match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(d) => d.join(&tmp_name),
        None => PathBuf::from(&tmp_name),
    };
    std::fs::write(&tmp, text)
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::invalid(format!("cannot move artifact into {}: {e}", path.display()))
    })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

/// `constants --n k`: the dimensional constants as JSON.
pub fn cmd_constants(n: u32) -> Result<Outcome> {
    let d = constants::dim_constants(n)?;
    let c3_half_n = if n >= 2 {
        Some(constants::c3(n as f64 / 2.0)?)
    } else {
        None
    };
    print_json(&json!({
        "n": n,
        "omega": d.omega_n,
        "c1": d.c1,
        "c2": d.c2,
        "c3_half_n": c3_half_n,
    }));
    Ok(Outcome::Ok)
}

/// `spectrum --domain f.json --lambda-max X [--csv out.csv]`.
pub fn cmd_spectrum(domain: &Path, lambda_max: f64, csv: Option<&Path>) -> Result<Outcome> {
    let d = io::read_domain(domain)?;
    let s = Spectrum::try_new(&d)?;
    let stream = s.eigenvalue_stream(lambda_max, 5_000_000)?;
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in stream.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, v));
    }
    if stream.truncated {
        eprintln!("note: enumeration stopped at the internal cap; the list is a prefix");
    }
    match csv {
        Some(p) => write_text_atomic(p, &out)?,
        None => print!("{out}"),
    }
    Ok(Outcome::Ok)
}

/// `count --domain f.json --lambda X`.
pub fn cmd_count(domain: &Path, lambda: f64) -> Result<Outcome> {
    let d = io::read_domain(domain)?;
    let s = Spectrum::try_new(&d)?;
    print_json(&json!({
        "lambda": lambda,
        "count": s.count(lambda)?,
        "count_closed": s.count_closed(lambda)?,
    }));
    Ok(Outcome::Ok)
}

/// Everything `bounds` can be asked for.
pub struct BoundsArgs {
    pub family: String,
    pub len: Option<f64>,
    pub len2: Option<f64>,
    pub p: Option<f64>,
    pub lambda: f64,
    pub vol1: Option<f64>,
    pub volume: Option<f64>,
    pub side: Option<f64>,
    pub n: Option<u32>,
    pub direction: Option<String>,
    pub with_constant: bool,
}

fn bound_json(b: &BoundValue) -> Value {
    serde_json::to_value(b).expect("bound values serialize")
}

fn wrap_plain(value: f64, direction: Direction, tag: &str, validity_lo: f64, lambda: f64) -> Value {
    json!({
        "value": value,
        "direction": direction,
        "tag": tag,
        "validity_lo": validity_lo,
        "valid": lambda > validity_lo,
        "hypotheses": [],
    })
}

/// `bounds --family …`: evaluate one certified bound and emit it as JSON.
pub fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome> {
    let need = |v: Option<f64>, what: &str| -> Result<f64> {
        v.ok_or_else(|| Error::invalid(format!("--{what} is required for this family")))
    };
    let lambda = a.lambda;
    let v = match a.family.as_str() {
        "riesz1d" => {
            let len = need(a.len, "len")?;
            let p = a.p.unwrap_or(1.0);
            let ground = (std::f64::consts::PI / len).powi(2);
            if p == 1.0 {
                wrap_plain(bounds1d::riesz1_upper(len, lambda)?, Direction::Upper,
                    "interval-riesz1-upper", 0.0, lambda)
            } else if p == 0.5 {
                match a.direction.as_deref() {
                    Some("lower") => wrap_plain(
                        bounds1d::riesz_half_lower_interval(len, lambda)?,
                        Direction::Lower, "interval-riesz-half-lower", 0.0, lambda),
                    _ => wrap_plain(bounds1d::riesz_half_upper(len, lambda)?,
                        Direction::Upper, "interval-riesz-half-upper", ground, lambda),
                }
            } else {
                wrap_plain(bounds1d::riesz_p_upper(len, p, lambda)?, Direction::Upper,
                    "interval-riesz-p-upper", ground, lambda)
            }
        }
        "product" => {
            let vol1 = need(a.vol1, "vol1")?;
            let len2 = need(a.len2, "len2")?;
            let n1 = a.n.ok_or_else(|| Error::invalid("--n (cross-section dimension) is required"))?;
            bound_json(&bounds_nd::product_count_upper(vol1, n1, len2, lambda)?)
        }
        "cube" => {
            let side = need(a.side, "side")?;
            let n = a.n.ok_or_else(|| Error::invalid("--n is required"))?;
            bound_json(&bounds_nd::cube_count_lower(side, n, lambda, a.with_constant)?)
        }
        "rect2d" => {
            let len = need(a.len, "len")?;
            let len2 = need(a.len2, "len2")?;
            bound_json(&bounds_nd::rect_count_lower_2d(len, len2, lambda)?)
        }
        "bly" => {
            let vol = need(a.volume, "volume")?;
            let n = a.n.ok_or_else(|| Error::invalid("--n is required"))?;
            bound_json(&bounds_nd::bly_count_upper(vol, n, lambda)?)
        }
        "improved2d" => {
            let vol1 = need(a.vol1, "vol1")?;
            let len2 = need(a.len2, "len2")?;
            bound_json(&bounds_nd::improved_count_upper_2d(vol1, len2, lambda)?)
        }
        "improved3d" => {
            let vol1 = need(a.vol1, "vol1")?;
            let len2 = need(a.len2, "len2")?;
            bound_json(&bounds_nd::improved_count_upper_3d(vol1, len2, lambda)?)
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown bound family '{other}'; expected riesz1d|product|cube|rect2d|bly|improved2d|improved3d"
            )))
        }
    };
    print_json(&v);
    Ok(Outcome::Ok)
}

/// `metrics --domain f.json [--json out.json]`.
pub fn cmd_metrics(domain: &Path, json_out: Option<&Path>) -> Result<Outcome> {
    let d = io::read_domain(domain)?;
    let m = metrics(&d)?;
    let v = serde_json::to_value(&m).expect("metrics serialize");
    if let Some(p) = json_out {
        io::write_json_atomic(p, &m)?;
    }
    print_json(&v);
    Ok(Outcome::Ok)
}

/// `whitney --domain f.json --depth k [--check]`.
pub fn cmd_whitney(domain: &Path, depth: u32, check: bool) -> Result<Outcome> {
    let d = io::read_domain(domain)?;
    let w = whitney(&d, &WhitneyOptions { depth })?;
    let mut v = json!({
        "n": w.n,
        "root_side": w.root_side,
        "depth": w.depth,
        "truncated": w.truncated,
        "cube_count": w.cube_count,
        "covered_volume": w.covered_volume,
        "domain_volume": w.domain_volume,
        "r_in_lower": w.r_in_lower,
        "largest_side": w.largest_side,
        "smallest_side": w.smallest_side,
        "floor_side": w.floor_side,
        "per_generation": w.per_generation,
    });
    let mut outcome = Outcome::Ok;
    if check {
        let report = check_properties(&d, &w)?;
        if !report.ok {
            outcome = Outcome::Violated;
        }
        v["check"] = serde_json::to_value(&report).expect("report serializes");
    }
    print_json(&v);
    Ok(outcome)
}

/// `lambda-eps (--metrics m.json | --domain f.json) --epsilon e [--convex]`.
pub fn cmd_lambda_eps(
    metrics_path: Option<&Path>,
    domain_path: Option<&Path>,
    epsilon: f64,
    convex: bool,
) -> Result<Outcome> {
    let m: DomainMetrics = match (metrics_path, domain_path) {
        (Some(p), None) => io::read_metrics(p)?,
        (None, Some(p)) => metrics(&io::read_domain(p)?)?,
        _ => {
            return Err(Error::invalid(
                "exactly one of --metrics and --domain must be given",
            ))
        }
    };
    let lam = certify::lambda_epsilon(&m, epsilon, convex)?;
    let residual = (certify::loss_bound_at(&m, convex, lam)? - epsilon).abs();
    print_json(&json!({
        "epsilon": epsilon,
        "convex": convex,
        "lambda_epsilon": lam,
        "residual": residual,
    }));
    Ok(Outcome::Ok)
}

fn verdict_outcome(c: &Certificate) -> Outcome {
    match &c.verdict {
        Verdict::Certified => Outcome::Ok,
        Verdict::Refuted { .. } => Outcome::Violated,
        Verdict::Inconclusive { .. } => Outcome::Inconclusive,
    }
}

/// `certify --domain f.json --epsilon e [--lambda-cap X] [--force-lipschitz]
/// [--json out.json]`.
pub fn cmd_certify(
    domain: &Path,
    epsilon: f64,
    lambda_cap: Option<f64>,
    force_lipschitz: bool,
    json_out: Option<&Path>,
) -> Result<Outcome> {
    let d = io::read_domain(domain)?;
    let opts = certify::CertifyOptions {
        lambda_cap,
        force_lipschitz,
    };
    let cert = certify::certify_epsilon_polya(&d, epsilon, &opts)?;
    if let Some(p) = json_out {
        io::write_json_atomic(p, &cert)?;
    }
    print_json(&serde_json::to_value(&cert).expect("certificates serialize"));
    Ok(verdict_outcome(&cert))
}

/// Family source for `admissible`: a JSON file or the built-in dyadic family.
pub enum FamilySource<'a> {
    File(&'a Path),
    Builtin { n: u32, depth: u32 },
}

/// Parameters for `admissible --check …`.
pub struct AdmissibleArgs<'a> {
    pub family: FamilySource<'a>,
    pub check: Option<String>,
    pub base_volume: Option<f64>,
    pub m_tiles: u64,
    pub remaining_volume: Option<f64>,
    pub interval_length: Option<f64>,
    pub emit_family: Option<&'a Path>,
}

/// `admissible …`: load or build a cube family, optionally emit it, and run
/// the requested hypothesis checker.
pub fn cmd_admissible(a: &AdmissibleArgs) -> Result<Outcome> {
    let fam = match a.family {
        FamilySource::File(p) => io::read_family(p)?,
        FamilySource::Builtin { n, depth } => admissible::remark_family(n, depth)?,
    };
    if let Some(p) = a.emit_family {
        io::write_json_atomic(p, &fam)?;
    }
    let Some(check) = a.check.as_deref() else {
        print_json(&json!({
            "n": fam.n,
            "cube_count": fam.cube_count(),
            "surface_sum": fam.surface_sum()?,
            "volume_sum": fam.volume_sum()?,
            "tail_bound": fam.tail_bound,
        }));
        return Ok(Outcome::Ok);
    };
    let need = |v: Option<f64>, what: &str| -> Result<f64> {
        v.ok_or_else(|| Error::invalid(format!("--{what} is required for this check")))
    };
    let cert = match check {
        "rectangle-removal" => {
            let base = need(a.base_volume, "base-volume")?;
            admissible::check_rectangle_removal(&fam, base, a.m_tiles)?
        }
        "product-base" => {
            let base = need(a.base_volume, "base-volume")?;
            admissible::check_product_base(&fam, base)?
        }
        "thickening" => {
            let vol = need(a.remaining_volume, "remaining-volume")?;
            let len = need(a.interval_length, "interval-length")?;
            admissible::check_thickening(&fam, vol, len)?
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown check '{other}'; expected rectangle-removal|product-base|thickening"
            )))
        }
    };
    print_json(&serde_json::to_value(&cert).expect("certificates serialize"));
    Ok(verdict_outcome(&cert))
}

/// One sweep column: a certified bound evaluated across the λ grid.
pub(crate) struct SweepColumn {
    pub(crate) tag: &'static str,
    pub(crate) direction: Direction,
}

pub(crate) struct SweepCtx {
    spectrum: Spectrum,
    m: DomainMetrics,
    comp: Option<DomainMetrics>,
    single_sides: Option<Vec<f64>>,
    cube_side: Option<f64>,
    removed_cubes: Option<(f64, u64)>,
    /// λ-independent constructive lower-bound evaluator (single boxes, n ≤ 3).
    constructive: Option<certify::ConstructiveLowerPlan>,
    n: u32,
}

fn sweep_columns(ctx: &SweepCtx) -> Vec<SweepColumn> {
    use Direction::{Lower, Upper};
    let mut cols = Vec::new();
    let n = ctx.n;
    if ctx.single_sides.is_some() {
        cols.push(SweepColumn { tag: "product-upper", direction: Upper });
        if n == 2 {
            cols.push(SweepColumn { tag: "improved-2d-upper", direction: Upper });
        }
        if n == 3 {
            cols.push(SweepColumn { tag: "improved-3d-upper", direction: Upper });
        }
        cols.push(SweepColumn { tag: "bly-upper", direction: Upper });
        cols.push(SweepColumn { tag: "removed-cubes-upper", direction: Upper });
        cols.push(SweepColumn { tag: "convex-upper", direction: Upper });
        cols.push(SweepColumn { tag: "convex-lower", direction: Lower });
        cols.push(SweepColumn { tag: "whitney-lower", direction: Lower });
        if ctx.constructive.is_some() {
            cols.push(SweepColumn { tag: "whitney-lower-constructive", direction: Lower });
        }
        if n == 2 {
            cols.push(SweepColumn { tag: "rect-lower-2d", direction: Lower });
        }
        if ctx.cube_side.is_some() {
            cols.push(SweepColumn { tag: "cube-lower", direction: Lower });
            cols.push(SweepColumn { tag: "cube-lower-windowed", direction: Lower });
        }
    } else {
        cols.push(SweepColumn { tag: "bly-upper", direction: Upper });
        cols.push(SweepColumn { tag: "lipschitz-upper", direction: Upper });
        cols.push(SweepColumn { tag: "lipschitz-lower", direction: Lower });
        if ctx.removed_cubes.is_some() {
            cols.push(SweepColumn { tag: "removed-cubes-upper", direction: Upper });
        }
    }
    cols
}

/// Evaluate one bound by tag; `None` when λ is outside its validity window.
fn eval_bound(ctx: &SweepCtx, tag: &str, lambda: f64) -> Result<Option<f64>> {
    let windowed = |r: Result<BoundValue>| -> Result<Option<f64>> {
        match r {
            Ok(b) if b.valid => Ok(Some(b.value)),
            Ok(_) => Ok(None),
            Err(Error::OutOfValidity(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let sides = ctx.single_sides.as_deref();
    match tag {
        "product-upper" => {
            let s = sides.expect("column gated on a single box");
            let vol1: f64 = s[..s.len() - 1].iter().product();
            windowed(bounds_nd::product_count_upper(
                vol1, ctx.n - 1, s[s.len() - 1], lambda,
            ))
        }
        "improved-2d-upper" => {
            let s = sides.expect("column gated on a single box");
            windowed(bounds_nd::improved_count_upper_2d(s[0], s[1], lambda))
        }
        "improved-3d-upper" => {
            let s = sides.expect("column gated on a single box");
            windowed(bounds_nd::improved_count_upper_3d(s[0] * s[1], s[2], lambda))
        }
        "bly-upper" => windowed(bounds_nd::bly_count_upper(ctx.m.volume, ctx.n, lambda)),
        "convex-upper" => {
            windowed(certify::remainder_bounds_convex(&ctx.m, None, lambda).map(|(u, _)| u))
        }
        "convex-lower" => {
            windowed(certify::remainder_bounds_convex(&ctx.m, None, lambda).map(|(_, l)| l))
        }
        "whitney-lower" => windowed(certify::whitney_count_lower(&ctx.m, lambda, None)),
        "whitney-lower-constructive" => {
            let plan = ctx.constructive.as_ref().expect("column gated on the plan");
            windowed(plan.at(lambda))
        }
        "rect-lower-2d" => {
            let s = sides.expect("column gated on a single box");
            windowed(bounds_nd::rect_count_lower_2d(s[0], s[1], lambda))
        }
        "cube-lower" => {
            let side = ctx.cube_side.expect("column gated on a cube");
            windowed(bounds_nd::cube_count_lower(side, ctx.n, lambda, false))
        }
        "cube-lower-windowed" => {
            let side = ctx.cube_side.expect("column gated on a cube");
            windowed(bounds_nd::cube_count_lower(side, ctx.n, lambda, true))
        }
        "lipschitz-upper" => windowed(certify::remainder_upper_lipschitz(
            &ctx.m,
            ctx.comp.as_ref(),
            lambda,
        )),
        "lipschitz-lower" => windowed(certify::remainder_lower_lipschitz(&ctx.m, lambda)),
        "removed-cubes-upper" => {
            let (s_q, k) = ctx.removed_cubes.expect("column gated on removed cubes");
            windowed(certify::removed_cubes_upper(
                ctx.m.volume, s_q, ctx.n, lambda, Some(k),
            ))
        }
        other => Err(Error::invalid(format!("unknown bound column '{other}'"))),
    }
}

/// Build the per-domain evaluation context for a bound sweep.
pub(crate) fn build_sweep_ctx(d: &RectilinearDomain) -> Result<SweepCtx> {
    let spectrum = Spectrum::try_new(d)?;
    let m = metrics(d)?;
    let comp = match complement_in_mar(d)? {
        Some(c) => Some(metrics(&c)?),
        None => None,
    };
    let single_sides = if d.is_single_box() && d.removed().is_empty() {
        Some(
            d.boxes()[0]
                .sides()
                .iter()
                .map(weyl_certify_core::rational::rat_to_f64)
                .collect::<Vec<f64>>(),
        )
    } else {
        None
    };
    let removed_cubes = if single_sides.is_some() {
        // A plain box is the removed-cube geometry with nothing removed.
        Some((0.0, 0))
    } else {
        let rem = d.removed();
        if !rem.is_empty() && d.boxes().len() == 1 {
            let mut s_q = 0.0f64;
            let mut all_cubes = true;
            for b in rem {
                let sf: Vec<f64> = b
                    .sides()
                    .iter()
                    .map(weyl_certify_core::rational::rat_to_f64)
                    .collect();
                if sf.iter().any(|&x| x != sf[0]) {
                    all_cubes = false;
                    break;
                }
                s_q += sf[0].powi(d.n() as i32 - 1);
            }
            all_cubes.then_some((s_q, rem.len() as u64))
        } else {
            None
        }
    };
    let cube_side = single_sides.as_ref().and_then(|s| {
        let first = s[0];
        s.iter().all(|&x| x == first).then_some(first)
    });
    // A fixed fattening scale keeps the decomposition depth (and so the cube
    // budget) independent of λ; any 0 < ε < r_in certifies. Dimension 4 and
    // up is left out: the near-boundary cube count grows past the resource
    // limit there.
    let constructive = if single_sides.is_some() && d.n() <= 3 {
        Some(certify::ConstructiveLowerPlan::new(d, 0.9 * m.r_in)?)
    } else {
        None
    };
    Ok(SweepCtx {
        spectrum,
        m,
        comp,
        single_sides,
        cube_side,
        removed_cubes,
        constructive,
        n: d.n() as u32,
    })
}

/// Everything a sweep produces: the CSV table plus per-column accounting.
pub(crate) struct SweepOutcome {
    pub(crate) cols: Vec<SweepColumn>,
    /// Grid points where the bound was evaluated (inside its window).
    pub(crate) evals: Vec<u64>,
    /// Grid points where the bound fell on the wrong side of the count.
    pub(crate) violations: Vec<u64>,
    /// Worst wrong-side excess per column (0 when sound everywhere).
    pub(crate) max_slack: Vec<f64>,
    pub(crate) csv: String,
}

/// Evaluate every applicable bound on a λ grid against exact counts.
pub(crate) fn run_sweep(
    ctx: &SweepCtx,
    lambda_max: f64,
    points: usize,
    seed: Option<u64>,
) -> Result<SweepOutcome> {
    if !(lambda_max > 0.0) || points == 0 {
        return Err(Error::invalid("sweep needs a positive λ range and at least one point"));
    }
    let cols = sweep_columns(ctx);

    let grid: Vec<f64> = (1..=points)
        .map(|j| {
            let base = lambda_max * j as f64 / points as f64;
            match seed {
                Some(s) => {
                    let mut r = crate::oracle::rng(s, j as u64);
                    base * (1.0 + (r.gen::<f64>() - 0.5) * 1e-3)
                }
                None => base,
            }
        })
        .collect();

    struct Row {
        lambda: f64,
        count: u64,
        weyl: f64,
        cells: Vec<Option<f64>>,
    }
    let rows: Vec<Row> = grid
        .par_iter()
        .map(|&lambda| -> Result<Row> {
            let count = ctx.spectrum.count(lambda)?;
            let weyl = certify::weyl_main(ctx.n, ctx.m.volume, lambda)?;
            let cells = cols
                .iter()
                .map(|c| eval_bound(ctx, c.tag, lambda))
                .collect::<Result<Vec<_>>>()?;
            Ok(Row { lambda, count, weyl, cells })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = String::from("lambda,count_exact,weyl_main,r_omega");
    for c in &cols {
        out.push(',');
        out.push_str(c.tag);
    }
    out.push('\n');
    let mut evals: Vec<u64> = vec![0; cols.len()];
    let mut violations: Vec<u64> = vec![0; cols.len()];
    let mut max_slack: Vec<f64> = vec![0.0; cols.len()];
    for row in &rows {
        out.push_str(&format!(
            "{},{},{},{}",
            row.lambda,
            row.count,
            row.weyl,
            row.count as f64 - row.weyl
        ));
        for (i, cell) in row.cells.iter().enumerate() {
            out.push(',');
            if let Some(v) = cell {
                out.push_str(&format!("{v}"));
                evals[i] += 1;
                let k = row.count as f64;
                let bad = match cols[i].direction {
                    Direction::Upper => *v < k,
                    Direction::Lower => *v > k,
                };
                if bad {
                    violations[i] += 1;
                    let slack = match cols[i].direction {
                        Direction::Upper => k - *v,
                        Direction::Lower => *v - k,
                    };
                    if slack > max_slack[i] {
                        max_slack[i] = slack;
                    }
                }
            }
        }
        out.push('\n');
    }
    Ok(SweepOutcome { cols, evals, violations, max_slack, csv: out })
}

/// `sweep --domain f.json --lambda-max X [--points N] [--seed S] [--csv out]`:
/// exact counts against every applicable certified bound, CSV out, violation
/// summary on stderr. Exit 1 when any sound bound is violated.
pub fn cmd_sweep(
    domain: &Path,
    lambda_max: f64,
    points: usize,
    seed: Option<u64>,
    csv: Option<&Path>,
) -> Result<Outcome> {
    let d = io::read_domain(domain)?;
    let ctx = build_sweep_ctx(&d)?;
    let sw = run_sweep(&ctx, lambda_max, points, seed)?;
    match csv {
        Some(p) => write_text_atomic(p, &sw.csv)?,
        None => print!("{}", sw.csv),
    }
    let mut any_bad = false;
    for (i, c) in sw.cols.iter().enumerate() {
        if sw.violations[i] > 0 {
            any_bad = true;
        }
        eprintln!(
            "{}: evals={} violations={} worst_excess={:.6}",
            c.tag, sw.evals[i], sw.violations[i], sw.max_slack[i]
        );
    }
    Ok(if any_bad { Outcome::Violated } else { Outcome::Ok })
}

/// `acceptance [--only i,j,…]`: run the acceptance campaign and print the
/// pass/fail table. Exit 0 only when every executed criterion passes.
pub fn cmd_acceptance(only: Option<&[usize]>) -> Outcome {
    let results = crate::acceptance::run(only);
    let mut all_ok = true;
    println!("{:<4} {:<10} {:<44} {:>9}  detail", "#", "status", "criterion", "ms");
    for r in &results {
        if !r.pass {
            all_ok = false;
        }
        println!(
            "{:<4} {:<10} {:<44} {:>9}  {}",
            r.index,
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.elapsed_ms,
            r.detail
        );
    }
    if all_ok {
        Outcome::Ok
    } else {
        Outcome::Violated
    }
}
