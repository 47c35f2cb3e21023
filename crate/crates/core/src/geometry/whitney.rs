//! Dyadic interior decompositions: a family of axis-aligned dyadic cubes with
//! disjoint interiors inside the domain, each cube's side comparable to its
//! distance from the complement (√n·ℓ ≤ dist ≤ 4√n·ℓ). Used to certify a
//! lower bound on the inner radius and to sum per-cube eigenvalue-count lower
//! bounds over the interior.
//!
//! All predicates are evaluated on integer-scaled coordinates, so emission
//! decisions and the property checks are exact.

use super::{IBox, RectilinearDomain};
use crate::error::{Error, Result};
use crate::rational::{rat_pow2, rat_to_f64, Rat};
use num::bigint::BigInt;
use num::ToPrimitive;
use std::collections::BTreeMap;

/// Hard cap on emitted cubes.
const CUBE_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, Copy)]
pub struct WhitneyOptions {
    /// Dyadic refinement levels below the root cube.
    pub depth: u32,
}

impl Default for WhitneyOptions {
    fn default() -> Self {
        WhitneyOptions { depth: 10 }
    }
}

/// One cube: scaled lower corner and generation (0 = root size).
#[derive(Debug, Clone)]
pub(crate) struct WCube {
    pub lo: Vec<i64>,
    pub gen: u32,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct GenSummary {
    /// Refinement level below the root.
    pub level: u32,
    /// True cube side at this level.
    pub side: f64,
    pub count: u64,
}

/// Scaled geometric context shared by construction and checks.
pub(crate) struct WScaled {
    pub n: usize,
    /// Root side in working-scale integer units.
    pub base_side_w: i64,
    pub mar_lo: Vec<i64>,
    pub mar_hi: Vec<i64>,
    /// Merged complement pieces inside the bounding rectangle (working scale).
    pub comp: Vec<IBox>,
    /// Merged interior boxes (working scale).
    pub in_boxes: Vec<IBox>,
    /// Working-scale units per true unit.
    pub units_per_one: f64,
}

pub struct WhitneyDecomposition {
    pub n: usize,
    /// True side of the root cube (a power of two at least the diameter).
    pub root_side: f64,
    pub depth: u32,
    /// True when some cube at the refinement floor still met the domain and
    /// was dropped rather than subdivided.
    pub truncated: bool,
    pub per_generation: Vec<GenSummary>,
    pub cube_count: usize,
    /// Total volume of emitted cubes.
    pub covered_volume: f64,
    /// Exact domain volume, for reference.
    pub domain_volume: f64,
    /// Certified lower bound on the inner radius: the largest exactly-computed
    /// distance from an emitted cube center to the complement. It dominates
    /// √n times the largest emitted side by the emission predicate.
    pub r_in_lower: f64,
    pub largest_side: f64,
    pub smallest_side: f64,
    /// Side length at the refinement floor (uncovered points lie within
    /// 5√n times this of the boundary).
    pub floor_side: f64,
    pub(crate) cubes: Vec<WCube>,
    pub(crate) scaled: WScaled,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct WhitneyReport {
    /// Human-readable property violations (empty when all checks pass).
    pub violations: Vec<String>,
    pub cubes_checked: usize,
    pub pairs_checked: u64,
    /// Largest number of touching neighbours over all cubes.
    pub max_touching_degree: usize,
    /// Whether emitted cubes plus the boundary tube at the refinement floor
    /// account for the whole volume.
    pub coverage_ok: bool,
    pub covered_volume: f64,
    pub coverage_radius: f64,
    /// For single boxes only: whether the largest side lies in
    /// [r_in/(5√n), r_in/√n] (exact integer check).
    pub k0_bracket: Option<bool>,
    pub ok: bool,
}

fn scaled_context(domain: &RectilinearDomain, depth: u32) -> Result<(WScaled, i32, u32)> {
    let n = domain.n();
    let g = domain.grid()?;
    // Root exponent: smallest m with 2^m ≥ diameter (exact rational compare),
    // so the root cube always fails the emission predicate and covers the
    // closure when anchored at the rectangle corner.
    let merged_in = g.merged_boxes(true, false);
    let mut diam_sq_scaled: i128 = 0;
    for (i, a) in merged_in.iter().enumerate() {
        for b in merged_in.iter().skip(i) {
            diam_sq_scaled = diam_sq_scaled.max(a.max_pair_span_sq(b));
        }
    }
    let diam_sq = Rat::new(BigInt::from(diam_sq_scaled), &g.scale * &g.scale);
    let mut m: i32 = -120;
    while rat_pow2(2 * m as i64) < diam_sq {
        m += 1;
        if m > 120 {
            return Err(Error::resource("domain diameter out of range"));
        }
    }
    let q: u32 = if (depth as i32) > m {
        (depth as i32 - m) as u32
    } else {
        0
    };
    if q > 32 {
        return Err(Error::resource(
            "requested refinement is too deep relative to the coordinate scale",
        ));
    }
    // Working scale: grid scale × 2^q. All working coordinates must stay
    // small enough that squared distances fit i128 with room to spare.
    let base_side_big = BigInt::from(2).pow((m + q as i32).max(0) as u32) * &g.scale;
    let base_side_w = base_side_big
        .to_i64()
        .filter(|&v| v > 0 && v < (1i64 << 55))
        .ok_or_else(|| Error::resource("root cube side overflows the working scale"))?;
    let shift_i = |v: i128| -> Result<i64> {
        let w = v
            .checked_shl(q)
            .ok_or_else(|| Error::resource("coordinate overflow in working scale"))?;
        i64::try_from(w)
            .ok()
            .filter(|x| x.abs() < (1i64 << 56))
            .ok_or_else(|| Error::resource("coordinate overflow in working scale"))
    };
    let conv_box = |b: &IBox| -> Result<IBox> {
        Ok(IBox {
            lo: b
                .lo
                .iter()
                .map(|&v| shift_i(v).map(|x| x as i128))
                .collect::<Result<Vec<_>>>()?,
            hi: b
                .hi
                .iter()
                .map(|&v| shift_i(v).map(|x| x as i128))
                .collect::<Result<Vec<_>>>()?,
        })
    };
    let comp = g
        .merged_boxes(false, true)
        .iter()
        .map(conv_box)
        .collect::<Result<Vec<_>>>()?;
    let in_boxes = merged_in.iter().map(conv_box).collect::<Result<Vec<_>>>()?;
    let mar_lo = g
        .mar_lo
        .iter()
        .map(|&v| shift_i(v))
        .collect::<Result<Vec<_>>>()?;
    let mar_hi = g
        .mar_hi
        .iter()
        .map(|&v| shift_i(v))
        .collect::<Result<Vec<_>>>()?;
    let units_per_one = rat_to_f64(&Rat::from_integer(g.scale.clone())) * 2f64.powi(q as i32);
    Ok((
        WScaled {
            n,
            base_side_w,
            mar_lo,
            mar_hi,
            comp,
            in_boxes,
            units_per_one,
        },
        m,
        q,
    ))
}

/// Does the closed cube meet the open interior of any kept box?
fn meets_domain(sc: &WScaled, lo: &[i64], side: i64) -> bool {
    sc.in_boxes.iter().any(|b| {
        (0..sc.n).all(|a| (lo[a] as i128) < b.hi[a] && b.lo[a] < (lo[a] + side) as i128)
    })
}

/// Exact squared distance from the closed cube to the complement of the
/// domain (complement pieces inside the rectangle plus everything outside it).
fn cube_dist_sq(sc: &WScaled, lo: &[i64], side: i64) -> i128 {
    // Distance to the exterior of the bounding rectangle: the minimum linear
    // gap to any of the 2n bounding halfspaces, clamped at zero.
    let mut lin: i128 = i128::MAX;
    for a in 0..sc.n {
        lin = lin
            .min((lo[a] - sc.mar_lo[a]) as i128)
            .min((sc.mar_hi[a] - lo[a] - side) as i128);
    }
    let lin = lin.max(0);
    let mut best = lin * lin;
    for b in &sc.comp {
        let mut acc: i128 = 0;
        for a in 0..sc.n {
            let gap = (b.lo[a] - (lo[a] + side) as i128)
                .max(lo[a] as i128 - b.hi[a])
                .max(0);
            acc += gap * gap;
            if acc >= best {
                break;
            }
        }
        best = best.min(acc);
    }
    best
}

/// Emission predicate: n·ℓ² ≤ dist², with early exit.
fn emit_predicate(sc: &WScaled, lo: &[i64], side: i64) -> bool {
    let thr = sc.n as i128 * (side as i128) * (side as i128);
    // Rectangle exterior first.
    let mut lin: i128 = i128::MAX;
    for a in 0..sc.n {
        lin = lin
            .min((lo[a] - sc.mar_lo[a]) as i128)
            .min((sc.mar_hi[a] - lo[a] - side) as i128);
    }
    let lin = lin.max(0);
    if lin * lin < thr {
        return false;
    }
    for b in &sc.comp {
        let mut acc: i128 = 0;
        for a in 0..sc.n {
            let gap = (b.lo[a] - (lo[a] + side) as i128)
                .max(lo[a] as i128 - b.hi[a])
                .max(0);
            acc += gap * gap;
        }
        if acc < thr {
            return false;
        }
    }
    true
}

/// Exact squared distance (×4) from a cube center to the complement, using
/// doubled coordinates to keep centers integral.
fn center_dist_sq_x4(sc: &WScaled, lo: &[i64], side: i64) -> i128 {
    let c2: Vec<i128> = lo.iter().map(|&v| 2 * v as i128 + side as i128).collect();
    let mut lin: i128 = i128::MAX;
    for a in 0..sc.n {
        lin = lin
            .min(c2[a] - 2 * sc.mar_lo[a] as i128)
            .min(2 * sc.mar_hi[a] as i128 - c2[a]);
    }
    let lin = lin.max(0);
    let mut best = lin * lin;
    for b in &sc.comp {
        let mut acc: i128 = 0;
        for a in 0..sc.n {
            let gap = (2 * b.lo[a] - c2[a]).max(c2[a] - 2 * b.hi[a]).max(0);
            acc += gap * gap;
            if acc >= best {
                break;
            }
        }
        best = best.min(acc);
    }
    best
}

/// Build the decomposition down to the requested depth.
pub fn whitney(domain: &RectilinearDomain, opts: &WhitneyOptions) -> Result<WhitneyDecomposition> {
    let (sc, m, _q) = scaled_context(domain, opts.depth)?;
    let n = sc.n;
    let depth = opts.depth;
    let mut cubes: Vec<WCube> = Vec::new();
    let mut per_gen = vec![0u64; depth as usize + 1];
    let mut truncated = false;
    let mut stack: Vec<(Vec<i64>, u32)> = vec![(sc.mar_lo.clone(), 0)];
    while let Some((lo, gen)) = stack.pop() {
        let side = sc.base_side_w >> gen;
        if !meets_domain(&sc, &lo, side) {
            continue;
        }
        if emit_predicate(&sc, &lo, side) {
            per_gen[gen as usize] += 1;
            cubes.push(WCube { lo, gen });
            if cubes.len() > CUBE_LIMIT {
                return Err(Error::resource(format!(
                    "interior decomposition exceeds {CUBE_LIMIT} cubes; lower the depth"
                )));
            }
        } else if gen == depth {
            truncated = true;
        } else {
            let half = side >> 1;
            for k in 0..(1usize << n) {
                let child: Vec<i64> = (0..n)
                    .map(|a| lo[a] + if (k >> a) & 1 == 1 { half } else { 0 })
                    .collect();
                stack.push((child, gen + 1));
            }
        }
    }

    let side_true = |gen: u32| 2f64.powi(m - gen as i32);
    let per_generation: Vec<GenSummary> = per_gen
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(g, &c)| GenSummary {
            level: g as u32,
            side: side_true(g as u32),
            count: c,
        })
        .collect();
    let covered_volume: f64 = per_generation
        .iter()
        .map(|s| s.count as f64 * s.side.powi(n as i32))
        .sum();
    let domain_volume = rat_to_f64(&domain.volume_rat()?);

    // Inner-radius lower bound: best center distance over the three coarsest
    // populated generations (always including the largest cubes, so the bound
    // dominates √n times the largest side).
    let mut r_in_lower = 0.0;
    if let Some(gmin) = per_generation.first().map(|s| s.level) {
        let mut best_x4: i128 = 0;
        for c in &cubes {
            if c.gen <= gmin + 2 {
                let side = sc.base_side_w >> c.gen;
                best_x4 = best_x4.max(center_dist_sq_x4(&sc, &c.lo, side));
            }
        }
        r_in_lower = (best_x4 as f64).sqrt() / (2.0 * sc.units_per_one);
    }

    let largest_side = per_generation.first().map(|s| s.side).unwrap_or(0.0);
    let smallest_side = per_generation.last().map(|s| s.side).unwrap_or(0.0);
    Ok(WhitneyDecomposition {
        n,
        root_side: side_true(0),
        depth,
        truncated,
        per_generation,
        cube_count: cubes.len(),
        covered_volume,
        domain_volume,
        r_in_lower,
        largest_side,
        smallest_side,
        floor_side: side_true(depth),
        cubes,
        scaled: sc,
    })
}

/// Certified inner-radius lower bound for metrics: refine until at least one
/// cube is emitted.
pub(crate) fn r_in_lower(domain: &RectilinearDomain) -> Result<f64> {
    for depth in [6u32, 10, 14, 18, 22] {
        let w = whitney(domain, &WhitneyOptions { depth })?;
        if w.cube_count > 0 {
            return Ok(w.r_in_lower);
        }
    }
    Err(Error::resource(
        "no interior cube found at refinement depth 22; domain is too thin",
    ))
}

/// Verify the structural properties of a decomposition, exactly.
pub fn check_properties(
    domain: &RectilinearDomain,
    w: &WhitneyDecomposition,
) -> Result<WhitneyReport> {
    let sc = &w.scaled;
    let n = sc.n;
    let mut violations: Vec<String> = Vec::new();
    let push_violation = |v: &mut Vec<String>, s: String| {
        if v.len() < 20 {
            v.push(s);
        }
    };

    // Size-versus-distance property, both directions, exact.
    for c in &w.cubes {
        let side = sc.base_side_w >> c.gen;
        let d2 = cube_dist_sq(sc, &c.lo, side);
        let l2 = (side as i128) * (side as i128);
        if (n as i128) * l2 > d2 {
            push_violation(
                &mut violations,
                format!("cube at level {} violates √n·ℓ ≤ dist", c.gen),
            );
        }
        if d2 > 16 * (n as i128) * l2 {
            push_violation(
                &mut violations,
                format!("cube at level {} violates dist ≤ 4√n·ℓ", c.gen),
            );
        }
    }

    // Group cubes by generation, sorted for binary search.
    let mut by_gen: BTreeMap<u32, Vec<&WCube>> = BTreeMap::new();
    for c in &w.cubes {
        by_gen.entry(c.gen).or_default().push(c);
    }
    let mut sorted: BTreeMap<u32, Vec<Vec<i64>>> = BTreeMap::new();
    for (g, v) in &by_gen {
        let mut keys: Vec<Vec<i64>> = v.iter().map(|c| c.lo.clone()).collect();
        keys.sort();
        sorted.insert(*g, keys);
    }
    let gens: Vec<u32> = sorted.keys().copied().collect();

    // Touching-neighbour scan: for each cube, look up candidates in every
    // coarser-or-equal generation (each pair is found exactly once, from its
    // finer member). Positions at generation g form the lattice
    // mar_lo + ℓ(g)·ℤⁿ because all cubes descend from one root.
    let mut degree: BTreeMap<(u32, Vec<i64>), usize> = BTreeMap::new();
    let mut pairs_checked: u64 = 0;
    let mut max_gap_violations = 0u64;
    for c in &w.cubes {
        let side = sc.base_side_w >> c.gen;
        for &g2 in &gens {
            if g2 > c.gen {
                continue;
            }
            let side2 = sc.base_side_w >> g2;
            // Candidate lattice ranges per axis for touching cubes.
            let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(n);
            for a in 0..n {
                let rel = c.lo[a] - sc.mar_lo[a];
                let klo = (rel - side2).div_euclid(side2) + 1; // ceil((rel−ℓ')/ℓ')
                let klo = if (rel - side2).rem_euclid(side2) == 0 {
                    (rel - side2) / side2
                } else {
                    klo
                };
                let khi = (rel + side).div_euclid(side2);
                ranges.push((klo, khi));
            }
            let mut key = vec![0i64; n];
            let mut k = ranges.iter().map(|r| r.0).collect::<Vec<_>>();
            'cand: loop {
                for a in 0..n {
                    key[a] = sc.mar_lo[a] + k[a] * side2;
                }
                let same = g2 == c.gen && key == c.lo;
                let count_pair = if g2 == c.gen {
                    // Avoid double counting within a generation.
                    key.as_slice() > c.lo.as_slice()
                } else {
                    true
                };
                if !same && count_pair {
                    if let Ok(_) = sorted[&g2].binary_search(&key) {
                        pairs_checked += 1;
                        // Open-overlap check (interiors must be disjoint).
                        let open = (0..n).all(|a| {
                            key[a] < c.lo[a] + side && c.lo[a] < key[a] + side2
                        });
                        if open {
                            push_violation(
                                &mut violations,
                                format!(
                                    "cubes at levels {} and {} have overlapping interiors",
                                    c.gen, g2
                                ),
                            );
                        }
                        if c.gen - g2 > 2 {
                            max_gap_violations += 1;
                            push_violation(
                                &mut violations,
                                format!(
                                    "touching cubes differ by {} generations (levels {} and {})",
                                    c.gen - g2,
                                    c.gen,
                                    g2
                                ),
                            );
                        }
                        *degree.entry((c.gen, c.lo.clone())).or_default() += 1;
                        *degree.entry((g2, key.clone())).or_default() += 1;
                    }
                }
                // Odometer over candidate ranges.
                let mut a = n;
                loop {
                    if a == 0 {
                        break 'cand;
                    }
                    a -= 1;
                    k[a] += 1;
                    if k[a] <= ranges[a].1 {
                        break;
                    }
                    k[a] = ranges[a].0;
                }
            }
        }
    }
    let _ = max_gap_violations;
    let max_touching_degree = degree.values().copied().max().unwrap_or(0);
    let degree_cap = 12usize.pow(n as u32);
    if max_touching_degree > degree_cap {
        violations.push(format!(
            "a cube touches {max_touching_degree} neighbours (cap {degree_cap})"
        ));
    }

    // Coverage: emitted volume plus the interior boundary tube at the
    // refinement floor must account for the whole volume.
    let coverage_radius = 5.0 * (n as f64).sqrt() * w.floor_side;
    let vol = w.domain_volume;
    let tube = if coverage_radius > 0.0 {
        match super::tube::tube_volume(domain, coverage_radius, super::tube::TubeSide::Interior) {
            Ok(t) => t,
            Err(_) => vol, // radius at or above width: tube trivially covers
        }
    } else {
        0.0
    };
    let coverage_ok = w.covered_volume + tube >= vol * (1.0 - 1e-9);
    if !coverage_ok {
        violations.push(format!(
            "coverage gap: cubes {} + tube {} < volume {}",
            w.covered_volume, tube, vol
        ));
    }

    // Single boxes: largest side must land in [r_in/(5√n), r_in/√n], exactly.
    let k0_bracket = if domain.is_single_box() && !w.cubes.is_empty() {
        let min_side_w = sc.in_boxes[0]
            .lo
            .iter()
            .zip(&sc.in_boxes[0].hi)
            .map(|(l, h)| h - l)
            .min()
            .unwrap();
        let gmin = w.cubes.iter().map(|c| c.gen).min().unwrap();
        let lmax = (sc.base_side_w >> gmin) as i128;
        // r_in = min_side/2: bracket ⇔ min² ≤ 100·n·ℓ² and 4·n·ℓ² ≤ min².
        let ok_lo = min_side_w * min_side_w <= 100 * n as i128 * lmax * lmax;
        let ok_hi = 4 * n as i128 * lmax * lmax <= min_side_w * min_side_w;
        let ok = ok_lo && ok_hi;
        if !ok {
            violations.push("largest cube side outside the inner-radius bracket".into());
        }
        Some(ok)
    } else {
        None
    };

    let ok = violations.is_empty();
    Ok(WhitneyReport {
        violations,
        cubes_checked: w.cubes.len(),
        pairs_checked,
        max_touching_degree,
        coverage_ok,
        covered_volume: w.covered_volume,
        coverage_radius,
        k0_bracket,
        ok,
    })
}

/// Exact squared Euclidean distance from a closed box to the complement of
/// the domain.
pub fn box_to_complement_distance_sq(cube: &RatBox, domain: &RectilinearDomain) -> Result<Rat> {
    use num::Zero;
    if cube.n() != domain.n() {
        return Err(Error::invalid("box and domain dimensions differ"));
    }
    let n = domain.n();
    let g = domain.grid()?;
    let scale = Rat::from_integer(g.scale.clone());
    let to_rat = |v: i128| Rat::from_integer(BigInt::from(v)) / &scale;
    // Distance to the exterior of the bounding rectangle.
    let mut lin: Option<Rat> = None;
    for a in 0..n {
        for gap in [
            cube.lo(a) - to_rat(g.mar_lo[a]),
            to_rat(g.mar_hi[a]) - cube.hi(a),
        ] {
            lin = Some(match lin {
                None => gap,
                Some(cur) => {
                    if gap < cur {
                        gap
                    } else {
                        cur
                    }
                }
            });
        }
    }
    let lin = lin.unwrap().max(Rat::zero());
    let mut best = &lin * &lin;
    for piece in g.merged_boxes(false, true) {
        let mut acc = Rat::zero();
        for a in 0..n {
            let gap = (to_rat(piece.lo[a]) - cube.hi(a))
                .max(cube.lo(a) - to_rat(piece.hi[a]))
                .max(Rat::zero());
            acc += &gap * &gap;
        }
        if acc < best {
            best = acc;
        }
    }
    Ok(best)
}

/// Exact distance, rounded to f64.
pub fn box_to_complement_distance(cube: &RatBox, domain: &RectilinearDomain) -> Result<f64> {
    Ok(rat_to_f64(&box_to_complement_distance_sq(cube, domain)?).sqrt())
}

use super::RatBox;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metrics;
    use crate::rational::parse_rational;

    fn unit_square() -> RectilinearDomain {
        RectilinearDomain::from_box_sides(&[1.0, 1.0]).unwrap()
    }

    fn l_shape() -> RectilinearDomain {
        let a = RatBox::new(
            vec![parse_rational("0").unwrap(), parse_rational("0").unwrap()],
            vec![parse_rational("2").unwrap(), parse_rational("1").unwrap()],
        )
        .unwrap();
        let b = RatBox::new(
            vec![parse_rational("0").unwrap(), parse_rational("1").unwrap()],
            vec![parse_rational("1").unwrap(), parse_rational("1").unwrap()],
        )
        .unwrap();
        RectilinearDomain::new(vec![a, b], vec![]).unwrap()
    }

    #[test]
    fn unit_square_decomposition_properties() {
        let d = unit_square();
        let w = whitney(&d, &WhitneyOptions { depth: 8 }).unwrap();
        assert!(w.cube_count > 0);
        let report = check_properties(&d, &w).unwrap();
        assert!(report.ok, "violations: {:?}", report.violations);
        assert_eq!(report.k0_bracket, Some(true));
        // Largest emitted cube in the unit square has side 1/8 (hand argument:
        // side-1/4 cubes on the 1/4-lattice are at distance ≤ 1/4 < √2/4 from
        // the boundary; the centered side-1/8 cube reaches distance 3/8).
        assert!((w.largest_side - 0.125).abs() < 1e-15);
        // r̂ from centers: the best gen-4 center sits at (1/2 ± 1/16), giving
        // distance 7/16 ≥ √2·(1/8); r̂ must be in [√2/8, 1/2].
        assert!(w.r_in_lower >= (2f64).sqrt() / 8.0 - 1e-12);
        assert!(w.r_in_lower <= 0.5 + 1e-12);
    }

    #[test]
    fn deeper_refinement_improves_r_in_lower() {
        let d = unit_square();
        let shallow = whitney(&d, &WhitneyOptions { depth: 5 }).unwrap();
        let deep = whitney(&d, &WhitneyOptions { depth: 9 }).unwrap();
        assert!(deep.r_in_lower >= shallow.r_in_lower - 1e-15);
        assert!(deep.covered_volume > shallow.covered_volume);
        assert!(deep.covered_volume <= deep.domain_volume + 1e-12);
    }

    #[test]
    fn l_shape_decomposition_checks_pass() {
        let d = l_shape();
        let w = whitney(&d, &WhitneyOptions { depth: 9 }).unwrap();
        let report = check_properties(&d, &w).unwrap();
        assert!(report.ok, "violations: {:?}", report.violations);
        assert!(w.truncated, "fine levels near the boundary must be truncated");
        // The inscribed radius of the L-shape is 2 − √2 ≈ 0.586, attained by a
        // disk nestling diagonally into the reentrant corner (at (t, t) with
        // t = 2 − √2, the walls and the corner are equidistant). The certified
        // bound must stay below it; dyadic centers reach 3√2/8 here (the
        // emitted quarter cube [1/2, 3/4]² has center (5/8, 5/8), at distance
        // √2·3/8 from the corner and 5/8 from the walls).
        let true_inradius = 2.0 - 2f64.sqrt();
        assert!(w.r_in_lower <= true_inradius + 1e-12);
        let dyadic_best = 3.0 * 2f64.sqrt() / 8.0;
        assert!(
            (w.r_in_lower - dyadic_best).abs() < 1e-12,
            "r̂ = {}",
            w.r_in_lower
        );
    }

    #[test]
    fn metrics_r_in_union_flagged_and_bounded() {
        let d = l_shape();
        let m = metrics(&d).unwrap();
        assert!(!m.r_in_exact);
        // Certified lower bound: below the true inradius 2 − √2, above the
        // trivial quarter-width.
        assert!(m.r_in <= 2.0 - 2f64.sqrt() + 1e-12 && m.r_in > 0.25);
    }

    #[test]
    fn box_distance_examples() {
        use crate::rational::rat;
        let d = unit_square();
        // Cube [2/5, 3/5]²: distance 2/5 to the boundary, squared 4/25.
        let q = RatBox::new(
            vec![rat(2, 5), rat(2, 5)],
            vec![rat(1, 5), rat(1, 5)],
        )
        .unwrap();
        assert_eq!(box_to_complement_distance_sq(&q, &d).unwrap(), rat(4, 25));
        assert!((box_to_complement_distance(&q, &d).unwrap() - 0.4).abs() < 1e-15);
        // A box that sticks outside has distance 0.
        let out = RatBox::new(
            vec![rat(-1, 2), rat(0, 1)],
            vec![rat(1, 4), rat(1, 4)],
        )
        .unwrap();
        assert_eq!(
            box_to_complement_distance_sq(&out, &d).unwrap(),
            rat(0, 1)
        );
        // Corner-to-corner: cube near a reentrant corner of the L-shape.
        let l = l_shape();
        let q2 = RatBox::new(
            vec![rat(3, 2), rat(1, 2)],
            vec![rat(1, 4), rat(1, 4)],
        )
        .unwrap();
        // Nearest complement: the square [1,2]×[1,2] above; vertical gap 1/4,
        // no horizontal gap → distance 1/4.
        assert_eq!(
            box_to_complement_distance_sq(&q2, &l).unwrap(),
            rat(1, 16)
        );
    }

    #[test]
    fn square_with_hole_respects_hole_distance() {
        use crate::rational::rat;
        let outer = RatBox::from_sides_f64(&[4.0, 4.0]).unwrap();
        let hole = RatBox::new(vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]).unwrap();
        let d = RectilinearDomain::new(vec![outer], vec![hole]).unwrap();
        let w = whitney(&d, &WhitneyOptions { depth: 9 }).unwrap();
        let report = check_properties(&d, &w).unwrap();
        assert!(report.ok, "violations: {:?}", report.violations);
        // The ring has width 1 but its inscribed radius is 2 − √2: a disk can
        // nestle diagonally against an outer corner of the hole. The certified
        // lower bound must respect that and still beat the trivial
        // quarter-width.
        assert!(w.r_in_lower <= 2.0 - 2f64.sqrt() + 1e-12);
        assert!(w.r_in_lower > 0.25);
    }
}
