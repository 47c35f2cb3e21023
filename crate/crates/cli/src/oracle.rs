//! Brute-force reference oracles and reproducible random inputs.
//!
//! The counter here enumerates the integer lattice directly, with no closed
//! forms and no per-axis counting tricks, so it is an independent witness
//! for the fast counters. All randomness flows through a counter-based
//! generator keyed by an explicit seed; identical seeds give identical
//! inputs regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use weyl_certify_core::geometry::{RatBox, RectilinearDomain};
use weyl_certify_core::rational::{rat, Rat};

/// Counter-based generator for a (seed, stream) pair; distinct streams are
/// independent, so parallel call sites can split reproducibly.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Naive Dirichlet eigenvalue count for a box: enumerate every lattice tuple
/// (k₁, …, kₙ), kᵢ ≥ 1, and compare Σ (kᵢπ/Lᵢ)² against λ, strictly below or
/// closed. Exponential in n by design — this is the reference, not the tool.
pub fn naive_box_count(sides: &[f64], lambda: f64, closed: bool) -> u64 {
    fn rec(sides: &[f64], lambda: f64, acc: f64, closed: bool) -> u64 {
        let unit = PI / sides[0];
        let mut total = 0u64;
        let mut k = 1u64;
        loop {
            let term = (k as f64 * unit) * (k as f64 * unit);
            let s = acc + term;
            if sides.len() == 1 {
                let admissible = if closed { s <= lambda } else { s < lambda };
                if !admissible {
                    break;
                }
                total += 1;
            } else {
                // Deeper axes add their positive ground terms, so a partial
                // sum at or beyond λ can never complete to an admissible
                // tuple, closed or strict.
                if s >= lambda {
                    break;
                }
                total += rec(&sides[1..], lambda, s, closed);
            }
            k += 1;
        }
        total
    }
    if sides.is_empty() || lambda <= 0.0 {
        return 0;
    }
    rec(sides, lambda, 0.0, closed)
}

/// A value on the 1/8 grid inside [lo, hi] (grid keeps exact-arithmetic
/// geometry cheap; the endpoints are assumed to be on the grid themselves).
pub fn grid_value(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let steps = ((hi - lo) * 8.0).round() as i64;
    let pick = r.gen_range(0..=steps);
    lo + pick as f64 / 8.0
}

fn rat8(x: f64) -> Rat {
    rat((x * 8.0).round() as i64, 8)
}

/// Random box sides drawn from the 1/8 grid in [lo, hi].
pub fn random_sides(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| grid_value(r, lo, hi)).collect()
}

/// Single box at the origin with the given sides.
pub fn box_domain(sides: &[f64]) -> RectilinearDomain {
    let b = RatBox::new(
        sides.iter().map(|_| rat(0, 1)).collect(),
        sides.iter().map(|&s| rat8(s)).collect(),
    )
    .expect("grid sides are positive");
    RectilinearDomain::new(vec![b], vec![]).expect("a single box is always valid")
}

/// Separated union of `count` boxes strung along the first axis with gaps of
/// at least 1/4, so the union has an exact spectrum.
pub fn random_union(r: &mut ChaCha8Rng, n: usize, count: usize) -> RectilinearDomain {
    let mut boxes = Vec::with_capacity(count);
    let mut cursor = 0.0f64;
    for _ in 0..count {
        let sides = random_sides(r, n, 0.5, 1.5);
        let mut origin = vec![0.0f64; n];
        origin[0] = cursor;
        cursor += sides[0] + grid_value(r, 0.25, 0.75);
        let b = RatBox::new(
            origin.iter().map(|&x| rat8(x)).collect(),
            sides.iter().map(|&s| rat8(s)).collect(),
        )
        .expect("grid boxes are valid");
        boxes.push(b);
    }
    RectilinearDomain::new(boxes, vec![]).expect("separated boxes are valid")
}

/// Random rectilinear domain for decomposition checks: a box, a touching
/// two-box staircase, a separated union, or a box with an interior box
/// removed. Coordinates live on the 1/8 grid inside [0, 4]ⁿ.
pub fn random_rectilinear(r: &mut ChaCha8Rng, n: usize) -> RectilinearDomain {
    match r.gen_range(0..4u32) {
        0 => box_domain(&random_sides(r, n, 0.5, 3.0)),
        1 => {
            // Touching staircase: the second box sits on top of the first
            // along the last axis and shares part of its footprint.
            let a_sides = random_sides(r, n, 1.0, 2.0);
            let mut b_sides = random_sides(r, n, 0.5, 1.0);
            for ax in 0..n - 1 {
                b_sides[ax] = b_sides[ax].min(a_sides[ax]);
            }
            let mut b_origin = vec![0.0f64; n];
            b_origin[n - 1] = a_sides[n - 1];
            let a = RatBox::new(
                vec![rat(0, 1); n],
                a_sides.iter().map(|&s| rat8(s)).collect(),
            )
            .unwrap();
            let b = RatBox::new(
                b_origin.iter().map(|&x| rat8(x)).collect(),
                b_sides.iter().map(|&s| rat8(s)).collect(),
            )
            .unwrap();
            RectilinearDomain::new(vec![a, b], vec![]).expect("staircase is valid")
        }
        2 => random_union(r, n, 2),
        _ => {
            // Box with a strictly interior removed cube (removed pieces
            // must be cubes).
            let outer = random_sides(r, n, 2.0, 3.5);
            let hole_origin: Vec<f64> = outer.iter().map(|_| 0.5).collect();
            let side = outer
                .iter()
                .fold(f64::INFINITY, |acc, &s| acc.min((s - 1.0).min(1.5).max(0.25)));
            let hole_sides: Vec<f64> = vec![side; n];
            let ob = RatBox::new(
                vec![rat(0, 1); n],
                outer.iter().map(|&s| rat8(s)).collect(),
            )
            .unwrap();
            let hb = RatBox::new(
                hole_origin.iter().map(|&x| rat8(x)).collect(),
                hole_sides.iter().map(|&s| rat8(s)).collect(),
            )
            .unwrap();
            RectilinearDomain::new(vec![ob], vec![hb]).expect("holed box is valid")
        }
    }
}
