//! Exact Dirichlet spectra of axis-aligned boxes and strictly separated
//! unions of boxes: strict eigenvalue counts, Riesz means, eigenvalue
//! enumeration, nudged closed counts, and eigenvalue bracketing.
//!
//! A box with sides L has eigenvalues π²·Σᵢ(aᵢ/Lᵢ)² over positive integer
//! vectors a. Every inclusion decision reduces to the predicate
//! Σ aᵢ²·wᵢ < t with wᵢ = 1/Lᵢ² exact rationals and t = λ/π² rounded once to
//! f64 and then treated as an exact rational threshold. A floating-point
//! screen with margin 1e-13·t (about 60× the worst-case accumulation error of
//! the f64 sum) decides all points far from the threshold; the rare boundary
//! cases are settled in exact rational arithmetic, so counts are
//! deterministic and reproducible across platforms.

use crate::error::{Error, Result};
use crate::geometry::{RatBox, RectilinearDomain};
use crate::rational::{rat_from_f64, rat_int, Rat};
use num::Zero;
use std::f64::consts::PI;

/// Relative nudge used to convert strict counts (λₖ < λ) into closed counts
/// (λₖ ≤ λ): exactly 2⁻⁴⁰.
pub const CLOSED_NUDGE: f64 = 9.094_947_017_729_282e-13;

/// Relative half-width of the floating screen around the threshold.
const SCREEN_MARGIN: f64 = 1e-13;

/// Hard cap on enumerated lattice points for value-returning sweeps.
const ENUM_LIMIT: u64 = 200_000_000;

struct SBox {
    /// wᵢ = 1/Lᵢ² as f64 (screen only).
    w: Vec<f64>,
    /// wᵢ exact.
    w_rat: Vec<Rat>,
    /// Σᵢ wᵢ — the ground-state sum.
    w_sum: f64,
}

/// Exact spectral oracle for a domain whose spectrum is a direct sum of box
/// spectra.
pub struct Spectrum {
    n: usize,
    boxes: Vec<SBox>,
}

/// Sorted eigenvalues below a threshold, possibly cut off at a resource cap.
#[derive(Debug, Clone)]
pub struct EigenStream {
    pub values: Vec<f64>,
    /// When set, enumeration stopped at the cap and `values` is not
    /// necessarily the complete (or lowest) part of the spectrum.
    pub truncated: bool,
}

fn sbox_from(b: &RatBox) -> SBox {
    let n = b.n();
    let mut w = Vec::with_capacity(n);
    let mut w_rat = Vec::with_capacity(n);
    for a in 0..n {
        let side = b.sides()[a].clone();
        let sq = &side * &side;
        w_rat.push(rat_int(1) / sq);
        let sf = crate::rational::rat_to_f64(&side);
        w.push(1.0 / (sf * sf));
    }
    let w_sum = w.iter().sum();
    SBox { w, w_rat, w_sum }
}

impl Spectrum {
    /// Build the oracle for a domain. Fails with a typed error when the
    /// domain's spectrum is not an exact direct sum of box spectra: removed
    /// cubes, or boxes whose closures touch (the touching faces would carry
    /// spurious Dirichlet conditions relative to the geometric domain).
    pub fn try_new(domain: &RectilinearDomain) -> Result<Spectrum> {
        if !domain.removed().is_empty() {
            return Err(Error::no_spectrum(
                "domains with removed cubes have no closed-form spectrum",
            ));
        }
        let bs = domain.boxes();
        for (i, a) in bs.iter().enumerate() {
            for b in bs.iter().skip(i + 1) {
                if a.closed_overlaps(b) {
                    return Err(Error::no_spectrum(
                        "boxes with touching closures do not split the spectrum \
                         into a direct sum; separate the boxes",
                    ));
                }
            }
        }
        Ok(Spectrum {
            n: domain.n(),
            boxes: bs.iter().map(sbox_from).collect(),
        })
    }

    /// Single box with the given f64 sides (exact dyadic rationals).
    pub fn from_sides(sides: &[f64]) -> Result<Spectrum> {
        let b = RatBox::from_sides_f64(sides)?;
        Ok(Spectrum {
            n: b.n(),
            boxes: vec![sbox_from(&b)],
        })
    }

    pub fn from_box(b: &RatBox) -> Spectrum {
        Spectrum {
            n: b.n(),
            boxes: vec![sbox_from(b)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Smallest eigenvalue of the domain.
    pub fn lowest_eigenvalue(&self) -> f64 {
        self.boxes
            .iter()
            .map(|b| b.w_sum * PI * PI)
            .fold(f64::INFINITY, f64::min)
    }

    /// Strict count: #{k : λₖ < λ}.
    pub fn count(&self, lambda: f64) -> Result<u64> {
        if !lambda.is_finite() {
            return Err(Error::invalid("count threshold must be finite"));
        }
        if lambda <= 0.0 {
            return Ok(0);
        }
        let t = lambda / (PI * PI);
        let t_rat = rat_from_f64(t)?;
        let margin = SCREEN_MARGIN * t;
        let mut total: u64 = 0;
        for b in &self.boxes {
            total += Counter {
                sb: b,
                t,
                margin,
                t_rat: &t_rat,
            }
            .count();
        }
        Ok(total)
    }

    /// Closed count: #{k : λₖ ≤ λ}, via the fixed relative nudge 2⁻⁴⁰.
    pub fn count_closed(&self, lambda: f64) -> Result<u64> {
        self.count(lambda * (1.0 + CLOSED_NUDGE))
    }

    /// Riesz mean Σₖ (1 − λₖ/λ)₊ᵖ for p ≥ 0 (p = 0 is the strict count).
    pub fn riesz_mean(&self, p: f64, lambda: f64) -> Result<f64> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::invalid("Riesz order must be a finite p ≥ 0"));
        }
        if p == 0.0 {
            return Ok(self.count(lambda)? as f64);
        }
        if !lambda.is_finite() {
            return Err(Error::invalid("Riesz threshold must be finite"));
        }
        if lambda <= 0.0 {
            return Ok(0.0);
        }
        let t = lambda / (PI * PI);
        let t_rat = rat_from_f64(t)?;
        let margin = SCREEN_MARGIN * t;
        let mut total = 0.0;
        let mut budget = ENUM_LIMIT;
        for b in &self.boxes {
            let mut acc = 0.0;
            Counter {
                sb: b,
                t,
                margin,
                t_rat: &t_rat,
            }
            .for_each_point(&mut budget, &mut |s| {
                acc += ((1.0 - s / t).max(0.0)).powf(p);
            })?;
            total += acc;
        }
        Ok(total)
    }

    /// All eigenvalues strictly below `lambda`, sorted ascending with
    /// multiplicity, up to `cap` values.
    pub fn eigenvalue_stream(&self, lambda: f64, cap: usize) -> Result<EigenStream> {
        if !lambda.is_finite() {
            return Err(Error::invalid("stream threshold must be finite"));
        }
        if lambda <= 0.0 {
            return Ok(EigenStream {
                values: Vec::new(),
                truncated: false,
            });
        }
        let t = lambda / (PI * PI);
        let t_rat = rat_from_f64(t)?;
        let margin = SCREEN_MARGIN * t;
        let mut values: Vec<f64> = Vec::new();
        let mut truncated = false;
        let mut budget = ENUM_LIMIT;
        for b in &self.boxes {
            let res = Counter {
                sb: b,
                t,
                margin,
                t_rat: &t_rat,
            }
            .for_each_point(&mut budget, &mut |s| {
                if values.len() <= cap {
                    values.push(s * PI * PI);
                }
            });
            match res {
                Ok(()) => {}
                Err(Error::ResourceLimit(_)) => {
                    truncated = true;
                    break;
                }
                Err(e) => return Err(e),
            }
            if values.len() > cap {
                truncated = true;
                values.truncate(cap);
                break;
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EigenStream { values, truncated })
    }

    /// Bracket (a, b) with a ≤ λ* < b around the smallest eigenvalue λ*
    /// strictly above `mu`, tightened to relative width ~1e-13.
    pub fn next_eigenvalue_above(&self, mu: f64) -> Result<(f64, f64)> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::invalid("bracket base must be finite and nonnegative"));
        }
        let target = self.count_closed(mu)?;
        let lowest = self.lowest_eigenvalue();
        let mut a = mu.max(0.0);
        let mut b = (mu.max(lowest * 0.5)).max(1e-300) * 2.0;
        let mut grow = 0;
        while self.count(b)? <= target {
            a = b;
            b *= 2.0;
            grow += 1;
            if grow > 2100 {
                return Err(Error::resource("no eigenvalue found above the base"));
            }
        }
        for _ in 0..200 {
            if b - a <= a.max(1.0) * 1e-13 {
                break;
            }
            let mid = 0.5 * (a + b);
            if self.count(mid)? > target {
                b = mid;
            } else {
                a = mid;
            }
        }
        Ok((a, b))
    }
}

/// Eigenvalue of a single box at the given positive index vector.
pub fn box_eigenvalue(sides: &[f64], index: &[u64]) -> Result<f64> {
    if sides.len() != index.len() || sides.is_empty() {
        return Err(Error::invalid("index and sides must match and be nonempty"));
    }
    if index.iter().any(|&k| k == 0) {
        return Err(Error::invalid("mode indices are 1-based positive integers"));
    }
    if sides.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::invalid("sides must be positive and finite"));
    }
    let s: f64 = sides
        .iter()
        .zip(index)
        .map(|(&l, &k)| {
            let r = k as f64 / l;
            r * r
        })
        .sum();
    Ok(s * PI * PI)
}

/// Per-box lattice walker sharing the hybrid exact/screened predicate.
struct Counter<'a> {
    sb: &'a SBox,
    t: f64,
    margin: f64,
    t_rat: &'a Rat,
}

impl<'a> Counter<'a> {
    /// Exact predicate: Σ idx²·w (+ b²·w_last) < t, in rational arithmetic.
    fn exact_lt(&self, idx: &[u64], last_axis: usize, b: u64) -> bool {
        let mut s = Rat::zero();
        for (i, &a) in idx.iter().enumerate() {
            let a2 = rat_int(a as i64) * rat_int(a as i64);
            s += a2 * &self.sb.w_rat[i];
        }
        let b2 = rat_int(b as i64) * rat_int(b as i64);
        s += b2 * &self.sb.w_rat[last_axis];
        s < *self.t_rat
    }

    /// Hybrid inclusion predicate for the point (idx…, b) where b rides the
    /// last axis.
    fn included(&self, prefix: f64, idx: &[u64], last_axis: usize, b: u64) -> bool {
        let s = prefix + (b as f64) * (b as f64) * self.sb.w[last_axis];
        if s < self.t - self.margin {
            return true;
        }
        if s > self.t + self.margin {
            return false;
        }
        self.exact_lt(idx, last_axis, b)
    }

    /// Number of lattice points with Σ aᵢ²wᵢ < t, via per-column closed forms
    /// on the last axis fixed up against the hybrid predicate.
    fn count(&self) -> u64 {
        let n = self.sb.w.len();
        let mut idx: Vec<u64> = Vec::with_capacity(n.saturating_sub(1));
        self.count_rec(0, 0.0, &mut idx)
    }

    fn count_rec(&self, axis: usize, prefix: f64, idx: &mut Vec<u64>) -> u64 {
        let n = self.sb.w.len();
        if axis == n - 1 {
            return self.column_count(prefix, idx, axis);
        }
        let mut total = 0u64;
        let w = self.sb.w[axis];
        let mut a: u64 = 1;
        loop {
            let p2 = prefix + (a as f64) * (a as f64) * w;
            if p2 > self.t + self.margin {
                break;
            }
            idx.push(a);
            total += self.count_rec(axis + 1, p2, idx);
            idx.pop();
            a += 1;
        }
        total
    }

    /// Largest b ≥ 0 with (idx…, b) included, assuming monotonicity in b.
    fn column_count(&self, prefix: f64, idx: &[u64], axis: usize) -> u64 {
        let w = self.sb.w[axis];
        let rem = self.t - prefix;
        let mut b: u64 = if rem > 0.0 { (rem / w).sqrt() as u64 } else { 0 };
        let mut steps = 0;
        while self.included(prefix, idx, axis, b + 1) {
            b += 1;
            steps += 1;
            assert!(steps < 64, "column fix-up runaway");
        }
        while b > 0 && !self.included(prefix, idx, axis, b) {
            b -= 1;
            steps += 1;
            assert!(steps < 64, "column fix-up runaway");
        }
        b
    }

    /// Visit the squared-frequency sum s = Σ aᵢ²wᵢ of every included lattice
    /// point, in unspecified order.
    fn for_each_point(
        &self,
        budget: &mut u64,
        f: &mut impl FnMut(f64),
    ) -> Result<()> {
        let n = self.sb.w.len();
        let mut idx: Vec<u64> = Vec::with_capacity(n.saturating_sub(1));
        self.visit_rec(0, 0.0, &mut idx, budget, f)
    }

    fn visit_rec(
        &self,
        axis: usize,
        prefix: f64,
        idx: &mut Vec<u64>,
        budget: &mut u64,
        f: &mut impl FnMut(f64),
    ) -> Result<()> {
        let n = self.sb.w.len();
        let w = self.sb.w[axis];
        if axis == n - 1 {
            let bmax = self.column_count(prefix, idx, axis);
            if *budget < bmax {
                return Err(Error::resource("lattice enumeration exceeds the cap"));
            }
            *budget -= bmax;
            for b in 1..=bmax {
                f(prefix + (b as f64) * (b as f64) * w);
            }
            return Ok(());
        }
        let mut a: u64 = 1;
        loop {
            let p2 = prefix + (a as f64) * (a as f64) * w;
            if p2 > self.t + self.margin {
                break;
            }
            idx.push(a);
            let r = self.visit_rec(axis + 1, p2, idx, budget, f);
            idx.pop();
            r?;
            a += 1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Independent naive oracle: enumerate the full lattice rectangle and
    /// decide every point in exact rational arithmetic against t = fl(λ/π²).
    fn count_naive(sides_rat: &[Rat], lambda: f64) -> u64 {
        if lambda <= 0.0 {
            return 0;
        }
        let t = rat_from_f64(lambda / (PI * PI)).unwrap();
        let w: Vec<Rat> = sides_rat.iter().map(|l| rat_int(1) / (l * l)).collect();
        let n = w.len();
        // Upper index bound per axis: a² w < t ⇒ a ≤ ceil(sqrt(t/w)).
        let bound: Vec<u64> = w
            .iter()
            .map(|wi| {
                let r = crate::rational::rat_to_f64(&(&t / wi));
                r.sqrt().ceil() as u64 + 1
            })
            .collect();
        let mut idx = vec![1u64; n];
        let mut cnt = 0u64;
        'outer: loop {
            let mut s = Rat::zero();
            for i in 0..n {
                s += rat_int((idx[i] * idx[i]) as i64) * &w[i];
            }
            if s < t {
                cnt += 1;
            }
            for i in (0..n).rev() {
                idx[i] += 1;
                if idx[i] <= bound[i] {
                    continue 'outer;
                }
                idx[i] = 1;
            }
            break;
        }
        cnt
    }

    #[test]
    fn unit_square_small_counts() {
        let s = Spectrum::from_sides(&[1.0, 1.0]).unwrap();
        // Eigenvalues: 2π² ≈ 19.74, 5π² ≈ 49.35 (×2), 8π² ≈ 78.96, …
        assert_eq!(s.count(19.0).unwrap(), 0);
        assert_eq!(s.count(20.0).unwrap(), 1);
        assert_eq!(s.count(49.0).unwrap(), 1);
        assert_eq!(s.count(50.0).unwrap(), 3);
        assert_eq!(s.count(79.0).unwrap(), 4);
    }

    #[test]
    fn strict_versus_closed_at_an_eigenvalue() {
        let s = Spectrum::from_sides(&[1.0, 1.0]).unwrap();
        // λ = 2·fl(π²) makes t exactly 2: the ground state is excluded by the
        // strict count and included by the closed count.
        let lambda = 2.0 * PI * PI;
        assert_eq!(s.count(lambda).unwrap(), 0);
        assert_eq!(s.count_closed(lambda).unwrap(), 1);
    }

    #[test]
    fn interval_counts_are_floors() {
        let s = Spectrum::from_sides(&[1.0]).unwrap();
        // t = 100.5 → a ≤ 10.
        assert_eq!(s.count(100.5 * PI * PI).unwrap(), 10);
        assert_eq!(s.count(0.5 * PI * PI).unwrap(), 0);
        // Interval of length 2: eigenvalues (aπ/2)², t·4 modes.
        let s2 = Spectrum::from_sides(&[2.0]).unwrap();
        assert_eq!(s2.count(100.5 * PI * PI).unwrap(), 20);
    }

    #[test]
    fn rectangle_low_modes() {
        let s = Spectrum::from_sides(&[2.0, 1.0]).unwrap();
        // Sums a²/4 + b²: 1.25, 2, 3.25, 4.25, 5 (two ways: (4,1) and (2,2)), …
        assert_eq!(s.count(5.0 * PI * PI * (1.0 - 1e-12)).unwrap(), 4);
        assert_eq!(s.count_closed(5.0 * PI * PI).unwrap(), 6);
    }

    #[test]
    fn separated_union_counts_add() {
        use crate::geometry::{RatBox, RectilinearDomain};
        let a = RatBox::new(vec![rat(0, 1)], vec![rat(1, 1)]).unwrap();
        let b = RatBox::new(vec![rat(2, 1)], vec![rat(1, 2)]).unwrap();
        let d = RectilinearDomain::new(vec![a, b], vec![]).unwrap();
        let s = Spectrum::try_new(&d).unwrap();
        // Interval 1: a² < 10 → 3 modes; interval 1/2: 4a² < 10 → 1 mode.
        assert_eq!(s.count(10.0 * PI * PI).unwrap(), 4);
    }

    #[test]
    fn touching_boxes_have_no_exact_spectrum() {
        use crate::geometry::{RatBox, RectilinearDomain};
        let a = RatBox::new(vec![rat(0, 1), rat(0, 1)], vec![rat(1, 1), rat(1, 1)]).unwrap();
        let b = RatBox::new(vec![rat(1, 1), rat(0, 1)], vec![rat(1, 1), rat(1, 1)]).unwrap();
        let d = RectilinearDomain::new(vec![a, b], vec![]).unwrap();
        assert!(matches!(
            Spectrum::try_new(&d),
            Err(Error::NoExactSpectrum(_))
        ));
        let sq = RatBox::new(vec![rat(0, 1), rat(0, 1)], vec![rat(4, 1), rat(4, 1)]).unwrap();
        let hole = RatBox::new(vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]).unwrap();
        let dh = RectilinearDomain::new(vec![sq], vec![hole]).unwrap();
        assert!(matches!(
            Spectrum::try_new(&dh),
            Err(Error::NoExactSpectrum(_))
        ));
    }

    #[test]
    fn fast_counter_matches_naive_oracle() {
        let sides2 = [rat(1, 1), rat(1, 1)];
        let s2 = Spectrum::from_sides(&[1.0, 1.0]).unwrap();
        for lambda in [10.0, 47.0, 100.0, 333.3, 1000.0, 5000.0] {
            assert_eq!(
                s2.count(lambda).unwrap(),
                count_naive(&sides2, lambda),
                "2D λ={lambda}"
            );
        }
        let sides3 = [rat(3, 2), rat(1, 1), rat(1, 2)];
        let s3 = Spectrum::from_sides(&[1.5, 1.0, 0.5]).unwrap();
        for lambda in [50.0, 200.0, 537.0, 1500.0] {
            assert_eq!(
                s3.count(lambda).unwrap(),
                count_naive(&sides3, lambda),
                "3D λ={lambda}"
            );
        }
    }

    #[test]
    fn counts_scale_exactly_under_dyadic_dilation() {
        // Doubling all sides maps the spectrum λ → λ/4, and t scales by an
        // exact power of two, so counts agree exactly.
        let s1 = Spectrum::from_sides(&[1.0, 0.5]).unwrap();
        let s2 = Spectrum::from_sides(&[2.0, 1.0]).unwrap();
        for lambda in [15.0, 77.0, 400.0, 2219.5] {
            assert_eq!(
                s1.count(lambda).unwrap(),
                s2.count(lambda / 4.0).unwrap(),
                "λ={lambda}"
            );
        }
    }

    #[test]
    fn riesz_zero_is_count_and_riesz_one_partial_sums() {
        let s = Spectrum::from_sides(&[1.0]).unwrap();
        let lambda = 30.0 * PI * PI;
        assert_eq!(s.riesz_mean(0.0, lambda).unwrap(), 5.0);
        // Σ_{k≤5} (1 − k²/30) = 5 − 55/30.
        let r1 = s.riesz_mean(1.0, lambda).unwrap();
        assert!((r1 - (5.0 - 55.0 / 30.0)).abs() < 1e-9, "r1={r1}");
        let rh = s.riesz_mean(0.5, lambda).unwrap();
        let direct: f64 = (1..=5)
            .map(|k| (1.0 - (k * k) as f64 / 30.0).sqrt())
            .sum();
        assert!((rh - direct).abs() < 1e-9);
    }

    #[test]
    fn eigenvalue_stream_sorted_and_complete() {
        let s = Spectrum::from_sides(&[1.0, 1.0]).unwrap();
        let lambda = 500.0;
        let stream = s.eigenvalue_stream(lambda, 10_000).unwrap();
        assert!(!stream.truncated);
        assert_eq!(stream.values.len() as u64, s.count(lambda).unwrap());
        assert!(stream.values.windows(2).all(|w| w[0] <= w[1]));
        // First three: 2π², 5π², 5π².
        assert!((stream.values[0] - 2.0 * PI * PI).abs() < 1e-9);
        assert!((stream.values[1] - 5.0 * PI * PI).abs() < 1e-9);
        assert!((stream.values[2] - 5.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn bracket_next_eigenvalue() {
        let s = Spectrum::from_sides(&[1.0, 1.0]).unwrap();
        let (a, b) = s.next_eigenvalue_above(20.0).unwrap();
        let target = 5.0 * PI * PI;
        assert!(a <= target && target < b, "bracket ({a}, {b})");
        assert!(b - a < 1e-8 * target);
        // From below the ground state.
        let (a0, b0) = s.next_eigenvalue_above(0.0).unwrap();
        let ground = 2.0 * PI * PI;
        assert!(a0 <= ground && ground < b0);
    }

    #[test]
    fn box_eigenvalue_values() {
        let v = box_eigenvalue(&[2.0, 1.0], &[4, 1]).unwrap();
        assert!((v - 5.0 * PI * PI).abs() < 1e-12);
        assert!(box_eigenvalue(&[1.0], &[0]).is_err());
        assert!(box_eigenvalue(&[1.0, 1.0], &[1]).is_err());
    }

    #[test]
    fn count_monotone_in_lambda() {
        let s = Spectrum::from_sides(&[1.5, 0.75]).unwrap();
        let mut prev = 0;
        for k in 1..200 {
            let c = s.count(k as f64 * 7.3).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }
}
