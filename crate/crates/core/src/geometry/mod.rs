//! Rectilinear domains — finite unions of axis-aligned boxes, optionally with
//! removed axis-aligned cubes — and the exact geometric scalars consumed by the
//! bound formulas: volume, surface area, width, diameter, inner radius, the
//! boundary-tube constant, and the minimal admissible bounding rectangle.
//!
//! All set arithmetic happens on the rational coordinate grid induced by the
//! input endpoints. Coordinates are cleared of denominators once (multiplied
//! by the least common denominator) and handled as `i128` integers from then
//! on, so every containment, volume, surface, and distance predicate is exact.

pub mod tube;
pub mod whitney;

use crate::error::{Error, Result};
use crate::rational::{rat_from_f64, rat_int, rat_to_f64, Rat};
use num::bigint::BigInt;
use num::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

/// Largest absolute scaled coordinate the integer-grid engine accepts.
///
/// Keeping scaled coordinates below 2^30 guarantees that cell-volume products
/// fit in `i128` up to dimension 4 and that squared distances fit with a wide
/// margin in every supported dimension.
const COORD_LIMIT: i128 = 1 << 30;

/// Hard cap on grid cells so a pathological input cannot exhaust memory.
const CELL_LIMIT: usize = 8_000_000;

/// Axis-aligned open box with exact rational corners.
#[derive(Debug, Clone, PartialEq)]
pub struct RatBox {
    origin: Vec<Rat>,
    sides: Vec<Rat>,
    his: Vec<Rat>,
}

impl RatBox {
    pub fn new(origin: Vec<Rat>, sides: Vec<Rat>) -> Result<Self> {
        if origin.is_empty() || origin.len() != sides.len() {
            return Err(Error::invalid(
                "box needs matching, nonempty origin and side lists",
            ));
        }
        if sides.iter().any(|s| *s <= Rat::zero()) {
            return Err(Error::invalid("box sides must be positive"));
        }
        let his = origin.iter().zip(&sides).map(|(o, s)| o + s).collect();
        Ok(RatBox { origin, sides, his })
    }

    pub fn cube(origin: Vec<Rat>, side: Rat) -> Result<Self> {
        let n = origin.len();
        Self::new(origin, vec![side; n])
    }

    /// Box with the given f64 sides (taken as exact dyadic rationals) anchored
    /// at the origin.
    pub fn from_sides_f64(sides: &[f64]) -> Result<Self> {
        let origin = vec![Rat::zero(); sides.len()];
        let sides = sides
            .iter()
            .map(|&s| rat_from_f64(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(origin, sides)
    }

    pub fn n(&self) -> usize {
        self.origin.len()
    }
    pub fn lo(&self, axis: usize) -> &Rat {
        &self.origin[axis]
    }
    pub fn hi(&self, axis: usize) -> &Rat {
        &self.his[axis]
    }
    pub fn origin(&self) -> &[Rat] {
        &self.origin
    }
    pub fn sides(&self) -> &[Rat] {
        &self.sides
    }
    pub fn sides_f64(&self) -> Vec<f64> {
        self.sides.iter().map(rat_to_f64).collect()
    }
    pub fn is_cube(&self) -> bool {
        self.sides.iter().all(|s| *s == self.sides[0])
    }
    pub fn volume(&self) -> Rat {
        self.sides.iter().fold(rat_int(1), |a, s| a * s)
    }
    /// Closed-box containment: `self` ⊆ `other`.
    pub fn inside(&self, other: &RatBox) -> bool {
        self.n() == other.n()
            && self.origin.iter().zip(&other.origin).all(|(a, b)| a >= b)
            && self.his.iter().zip(&other.his).all(|(a, b)| a <= b)
    }
    /// Open interiors overlap.
    pub fn interior_overlaps(&self, other: &RatBox) -> bool {
        self.n() == other.n()
            && (0..self.n()).all(|i| self.lo(i) < other.hi(i) && other.lo(i) < self.hi(i))
    }
    /// Closed boxes touch or overlap.
    pub fn closed_overlaps(&self, other: &RatBox) -> bool {
        self.n() == other.n()
            && (0..self.n()).all(|i| self.lo(i) <= other.hi(i) && other.lo(i) <= self.hi(i))
    }
}

/// Finite union of open boxes with pairwise disjoint interiors, minus a finite
/// union of closed removed cubes contained in that union.
#[derive(Debug, Clone)]
pub struct RectilinearDomain {
    n: usize,
    boxes: Vec<RatBox>,
    removed: Vec<RatBox>,
}

impl RectilinearDomain {
    pub fn new(boxes: Vec<RatBox>, removed: Vec<RatBox>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::invalid("domain needs at least one box"));
        }
        let n = boxes[0].n();
        if boxes.iter().chain(removed.iter()).any(|b| b.n() != n) {
            return Err(Error::invalid("all boxes must share one dimension"));
        }
        for (i, a) in boxes.iter().enumerate() {
            for (j, b) in boxes.iter().enumerate().skip(i + 1) {
                if a.interior_overlaps(b) {
                    return Err(Error::invalid(format!(
                        "boxes {i} and {j} have overlapping interiors"
                    )));
                }
            }
        }
        for (i, a) in removed.iter().enumerate() {
            if !a.is_cube() {
                return Err(Error::invalid(format!("removed piece {i} is not a cube")));
            }
            for (j, b) in removed.iter().enumerate().skip(i + 1) {
                if a.interior_overlaps(b) {
                    return Err(Error::invalid(format!(
                        "removed cubes {i} and {j} have overlapping interiors"
                    )));
                }
            }
        }
        let domain = RectilinearDomain { n, boxes, removed };
        // Grid construction also proves: removed cubes lie inside the union,
        // and the remaining volume is positive.
        domain.grid()?;
        Ok(domain)
    }

    /// Single box with the given f64 side lengths (exact dyadic rationals),
    /// anchored at the origin.
    pub fn from_box_sides(sides: &[f64]) -> Result<Self> {
        Self::new(vec![RatBox::from_sides_f64(sides)?], vec![])
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn boxes(&self) -> &[RatBox] {
        &self.boxes
    }
    pub fn removed(&self) -> &[RatBox] {
        &self.removed
    }
    pub fn is_single_box(&self) -> bool {
        self.boxes.len() == 1 && self.removed.is_empty()
    }

    /// Exact cell decomposition over the coordinate grid of all endpoints.
    pub(crate) fn grid(&self) -> Result<Grid> {
        Grid::build(self)
    }

    pub fn volume_rat(&self) -> Result<Rat> {
        let g = self.grid()?;
        Ok(big_ratio(g.volume_scaled(), pow_big(&g.scale, self.n as u32)))
    }

    pub fn surface_rat(&self) -> Result<Rat> {
        let g = self.grid()?;
        Ok(big_ratio(
            g.surface_scaled(),
            pow_big(&g.scale, self.n as u32 - 1),
        ))
    }

    /// Squared diameter of the closure, exact.
    pub fn diameter_sq_rat(&self) -> Result<Rat> {
        let g = self.grid()?;
        let merged = g.merged_boxes(true, false);
        let mut best: i128 = 0;
        for (i, a) in merged.iter().enumerate() {
            for b in merged.iter().skip(i) {
                best = best.max(a.max_pair_span_sq(b));
            }
        }
        Ok(big_ratio(
            BigInt::from(best),
            pow_big(&g.scale, 2),
        ))
    }

    /// Bounding-rectangle sides in original axis order, exact.
    pub fn mar_sides_rat(&self) -> Result<Vec<Rat>> {
        let g = self.grid()?;
        Ok((0..self.n)
            .map(|a| big_ratio(BigInt::from(g.mar_hi[a] - g.mar_lo[a]), g.scale.clone()))
            .collect())
    }
}

/// Geometric scalars of a domain, as consumed by the bound formulas.
///
/// `r_in` is exact for single boxes; for unions it is a certified lower bound
/// (flagged by `r_in_exact = false`) constructed so that it dominates √n times
/// the largest dyadic cube side of the interior decomposition — the property
/// the logarithmic remainder terms rely on. `c_lip` is an over-estimate of the
/// least two-sided tube constant (guard factor 1.001). Both directions keep
/// every bound formula conservative.
#[derive(Debug, Clone, Serialize)]
pub struct DomainMetrics {
    pub n: usize,
    pub volume: f64,
    pub surface: f64,
    pub diameter: f64,
    pub width: f64,
    pub r_in: f64,
    pub r_in_exact: bool,
    pub c_lip: f64,
    /// Bounding-rectangle side lengths, sorted descending (shortest last, equal
    /// to `width`).
    pub mar_sides: Vec<f64>,
    /// Product of all bounding-rectangle sides except the shortest.
    pub mar_base_volume: f64,
    /// Hypotheses taken on trust rather than computed from geometry.
    pub assumed: Vec<String>,
}

impl DomainMetrics {
    /// Shortest bounding-rectangle side.
    pub fn i_min(&self) -> f64 {
        self.width
    }

    /// True when the bounding-rectangle data needed by the remainder formulas
    /// is present.
    pub fn has_mar(&self) -> bool {
        self.mar_sides.len() == self.n
    }

    /// Metrics supplied by the user for a domain this library cannot analyse
    /// itself (e.g. a disk). Values are validated for mutual consistency and
    /// recorded as assumed.
    pub fn from_values(
        n: usize,
        volume: f64,
        surface: f64,
        diameter: f64,
        width: f64,
        r_in: f64,
        c_lip: f64,
        mar_sides: Option<Vec<f64>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        for (name, v) in [
            ("volume", volume),
            ("surface", surface),
            ("diameter", diameter),
            ("width", width),
            ("r_in", r_in),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and positive")));
            }
        }
        if width > diameter * (1.0 + 1e-12) {
            return Err(Error::invalid("width cannot exceed diameter"));
        }
        if r_in > width / 2.0 * (1.0 + 1e-12) {
            return Err(Error::invalid("r_in cannot exceed width/2"));
        }
        if !(c_lip >= 1.0) {
            return Err(Error::invalid("c_lip must be at least 1"));
        }
        let mut sides_sorted = Vec::new();
        let mut mar_base_volume = f64::NAN;
        if let Some(mut ms) = mar_sides {
            if ms.len() != n {
                return Err(Error::invalid("mar_sides must list one side per axis"));
            }
            if ms.iter().any(|s| !s.is_finite() || *s <= 0.0) {
                return Err(Error::invalid("mar_sides must be finite and positive"));
            }
            ms.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let min = *ms.last().unwrap();
            if (min - width).abs() > 1e-9 * width.max(1.0) {
                return Err(Error::invalid(
                    "shortest mar side must equal the width",
                ));
            }
            mar_base_volume = ms[..n - 1].iter().product();
            sides_sorted = ms;
        }
        Ok(DomainMetrics {
            n,
            volume,
            surface,
            diameter,
            width,
            r_in,
            r_in_exact: false,
            c_lip,
            mar_sides: sides_sorted,
            mar_base_volume,
            assumed: vec![
                "all geometric scalars are user-supplied, not computed from geometry".to_string(),
            ],
        })
    }
}

/// Compute all geometric scalars of a rectilinear domain.
pub fn metrics(domain: &RectilinearDomain) -> Result<DomainMetrics> {
    let n = domain.n();
    let g = domain.grid()?;
    let scale_pow_n = pow_big(&g.scale, n as u32);
    let volume = rat_to_f64(&big_ratio(g.volume_scaled(), scale_pow_n));
    let surface = rat_to_f64(&big_ratio(
        g.surface_scaled(),
        pow_big(&g.scale, n as u32 - 1),
    ));
    let diameter = rat_to_f64(&domain.diameter_sq_rat()?).sqrt();
    let mut mar = domain.mar_sides_rat()?;
    mar.sort_by(|a, b| b.cmp(a));
    let mar_sides: Vec<f64> = mar.iter().map(rat_to_f64).collect();
    let width = *mar_sides.last().unwrap();
    let mar_base_volume = if n >= 2 {
        mar_sides[..n - 1].iter().product()
    } else {
        1.0
    };
    let (r_in, r_in_exact) = if domain.is_single_box() {
        let half = domain.boxes[0]
            .sides()
            .iter()
            .min()
            .unwrap()
            .clone()
            / rat_int(2);
        (rat_to_f64(&half), true)
    } else {
        (whitney::r_in_lower(domain)?, false)
    };
    let c_lip = tube::c_lip(domain)?;
    Ok(DomainMetrics {
        n,
        volume,
        surface,
        diameter,
        width,
        r_in,
        r_in_exact,
        c_lip,
        mar_sides,
        mar_base_volume,
        assumed: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Integer-scaled grid machinery
// ---------------------------------------------------------------------------

/// Box with integer coordinates (original rationals times `Grid::scale`).
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct IBox {
    pub lo: Vec<i128>,
    pub hi: Vec<i128>,
}

impl IBox {
    /// Largest squared distance between a point of `self` and a point of
    /// `other` (both closed), exact.
    pub fn max_pair_span_sq(&self, other: &IBox) -> i128 {
        let mut acc: i128 = 0;
        for a in 0..self.lo.len() {
            let span = other.hi[a].max(self.hi[a]) - other.lo[a].min(self.lo[a]);
            acc += span * span;
        }
        acc
    }
}

/// Exact cell decomposition of a domain over the coordinate grid induced by
/// all box endpoints, with denominators cleared.
pub(crate) struct Grid {
    pub n: usize,
    /// Scaled coordinates are original rationals times this integer.
    pub scale: BigInt,
    /// Sorted unique scaled breakpoints per axis.
    pub axes: Vec<Vec<i128>>,
    pub dims: Vec<usize>,
    pub strides: Vec<usize>,
    /// Cell membership in the domain (union minus removed), row-major.
    pub inside: Vec<bool>,
    /// Scaled bounding box of the kept cells — the minimal admissible
    /// rectangle before axis reordering.
    pub mar_lo: Vec<i128>,
    pub mar_hi: Vec<i128>,
}

impl Grid {
    fn build(domain: &RectilinearDomain) -> Result<Self> {
        let n = domain.n();
        let mut denom_lcm = BigInt::from(1);
        for b in domain.boxes.iter().chain(domain.removed.iter()) {
            for a in 0..n {
                denom_lcm = num::integer::lcm(denom_lcm.clone(), b.lo(a).denom().clone());
                denom_lcm = num::integer::lcm(denom_lcm.clone(), b.hi(a).denom().clone());
            }
        }
        let scale = denom_lcm;
        let scale_rat = Rat::from_integer(scale.clone());
        let to_scaled = |r: &Rat| -> Result<i128> {
            let v = r * &scale_rat;
            debug_assert!(v.is_integer());
            let big = v.to_integer();
            if big.abs() >= BigInt::from(COORD_LIMIT) {
                return Err(Error::invalid(
                    "coordinates exceed the exact-arithmetic envelope \
                     (|coordinate| × lcm of denominators must stay below 2^30); \
                     use smaller denominators or a smaller domain",
                ));
            }
            big.to_i128()
                .ok_or_else(|| Error::invalid("scaled coordinate overflow"))
        };

        let mut axes: Vec<Vec<i128>> = Vec::with_capacity(n);
        for a in 0..n {
            let mut set = BTreeSet::new();
            for b in domain.boxes.iter().chain(domain.removed.iter()) {
                set.insert(to_scaled(b.lo(a))?);
                set.insert(to_scaled(b.hi(a))?);
            }
            axes.push(set.into_iter().collect());
        }
        let dims: Vec<usize> = axes.iter().map(|v| v.len() - 1).collect();
        let mut cells: usize = 1;
        for &d in &dims {
            cells = cells
                .checked_mul(d)
                .filter(|&c| c <= CELL_LIMIT)
                .ok_or_else(|| Error::resource("coordinate grid has too many cells"))?;
        }
        let mut strides = vec![1usize; n];
        for a in (0..n.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * dims[a + 1];
        }

        let mut in_union = vec![false; cells];
        let mut in_removed = vec![false; cells];
        let mark = |mask: &mut Vec<bool>, b: &RatBox| -> Result<()> {
            let mut lo_idx = Vec::with_capacity(n);
            let mut hi_idx = Vec::with_capacity(n);
            for a in 0..n {
                let lo = to_scaled(b.lo(a))?;
                let hi = to_scaled(b.hi(a))?;
                lo_idx.push(axes[a].binary_search(&lo).expect("endpoint in grid"));
                hi_idx.push(axes[a].binary_search(&hi).expect("endpoint in grid"));
            }
            let mut idx = lo_idx.clone();
            'outer: loop {
                let flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                mask[flat] = true;
                for a in (0..n).rev() {
                    idx[a] += 1;
                    if idx[a] < hi_idx[a] {
                        continue 'outer;
                    }
                    idx[a] = lo_idx[a];
                }
                break;
            }
            Ok(())
        };
        for b in &domain.boxes {
            mark(&mut in_union, b)?;
        }
        for b in &domain.removed {
            mark(&mut in_removed, b)?;
        }

        let mut inside = vec![false; cells];
        let mut any_inside = false;
        for flat in 0..cells {
            if in_removed[flat] && !in_union[flat] {
                return Err(Error::invalid(
                    "a removed cube extends outside the union of boxes",
                ));
            }
            inside[flat] = in_union[flat] && !in_removed[flat];
            any_inside |= inside[flat];
        }
        if !any_inside {
            return Err(Error::invalid("removal leaves zero volume"));
        }

        // Bounding box of the kept cells.
        let mut mar_lo = vec![i128::MAX; n];
        let mut mar_hi = vec![i128::MIN; n];
        let mut idx = vec![0usize; n];
        for flat in 0..cells {
            if inside[flat] {
                for a in 0..n {
                    mar_lo[a] = mar_lo[a].min(axes[a][idx[a]]);
                    mar_hi[a] = mar_hi[a].max(axes[a][idx[a] + 1]);
                }
            }
            for a in (0..n).rev() {
                idx[a] += 1;
                if idx[a] < dims[a] {
                    break;
                }
                idx[a] = 0;
            }
        }

        Ok(Grid {
            n,
            scale,
            axes,
            dims,
            strides,
            inside,
            mar_lo,
            mar_hi,
        })
    }

    fn cell_count(&self) -> usize {
        self.inside.len()
    }

    /// Total volume of kept cells, in scaled units (BigInt to stay exact in
    /// any dimension).
    pub fn volume_scaled(&self) -> BigInt {
        let n = self.n;
        let mut acc = BigInt::zero();
        let mut acc_i: i128 = 0;
        let use_i128 = n <= 4;
        let mut idx = vec![0usize; n];
        for flat in 0..self.cell_count() {
            if self.inside[flat] {
                if use_i128 {
                    let mut p: i128 = 1;
                    for a in 0..n {
                        p *= self.axes[a][idx[a] + 1] - self.axes[a][idx[a]];
                    }
                    acc_i += p;
                } else {
                    let mut p = BigInt::from(1);
                    for a in 0..n {
                        p *= BigInt::from(self.axes[a][idx[a] + 1] - self.axes[a][idx[a]]);
                    }
                    acc += p;
                }
            }
            self.step(&mut idx);
        }
        if use_i128 {
            acc += BigInt::from(acc_i);
        }
        acc
    }

    /// Total area of faces where cell membership changes (the boundary of the
    /// domain), in scaled units.
    pub fn surface_scaled(&self) -> BigInt {
        let n = self.n;
        let mut acc = BigInt::zero();
        let mut acc_i: i128 = 0;
        let use_i128 = n <= 4;
        let mut idx = vec![0usize; n];
        for flat in 0..self.cell_count() {
            let here = self.inside[flat];
            for a in 0..n {
                // Face between this cell and its lower neighbour along axis a
                // (the outside counts as not-inside), plus the outer face at
                // the top end of the axis.
                let lower = if idx[a] > 0 {
                    self.inside[flat - self.strides[a]]
                } else {
                    false
                };
                let mut faces = 0u32;
                if here != lower {
                    faces += 1;
                }
                if idx[a] + 1 == self.dims[a] && here {
                    faces += 1;
                }
                if faces > 0 {
                    if use_i128 {
                        let mut p: i128 = faces as i128;
                        for b in 0..n {
                            if b != a {
                                p *= self.axes[b][idx[b] + 1] - self.axes[b][idx[b]];
                            }
                        }
                        acc_i += p;
                    } else {
                        let mut p = BigInt::from(faces);
                        for b in 0..n {
                            if b != a {
                                p *= BigInt::from(self.axes[b][idx[b] + 1] - self.axes[b][idx[b]]);
                            }
                        }
                        acc += p;
                    }
                }
            }
            self.step(&mut idx);
        }
        if use_i128 {
            acc += BigInt::from(acc_i);
        }
        acc
    }

    fn step(&self, idx: &mut [usize]) {
        for a in (0..self.n).rev() {
            idx[a] += 1;
            if idx[a] < self.dims[a] {
                return;
            }
            idx[a] = 0;
        }
    }

    fn mar_index_window(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .map(|a| {
                let lo = self.axes[a].binary_search(&self.mar_lo[a]).unwrap();
                let hi = self.axes[a].binary_search(&self.mar_hi[a]).unwrap();
                (lo, hi)
            })
            .collect()
    }

    /// Cells with the requested membership, greedily merged into maximal
    /// boxes (a disjoint cover, not necessarily minimal). When
    /// `within_mar_only` is set, only cells inside the bounding box of the
    /// kept cells are considered — the relevant region for complement pieces.
    pub fn merged_boxes(&self, want_inside: bool, within_mar_only: bool) -> Vec<IBox> {
        let n = self.n;
        let window = if within_mar_only {
            self.mar_index_window()
        } else {
            (0..n).map(|a| (0, self.dims[a])).collect()
        };
        // Index boxes as half-open ranges [lo, hi) per axis.
        let mut boxes: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let mut idx = vec![0usize; n];
        for flat in 0..self.cell_count() {
            if self.inside[flat] == want_inside
                && (0..n).all(|a| idx[a] >= window[a].0 && idx[a] < window[a].1)
            {
                let lo: Vec<u32> = idx.iter().map(|&i| i as u32).collect();
                let hi: Vec<u32> = idx.iter().map(|&i| (i + 1) as u32).collect();
                boxes.push((lo, hi));
            }
            self.step(&mut idx);
        }
        for axis in (0..n).rev() {
            boxes.sort_by(|x, y| {
                for a in 0..n {
                    if a == axis {
                        continue;
                    }
                    match x.0[a].cmp(&y.0[a]).then(x.1[a].cmp(&y.1[a])) {
                        std::cmp::Ordering::Equal => {}
                        o => return o,
                    }
                }
                x.0[axis].cmp(&y.0[axis])
            });
            let mut merged: Vec<(Vec<u32>, Vec<u32>)> = Vec::with_capacity(boxes.len());
            for b in boxes.into_iter() {
                if let Some(last) = merged.last_mut() {
                    let same_others = (0..n)
                        .all(|a| a == axis || (last.0[a] == b.0[a] && last.1[a] == b.1[a]));
                    if same_others && last.1[axis] == b.0[axis] {
                        last.1[axis] = b.1[axis];
                        continue;
                    }
                }
                merged.push(b);
            }
            boxes = merged;
        }
        boxes
            .into_iter()
            .map(|(lo, hi)| IBox {
                lo: (0..n).map(|a| self.axes[a][lo[a] as usize]).collect(),
                hi: (0..n).map(|a| self.axes[a][hi[a] as usize]).collect(),
            })
            .collect()
    }
}

/// Exact boxes of the complement of the domain inside its bounding rectangle,
/// as a new domain; `None` when the domain fills the rectangle.
pub fn complement_in_mar(domain: &RectilinearDomain) -> Result<Option<RectilinearDomain>> {
    let g = domain.grid()?;
    let pieces = g.merged_boxes(false, true);
    if pieces.is_empty() {
        return Ok(None);
    }
    let scale_rat = Rat::from_integer(g.scale.clone());
    let boxes = pieces
        .iter()
        .map(|p| {
            let origin: Vec<Rat> = p
                .lo
                .iter()
                .map(|&v| Rat::from_integer(BigInt::from(v)) / &scale_rat)
                .collect();
            let sides: Vec<Rat> = p
                .lo
                .iter()
                .zip(&p.hi)
                .map(|(&l, &h)| Rat::from_integer(BigInt::from(h - l)) / &scale_rat)
                .collect();
            RatBox::new(origin, sides)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(RectilinearDomain::new(boxes, vec![])?))
}

pub(crate) fn big_ratio(num: BigInt, den: BigInt) -> Rat {
    Rat::new(num, den)
}

pub(crate) fn pow_big(b: &BigInt, e: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for _ in 0..e {
        acc *= b;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat};

    fn rbox(origin: &[&str], sides: &[&str]) -> RatBox {
        RatBox::new(
            origin.iter().map(|s| parse_rational(s).unwrap()).collect(),
            sides.iter().map(|s| parse_rational(s).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn unit_square_metrics_closed_forms() {
        let d = RectilinearDomain::from_box_sides(&[1.0, 1.0]).unwrap();
        let m = metrics(&d).unwrap();
        assert_eq!(m.volume, 1.0);
        assert_eq!(m.surface, 4.0);
        assert!((m.diameter - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.width, 1.0);
        assert_eq!(m.r_in, 0.5);
        assert!(m.r_in_exact);
        assert_eq!(m.mar_sides, vec![1.0, 1.0]);
        assert_eq!(m.mar_base_volume, 1.0);
        // Least two-sided tube constant over ε ∈ (0, width): the ratio
        // ((1+2ε)² − (1−2ε)²₊)/(4ε) increases to 9/4 as ε → 1⁻; the scan
        // reports it with its declared 1.001 guard.
        assert!(m.c_lip >= 2.25 && m.c_lip <= 2.25 * 1.002, "c_lip={}", m.c_lip);
    }

    #[test]
    fn rectangle_width_is_short_axis_and_mar_sorted() {
        let d = RectilinearDomain::from_box_sides(&[0.5, 3.0, 2.0]).unwrap();
        let m = metrics(&d).unwrap();
        assert_eq!(m.width, 0.5);
        assert_eq!(m.mar_sides, vec![3.0, 2.0, 0.5]);
        assert_eq!(m.mar_base_volume, 6.0);
        assert_eq!(m.r_in, 0.25);
    }

    #[test]
    fn two_disjoint_squares_additive() {
        let a = rbox(&["0", "0"], &["1", "1"]);
        let b = rbox(&["2", "0"], &["1", "1"]);
        let d = RectilinearDomain::new(vec![a, b], vec![]).unwrap();
        assert_eq!(d.volume_rat().unwrap(), rat(2, 1));
        assert_eq!(d.surface_rat().unwrap(), rat(8, 1));
        // Diameter of the union: from (0,0) to (3,1).
        assert_eq!(d.diameter_sq_rat().unwrap(), rat(10, 1));
        let m = metrics(&d).unwrap();
        assert_eq!(m.volume, 2.0);
        assert_eq!(m.surface, 8.0);
        assert_eq!(m.mar_sides, vec![3.0, 1.0]);
    }

    #[test]
    fn removed_cube_adjusts_volume_and_surface() {
        // Unit square minus the central cube of side 1/2: volume 3/4,
        // surface 4 + 4·(1/2) = 6.
        let b = rbox(&["0", "0"], &["1", "1"]);
        let q = rbox(&["1/4", "1/4"], &["1/2", "1/2"]);
        let d = RectilinearDomain::new(vec![b], vec![q]).unwrap();
        assert_eq!(d.volume_rat().unwrap(), rat(3, 4));
        assert_eq!(d.surface_rat().unwrap(), rat(6, 1));
    }

    #[test]
    fn overlapping_boxes_rejected() {
        let a = rbox(&["0", "0"], &["2", "1"]);
        let b = rbox(&["1", "0"], &["2", "1"]);
        assert!(RectilinearDomain::new(vec![a, b], vec![]).is_err());
    }

    #[test]
    fn touching_boxes_accepted() {
        let a = rbox(&["0", "0"], &["1", "1"]);
        let b = rbox(&["1", "0"], &["1", "1"]);
        let d = RectilinearDomain::new(vec![a, b], vec![]).unwrap();
        assert_eq!(d.volume_rat().unwrap(), rat(2, 1));
        // Shared face is interior: surface is that of the 2×1 rectangle.
        assert_eq!(d.surface_rat().unwrap(), rat(6, 1));
    }

    #[test]
    fn removed_outside_union_rejected() {
        let a = rbox(&["0", "0"], &["1", "1"]);
        let q = rbox(&["3", "3"], &["1/2", "1/2"]);
        assert!(RectilinearDomain::new(vec![a], vec![q]).is_err());
        let a2 = rbox(&["0", "0"], &["1", "1"]);
        let q2 = rbox(&["3/4", "3/4"], &["1/2", "1/2"]); // sticks out
        assert!(RectilinearDomain::new(vec![a2], vec![q2]).is_err());
    }

    #[test]
    fn non_cube_removed_rejected() {
        let a = rbox(&["0", "0"], &["2", "2"]);
        let q = rbox(&["0", "0"], &["1", "1/2"]);
        assert!(RectilinearDomain::new(vec![a], vec![q]).is_err());
    }

    #[test]
    fn full_removal_rejected() {
        let a = rbox(&["0", "0"], &["1", "1"]);
        let q = rbox(&["0", "0"], &["1", "1"]);
        assert!(RectilinearDomain::new(vec![a], vec![q]).is_err());
    }

    #[test]
    fn metrics_invariant_under_translation_and_permutation() {
        let a = rbox(&["0", "0"], &["2", "1"]);
        let b = rbox(&["0", "1"], &["1", "1"]);
        let d1 = RectilinearDomain::new(vec![a, b], vec![]).unwrap();

        // Translate by (7/3, −5) and swap the axes.
        let a2 = rbox(&["-5", "7/3"], &["1", "2"]);
        let b2 = rbox(&["-4", "7/3"], &["1", "1"]);
        let d2 = RectilinearDomain::new(vec![a2, b2], vec![]).unwrap();

        let m1 = metrics(&d1).unwrap();
        let m2 = metrics(&d2).unwrap();
        assert_eq!(m1.volume, m2.volume);
        assert_eq!(m1.surface, m2.surface);
        assert_eq!(m1.diameter, m2.diameter);
        assert_eq!(m1.width, m2.width);
        assert_eq!(m1.mar_sides, m2.mar_sides);
        assert!((m1.c_lip - m2.c_lip).abs() < 1e-12 * m1.c_lip);
        assert!((m1.r_in - m2.r_in).abs() < 1e-12 * m1.r_in.max(1e-9));
    }

    #[test]
    fn complement_of_square_in_own_mar_is_empty() {
        let d = RectilinearDomain::from_box_sides(&[1.0, 1.0]).unwrap();
        assert!(complement_in_mar(&d).unwrap().is_none());
    }

    #[test]
    fn complement_of_l_shape() {
        // L-shape: [0,2]×[0,1] ∪ [0,1]×[1,2]; mar = [0,2]²; complement is the
        // unit square [1,2]×[1,2].
        let a = rbox(&["0", "0"], &["2", "1"]);
        let b = rbox(&["0", "1"], &["1", "1"]);
        let d = RectilinearDomain::new(vec![a, b], vec![]).unwrap();
        let c = complement_in_mar(&d).unwrap().unwrap();
        assert_eq!(c.volume_rat().unwrap(), rat(1, 1));
        assert_eq!(c.surface_rat().unwrap(), rat(4, 1));
    }

    #[test]
    fn denominator_envelope_enforced() {
        // Coordinates with a denominator too large for the integer envelope.
        let big = parse_rational("1000000007/3").unwrap();
        let b = RatBox::new(
            vec![Rat::zero(), Rat::zero()],
            vec![big, parse_rational("1/1000000007").unwrap()],
        )
        .unwrap();
        assert!(RectilinearDomain::new(vec![b], vec![]).is_err());
    }
}
