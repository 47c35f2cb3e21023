//! Boundary tubes in the ℓ∞ metric: dilation/erosion volumes for rectilinear
//! domains, closed forms for single boxes, and the sampling scan that
//! over-estimates the least two-sided tube constant.
//!
//! The ℓ∞ tube contains the Euclidean tube of the same radius, so every
//! volume here over-estimates its Euclidean counterpart — the safe direction
//! for all consumers.

use super::RectilinearDomain;
use crate::error::{Error, Result};
use crate::rational::rat_to_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TubeSide {
    /// Points of the domain within distance ε of its complement.
    Interior,
    /// Points anywhere within distance ε of the boundary.
    TwoSided,
}

/// Two-sided tube volume of a single box: ∏(Lᵢ+2ε) − ∏(Lᵢ−2ε)₊.
pub fn box_tube_two_sided(sides: &[f64], eps: f64) -> f64 {
    let outer: f64 = sides.iter().map(|l| l + 2.0 * eps).product();
    let inner: f64 = sides.iter().map(|l| (l - 2.0 * eps).max(0.0)).product();
    outer - inner
}

/// Interior tube volume of a single box: ∏Lᵢ − ∏(Lᵢ−2ε)₊.
pub fn box_tube_interior(sides: &[f64], eps: f64) -> f64 {
    let vol: f64 = sides.iter().product();
    let inner: f64 = sides.iter().map(|l| (l - 2.0 * eps).max(0.0)).product();
    vol - inner
}

/// Volume of the ε-tube of the domain boundary, for 0 < ε < width.
pub fn tube_volume(domain: &RectilinearDomain, eps: f64, side: TubeSide) -> Result<f64> {
    let scene = Scene::build(domain)?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid("tube radius must be positive and finite"));
    }
    if eps >= scene.width {
        return Err(Error::validity(format!(
            "tube radius {eps} is not below the domain width {}",
            scene.width
        )));
    }
    if domain.is_single_box() {
        let sides = domain.boxes()[0].sides_f64();
        return Ok(match side {
            TubeSide::Interior => box_tube_interior(&sides, eps),
            TubeSide::TwoSided => box_tube_two_sided(&sides, eps),
        });
    }
    match side {
        TubeSide::Interior => scene.interior_tube(eps),
        TubeSide::TwoSided => scene.two_sided_tube(eps),
    }
}

/// Over-estimate of the least constant C with
/// |{x : dist(x, ∂Ω) ≤ ε}| ≤ C·ε·|∂Ω| for all ε ∈ (0, width).
///
/// The ratio is sampled at the half-differences of all axis coordinates
/// (where the piecewise-polynomial tube volume changes shape), at midpoints
/// between them, and on a dense uniform grid; the maximum is multiplied by a
/// 1.001 guard and floored at 1.
pub fn c_lip(domain: &RectilinearDomain) -> Result<f64> {
    let scene = Scene::build(domain)?;
    let width = scene.width;
    let mut samples: Vec<f64> = Vec::new();
    // Breakpoints: half-differences of coordinate pairs, per axis.
    let mut breaks: Vec<f64> = Vec::new();
    for axis_coords in &scene.axis_coords {
        for (i, &a) in axis_coords.iter().enumerate() {
            for &b in &axis_coords[i + 1..] {
                let h = (b - a).abs() / 2.0;
                if h > 0.0 && h <= width {
                    breaks.push(h);
                }
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    if breaks.len() > 400 {
        let step = breaks.len() as f64 / 400.0;
        breaks = (0..400)
            .map(|i| breaks[(i as f64 * step) as usize])
            .collect();
    }
    for w in breaks.windows(2) {
        samples.push((w[0] + w[1]) / 2.0);
    }
    samples.extend_from_slice(&breaks);
    const GRID: usize = 256;
    for k in 1..=GRID {
        samples.push(width * k as f64 / GRID as f64);
    }
    samples.push(width * (1.0 - 2f64.powi(-20)));
    samples.push(width * 2f64.powi(-12));

    let mut best: f64 = 1.0;
    let single = domain.is_single_box();
    let sides = if single {
        domain.boxes()[0].sides_f64()
    } else {
        Vec::new()
    };
    for &eps in &samples {
        if !(eps > 0.0 && eps <= width) {
            continue;
        }
        let tube = if single {
            box_tube_two_sided(&sides, eps)
        } else {
            scene.two_sided_tube(eps)?
        };
        let ratio = tube / (eps * scene.surface);
        if ratio > best {
            best = ratio;
        }
    }
    Ok((best * 1.001).max(1.0))
}

/// Flattened f64 view of a domain: merged inside boxes, merged complement
/// pieces inside the bounding rectangle, and the rectangle itself.
struct Scene {
    n: usize,
    in_boxes: Vec<(Vec<f64>, Vec<f64>)>,
    comp_boxes: Vec<(Vec<f64>, Vec<f64>)>,
    mar_lo: Vec<f64>,
    mar_hi: Vec<f64>,
    volume: f64,
    surface: f64,
    width: f64,
    /// Distinct coordinates per axis (for breakpoint generation).
    axis_coords: Vec<Vec<f64>>,
}

impl Scene {
    fn build(domain: &RectilinearDomain) -> Result<Scene> {
        let n = domain.n();
        let g = domain.grid()?;
        let scale = rat_to_f64(&crate::rational::Rat::from_integer(g.scale.clone()));
        let conv = |v: i128| v as f64 / scale;
        let to_f = |b: &super::IBox| {
            (
                b.lo.iter().map(|&v| conv(v)).collect::<Vec<f64>>(),
                b.hi.iter().map(|&v| conv(v)).collect::<Vec<f64>>(),
            )
        };
        let in_boxes: Vec<_> = g.merged_boxes(true, false).iter().map(to_f).collect();
        let comp_boxes: Vec<_> = g.merged_boxes(false, true).iter().map(to_f).collect();
        let mar_lo: Vec<f64> = g.mar_lo.iter().map(|&v| conv(v)).collect();
        let mar_hi: Vec<f64> = g.mar_hi.iter().map(|&v| conv(v)).collect();
        let width = mar_lo
            .iter()
            .zip(&mar_hi)
            .map(|(l, h)| h - l)
            .fold(f64::INFINITY, f64::min);
        let volume = rat_to_f64(&super::big_ratio(
            g.volume_scaled(),
            super::pow_big(&g.scale, n as u32),
        ));
        let surface = rat_to_f64(&super::big_ratio(
            g.surface_scaled(),
            super::pow_big(&g.scale, n as u32 - 1),
        ));
        let mut axis_coords: Vec<Vec<f64>> = vec![Vec::new(); n];
        for (lo, hi) in in_boxes.iter().chain(comp_boxes.iter()) {
            for a in 0..n {
                axis_coords[a].push(lo[a]);
                axis_coords[a].push(hi[a]);
            }
        }
        for a in 0..n {
            axis_coords[a].push(mar_lo[a]);
            axis_coords[a].push(mar_hi[a]);
            axis_coords[a].sort_by(|x, y| x.partial_cmp(y).unwrap());
            axis_coords[a].dedup();
        }
        Ok(Scene {
            n,
            in_boxes,
            comp_boxes,
            mar_lo,
            mar_hi,
            volume,
            surface,
            width,
            axis_coords,
        })
    }

    /// Volume of {x : dist_∞(x, Ω̄) ≤ ε} — the domain dilated by ε.
    fn dilated_volume(&self, eps: f64) -> Result<f64> {
        let sources: Vec<_> = self
            .in_boxes
            .iter()
            .map(|(lo, hi)| inflate(lo, hi, eps))
            .collect();
        let clip_lo: Vec<f64> = self.mar_lo.iter().map(|v| v - eps).collect();
        let clip_hi: Vec<f64> = self.mar_hi.iter().map(|v| v + eps).collect();
        union_volume(self.n, &sources, &clip_lo, &clip_hi)
    }

    /// Volume of {x ∈ Ω : dist_∞(x, Ωᶜ) > ε} — the domain eroded by ε.
    fn eroded_volume(&self, eps: f64) -> Result<f64> {
        // Complement sources: pieces inside the rectangle, plus slabs covering
        // the exterior ring out to where it can still influence the erosion.
        let pad = 2.0 * eps;
        let mut sources: Vec<(Vec<f64>, Vec<f64>)> = self
            .comp_boxes
            .iter()
            .map(|(lo, hi)| inflate(lo, hi, eps))
            .collect();
        let mut cur_lo: Vec<f64> = self.mar_lo.iter().map(|v| v - pad).collect();
        let mut cur_hi: Vec<f64> = self.mar_hi.iter().map(|v| v + pad).collect();
        for a in 0..self.n {
            let mut slab_lo = cur_lo.clone();
            let mut slab_hi = cur_hi.clone();
            slab_hi[a] = self.mar_lo[a];
            sources.push(inflate(&slab_lo, &slab_hi, eps));
            slab_lo = cur_lo.clone();
            slab_hi = cur_hi.clone();
            slab_lo[a] = self.mar_hi[a];
            sources.push(inflate(&slab_lo, &slab_hi, eps));
            cur_lo[a] = self.mar_lo[a];
            cur_hi[a] = self.mar_hi[a];
        }
        let mar_vol: f64 = self
            .mar_lo
            .iter()
            .zip(&self.mar_hi)
            .map(|(l, h)| h - l)
            .product();
        let bad = union_volume(self.n, &sources, &self.mar_lo, &self.mar_hi)?;
        Ok(mar_vol - bad)
    }

    fn two_sided_tube(&self, eps: f64) -> Result<f64> {
        Ok(self.dilated_volume(eps)? - self.eroded_volume(eps)?)
    }

    fn interior_tube(&self, eps: f64) -> Result<f64> {
        Ok(self.volume - self.eroded_volume(eps)?)
    }
}

fn inflate(lo: &[f64], hi: &[f64], eps: f64) -> (Vec<f64>, Vec<f64>) {
    (
        lo.iter().map(|v| v - eps).collect(),
        hi.iter().map(|v| v + eps).collect(),
    )
}

/// Exact (up to f64 rounding) volume of a union of boxes clipped to a box,
/// via coordinate compression and per-axis coverage bitmasks.
fn union_volume(
    n: usize,
    boxes: &[(Vec<f64>, Vec<f64>)],
    clip_lo: &[f64],
    clip_hi: &[f64],
) -> Result<f64> {
    let mut clipped: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for (lo, hi) in boxes {
        let mut clo = Vec::with_capacity(n);
        let mut chi = Vec::with_capacity(n);
        let mut ok = true;
        for a in 0..n {
            let l = lo[a].max(clip_lo[a]);
            let h = hi[a].min(clip_hi[a]);
            if !(l < h) {
                ok = false;
                break;
            }
            clo.push(l);
            chi.push(h);
        }
        if ok {
            clipped.push((clo, chi));
        }
    }
    if clipped.is_empty() {
        return Ok(0.0);
    }
    let m = clipped.len();
    let words = m.div_ceil(64);
    let mut coords: Vec<Vec<f64>> = Vec::with_capacity(n);
    for a in 0..n {
        let mut v: Vec<f64> = clipped
            .iter()
            .flat_map(|(lo, hi)| [lo[a], hi[a]])
            .collect();
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v.dedup();
        coords.push(v);
    }
    let dims: Vec<usize> = coords.iter().map(|c| c.len() - 1).collect();
    let mut cells: usize = 1;
    for &d in &dims {
        cells = cells
            .checked_mul(d)
            .filter(|&c| c <= 20_000_000)
            .ok_or_else(|| Error::resource("tube computation grid has too many cells"))?;
    }
    let mut masks: Vec<Vec<u64>> = dims.iter().map(|&d| vec![0u64; d * words]).collect();
    for (bi, (lo, hi)) in clipped.iter().enumerate() {
        for a in 0..n {
            let p = coords[a]
                .binary_search_by(|c| c.partial_cmp(&lo[a]).unwrap())
                .expect("box corner in compressed coords");
            let q = coords[a]
                .binary_search_by(|c| c.partial_cmp(&hi[a]).unwrap())
                .expect("box corner in compressed coords");
            for i in p..q {
                masks[a][i * words + bi / 64] |= 1u64 << (bi % 64);
            }
        }
    }
    let lens: Vec<Vec<f64>> = coords
        .iter()
        .map(|c| c.windows(2).map(|w| w[1] - w[0]).collect())
        .collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; n];
    for _ in 0..cells {
        let mut covered = false;
        for w in 0..words {
            let mut acc = !0u64;
            for a in 0..n {
                acc &= masks[a][idx[a] * words + w];
            }
            if acc != 0 {
                covered = true;
                break;
            }
        }
        if covered {
            let mut v = 1.0;
            for a in 0..n {
                v *= lens[a][idx[a]];
            }
            total += v;
        }
        for a in (0..n).rev() {
            idx[a] += 1;
            if idx[a] < dims[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    Ok(total)
}
