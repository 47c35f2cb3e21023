//! Certified n-dimensional eigenvalue-counting bounds, packaged with their
//! direction, validity window, and standing hypotheses so downstream
//! consumers can audit every number they use.
//!
//! Conventions: counts are strict (#{λₖ < λ}); `value` is always a true bound
//! on the stated quantity whenever `valid` is set; when a sharpened form is
//! requested outside its window the weaker always-valid form is returned with
//! `valid = false`.

use crate::bounds1d::{floor_candidates, riesz_half_lower_interval};
use crate::constants;
use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Upper,
    Lower,
}

/// A bound evaluation with provenance for audit trails.
#[derive(Debug, Clone, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub direction: Direction,
    /// Behavior-named identifier of the bound family.
    pub tag: &'static str,
    /// The bound is claimed for λ ≥ `validity_lo` (0 when unconditional).
    pub validity_lo: f64,
    /// Whether the evaluation point satisfied the validity window.
    pub valid: bool,
    /// Standing hypotheses the caller must discharge.
    pub hypotheses: Vec<String>,
}

/// Range of eigenvalue indices for which the Weyl-count inequality is
/// certified by a threshold computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum K0 {
    /// Every index (the comparison domain fills the product exactly).
    AllK,
    /// Indices 1..=k0.
    FirstK(u64),
}

fn check_pos(x: f64, what: &str) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("{what} must be positive and finite")));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() {
        return Err(Error::invalid("spectral threshold must be finite"));
    }
    Ok(())
}

fn two_pi_pow(n: u32) -> f64 {
    (2.0 * PI).powi(n as i32)
}

/// Upper bound for the counting function of a product Ω₁ × (0, len2) ⊂ Rⁿ,
/// n = n1 + 1, where Ω₁ ⊂ R^{n1} has volume `vol1` and satisfies the
/// Weyl-count upper bound (boxes and other tiling cross-sections do).
/// Valid for every λ.
pub fn product_count_upper(vol1: f64, n1: u32, len2: f64, lambda: f64) -> Result<BoundValue> {
    check_pos(vol1, "cross-section volume")?;
    check_pos(len2, "product length")?;
    check_lambda(lambda)?;
    if n1 < 1 {
        return Err(Error::invalid("cross-section dimension must be at least 1"));
    }
    let n = n1 + 1;
    let value = if lambda <= 0.0 {
        0.0
    } else {
        let lead = vol1 * len2 * constants::unit_ball_volume(n)? / two_pi_pow(n)
            * lambda.powf(n as f64 / 2.0);
        let factor = (1.0 - constants::c1(n1)? / (len2 * lambda.sqrt())).max(0.0);
        lead * factor
    };
    Ok(BoundValue {
        value,
        direction: Direction::Upper,
        tag: "product-upper",
        validity_lo: 0.0,
        valid: true,
        hypotheses: vec![
            "domain is a product of a cross-section with an interval on the last axis".into(),
            "cross-section satisfies the Weyl-count upper bound".into(),
        ],
    })
}

/// Largest eigenvalue index through which the Weyl-count inequality is
/// certified for a domain Ω of volume `vol_omega` contained in the product
/// Ω₁ × (0, len2) with |Ω₁| = vol1. The result is conservatively rounded
/// down.
pub fn k0_threshold(vol_omega: f64, vol1: f64, n1: u32, len2: f64) -> Result<K0> {
    check_pos(vol_omega, "domain volume")?;
    check_pos(vol1, "cross-section volume")?;
    check_pos(len2, "product length")?;
    if n1 < 1 {
        return Err(Error::invalid("cross-section dimension must be at least 1"));
    }
    let prod = vol1 * len2;
    if vol_omega > prod {
        return Err(Error::invalid(
            "domain volume exceeds the product volume it must embed into",
        ));
    }
    if vol_omega == prod {
        return Ok(K0::AllK);
    }
    let n = n1 + 1;
    let ratio = vol_omega / prod;
    let inv = 1.0 / (1.0 - ratio);
    let x = inv * constants::c1(n1)? / len2;
    let raw = vol_omega * constants::unit_ball_volume(n)? / two_pi_pow(n) * x.powi(n as i32);
    // Conservative shave: a one-ulp overshoot must not admit an extra index.
    let shaved = raw * (1.0 - 9.094_947_017_729_282e-13);
    if shaved >= u64::MAX as f64 {
        return Ok(K0::FirstK(u64::MAX));
    }
    Ok(K0::FirstK(shaved.floor().max(0.0) as u64))
}

/// Lower bound for the counting function of a cube of side `side` in Rⁿ,
/// n ≥ 2. The plain form (without the additive constant) is valid for every
/// λ; the sharpened form with the constant needs λ above a dimensional
/// window and falls back to the plain form (flagged `valid: false`) outside
/// it.
pub fn cube_count_lower(side: f64, n: u32, lambda: f64, with_constant: bool) -> Result<BoundValue> {
    check_pos(side, "cube side")?;
    check_lambda(lambda)?;
    if n < 2 {
        return Err(Error::invalid("cube bound needs dimension at least 2"));
    }
    let (base, window, constant) = if n == 2 {
        let base = if lambda <= 0.0 {
            0.0
        } else {
            side * side / (4.0 * PI) * lambda - 2.0_f64.sqrt() * side / 2.0 * lambda.sqrt()
        };
        (base, 2.0 * PI * PI / (side * side), PI / 2.0)
    } else if n == 3 {
        let base = if lambda <= 0.0 {
            0.0
        } else {
            side.powi(3) / (6.0 * PI * PI) * lambda.powf(1.5)
                - 3.0_f64.sqrt() * side * side / (2.0 * PI) * lambda
        };
        (base, 3.0 * PI * PI / (side * side), 1.0)
    } else {
        let omega = constants::unit_ball_volume(n)?;
        let base = if lambda <= 0.0 {
            0.0
        } else {
            omega * side.powi(n as i32) / two_pi_pow(n) * lambda.powf(n as f64 / 2.0)
                - omega * (n as f64).powf(1.5) * PI * side.powi(n as i32 - 1) / two_pi_pow(n)
                    * lambda.powf((n as f64 - 1.0) / 2.0)
        };
        (
            base,
            (n as f64).powi(3) * PI * PI / (side * side),
            2.0_f64.powi(n as i32) * PI.powf(n as f64 / 2.0),
        )
    };
    let in_window = lambda > window;
    let (value, valid) = if with_constant {
        if in_window {
            (base + constant, true)
        } else {
            (base, false)
        }
    } else {
        (base, true)
    };
    Ok(BoundValue {
        value,
        direction: Direction::Lower,
        tag: "cube-lower",
        validity_lo: if with_constant { window } else { 0.0 },
        valid,
        hypotheses: vec!["domain is a cube".into()],
    })
}

/// Lower bound for the counting function of a rectangle
/// (0, len1) × (0, len2) ⊂ R², valid for every λ > 0: the second-axis
/// Riesz sum is bounded below and one mode per occupied column is forfeited
/// (with an overcount-safe floor).
pub fn rect_count_lower_2d(len1: f64, len2: f64, lambda: f64) -> Result<BoundValue> {
    check_pos(len1, "rectangle side")?;
    check_pos(len2, "rectangle side")?;
    check_lambda(lambda)?;
    let value = if lambda <= 0.0 {
        0.0
    } else {
        let shalf = riesz_half_lower_interval(len2, lambda)?.max(0.0);
        let x = len2 * lambda.sqrt() / PI;
        let (_, k_safe) = floor_candidates(x);
        len1 / PI * shalf - k_safe
    };
    Ok(BoundValue {
        value,
        direction: Direction::Lower,
        tag: "rect-lower-2d",
        validity_lo: 0.0,
        valid: true,
        hypotheses: vec!["domain is a rectangle".into()],
    })
}

/// Dimensional-constant upper bound for the counting function of any open
/// set of volume `vol` in Rⁿ: the Weyl main term times ((n+2)/n)^{n/2}.
pub fn bly_count_upper(vol: f64, n: u32, lambda: f64) -> Result<BoundValue> {
    check_pos(vol, "volume")?;
    check_lambda(lambda)?;
    if n < 1 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let value = if lambda <= 0.0 {
        0.0
    } else {
        ((n as f64 + 2.0) / n as f64).powf(n as f64 / 2.0)
            * constants::unit_ball_volume(n)? * vol / two_pi_pow(n)
            * lambda.powf(n as f64 / 2.0)
    };
    Ok(BoundValue {
        value,
        direction: Direction::Upper,
        tag: "bly-upper",
        validity_lo: 0.0,
        valid: true,
        hypotheses: vec!["open set of finite volume".into()],
    })
}

/// Lower bound for the sum of the first k eigenvalues of any open set of
/// volume `vol` in Rⁿ.
pub fn bly_sum_lower(vol: f64, n: u32, k: u64) -> Result<BoundValue> {
    check_pos(vol, "volume")?;
    if n < 1 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let nf = n as f64;
    let omega = constants::unit_ball_volume(n)?;
    let value = if k == 0 {
        0.0
    } else {
        (2.0 * PI) * (2.0 * PI) / (vol.powf(2.0 / nf) * omega.powf(2.0 / nf)) * nf / (nf + 2.0)
            * (k as f64).powf((nf + 2.0) / nf)
    };
    Ok(BoundValue {
        value,
        direction: Direction::Lower,
        tag: "bly-sum-lower",
        validity_lo: 0.0,
        valid: true,
        hypotheses: vec![
            "open set of finite volume".into(),
            "bounds the sum of the first k eigenvalues, not a count".into(),
        ],
    })
}

/// Sharpened planar upper bound for the counting function of a product
/// Ω₁ × (0, len2) ⊂ R² with |Ω₁| = vol1, len2 ≥ 1, available for λ > 33
/// (and above the product ground state).
pub fn improved_count_upper_2d(vol1: f64, len2: f64, lambda: f64) -> Result<BoundValue> {
    check_pos(vol1, "cross-section length")?;
    check_pos(len2, "product length")?;
    check_lambda(lambda)?;
    if len2 < 1.0 {
        return Err(Error::validity(
            "sharpened planar product bound needs last-axis length at least 1",
        ));
    }
    let ground = PI * PI / (vol1 * vol1) + PI * PI / (len2 * len2);
    let validity_lo = 33.0_f64.max(ground);
    if lambda <= validity_lo {
        return Err(Error::validity(
            "sharpened planar product bound needs λ > max(33, ground state)",
        ));
    }
    let value = vol1 * len2 / (4.0 * PI) * lambda * (1.0 - 1.0 / (len2 * lambda.sqrt()));
    Ok(BoundValue {
        value,
        direction: Direction::Upper,
        tag: "improved-2d",
        validity_lo,
        valid: true,
        hypotheses: vec![
            "domain is a planar product of an interval cross-section with the last axis".into(),
        ],
    })
}

/// Sharpened spatial upper bound for the counting function of a product
/// Ω₁ × (0, len2) ⊂ R³ with |Ω₁| = vol1 (a planar Weyl-count domain),
/// len2 ≥ 1, available for λ > 61.
pub fn improved_count_upper_3d(vol1: f64, len2: f64, lambda: f64) -> Result<BoundValue> {
    check_pos(vol1, "cross-section area")?;
    check_pos(len2, "product length")?;
    check_lambda(lambda)?;
    if len2 < 1.0 {
        return Err(Error::validity(
            "sharpened spatial product bound needs last-axis length at least 1",
        ));
    }
    let validity_lo = 61.0;
    if lambda <= validity_lo {
        return Err(Error::validity(
            "sharpened spatial product bound needs λ > 61",
        ));
    }
    let value = vol1 * len2 * constants::unit_ball_volume(3)? / two_pi_pow(3)
        * lambda.powf(1.5)
        * (1.0 - PI / (3.0 * len2 * lambda.sqrt()));
    Ok(BoundValue {
        value,
        direction: Direction::Upper,
        tag: "improved-3d",
        validity_lo,
        valid: true,
        hypotheses: vec![
            "domain is a spatial product with the last axis an interval".into(),
            "cross-section satisfies the Weyl-count upper bound".into(),
        ],
    })
}
