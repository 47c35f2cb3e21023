//! Certified one-dimensional Riesz-sum bounds for an interval of length
//! `len` (Dirichlet eigenvalues (kπ/len)²). The quantity bounded is the
//! unnormalized sum Sₚ(λ) = Σₖ (λ − λₖ)₊ᵖ = λᵖ·Σₖ(1 − λₖ/λ)₊ᵖ.
//!
//! All bounds take the spectral threshold λ and return plain f64 values; the
//! floor of x = len·√λ/π, which several bounds depend on, is guarded: when x
//! is within 2⁻⁴⁰ (relative) of an integer, both readings of ⌊x⌋ are
//! evaluated and the weaker bound is returned, so a one-ulp perturbation of λ
//! can never flip a certificate.

use crate::constants;
use crate::error::{Error, Result};
use std::f64::consts::PI;

const FLOOR_GUARD: f64 = 9.094_947_017_729_282e-13;

/// Both defensible readings of ⌊x⌋ for x ≥ 0: they differ only when x is
/// numerically indistinguishable from an integer.
pub(crate) fn floor_candidates(x: f64) -> (f64, f64) {
    let f = x.floor();
    let r = x.round();
    if (x - r).abs() <= FLOOR_GUARD * x.max(1.0) {
        let lo = (r - 1.0).max(0.0).min(f);
        let hi = f.max(r);
        (lo, hi)
    } else {
        (f, f)
    }
}

fn check_len_lambda(len: f64, lambda: f64) -> Result<()> {
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::invalid("interval length must be positive and finite"));
    }
    if !lambda.is_finite() {
        return Err(Error::invalid("spectral threshold must be finite"));
    }
    Ok(())
}

/// Upper bound for the first Riesz sum Σ(λ − λₖ)₊ of the interval.
/// Returns 0 for λ ≤ (π/len)² (an exact bound there: the spectrum is empty
/// below the ground state).
pub fn riesz1_upper(len: f64, lambda: f64) -> Result<f64> {
    check_len_lambda(len, lambda)?;
    if lambda <= (PI / len) * (PI / len) {
        return Ok(0.0);
    }
    let sq = lambda.sqrt();
    let x = len * sq / PI;
    let lead = 2.0 * len / (3.0 * PI) * lambda * sq;
    let branch1 = (1.0 - 3.0 * PI / (16.0 * len * sq)).max(0.0);
    let (klo, _khi) = floor_candidates(x);
    // Larger k strengthens this branch, so the guarded (weaker) choice is the
    // smaller floor candidate.
    let ratio = klo / x;
    let branch2 = 1.0 - ratio * ratio * (3.0 * PI / (4.0 * len * sq));
    Ok(lead * branch1.min(branch2))
}

/// Upper bound for the half Riesz sum Σ(λ − λₖ)₊^{1/2} of the interval.
/// Requires λ > (π/len)².
pub fn riesz_half_upper(len: f64, lambda: f64) -> Result<f64> {
    check_len_lambda(len, lambda)?;
    if lambda <= (PI / len) * (PI / len) {
        return Err(Error::validity(
            "half Riesz upper bound needs λ above the interval ground state",
        ));
    }
    let sq = lambda.sqrt();
    let x = len * sq / PI;
    let (_klo, khi) = floor_candidates(x);
    // Larger k weakens the oscillatory form, so the guard takes the larger
    // floor candidate.
    let middle =
        len * lambda / 4.0 - sq / 2.0 + (6.0_f64.sqrt() * PI / (9.0 * len)) * (khi + 0.5).sqrt();
    let envelope = len / 4.0 * lambda * (1.0 - 2.0 / (3.0 * len * sq));
    Ok(middle.min(envelope))
}

/// Lower bound for the half Riesz sum Σ(λ − λₖ)₊^{1/2} of the interval.
/// Below the ground state (λ ≤ (π/len)²) the sum is exactly 0 and the closed
/// form (len/4)(√λ − π/len)² would be spuriously positive, so 0 is returned
/// there; above it the closed form applies.
pub fn riesz_half_lower_interval(len: f64, lambda: f64) -> Result<f64> {
    check_len_lambda(len, lambda)?;
    if lambda <= (PI / len) * (PI / len) {
        return Ok(0.0);
    }
    let sq = lambda.sqrt();
    Ok(len / 4.0
        * lambda
        * (1.0 - 2.0 * PI / (len * sq) + PI * PI / (len * len * lambda)))
}

/// Upper bound for the p-th Riesz sum Σ(λ − λₖ)₊ᵖ of the interval, p > 1:
/// a sharp leading term minus an explicit second-order correction.
/// Requires λ > (π/len)²; below it the sum is exactly 0 and the caller
/// should use that.
pub fn riesz_p_upper(len: f64, p: f64, lambda: f64) -> Result<f64> {
    check_len_lambda(len, lambda)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::invalid("Riesz order must satisfy p > 1"));
    }
    if lambda <= (PI / len) * (PI / len) {
        return Err(Error::validity(
            "p-Riesz upper bound needs λ above the interval ground state",
        ));
    }
    let b_main = constants::beta(p - 1.0, 2.5);
    let b_norm = constants::beta(p - 1.0, 2.0);
    let lead = 2.0 * len / (3.0 * PI * b_norm) * b_main * lambda.powf(p + 0.5);
    let corr = constants::c3(p)? * lambda.powf(p);
    Ok(lead - corr)
}
