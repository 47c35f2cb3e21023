//! Dimensional constants for the counting bounds.
//!
//! Everything here is available twice: as a double (`c1`, `c2`, `omega`, …) and, where the
//! value is a rational multiple of a power of √π times a square root, as an exact
//! [`Symbolic`] form. The exact forms come from half-integer Gamma/Beta closed forms; the
//! double path goes through an independent Lanczos log-Gamma so the two can cross-check
//! each other to ~1e-14.

use std::fmt;

use num::bigint::BigInt;
use num::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{rat, rat_int, rat_to_f64, Rat};

/// Exact value of the form `rat · π^(pi_halves/2) · √sqrt_int`.
///
/// Closed under multiplication and division, which is all the constant formulas need.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbolic {
    pub rat: Rat,
    /// Exponent of √π (so `pi_halves = 2` means a factor of π).
    pub pi_halves: i32,
    /// Square-free-ish positive integer under a square root.
    pub sqrt_int: BigInt,
}

impl Symbolic {
    pub fn one() -> Self {
        Symbolic { rat: rat_int(1), pi_halves: 0, sqrt_int: BigInt::one() }
    }

    pub fn from_rat(r: Rat) -> Self {
        Symbolic { rat: r, pi_halves: 0, sqrt_int: BigInt::one() }
    }

    /// `r^(halves/2)` for a positive rational `r`: integer part exact, odd half becomes a √.
    pub fn pow_half(r: &Rat, halves: u32) -> Self {
        let whole = halves / 2;
        let mut rat_part = Rat::one();
        for _ in 0..whole {
            rat_part *= r;
        }
        let mut out = Symbolic { rat: rat_part, pi_halves: 0, sqrt_int: BigInt::one() };
        if halves % 2 == 1 {
            // √(p/q) = √(pq)/q
            let p = r.numer().clone();
            let q = r.denom().clone();
            out.rat *= Rat::new(BigInt::one(), q.clone());
            out.sqrt_int = p * q;
            out.normalize();
        }
        out
    }

    fn normalize(&mut self) {
        // Pull square factors out of sqrt_int by trial division; enough for the small
        // integers that show up here (2, 3, 247·…, n+1).
        if self.sqrt_int.is_zero() {
            self.rat = Rat::zero();
            self.sqrt_int = BigInt::one();
            return;
        }
        let mut m = self.sqrt_int.clone();
        let mut outside = BigInt::one();
        let mut d = BigInt::from(2u32);
        while &d * &d <= m {
            let d2 = &d * &d;
            while (&m % &d2).is_zero() {
                m /= &d2;
                outside *= &d;
            }
            d += 1u32;
        }
        // Final check: m itself might be a perfect square.
        let root = m.sqrt();
        if &root * &root == m {
            outside *= &root;
            m = BigInt::one();
        }
        self.sqrt_int = m;
        self.rat *= Rat::from_integer(outside);
    }

    pub fn mul(&self, other: &Symbolic) -> Symbolic {
        let mut out = Symbolic {
            rat: &self.rat * &other.rat,
            pi_halves: self.pi_halves + other.pi_halves,
            sqrt_int: &self.sqrt_int * &other.sqrt_int,
        };
        out.normalize();
        out
    }

    pub fn div(&self, other: &Symbolic) -> Symbolic {
        assert!(!other.rat.is_zero(), "division by symbolic zero");
        // 1/√m = √m / m
        let mut out = Symbolic {
            rat: &self.rat / &other.rat * Rat::new(BigInt::one(), other.sqrt_int.clone()),
            pi_halves: self.pi_halves - other.pi_halves,
            sqrt_int: &self.sqrt_int * &other.sqrt_int,
        };
        out.normalize();
        out
    }

    pub fn scale(&self, r: Rat) -> Symbolic {
        Symbolic { rat: &self.rat * r, pi_halves: self.pi_halves, sqrt_int: self.sqrt_int.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        let base = rat_to_f64(&self.rat);
        let pi_pow = match self.pi_halves {
            0 => 1.0,
            h => std::f64::consts::PI.powf(h as f64 / 2.0),
        };
        let root = self.sqrt_int.to_f64().unwrap_or(f64::NAN).sqrt();
        base * pi_pow * root
    }

    /// Is this symbolic value exactly a plain rational?
    pub fn is_rational(&self) -> bool {
        self.pi_halves == 0 && self.sqrt_int.is_one()
    }
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rat)?;
        if !self.sqrt_int.is_one() {
            write!(f, "·√{}", self.sqrt_int)?;
        }
        match self.pi_halves {
            0 => {}
            1 => write!(f, "·√π")?,
            2 => write!(f, "·π")?,
            h if h % 2 == 0 => write!(f, "·π^{}", h / 2)?,
            h => write!(f, "·π^({h}/2)")?,
        }
        Ok(())
    }
}

/// Γ(two_x/2) for positive half-integers, as an exact symbolic value.
///
/// Γ(m) = (m−1)!, Γ(m + 1/2) = (2m)!/(4^m m!) · √π.
pub fn gamma_half_sym(two_x: u32) -> Result<Symbolic> {
    if two_x == 0 {
        return Err(Error::invalid("gamma pole at 0"));
    }
    if two_x % 2 == 0 {
        let m = two_x / 2;
        let mut f = BigInt::one();
        for i in 1..m {
            f *= i;
        }
        Ok(Symbolic::from_rat(Rat::from_integer(f)))
    } else {
        let m = (two_x - 1) / 2; // Γ(m + 1/2)
        let mut num = BigInt::one();
        for i in 1..=(2 * m) {
            num *= i;
        }
        let mut den = BigInt::one();
        for i in 1..=m {
            den *= i;
        }
        den *= BigInt::from(4u32).pow(m);
        Ok(Symbolic { rat: Rat::new(num, den), pi_halves: 1, sqrt_int: BigInt::one() })
    }
}

/// Beta(a2/2, b2/2) at half-integer arguments, exact.
pub fn beta_half_sym(a2: u32, b2: u32) -> Result<Symbolic> {
    let ga = gamma_half_sym(a2)?;
    let gb = gamma_half_sym(b2)?;
    let gab = gamma_half_sym(a2 + b2)?;
    Ok(ga.mul(&gb).div(&gab))
}

// Lanczos approximation, g = 7, n = 9 — the standard double-precision coefficient set.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of Γ(x) for x > 0, via Lanczos. Independent of the exact half-integer path.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π/sin(πx)
        return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln()
            - ln_gamma(1.0 - x);
    }
    let xm1 = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    let t = xm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xm1 + 0.5) * t.ln() - t + acc.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Euler Beta function for positive real arguments.
pub fn beta(a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "beta requires positive arguments");
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Volume of the unit ball in ℝⁿ: ω(n) = π^(n/2) / Γ(1 + n/2).
pub fn unit_ball_volume_sym(n: u32) -> Result<Symbolic> {
    if n == 0 {
        return Err(Error::invalid("dimension must be ≥ 1"));
    }
    let g = gamma_half_sym(n + 2)?; // Γ(1 + n/2) = Γ((n+2)/2)
    let pi_n2 = Symbolic { rat: rat_int(1), pi_halves: n as i32, sqrt_int: BigInt::one() };
    Ok(pi_n2.div(&g))
}

pub fn unit_ball_volume(n: u32) -> Result<f64> {
    Ok(unit_ball_volume_sym(n)?.to_f64())
}

/// First-order constant in the product counting bound: the Riesz-mean defect per unit length.
///
/// Piecewise in the dimension of the sliced factor:
/// 2/3 (n=1); 3π/16 (n=2); π·B(n/2−1,2)/(6·B(n/2−1,5/2)) (n=3,4);
/// (3π/16)·(B(n/2−1,2)/B(n/2−1,5/2))·(247/256)^((n−2)/2) (n≥5).
pub fn c1_sym(n: u32) -> Result<Symbolic> {
    match n {
        0 => Err(Error::invalid("c1 defined for n ≥ 1")),
        1 => Ok(Symbolic::from_rat(rat(2, 3))),
        2 => Ok(Symbolic { rat: rat(3, 16), pi_halves: 2, sqrt_int: BigInt::one() }),
        3 | 4 => {
            let b2 = beta_half_sym(n - 2, 4)?; // B(n/2−1, 2)
            let b52 = beta_half_sym(n - 2, 5)?; // B(n/2−1, 5/2)
            let pi = Symbolic { rat: rat(1, 6), pi_halves: 2, sqrt_int: BigInt::one() };
            Ok(pi.mul(&b2).div(&b52))
        }
        _ => {
            let b2 = beta_half_sym(n - 2, 4)?;
            let b52 = beta_half_sym(n - 2, 5)?;
            let lead = Symbolic { rat: rat(3, 16), pi_halves: 2, sqrt_int: BigInt::one() };
            let decay = Symbolic::pow_half(&rat(247, 256), n - 2);
            Ok(lead.mul(&b2).div(&b52).mul(&decay))
        }
    }
}

pub fn c1(n: u32) -> Result<f64> {
    Ok(c1_sym(n)?.to_f64())
}

/// Threshold constant for admissible cube families:
/// 2√2π (n=1); 9√3 (n=2); 6(n+1)^{3/2}·B(n/2−1,5/2)/B(n/2−1,2) (n=3,4);
/// (16(n+1)^{3/2}/3)·(B(n/2−1,5/2)/B(n/2−1,2))·(256/247)^((n−2)/2) (n≥5).
pub fn c2_sym(n: u32) -> Result<Symbolic> {
    match n {
        0 => Err(Error::invalid("c2 defined for n ≥ 1")),
        1 => Ok(Symbolic { rat: rat_int(2), pi_halves: 2, sqrt_int: BigInt::from(2u32) }),
        2 => Ok(Symbolic { rat: rat_int(9), pi_halves: 0, sqrt_int: BigInt::from(3u32) }),
        3 | 4 => {
            let b52 = beta_half_sym(n - 2, 5)?;
            let b2 = beta_half_sym(n - 2, 4)?;
            let np1 = Symbolic::pow_half(&rat_int((n + 1) as i64), 3);
            Ok(np1.scale(rat_int(6)).mul(&b52).div(&b2))
        }
        _ => {
            let b52 = beta_half_sym(n - 2, 5)?;
            let b2 = beta_half_sym(n - 2, 4)?;
            let np1 = Symbolic::pow_half(&rat_int((n + 1) as i64), 3);
            let growth = Symbolic::pow_half(&rat(256, 247), n - 2);
            Ok(np1.scale(rat(16, 3)).mul(&b52).div(&b2).mul(&growth))
        }
    }
}

pub fn c2(n: u32) -> Result<f64> {
    Ok(c2_sym(n)?.to_f64())
}

/// Defect constant for Riesz means of order p ≥ 1:
/// 1/8 (p=1); 1/9 (1<p≤2); (1/8)·(247/256)^(p−1) (p>2).
pub fn c3(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid(format!("c3 defined for p ≥ 1, got {p}")));
    }
    if p == 1.0 {
        Ok(0.125)
    } else if p <= 2.0 {
        Ok(1.0 / 9.0)
    } else {
        Ok(0.125 * (247.0f64 / 256.0).powf(p - 1.0))
    }
}

/// Bundle of the per-dimension constants used by the n-dimensional bounds.
#[derive(Debug, Clone, Serialize)]
pub struct DimConstants {
    pub n: u32,
    pub omega_n: f64,
    pub c1: f64,
    pub c2: f64,
}

pub fn dim_constants(n: u32) -> Result<DimConstants> {
    Ok(DimConstants { n, omega_n: unit_ball_volume(n)?, c1: c1(n)?, c2: c2(n)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn unit_ball_volumes_match_closed_forms() {
        assert!(close(unit_ball_volume(1).unwrap(), 2.0, 1e-14));
        assert!(close(unit_ball_volume(2).unwrap(), std::f64::consts::PI, 1e-14));
        assert!(close(unit_ball_volume(3).unwrap(), 4.0 * std::f64::consts::PI / 3.0, 1e-14));
        assert!(close(
            unit_ball_volume(4).unwrap(),
            std::f64::consts::PI * std::f64::consts::PI / 2.0,
            1e-14
        ));
    }

    #[test]
    fn c1_small_dimensions_exact() {
        assert_eq!(c1_sym(1).unwrap(), Symbolic::from_rat(rat(2, 3)));
        assert!(close(c1(2).unwrap(), 3.0 * std::f64::consts::PI / 16.0, 1e-15));
        // n = 3 collapses to the rational 16/27 via B(1/2,2)=4/3 and B(1/2,5/2)=3π/8.
        let c13 = c1_sym(3).unwrap();
        assert!(c13.is_rational());
        assert_eq!(c13.rat, rat(16, 27));
        // n = 4: π·B(1,2)/(6·B(1,5/2)) = π·(1/2)/(6·(2/5)) = 5π/24.
        let c14 = c1_sym(4).unwrap();
        assert_eq!(c14.pi_halves, 2);
        assert_eq!(c14.rat, rat(5, 24));
    }

    #[test]
    fn c2_small_dimensions_exact() {
        let v = c2_sym(1).unwrap();
        assert_eq!(v.rat, rat_int(2));
        assert_eq!(v.pi_halves, 2);
        assert_eq!(v.sqrt_int, BigInt::from(2u32));
        let v = c2_sym(2).unwrap();
        assert_eq!(v.rat, rat_int(9));
        assert_eq!(v.sqrt_int, BigInt::from(3u32));
        assert!(close(c2(2).unwrap(), 9.0 * 3.0f64.sqrt(), 1e-15));
    }

    #[test]
    fn c2_c1_product_identity_for_n_ge_4() {
        // C1(n)·C2(n) = (n+1)^{3/2}·π for every n ≥ 4 (the Beta ratios cancel).
        for n in 4..=12 {
            let prod = c1(n).unwrap() * c2(n).unwrap();
            let expect = ((n + 1) as f64).powf(1.5) * std::f64::consts::PI;
            assert!(
                close(prod, expect, 1e-12),
                "identity fails at n={n}: {prod} vs {expect}"
            );
        }
    }

    #[test]
    fn c1_bounded_c2_bounded_below() {
        for n in 1..=12 {
            let a = c1(n).unwrap();
            assert!(a > 0.0 && a < 1.0, "c1({n}) = {a} outside (0,1)");
            let b = c2(n).unwrap();
            assert!(
                b >= 2.0 * 2.0f64.sqrt() * std::f64::consts::PI - 1e-12,
                "c2({n}) = {b} below 2√2π"
            );
        }
    }

    #[test]
    fn c3_branches() {
        assert_eq!(c3(1.0).unwrap(), 0.125);
        assert_eq!(c3(1.5).unwrap(), 1.0 / 9.0);
        assert_eq!(c3(2.0).unwrap(), 1.0 / 9.0);
        let v = c3(3.0).unwrap();
        assert!(close(v, 0.125 * (247.0f64 / 256.0).powf(2.0), 1e-15));
        assert!(c3(0.5).is_err());
        // Continuity is NOT claimed at p=2 (1/9 vs the decaying branch); just sanity-check order.
        assert!(c3(2.0 + 1e-9).unwrap() < 0.125);
    }

    #[test]
    fn symbolic_beta_matches_lanczos_to_1e12() {
        // Cross-check the exact half-integer path against the independent Lanczos path.
        for a2 in 1..=9u32 {
            for b2 in 1..=9u32 {
                let exact = beta_half_sym(a2, b2).unwrap().to_f64();
                let approx = beta(a2 as f64 / 2.0, b2 as f64 / 2.0);
                assert!(
                    close(exact, approx, 1e-12),
                    "beta({a2}/2,{b2}/2): {exact} vs {approx}"
                );
            }
        }
    }

    #[test]
    fn gamma_half_integers_match_lanczos() {
        for two_x in 1..=15u32 {
            let exact = gamma_half_sym(two_x).unwrap().to_f64();
            let approx = gamma(two_x as f64 / 2.0);
            assert!(close(exact, approx, 1e-12), "gamma({two_x}/2)");
        }
    }

    #[test]
    fn symbolic_display_is_readable() {
        assert_eq!(c2_sym(2).unwrap().to_string(), "9·√3");
        assert_eq!(c1_sym(3).unwrap().to_string(), "16/27");
        assert_eq!(c2_sym(1).unwrap().to_string(), "2·√2·π");
    }
}
