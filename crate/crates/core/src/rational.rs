//! Exact rational scalars used for domain coordinates.
//!
//! Coordinates arrive either as JSON numbers (converted via the exact binary value of the
//! double) or as `"p/q"` strings (exact). All set arithmetic downstream stays rational, so
//! strictness decisions (is a point inside? do two boxes overlap?) never depend on rounding.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0` (programmer error, not input error).
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "rational with zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact value of a finite double as a rational (doubles are dyadic rationals).
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::invalid(format!("non-finite value {x}")))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // `to_f64` only fails on astronomically large numerators; fall back via string in
    // that case rather than panicking.
    r.to_f64().unwrap_or_else(|| {
        let approx = r.numer().to_f64().unwrap_or(f64::INFINITY)
            / r.denom().to_f64().unwrap_or(1.0);
        approx
    })
}

/// 2^e as an exact rational, for any sign of `e`.
pub fn rat_pow2(e: i64) -> Rat {
    let one = BigInt::one();
    if e >= 0 {
        Rat::from_integer(one << (e as usize))
    } else {
        Rat::new(one.clone(), one << ((-e) as usize))
    }
}

/// Parse `"p/q"`, `"p"`, or a decimal string like `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty rational string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.trim();
        if !digits.chars().all(|c| c.is_ascii_digit()) || digits.is_empty() {
            return Err(Error::invalid(format!("bad decimal string {s:?}")));
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_str = if int_part.trim().is_empty() || int_part.trim() == "-" {
            "0".to_string()
        } else {
            int_part.trim().trim_start_matches('-').to_string()
        };
        let i: BigInt = int_str
            .parse()
            .map_err(|_| Error::invalid(format!("bad decimal string {s:?}")))?;
        let f: BigInt = digits
            .parse()
            .map_err(|_| Error::invalid(format!("bad decimal string {s:?}")))?;
        let scale = BigInt::from(10u32).pow(digits.len() as u32);
        let mut v = Rat::from_integer(i) + Rat::new(f, scale);
        if negative {
            v = -v;
        }
        return Ok(v);
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational string {s:?}")))?;
    Ok(Rat::from_integer(n))
}

/// Least common multiple of two positive integers.
pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    let g = num::integer::gcd(a.clone(), b.clone());
    (a / &g) * b
}

/// LCM of the denominators of a set of rationals (all assumed reduced, as BigRational keeps them).
pub fn denominator_lcm<'a>(vals: impl Iterator<Item = &'a Rat>) -> BigInt {
    let mut acc = BigInt::one();
    for v in vals {
        acc = lcm_big(&acc, &v.denom().abs());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(" -7/2 ").unwrap(), rat(-7, 2));
        assert_eq!(parse_rational("5").unwrap(), rat_int(5));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn f64_round_trip_is_exact_for_dyadics() {
        let r = rat_from_f64(0.375).unwrap();
        assert_eq!(r, rat(3, 8));
        // 0.1 is NOT 1/10 as a double; conversion is the exact dyadic value.
        let r = rat_from_f64(0.1).unwrap();
        assert_ne!(r, rat(1, 10));
        assert!((rat_to_f64(&r) - 0.1).abs() == 0.0);
    }

    #[test]
    fn pow2_handles_negative_exponents() {
        assert_eq!(rat_pow2(3), rat_int(8));
        assert_eq!(rat_pow2(-2), rat(1, 4));
    }
}
