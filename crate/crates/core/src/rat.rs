//! Exact rational helpers on top of `num_rational::BigRational`.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number in canonical form (positive denominator, reduced).
pub type Rat = num_rational::BigRational;

/// Builds `p/q` in canonical form. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `p/q`, a bare integer `p`, or a finite decimal such as `0.25`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a fraction: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{whole_digits}{frac}");
        let mut p: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            p = -p;
        }
        let q = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rat::new(p, q));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(p))
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn to_decimal(x: &Rat, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = x.abs() * Rat::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = r * 2u32;
    let rounded = if twice >= *scaled.denom() {
        q + 1u32
    } else {
        q
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded_is_zero(&int_part, &frac_part) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(places - frac.len()))
}

fn rounded_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `true` iff `0 <= x <= 1`.
pub fn in_unit(x: &Rat) -> bool {
    !x.is_negative() && x <= &Rat::one()
}

/// Smallest integer `>= x`.
pub fn ceil_int(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// `min(a, b)` by reference without cloning both.
pub fn min_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    match a.cmp(b) {
        Ordering::Greater => b,
        _ => a,
    }
}

pub fn max_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    match a.cmp(b) {
        Ordering::Less => b,
        _ => a,
    }
}

/// Converts a non-negative integer to `u64`, if it fits.
pub fn to_u64(x: &BigInt) -> Option<u64> {
    match x.sign() {
        Sign::Minus => None,
        _ => x.to_u64(),
    }
}

pub fn dyadic(k: BigInt, bits: u32) -> Rat {
    Rat::new(k, BigInt::one() << bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" 1 ").unwrap(), int(1));
        assert_eq!(parse_rat("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rat("-2/4").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("0.").is_err());
    }

    #[test]
    fn canonical_form() {
        let x = rat(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(fmt_rat(&x), "-3/2");
        assert_eq!(fmt_rat(&int(4)), "4");
    }

    #[test]
    fn decimal_rendering_rounds_half_up() {
        assert_eq!(to_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&rat(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&rat(1, 8), 2), "0.13");
        assert_eq!(to_decimal(&rat(1, 100), 3), "0.010");
        assert_eq!(to_decimal(&rat(-1, 4), 1), "-0.3");
        assert_eq!(to_decimal(&rat(7, 2), 0), "4");
    }
}
