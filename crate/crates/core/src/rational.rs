//! Exact rational parsing and conversion helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"p/q"`, an integer, or a decimal such as `"0.3"` or `"2.5e-1"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{s}` has a zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(at) => {
            let e: i32 = s[at + 1..].parse().map_err(|_| bad())?;
            (&s[..at], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let numer: BigInt = format!("{int_part}{frac_part}0")
        .parse::<BigInt>()
        .map_err(|_| bad())?
        / BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(Pow::pow(&ten, scale as u32));
    } else {
        value /= BigRational::from_integer(Pow::pow(&ten, (-scale) as u32));
    }
    Ok(if negative { -value } else { value })
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `p/q` in lowest terms, or the integer alone.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3/10").unwrap(), q(3, 10));
        assert_eq!(parse_rational("0.3").unwrap(), q(3, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), q(-5, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1e2").unwrap(), q(100, 1));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "-", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&q(6, 20)), "3/10");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }
}
