//! Exact rational helpers: parsing, formatting and bounded square roots.

use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

/// Largest integer magnitude that survives a round trip through an IEEE double.
const JSON_SAFE_INT: i64 = (1 << 53) - 1;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"7"`, `"-3/7"`, `"0.125"` or `"-1.5e2"` style strings exactly.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut numer = BigInt::from_str(if joined.is_empty() { "0" } else { &joined }).map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// JSON number when the value is an integer of at most 53 bits, string otherwise.
pub fn rational_to_json(r: &Rational) -> serde_json::Value {
    if r.is_integer() {
        if let Some(v) = r.numer().to_i64() {
            if v.abs() <= JSON_SAFE_INT {
                return serde_json::Value::from(v);
            }
        }
    }
    serde_json::Value::String(format_rational(r))
}

pub fn bigint_to_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) if x.abs() <= JSON_SAFE_INT => serde_json::Value::from(x),
        _ => serde_json::Value::String(v.to_string()),
    }
}

pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational, Error> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                // Non-integer JSON numbers are converted from their decimal text.
                parse_rational(&n.to_string())
            }
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected number or string, got {other}"))),
    }
}

pub fn sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Largest `s = k / 2^bits` with `s * s <= q` (for `q >= 0`).
pub fn sqrt_floor(q: &Rational, bits: u32) -> Rational {
    assert!(!q.is_negative(), "square root of a negative rational");
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (q.numer() * scale).div_floor(q.denom());
    let root = scaled.sqrt();
    Rational::new(root, BigInt::one() << bits as usize)
}

/// Smallest `s = k / 2^bits` with `s * s >= q` (for `q >= 0`).
pub fn sqrt_ceil(q: &Rational, bits: u32) -> Rational {
    let lo = sqrt_floor(q, bits);
    if &(&lo * &lo) == q {
        lo
    } else {
        lo + Rational::new(BigInt::one(), BigInt::one() << bits as usize)
    }
}

/// Exact midpoint of two rationals.
pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_forms() {
        assert_eq!(parse_rational("3/7").unwrap(), ratio(3, 7));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("-2.5").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational("1e3").unwrap(), int(1000));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn json_numbers_and_strings() {
        let v: serde_json::Value = serde_json::from_str("[1, \"1/3\", 0.1]").unwrap();
        let a = v.as_array().unwrap();
        assert_eq!(rational_from_json(&a[0]).unwrap(), int(1));
        assert_eq!(rational_from_json(&a[1]).unwrap(), ratio(1, 3));
        assert_eq!(rational_from_json(&a[2]).unwrap(), ratio(1, 10));
        assert_eq!(rational_to_json(&int(5)), serde_json::json!(5));
        assert_eq!(rational_to_json(&ratio(1, 2)), serde_json::json!("1/2"));
        let big = Rational::from_integer(BigInt::from(1u64 << 60));
        assert_eq!(rational_to_json(&big), serde_json::json!("1152921504606846976"));
    }

    #[test]
    fn square_root_brackets() {
        let two = int(2);
        let lo = sqrt_floor(&two, 30);
        let hi = sqrt_ceil(&two, 30);
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert_eq!(&hi - &lo, Rational::new(BigInt::one(), BigInt::one() << 30));
        assert_eq!(sqrt_floor(&ratio(9, 4), 4), ratio(3, 2));
        assert_eq!(sqrt_ceil(&ratio(9, 4), 4), ratio(3, 2));
    }
}
