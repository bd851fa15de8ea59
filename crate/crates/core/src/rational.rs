//! Exact rationals and their text/JSON encodings.
//!
//! Rationals print as `p/q` in lowest terms with `q > 0`, integers print bare.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d`, reduced. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rat {
    frac(1, 2)
}

pub fn to_f64(r: &Rat) -> f64 {
    // Falls back to numerator/denominator division when the ratio overflows
    // either part.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact conversion of a finite double.
pub fn from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

pub fn parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

pub fn format(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integers that fit in an `i64` become JSON numbers, everything else a string.
pub fn to_json(r: &Rat) -> Value {
    if r.denom().is_one() {
        if let Some(n) = r.numer().to_i64() {
            return Value::from(n);
        }
    }
    Value::String(format(r))
}

pub fn from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(BigInt::from(u)))
            } else {
                Err(Error::Parse(format!(
                    "non-integer JSON number {n}; encode rationals as \"p/q\""
                )))
            }
        }
        Value::String(s) => parse(s),
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

/// Sign as -1, 0 or 1.
pub fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3", "12345678901234567890123/7"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert_eq!(format(&parse("4/-6").unwrap()), "-2/3");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn json_round_trip() {
        for r in [int(5), frac(-7, 3), parse("99999999999999999999999").unwrap()] {
            assert_eq!(from_json(&to_json(&r)).unwrap(), r);
        }
        assert_eq!(to_json(&int(-4)), Value::from(-4));
        assert!(from_json(&serde_json::json!(0.5)).is_err());
    }
}
