//! Exact rational scalars.
//!
//! Every weight, bias, evaluation result and LP coefficient in this crate is
//! an arbitrary-precision rational. Nothing ever rounds; region membership is
//! decided by exact sign tests, so floating point is banned from the numeric
//! core.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

/// Arbitrary-precision rational in canonical form (reduced, positive
/// denominator). `num_rational::Ratio` maintains the canonical form on every
/// operation.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("`{0}` is not an exact rational literal (expected `n` or `p/q`; floats are rejected)")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
}

/// Integer-valued rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d`. Panics on `d == 0`; intended for literals in code and
/// tests.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "rational literal with zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn parse_bigint(digits: &str, signed: bool, full: &str) -> Result<BigInt, RationalParseError> {
    let body = if signed {
        digits.strip_prefix('-').or_else(|| digits.strip_prefix('+')).unwrap_or(digits)
    } else {
        digits
    };
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RationalParseError::Malformed(full.to_string()));
    }
    digits
        .parse::<BigInt>()
        .map_err(|_| RationalParseError::Malformed(full.to_string()))
}

/// Parse `"n"` or `"p/q"` into a canonical rational. Any other shape —
/// including decimal-point and exponent literals — is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(RationalParseError::Empty);
    }
    match t.split_once('/') {
        None => Ok(Rational::from_integer(parse_bigint(t, true, s)?)),
        Some((n, d)) => {
            let numer = parse_bigint(n, true, s)?;
            let denom = parse_bigint(d, false, s)?;
            if denom == BigInt::from(0) {
                return Err(RationalParseError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Canonical string form: `"n"` for integers, `"p/q"` otherwise. Round-trips
/// exactly through [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational(" 2/6 ").unwrap(), rat(1, 3));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for bad in ["0.5", "1e3", "1.0/2", "", "/", "3/", "/4", "3/-4", "one", "1 / 2"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
        assert_eq!(
            parse_rational("1/0"),
            Err(RationalParseError::ZeroDenominator("1/0".to_string()))
        );
    }

    #[test]
    fn format_round_trips() {
        for r in [rat_int(0), rat_int(-12), rat(22, 7), rat(-5, 3)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&rat(8, 4)), "2");
    }
}
