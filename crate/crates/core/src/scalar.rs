//! Exact rational scalars and their canonical string form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseScalarError(pub String);

pub fn int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    assert!(denom != 0, "zero denominator");
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed) and reduces to lowest terms.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseScalarError> {
    let trimmed = text.trim();
    let err = || ParseScalarError(text.to_string());
    match trimmed.split_once('/') {
        None => BigInt::from_str(trimmed)
            .map(Scalar::from_integer)
            .map_err(|_| err()),
        Some((numer, denom)) => {
            let numer = BigInt::from_str(numer.trim()).map_err(|_| err())?;
            let denom = BigInt::from_str(denom.trim()).map_err(|_| err())?;
            if denom.is_zero() {
                return Err(err());
            }
            Ok(Scalar::new(numer, denom))
        }
    }
}

/// Canonical `"p/q"` form, or `"p"` for integers.
pub fn format_scalar(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses a comma separated list of rationals such as `"1/4, 1/4"`.
pub fn parse_scalar_list(text: &str) -> Result<Vec<Scalar>, ParseScalarError> {
    text.split(',').map(parse_scalar).collect()
}

/// Serde adapter storing a list of scalars as canonical strings.
pub(crate) mod serde_vec {
    use super::{format_scalar, parse_scalar, Scalar};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Scalar], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(values.iter().map(format_scalar))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Scalar>, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        raw.iter()
            .map(|s| parse_scalar(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(format_scalar(&ratio(2, 4)), "1/2");
        assert_eq!(format_scalar(&ratio(3, -6)), "-1/2");
        assert_eq!(format_scalar(&int(7)), "7");
        assert_eq!(format_scalar(&ratio(0, 5)), "0");
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(parse_scalar("6/8").unwrap(), ratio(3, 4));
        assert_eq!(parse_scalar(" -2 ").unwrap(), int(-2));
        assert_eq!(parse_scalar("1/-3").unwrap(), ratio(-1, 3));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("0.5").is_err());
        assert_eq!(parse_scalar_list("1/4,1/4").unwrap(), vec![ratio(1, 4); 2]);
    }
}
