//! JSON encoding helpers.
//!
//! Integers serialize as bare JSON numbers of unlimited width (serde_json's
//! arbitrary-precision mode keeps the digits intact), rationals as
//! `{"num": N, "den": D}` in lowest terms with positive denominator.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

/// Wraps a JSON parse failure as [`crate::Error::InvalidParameter`] without
/// stacking a second prefix when the message came from a wire `try_from` that
/// already carries one.
pub fn invalid_json(err: serde_json::Error) -> crate::Error {
    let text = err.to_string();
    let trimmed = text.strip_prefix("invalid parameter: ").unwrap_or(&text);
    crate::Error::InvalidParameter(trimmed.to_string())
}

fn number_from_digits<S: Serializer>(digits: &str, ser: S) -> Result<S::Ok, S::Error> {
    match serde_json::Number::from_str(digits) {
        Ok(n) => n.serialize(ser),
        // Non-JSON serializers have no arbitrary-precision number type.
        Err(_) => ser.serialize_str(digits),
    }
}

/// `serde(with = "...")` adapter for [`BigUint`] fields.
pub mod nat {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        number_from_digits(&value.to_string(), ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        let n = serde_json::Number::deserialize(de)?;
        BigUint::from_str(n.as_str())
            .map_err(|_| D::Error::custom(format!("expected a nonnegative integer, got {n}")))
    }
}

/// `serde(with = "...")` adapter for [`BigInt`] fields.
pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        number_from_digits(&value.to_string(), ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let n = serde_json::Number::deserialize(de)?;
        BigInt::from_str(n.as_str())
            .map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
    }
}

/// Wire shape of a rational number: numerator and denominator in lowest
/// terms, denominator positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatWire {
    #[serde(with = "int")]
    pub num: BigInt,
    #[serde(with = "int")]
    pub den: BigInt,
}

impl From<&BigRational> for RatWire {
    fn from(value: &BigRational) -> Self {
        RatWire {
            num: value.numer().clone(),
            den: value.denom().clone(),
        }
    }
}

impl TryFrom<RatWire> for BigRational {
    type Error = crate::Error;

    fn try_from(wire: RatWire) -> crate::Result<BigRational> {
        if !wire.den.is_positive() {
            return Err(crate::Error::InvalidParameter(format!(
                "rational denominator must be positive, got {}",
                wire.den
            )));
        }
        Ok(BigRational::new(wire.num, wire.den))
    }
}

/// `serde(with = "...")` adapter for [`BigRational`] fields.
pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
        RatWire::from(value).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
        let wire = RatWire::deserialize(de)?;
        BigRational::try_from(wire).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Serialize, Deserialize)]
    struct Probe {
        #[serde(with = "nat")]
        n: BigUint,
        #[serde(with = "rat")]
        q: BigRational,
    }

    #[test]
    fn big_integers_round_trip_as_json_numbers() {
        let n = BigUint::from_str("123456789012345678901234567890123456789").unwrap();
        let probe = Probe {
            n: n.clone(),
            q: BigRational::new(BigInt::from(-7), BigInt::from(12)),
        };
        let text = serde_json::to_string(&probe).unwrap();
        assert!(text.contains("123456789012345678901234567890123456789"));
        assert!(text.contains("\"num\":-7"));
        let back: Probe = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n, n);
        assert_eq!(back.q, probe.q);
    }

    #[test]
    fn fractional_json_numbers_are_rejected_for_integers() {
        let err = serde_json::from_str::<Probe>(r#"{"n":1.5,"q":{"num":0,"den":1}}"#);
        assert!(err.is_err());
    }

    #[test]
    fn nonpositive_denominators_are_rejected() {
        let err = serde_json::from_str::<Probe>(r#"{"n":1,"q":{"num":1,"den":0}}"#);
        assert!(err.is_err());
        let err = serde_json::from_str::<Probe>(r#"{"n":1,"q":{"num":1,"den":-3}}"#);
        assert!(err.is_err());
    }
}
