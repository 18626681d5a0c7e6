//! Serde adapters writing big numbers as decimal strings.
//!
//! Integers become `"123"`, rationals become `{"num": "-507", "den": "2642"}`
//! and exponent tuples become arrays of decimal strings, so JSON consumers
//! limited to 64-bit numbers never lose precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::topology::ExponentTuple;

fn parse_int<E: serde::de::Error>(s: &str) -> Result<BigInt, E> {
    s.parse::<BigInt>().map_err(|e| E::custom(format!("bad decimal integer {s:?}: {e}")))
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        RationalRepr { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

/// JSON value for a rational, as written by [`rational`].
pub fn rational_value(r: &BigRational) -> serde_json::Value {
    serde_json::json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        parse_int(&String::deserialize(d)?)
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        let num = parse_int(&repr.num)?;
        let den = parse_int::<D::Error>(&repr.den)?;
        if den <= BigInt::from(0) {
            return Err(D::Error::custom(format!("denominator must be positive, got {den}")));
        }
        let r = BigRational::new(num.clone(), den.clone());
        if r.numer() != &num || r.denom() != &den {
            return Err(D::Error::custom(format!("rational {num}/{den} is not in lowest terms")));
        }
        Ok(r)
    }
}

pub mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(RationalRepr::from).serialize(s)
    }
}

pub mod tuple {
    use super::*;

    pub fn serialize<S: Serializer>(t: &ExponentTuple, s: S) -> Result<S::Ok, S::Error> {
        t.to_strings().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExponentTuple, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let entries = raw.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>, _>>()?;
        ExponentTuple::new(entries).map_err(D::Error::custom)
    }
}
