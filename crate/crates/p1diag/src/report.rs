//! Machine-readable report envelope and serde helpers.
//!
//! Big integers appear in JSON as base-10 strings so that reports survive
//! any JSON parser regardless of its number-width limits. Collections are
//! kept sorted by natural key by their producers, which together with
//! serde's stable field ordering makes output byte-identical for identical
//! configs.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Version of the JSON report schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Top-level shape of every CLI report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub subcommand: String,
    pub config: serde_json::Value,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(subcommand: &str, config: serde_json::Value, result: T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Serializes a `BigUint` as a decimal string.
pub mod biguint_str {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("not a base-10 integer: {s}")))
    }
}

/// Serializes a `Vec<BigUint>` as decimal strings.
pub mod biguint_vec {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|x| x.to_str_radix(10)).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| s.parse().map_err(|_| D::Error::custom(format!("not a base-10 integer: {s}"))))
            .collect()
    }
}

/// Serializes `Vec<(BigUint, u32)>` (prime, exponent) pairs with decimal
/// string primes.
pub mod factor_pairs {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(v: &[(BigUint, u32)], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(String, u32)> = v.iter().map(|(p, e)| (p.to_str_radix(10), *e)).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigUint, u32)>, D::Error> {
        let pairs = Vec::<(String, u32)>::deserialize(d)?;
        pairs
            .iter()
            .map(|(p, e)| {
                p.parse()
                    .map(|p| (p, *e))
                    .map_err(|_| D::Error::custom(format!("not a base-10 integer: {p}")))
            })
            .collect()
    }
}
