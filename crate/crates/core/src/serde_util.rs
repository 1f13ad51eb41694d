//! Serde adapters. Rationals travel as `"p/q"` strings and index lists are
//! written 1-based.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matcore::{parse_rational, Rational};

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(value: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = value.iter().map(|v| v.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

pub mod rational_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(value: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = value
            .iter()
            .map(|v| v.iter().map(|e| e.to_string()).collect())
            .collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let strings = Vec::<Vec<String>>::deserialize(d)?;
        strings
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| parse_rational(t).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// 0-based indices in memory, 1-based on the wire.
pub mod one_based {
    use super::*;

    pub fn serialize<S: Serializer>(value: &[usize], s: S) -> Result<S::Ok, S::Error> {
        let shifted: Vec<usize> = value.iter().map(|i| i + 1).collect();
        shifted.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        raw.into_iter()
            .map(|i| {
                i.checked_sub(1)
                    .ok_or_else(|| D::Error::custom("indices are 1-based"))
            })
            .collect()
    }
}
