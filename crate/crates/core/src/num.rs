//! Serde adapters writing `BigInt` values as plain JSON numbers of any size.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

fn to_number<E: serde::ser::Error>(x: &BigInt) -> Result<Number, E> {
    x.to_string().parse().map_err(E::custom)
}

fn from_number<E: serde::de::Error>(n: &Number) -> Result<BigInt, E> {
    n.to_string()
        .parse()
        .map_err(|_| E::custom(format!("expected an integer, found {n}")))
}

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_number::<S::Error>(x)?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_number(&Number::deserialize(d)?)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let nums = v
            .iter()
            .map(to_number::<S::Error>)
            .collect::<Result<Vec<_>, _>>()?;
        nums.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Number>::deserialize(d)?
            .iter()
            .map(from_number)
            .collect()
    }
}
