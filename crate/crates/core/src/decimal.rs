// Serde helpers: big integers as decimal strings, rationals as "p/q".

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::Serializer;

pub fn biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn biguint_vec<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Coordinate subsets become one-based `"1,2,3"` keys.
pub fn subset_map<S: Serializer>(
    v: &BTreeMap<Vec<usize>, BigUint>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(v.len()))?;
    for (k, x) in v {
        let key: Vec<String> = k.iter().map(|i| (i + 1).to_string()).collect();
        map.serialize_entry(&key.join(","), &x.to_string())?;
    }
    map.end()
}

pub fn rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", v.numer(), v.denom()))
}
