//! JSON encoding for arbitrary-precision integers: numbers when they fit in
//! an `i64`, decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

struct Big<'a>(&'a BigInt);

impl Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn vec<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&Big(v))?;
    }
    seq.end()
}
