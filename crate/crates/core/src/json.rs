//! JSON conventions shared by the CLI and the serializable types: every
//! rational is a string `"p"` or `"p/q"`, never a float.

use serde::Serializer;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::rational::{parse, to_string};
use crate::exact::Rational;

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(r))
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(to_string(r))
}

pub fn rationals_value(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rational_value).collect())
}

/// Reads a rational from a JSON string or integer.
pub fn parse_rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse(&n.to_string()),
        other => Err(Error::Malformed(format!(
            "expected a rational, got {other}"
        ))),
    }
}

pub fn parse_rationals_value(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::Malformed(format!("expected an array, got {v}")))?
        .iter()
        .map(parse_rational_value)
        .collect()
}
