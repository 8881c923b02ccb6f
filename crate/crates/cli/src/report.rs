//! Structured JSON renderings of lattice objects.
//!
//! Integers are emitted as JSON numbers when they fit in `i64` and as
//! decimal strings otherwise, so reports stay exact.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use torific_core::fans::{Cone, Fan};
use torific_core::lattice::LatticeVector;
use torific_core::monomials::{monomial_string, MonomialIdeal};

/// Exact integer for JSON output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn int(x: &BigInt) -> Value {
    serde_json::to_value(JsonInt(x.clone())).expect("integers serialize")
}

pub fn vector(v: &LatticeVector) -> Value {
    Value::Array(v.entries().iter().map(int).collect())
}

pub fn vectors<'a>(vs: impl IntoIterator<Item = &'a LatticeVector>) -> Value {
    Value::Array(vs.into_iter().map(vector).collect())
}

/// A cone as its sorted ray list, plus lineality generators when present.
pub fn cone(c: &Cone) -> Value {
    if c.lineality().is_empty() {
        json!({ "rays": vectors(c.rays()) })
    } else {
        json!({ "rays": vectors(c.rays()), "lineality": vectors(c.lineality()) })
    }
}

/// A fan as the list of its maximal cones.
pub fn fan(f: &Fan) -> Value {
    json!({
        "rank": f.rank(),
        "maximal_cones": f.maximal_cones().iter().map(cone).collect::<Vec<_>>(),
    })
}

pub fn ideal(i: &MonomialIdeal) -> Value {
    json!({
        "generators": vectors(i.generators()),
        "monomials": i.generators().iter().map(monomial_string).collect::<Vec<_>>(),
    })
}

/// Indented `key: value` rendering for terminals.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, value, 0);
    out
}

fn is_leaf_array(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(inner) => inner.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    })
}

fn inline(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_into(out: &mut String, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_into(out, v, depth + 1);
                    }
                    Value::Array(items) if !is_leaf_array(items) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_into(out, v, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", inline(v));
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) if !is_leaf_array(std::slice::from_ref(item)) => {
                        let _ = writeln!(out, "{pad}-");
                        render_into(out, item, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}- {}", inline(item));
                    }
                }
            }
        }
        leaf => {
            let _ = writeln!(out, "{pad}{}", inline(leaf));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_become_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int(&big), Value::String(big.to_string()));
        assert_eq!(int(&BigInt::from(-7)), json!(-7));
    }

    #[test]
    fn text_rendering_nests() {
        let v = json!({"valid": true, "fan": {"rank": 2, "maximal_cones": [{"rays": [[1, 0], [0, 1]]}]}});
        let text = render_text(&v);
        assert!(text.contains("valid: true"));
        assert!(text.contains("fan:\n  maximal_cones:\n"), "{text}");
        assert!(text.contains("rays: [[1,0],[0,1]]"), "{text}");
    }
}
