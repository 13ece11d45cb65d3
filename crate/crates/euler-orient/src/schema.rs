//! Versioned JSON schemas for the CLI outputs, shipped with the crate, plus
//! a small structural validator covering the subset of JSON Schema the
//! schemas use (`type`, `properties`, `required`, `items`, `enum`, and a
//! `$ref` to the shared manifest schema).

use serde_json::Value;

pub const SCHEMA_VERSION: u64 = 1;

pub const MANIFEST: &str = include_str!("../schemas/manifest.v1.json");
pub const GEN: &str = include_str!("../schemas/gen.v1.json");
pub const COUNT: &str = include_str!("../schemas/count.v1.json");
pub const ESTIMATE: &str = include_str!("../schemas/estimate.v1.json");
pub const MC: &str = include_str!("../schemas/mc.v1.json");
pub const VERIFY: &str = include_str!("../schemas/verify.v1.json");

/// Output kinds with a shipped schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Gen,
    Count,
    Estimate,
    Mc,
    Verify,
}

pub fn schema_text(kind: Kind) -> &'static str {
    match kind {
        Kind::Gen => GEN,
        Kind::Count => COUNT,
        Kind::Estimate => ESTIMATE,
        Kind::Mc => MC,
        Kind::Verify => VERIFY,
    }
}

/// Validates `instance` against the shipped schema for `kind`; returns the
/// first problem found as a path + message.
pub fn validate(kind: Kind, instance: &Value) -> Result<(), String> {
    let schema: Value =
        serde_json::from_str(schema_text(kind)).map_err(|e| format!("bad schema: {e}"))?;
    let manifest: Value =
        serde_json::from_str(MANIFEST).map_err(|e| format!("bad manifest schema: {e}"))?;
    check(&schema, instance, &manifest, "$")
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "number" => v.is_number(),
        "integer" => v.as_i64().is_some() || v.as_u64().is_some(),
        "null" => v.is_null(),
        _ => false,
    }
}

fn check(schema: &Value, v: &Value, manifest: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        if r == "#manifest" {
            return check(manifest, v, manifest, path);
        }
        return Err(format!("{path}: unsupported $ref {r}"));
    }

    match schema.get("type") {
        Some(Value::String(ty)) => {
            if !type_matches(ty, v) {
                return Err(format!("{path}: expected {ty}, got {v}"));
            }
        }
        Some(Value::Array(types)) => {
            let ok = types
                .iter()
                .filter_map(Value::as_str)
                .any(|ty| type_matches(ty, v));
            if !ok {
                return Err(format!("{path}: {v} matches none of {types:?}"));
            }
        }
        _ => {}
    }

    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(v) {
            return Err(format!("{path}: {v} not in {allowed:?}"));
        }
    }

    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        if let Some(obj) = v.as_object() {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing required field {key:?}"));
                }
            }
        }
    }

    if let (Some(props), Some(obj)) = (
        schema.get("properties").and_then(Value::as_object),
        v.as_object(),
    ) {
        for (key, sub) in props {
            if let Some(val) = obj.get(key) {
                check(sub, val, manifest, &format!("{path}.{key}"))?;
            }
        }
    }

    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, val) in arr.iter().enumerate() {
            check(items, val, manifest, &format!("{path}[{i}]"))?;
        }
    }

    Ok(())
}
