//! Path-tracking accessors over `serde_json` objects and canonical output.

use serde_json::{Map, Value};

use crate::error::{DescriptorError, ErrorKind, Result};

pub(crate) fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub(crate) fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

pub(crate) fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| DescriptorError::Json(e.to_string()))
}

/// Canonical rendering: keys sorted (serde_json's default map is ordered),
/// two-space indentation, trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("Value always serializes");
    out.push('\n');
    out
}

/// A JSON object being consumed field by field. Remembers which keys were
/// read so the remainder can be collected into an extensions bag.
pub(crate) struct Fields<'a> {
    map: &'a Map<String, Value>,
    path: String,
    kind: ErrorKind,
    used: Vec<&'a str>,
}

impl<'a> Fields<'a> {
    pub fn new(value: &'a Value, path: &str, kind: ErrorKind) -> Result<Self> {
        match value {
            Value::Object(map) => Ok(Self { map, path: path.to_string(), kind, used: Vec::new() }),
            other => Err(DescriptorError::new(
                kind,
                path,
                format!("expected an object, found {}", type_name(other)),
            )),
        }
    }

    pub fn at(&self, key: &str) -> String {
        join(&self.path, key)
    }

    pub fn err(&self, key: &str, message: impl Into<String>) -> DescriptorError {
        DescriptorError::new(self.kind, self.at(key), message)
    }

    pub fn opt(&mut self, key: &str) -> Option<&'a Value> {
        let (k, v) = self.map.get_key_value(key)?;
        self.used.push(k.as_str());
        Some(v)
    }

    pub fn req(&mut self, key: &str) -> Result<&'a Value> {
        self.opt(key).ok_or_else(|| self.err(key, "missing required field"))
    }

    pub fn req_str(&mut self, key: &str) -> Result<&'a str> {
        let v = self.req(key)?;
        v.as_str().ok_or_else(|| self.err(key, format!("expected a string, found {}", type_name(v))))
    }

    pub fn req_u64(&mut self, key: &str) -> Result<u64> {
        let v = self.req(key)?;
        as_u64(v).ok_or_else(|| {
            self.err(key, format!("expected a nonnegative integer, found {}", type_name(v)))
        })
    }

    pub fn opt_u64(&mut self, key: &str) -> Result<Option<u64>> {
        match self.opt(key) {
            None => Ok(None),
            Some(v) => as_u64(v).map(Some).ok_or_else(|| {
                self.err(key, format!("expected a nonnegative integer, found {}", type_name(v)))
            }),
        }
    }

    pub fn req_bool(&mut self, key: &str) -> Result<bool> {
        let v = self.req(key)?;
        v.as_bool().ok_or_else(|| self.err(key, format!("expected a boolean, found {}", type_name(v))))
    }

    pub fn req_f64(&mut self, key: &str) -> Result<f64> {
        let v = self.req(key)?;
        finite_f64(v).ok_or_else(|| {
            self.err(key, format!("expected a finite number, found {}", type_name(v)))
        })
    }

    pub fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.opt(key) {
            None => Ok(None),
            Some(v) => finite_f64(v).map(Some).ok_or_else(|| {
                self.err(key, format!("expected a finite number, found {}", type_name(v)))
            }),
        }
    }

    pub fn req_array(&mut self, key: &str) -> Result<&'a Vec<Value>> {
        let v = self.req(key)?;
        v.as_array().ok_or_else(|| self.err(key, format!("expected an array, found {}", type_name(v))))
    }

    pub fn opt_array(&mut self, key: &str) -> Result<Option<&'a Vec<Value>>> {
        match self.opt(key) {
            None => Ok(None),
            Some(v) => v
                .as_array()
                .map(Some)
                .ok_or_else(|| self.err(key, format!("expected an array, found {}", type_name(v)))),
        }
    }

    pub fn opt_object(&mut self, key: &str) -> Result<Option<&'a Map<String, Value>>> {
        match self.opt(key) {
            None => Ok(None),
            Some(v) => v
                .as_object()
                .map(Some)
                .ok_or_else(|| self.err(key, format!("expected an object, found {}", type_name(v)))),
        }
    }

    /// Fields not consumed so far, in key order.
    pub fn rest(&self) -> impl Iterator<Item = (&'a String, &'a Value)> + '_ {
        self.map.iter().filter(move |(k, _)| !self.used.contains(&k.as_str()))
    }

    /// Errors on the first unconsumed field.
    pub fn deny_rest(&self) -> Result<()> {
        match self.rest().next() {
            Some((k, _)) => Err(self.err(k, "unknown field")),
            None => Ok(()),
        }
    }

    /// Gathers unknown keys plus the contents of an explicit `extensions`
    /// object into one bag.
    pub fn extensions(&mut self) -> Result<Map<String, Value>> {
        let mut bag = self.opt_object("extensions")?.cloned().unwrap_or_default();
        let extra: Vec<(String, Value)> = self.rest().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (k, v) in extra {
            if bag.contains_key(&k) {
                return Err(self.err(&k, "field also present under `extensions`"));
            }
            bag.insert(k, v);
        }
        Ok(bag)
    }
}

pub(crate) fn as_u64(v: &Value) -> Option<u64> {
    v.as_u64()
}

pub(crate) fn finite_f64(v: &Value) -> Option<f64> {
    v.as_f64().filter(|x| x.is_finite())
}

pub(crate) fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

pub(crate) fn f64_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}
