use std::collections::BTreeMap;

use serde_json::{Map, Value};

/// Outcome bitstring → occurrence count. Character `p` of a key is the
/// readout of `clbit_order[p]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Counts(BTreeMap<String, u64>);

impl Counts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, bits: impl Into<String>, count: u64) {
        *self.0.entry(bits.into()).or_insert(0) += count;
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.0.get(bits).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries in lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect::<Map<_, _>>())
    }

    /// Parses `{"bits": count, ...}`.
    pub fn from_json(value: &Value) -> Option<Self> {
        let mut out = Self::new();
        for (k, v) in value.as_object()? {
            if !k.bytes().all(|b| b == b'0' || b == b'1') {
                return None;
            }
            out.add(k.clone(), v.as_u64()?);
        }
        Some(out)
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for Counts {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (k, v) in iter {
            out.add(k, v);
        }
        out
    }
}
