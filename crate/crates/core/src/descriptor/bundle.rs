use serde_json::{Map, Value};

use super::{ContextDescriptor, Descriptor, OperatorDescriptor, QdtSet, QuantumDataType};
use crate::error::{DescriptorError, ErrorKind, Result};
use crate::json::{self, Fields};
use crate::validation::check_sequence;

pub const JOB_SCHEMA: &str = "job.schema.json";

/// Where a bundle came from. `overrides` records context fields replaced
/// on the command line.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub tool_version: String,
    pub created_at: String,
    pub source: String,
    pub overrides: Map<String, Value>,
}

impl Provenance {
    pub fn new(source: impl Into<String>) -> Self {
        Self {
            tool_version: concat!("qmiddle ", env!("CARGO_PKG_VERSION")).to_string(),
            created_at: "1970-01-01T00:00:00Z".to_string(),
            source: source.into(),
            overrides: Map::new(),
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool_version".into(), self.tool_version.clone().into());
        m.insert("created_at".into(), self.created_at.clone().into());
        m.insert("source".into(), self.source.clone().into());
        if !self.overrides.is_empty() {
            m.insert("overrides".into(), Value::Object(self.overrides.clone()));
        }
        Value::Object(m)
    }

    fn from_value(value: &Value) -> Result<Self> {
        let mut f = Fields::new(value, "provenance", ErrorKind::Schema)?;
        let p = Self {
            tool_version: f.req_str("tool_version")?.to_string(),
            created_at: f.req_str("created_at")?.to_string(),
            source: f.req_str("source")?.to_string(),
            overrides: f.opt_object("overrides")?.cloned().unwrap_or_default(),
        };
        f.deny_rest()?;
        Ok(p)
    }
}

/// The unit of submission: registers, an ordered operator sequence, the
/// execution context, and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct JobBundle {
    pub qdts: QdtSet,
    pub operators: Vec<OperatorDescriptor>,
    pub context: ContextDescriptor,
    pub provenance: Provenance,
}

impl JobBundle {
    /// Validates every component and the composition rules.
    pub fn validate(&self) -> Result<()> {
        for (i, q) in self.qdts.iter().enumerate() {
            q.validate().map_err(|e| e.under(&format!("qdts[{i}]")))?;
        }
        for (i, op) in self.operators.iter().enumerate() {
            op.validate(Some(&self.qdts)).map_err(|e| e.under(&format!("operators[{i}]")))?;
        }
        self.context.validate().map_err(|e| e.under("context"))?;
        self.context.validate_for_width(self.qdts.max_width()).map_err(|e| e.under("context"))?;
        let report = check_sequence(&self.operators, &self.qdts);
        if let Some(v) = report.violations.first() {
            return Err(DescriptorError::semantics(
                format!("operators[{}]", v.index),
                format!("{}: {}", v.rule, v.message),
            ));
        }
        Ok(())
    }

    /// The `qdts` block alone, canonically rendered.
    pub fn qdts_json(&self) -> Value {
        Value::Array(self.qdts.iter().map(QuantumDataType::to_json).collect())
    }

    fn from_value(value: &Value) -> Result<Self> {
        let mut f = Fields::new(value, "", ErrorKind::Schema)?;
        let schema = f.req_str("$schema")?;
        if schema != JOB_SCHEMA {
            return Err(f.err("$schema", format!("expected {JOB_SCHEMA:?}, found {schema:?}")));
        }
        let qdts = f
            .req_array("qdts")?
            .iter()
            .enumerate()
            .map(|(i, v)| QuantumDataType::from_value(v).map_err(|e| e.under(&json::index("qdts", i))))
            .collect::<Result<Vec<_>>>()?;
        let qdts = QdtSet::new(qdts)?;
        let operators = f
            .req_array("operators")?
            .iter()
            .enumerate()
            .map(|(i, v)| OperatorDescriptor::from_json(v, &qdts).map_err(|e| e.under(&json::index("operators", i))))
            .collect::<Result<Vec<_>>>()?;
        let context = ContextDescriptor::from_value(f.req("context")?).map_err(|e| e.under("context"))?;
        let provenance = Provenance::from_value(f.req("provenance")?)?;
        f.deny_rest()?;
        let bundle = Self { qdts, operators, context, provenance };
        bundle.validate()?;
        Ok(bundle)
    }
}

impl Descriptor for JobBundle {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("$schema".into(), JOB_SCHEMA.into());
        m.insert("qdts".into(), self.qdts_json());
        m.insert("operators".into(), Value::Array(self.operators.iter().map(|o| o.to_json()).collect()));
        m.insert("context".into(), self.context.to_json());
        m.insert("provenance".into(), self.provenance.to_json());
        Value::Object(m)
    }
}

/// Parses and fully validates a `job.json` document.
pub fn parse_bundle(text: &str) -> Result<JobBundle> {
    JobBundle::from_value(&json::parse_text(text)?)
}
