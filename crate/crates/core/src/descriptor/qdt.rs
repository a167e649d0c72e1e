use serde_json::{Map, Value};

use super::{token_enum, token_field, Descriptor};
use crate::error::{DescriptorError, ErrorKind, Result};
use crate::json::{self, Fields};
use crate::rational::Rational;

pub const QDT_SCHEMA: &str = "qdt-core.schema.json";

token_enum! {
    /// How the computational basis states of a register are to be read.
    EncodingKind {
        PhaseRegister => "PHASE_REGISTER",
        IsingSpin => "ISING_SPIN",
        IntRegister => "INT_REGISTER",
        BoolRegister => "BOOL_REGISTER",
    }
}

token_enum! {
    /// `Lsb0`: carrier `i` has weight `2^i`. `Msb0`: carrier `i` has weight `2^(w-1-i)`.
    BitOrder {
        Lsb0 => "LSB_0",
        Msb0 => "MSB_0",
    }
}

token_enum! {
    MeasurementSemantics {
        AsPhase => "AS_PHASE",
        AsBool => "AS_BOOL",
        AsInt => "AS_INT",
    }
}

impl EncodingKind {
    /// The only measurement interpretation legal for this encoding.
    pub fn measurement_semantics(self) -> MeasurementSemantics {
        match self {
            EncodingKind::PhaseRegister => MeasurementSemantics::AsPhase,
            EncodingKind::IsingSpin | EncodingKind::BoolRegister => MeasurementSemantics::AsBool,
            EncodingKind::IntRegister => MeasurementSemantics::AsInt,
        }
    }
}

/// Semantic contract of a logical register.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumDataType {
    pub schema_id: String,
    pub id: String,
    pub name: String,
    pub width: usize,
    pub encoding_kind: EncodingKind,
    pub bit_order: BitOrder,
    pub measurement_semantics: MeasurementSemantics,
    pub phase_scale: Option<Rational>,
    pub extensions: Map<String, Value>,
}

impl QuantumDataType {
    /// A register with the canonical schema id, no extensions, and the
    /// measurement semantics implied by `encoding_kind`.
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        width: usize,
        encoding_kind: EncodingKind,
        bit_order: BitOrder,
        phase_scale: Option<Rational>,
    ) -> Result<Self> {
        let qdt = Self {
            schema_id: QDT_SCHEMA.to_string(),
            id: id.into(),
            name: name.into(),
            width,
            encoding_kind,
            bit_order,
            measurement_semantics: encoding_kind.measurement_semantics(),
            phase_scale,
            extensions: Map::new(),
        };
        qdt.validate()?;
        Ok(qdt)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_id != QDT_SCHEMA {
            return Err(DescriptorError::schema(
                "$schema",
                format!("expected {QDT_SCHEMA:?}, found {:?}", self.schema_id),
            ));
        }
        if self.id.is_empty() {
            return Err(DescriptorError::schema("id", "register id must be non-empty"));
        }
        if self.width == 0 {
            return Err(DescriptorError::schema("width", "width must be at least 1"));
        }
        let expected = self.encoding_kind.measurement_semantics();
        if self.measurement_semantics != expected {
            return Err(DescriptorError::semantics(
                "measurement_semantics",
                format!(
                    "{} registers must be measured {}, not {}",
                    self.encoding_kind, expected, self.measurement_semantics
                ),
            ));
        }
        match (self.encoding_kind, self.phase_scale) {
            (EncodingKind::PhaseRegister, None) => Err(DescriptorError::semantics(
                "phase_scale",
                "PHASE_REGISTER requires a phase_scale",
            )),
            (EncodingKind::PhaseRegister, Some(scale)) => {
                if scale.is_zero() || scale.numer() > scale.denom() {
                    Err(DescriptorError::semantics(
                        "phase_scale",
                        format!("phase_scale must lie in (0, 1], found {scale}"),
                    ))
                } else {
                    Ok(())
                }
            }
            (kind, Some(_)) => Err(DescriptorError::semantics(
                "phase_scale",
                format!("phase_scale is only allowed on PHASE_REGISTER, not {kind}"),
            )),
            (_, None) => Ok(()),
        }
    }

    /// `"id[i]"`, the reference form used in `clbit_order`.
    pub fn carrier_ref(&self, i: usize) -> String {
        format!("{}[{i}]", self.id)
    }

    pub fn carrier_refs(&self) -> Vec<String> {
        (0..self.width).map(|i| self.carrier_ref(i)).collect()
    }

    pub(crate) fn from_value(value: &Value) -> Result<Self> {
        let mut f = Fields::new(value, "", ErrorKind::Schema)?;
        let schema_id = f.req_str("$schema")?.to_string();
        let id = f.req_str("id")?.to_string();
        let name = f.req_str("name")?.to_string();
        let width = f.req_u64("width")?;
        let encoding_kind = token_field!(f, "encoding_kind", EncodingKind)?;
        let bit_order = token_field!(f, "bit_order", BitOrder)?;
        let measurement_semantics = token_field!(f, "measurement_semantics", MeasurementSemantics)?;
        let phase_scale = match f.opt("phase_scale") {
            None => None,
            Some(v) => {
                let text = v.as_str().ok_or_else(|| {
                    DescriptorError::new(
                        ErrorKind::Rational,
                        "phase_scale",
                        format!("expected a \"p/q\" string, found {}", json::type_name(v)),
                    )
                })?;
                Some(text.parse::<Rational>().map_err(|e| {
                    DescriptorError::new(ErrorKind::Rational, "phase_scale", e.to_string())
                })?)
            }
        };
        let extensions = f.extensions()?;
        let qdt = Self {
            schema_id,
            id,
            name,
            width: usize::try_from(width).map_err(|_| DescriptorError::schema("width", "width too large"))?,
            encoding_kind,
            bit_order,
            measurement_semantics,
            phase_scale,
            extensions,
        };
        qdt.validate()?;
        Ok(qdt)
    }
}

impl Descriptor for QuantumDataType {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("$schema".into(), self.schema_id.clone().into());
        m.insert("id".into(), self.id.clone().into());
        m.insert("name".into(), self.name.clone().into());
        m.insert("width".into(), (self.width as u64).into());
        m.insert("encoding_kind".into(), self.encoding_kind.as_str().into());
        m.insert("bit_order".into(), self.bit_order.as_str().into());
        m.insert("measurement_semantics".into(), self.measurement_semantics.as_str().into());
        if let Some(scale) = self.phase_scale {
            m.insert("phase_scale".into(), scale.to_string().into());
        }
        if !self.extensions.is_empty() {
            m.insert("extensions".into(), Value::Object(self.extensions.clone()));
        }
        Value::Object(m)
    }
}

/// Parses and validates a quantum data type document.
pub fn parse_qdt(text: &str) -> Result<QuantumDataType> {
    QuantumDataType::from_value(&json::parse_text(text)?)
}

/// The registers available to a bundle, in declaration order, with unique ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QdtSet(Vec<QuantumDataType>);

impl QdtSet {
    pub fn new(qdts: Vec<QuantumDataType>) -> Result<Self> {
        let mut set = Self(Vec::with_capacity(qdts.len()));
        for (i, q) in qdts.into_iter().enumerate() {
            set.insert(q).map_err(|e| e.under(&format!("qdts[{i}]")))?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, qdt: QuantumDataType) -> Result<()> {
        if self.get(&qdt.id).is_some() {
            return Err(DescriptorError::schema("id", format!("duplicate register id {:?}", qdt.id)));
        }
        self.0.push(qdt);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&QuantumDataType> {
        self.0.iter().find(|q| q.id == id)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, QuantumDataType> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[QuantumDataType] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_width(&self) -> usize {
        self.0.iter().map(|q| q.width).max().unwrap_or(0)
    }
}

impl<'a> IntoIterator for &'a QdtSet {
    type Item = &'a QuantumDataType;
    type IntoIter = std::slice::Iter<'a, QuantumDataType>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
