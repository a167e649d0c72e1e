use serde_json::{Map, Value};

use super::{token_enum, token_field, BitOrder, Descriptor, MeasurementSemantics, QdtSet, QuantumDataType};
use crate::error::{DescriptorError, ErrorKind, Result};
use crate::json::{self, f64_value, Fields};

pub const QOD_SCHEMA: &str = "qod.schema.json";

token_enum! {
    /// The logical transformation an operator descriptor names.
    RepKind {
        QftTemplate => "QFT_TEMPLATE",
        PrepUniform => "PREP_UNIFORM",
        IsingCostPhase => "ISING_COST_PHASE",
        MixerRx => "MIXER_RX",
        Measurement => "MEASUREMENT",
        IsingProblem => "ISING_PROBLEM",
    }
}

token_enum! {
    MeasurementBasis {
        Z => "Z",
    }
}

impl RepKind {
    pub fn requires_result_schema(self) -> bool {
        matches!(self, RepKind::Measurement | RepKind::IsingProblem)
    }

    /// QFT templates may carry a readout schema describing how a later
    /// measurement of the transformed register is decoded.
    pub fn allows_result_schema(self) -> bool {
        self.requires_result_schema() || self == RepKind::QftTemplate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QftParams {
    pub approx_degree: usize,
    pub do_swaps: bool,
    pub inverse: bool,
}

/// Ising problem coefficients, normalized to a dense symmetric coupling
/// matrix with zero diagonal. `offset` is a constant energy shift (nonzero
/// only when the problem was given in QUBO form).
#[derive(Debug, Clone, PartialEq)]
pub struct IsingParams {
    pub h: Vec<f64>,
    pub j: Vec<Vec<f64>>,
    pub offset: f64,
}

impl IsingParams {
    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// Converts `E(x) = Σ_{i,j} Q_ij x_i x_j` over `x ∈ {0,1}` to spins via
    /// `x = (1 − s)/2`. Off-diagonal entries of `Q` are symmetrized.
    pub fn from_qubo(q: &[Vec<f64>]) -> Self {
        let n = q.len();
        let mut h = vec![0.0; n];
        let mut j = vec![vec![0.0; n]; n];
        let mut offset = 0.0;
        for a in 0..n {
            // x_a^2 = x_a = (1 - s_a)/2
            offset += q[a][a] / 2.0;
            h[a] -= q[a][a] / 2.0;
            for b in (a + 1)..n {
                let pair = q[a][b] + q[b][a];
                // x_a x_b = (1 - s_a - s_b + s_a s_b)/4
                offset += pair / 4.0;
                h[a] -= pair / 4.0;
                h[b] -= pair / 4.0;
                j[a][b] = pair / 4.0;
                j[b][a] = pair / 4.0;
            }
        }
        Self { h, j, offset }
    }

    /// Number of nonzero couplings above the diagonal.
    pub fn coupling_count(&self) -> usize {
        self.j
            .iter()
            .enumerate()
            .map(|(a, row)| row.iter().skip(a + 1).filter(|w| **w != 0.0).count())
            .sum()
    }
}

/// Kind-specific operator parameters. The variant determines `rep_kind`.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorParams {
    QftTemplate(QftParams),
    PrepUniform,
    IsingCostPhase { gamma: f64, edges: Vec<(usize, usize)>, weights: Vec<f64> },
    MixerRx { beta: f64 },
    Measurement,
    IsingProblem(IsingParams),
}

impl OperatorParams {
    pub fn rep_kind(&self) -> RepKind {
        match self {
            OperatorParams::QftTemplate(_) => RepKind::QftTemplate,
            OperatorParams::PrepUniform => RepKind::PrepUniform,
            OperatorParams::IsingCostPhase { .. } => RepKind::IsingCostPhase,
            OperatorParams::MixerRx { .. } => RepKind::MixerRx,
            OperatorParams::Measurement => RepKind::Measurement,
            OperatorParams::IsingProblem(_) => RepKind::IsingProblem,
        }
    }

    fn from_value(kind: RepKind, value: Option<&Value>) -> Result<Self> {
        let empty = Value::Object(Map::new());
        let value = value.unwrap_or(&empty);
        let mut f = Fields::new(value, "params", ErrorKind::Param)?;
        let params = match kind {
            RepKind::QftTemplate => {
                let approx_degree = f.req_u64("approx_degree")? as usize;
                let do_swaps = f.req_bool("do_swaps")?;
                let inverse = f.req_bool("inverse")?;
                OperatorParams::QftTemplate(QftParams { approx_degree, do_swaps, inverse })
            }
            RepKind::PrepUniform => OperatorParams::PrepUniform,
            RepKind::Measurement => OperatorParams::Measurement,
            RepKind::MixerRx => OperatorParams::MixerRx { beta: f.req_f64("beta")? },
            RepKind::IsingCostPhase => {
                let gamma = f.req_f64("gamma")?;
                let path = f.at("edges");
                let edges = f
                    .req_array("edges")?
                    .iter()
                    .enumerate()
                    .map(|(k, e)| index_pair(e, &json::index(&path, k)))
                    .collect::<Result<Vec<_>>>()?;
                let path = f.at("weights");
                let weights = f
                    .req_array("weights")?
                    .iter()
                    .enumerate()
                    .map(|(k, w)| {
                        json::finite_f64(w).ok_or_else(|| {
                            DescriptorError::param(json::index(&path, k), "expected a finite number")
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                OperatorParams::IsingCostPhase { gamma, edges, weights }
            }
            RepKind::IsingProblem => OperatorParams::IsingProblem(ising_from_fields(&mut f)?),
        };
        f.deny_rest()?;
        Ok(params)
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        match self {
            OperatorParams::QftTemplate(p) => {
                m.insert("approx_degree".into(), (p.approx_degree as u64).into());
                m.insert("do_swaps".into(), p.do_swaps.into());
                m.insert("inverse".into(), p.inverse.into());
            }
            OperatorParams::PrepUniform | OperatorParams::Measurement => {}
            OperatorParams::MixerRx { beta } => {
                m.insert("beta".into(), f64_value(*beta));
            }
            OperatorParams::IsingCostPhase { gamma, edges, weights } => {
                m.insert("gamma".into(), f64_value(*gamma));
                m.insert(
                    "edges".into(),
                    Value::Array(
                        edges.iter().map(|&(a, b)| Value::from(vec![a as u64, b as u64])).collect(),
                    ),
                );
                m.insert("weights".into(), Value::Array(weights.iter().map(|w| f64_value(*w)).collect()));
            }
            OperatorParams::IsingProblem(p) => {
                m.insert("h".into(), Value::Array(p.h.iter().map(|x| f64_value(*x)).collect()));
                m.insert(
                    "J".into(),
                    Value::Array(
                        p.j.iter()
                            .map(|row| Value::Array(row.iter().map(|x| f64_value(*x)).collect()))
                            .collect(),
                    ),
                );
                if p.offset != 0.0 {
                    m.insert("offset".into(), f64_value(p.offset));
                }
            }
        }
        Value::Object(m)
    }

    /// Checks internal consistency and, when `width` is known, index ranges.
    fn validate(&self, width: Option<usize>) -> Result<()> {
        match self {
            OperatorParams::QftTemplate(p) => {
                if let Some(w) = width {
                    if p.approx_degree >= w {
                        return Err(DescriptorError::param(
                            "params.approx_degree",
                            format!("approx_degree must be below the register width {w}, found {}", p.approx_degree),
                        ));
                    }
                }
            }
            OperatorParams::IsingCostPhase { edges, weights, .. } => {
                if edges.len() != weights.len() {
                    return Err(DescriptorError::param(
                        "params.weights",
                        format!("{} edges but {} weights", edges.len(), weights.len()),
                    ));
                }
                for (k, &(a, b)) in edges.iter().enumerate() {
                    let path = format!("params.edges[{k}]");
                    if a == b {
                        return Err(DescriptorError::param(path, format!("self-loop on index {a}")));
                    }
                    if let Some(w) = width {
                        if a >= w || b >= w {
                            return Err(DescriptorError::param(
                                path,
                                format!("edge ({a}, {b}) outside register of width {w}"),
                            ));
                        }
                    }
                }
                if let Some(k) = weights.iter().position(|x| !x.is_finite()) {
                    return Err(DescriptorError::param(format!("params.weights[{k}]"), "weight must be finite"));
                }
            }
            OperatorParams::MixerRx { beta } if !beta.is_finite() => {
                return Err(DescriptorError::param("params.beta", "beta must be finite"));
            }
            OperatorParams::IsingProblem(p) => validate_ising(p, width)?,
            _ => {}
        }
        if let OperatorParams::IsingCostPhase { gamma, .. } = self {
            if !gamma.is_finite() {
                return Err(DescriptorError::param("params.gamma", "gamma must be finite"));
            }
        }
        Ok(())
    }
}

fn index_pair(v: &Value, path: &str) -> Result<(usize, usize)> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([a, b]) => match (a.as_u64(), b.as_u64()) {
            (Some(a), Some(b)) => Ok((a as usize, b as usize)),
            _ => Err(DescriptorError::param(path, "edge endpoints must be nonnegative integers")),
        },
        _ => Err(DescriptorError::param(path, "expected an [i, j] pair")),
    }
}

fn real_vector(v: &Value, path: &str) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| DescriptorError::param(path, format!("expected an array, found {}", json::type_name(v))))?;
    arr.iter()
        .enumerate()
        .map(|(k, x)| {
            json::finite_f64(x)
                .ok_or_else(|| DescriptorError::param(json::index(path, k), "expected a finite number"))
        })
        .collect()
}

fn real_matrix(v: &Value, path: &str) -> Result<Vec<Vec<f64>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| DescriptorError::param(path, format!("expected an array, found {}", json::type_name(v))))?;
    rows.iter().enumerate().map(|(k, row)| real_vector(row, &json::index(path, k))).collect()
}

fn ising_from_fields(f: &mut Fields<'_>) -> Result<IsingParams> {
    if let Some(qubo) = f.opt("qubo") {
        let path = f.at("qubo");
        let mut q = Fields::new(qubo, &path, ErrorKind::Param)?;
        let qpath = q.at("Q");
        let matrix = real_matrix(q.req("Q")?, &qpath)?;
        q.deny_rest()?;
        if let Some(k) = matrix.iter().position(|row| row.len() != matrix.len()) {
            return Err(DescriptorError::param(json::index(&qpath, k), "Q must be square"));
        }
        if f.opt("h").is_some() || f.opt("J").is_some() {
            return Err(f.err("qubo", "give either qubo or h/J, not both"));
        }
        return Ok(IsingParams::from_qubo(&matrix));
    }
    let h_path = f.at("h");
    let h = real_vector(f.req("h")?, &h_path)?;
    let n = h.len();
    let j_path = f.at("J");
    let j_value = f.req("J")?;
    let j = if j_value.is_object() {
        // Edge-list form: {"edges": [[i, j, w], ...]}
        let mut e = Fields::new(j_value, &j_path, ErrorKind::Param)?;
        let edges_path = e.at("edges");
        let mut j = vec![vec![0.0; n]; n];
        for (k, item) in e.req_array("edges")?.iter().enumerate() {
            let path = json::index(&edges_path, k);
            let (a, b, w) = match item.as_array().map(|a| a.as_slice()) {
                Some([a, b, w]) => match (a.as_u64(), b.as_u64(), json::finite_f64(w)) {
                    (Some(a), Some(b), Some(w)) => (a as usize, b as usize, w),
                    _ => return Err(DescriptorError::param(path, "expected [i, j, w] with integer i, j")),
                },
                _ => return Err(DescriptorError::param(path, "expected [i, j, w]")),
            };
            if a == b {
                return Err(DescriptorError::param(path, format!("self-coupling on index {a}")));
            }
            if a >= n || b >= n {
                return Err(DescriptorError::param(path, format!("edge ({a}, {b}) outside {n} spins")));
            }
            if j[a][b] != 0.0 {
                return Err(DescriptorError::param(path, format!("duplicate coupling ({a}, {b})")));
            }
            j[a][b] = w;
            j[b][a] = w;
        }
        e.deny_rest()?;
        j
    } else {
        real_matrix(j_value, &j_path)?
    };
    let offset = f.opt_f64("offset")?.unwrap_or(0.0);
    Ok(IsingParams { h, j, offset })
}

fn validate_ising(p: &IsingParams, width: Option<usize>) -> Result<()> {
    let n = p.h.len();
    if let Some(w) = width {
        if n != w {
            return Err(DescriptorError::param("params.h", format!("h has length {n}, register width is {w}")));
        }
    }
    if p.j.len() != n {
        return Err(DescriptorError::param("params.J", format!("J has {} rows, expected {n}", p.j.len())));
    }
    for (a, row) in p.j.iter().enumerate() {
        if row.len() != n {
            return Err(DescriptorError::param(
                format!("params.J[{a}]"),
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
    }
    for a in 0..n {
        if p.j[a][a] != 0.0 {
            return Err(DescriptorError::param(format!("params.J[{a}][{a}]"), "diagonal must be zero"));
        }
        for b in (a + 1)..n {
            if p.j[a][b] != p.j[b][a] {
                return Err(DescriptorError::param(
                    format!("params.J[{a}][{b}]"),
                    format!("J is not symmetric: J[{a}][{b}] = {} but J[{b}][{a}] = {}", p.j[a][b], p.j[b][a]),
                ));
            }
        }
    }
    if p.h.iter().chain(p.j.iter().flatten()).any(|x| !x.is_finite()) || !p.offset.is_finite() {
        return Err(DescriptorError::param("params", "coefficients must be finite"));
    }
    Ok(())
}

/// Device-independent resource estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostHint {
    pub twoq: u64,
    pub depth: u64,
}

impl std::ops::Add for CostHint {
    type Output = CostHint;

    fn add(self, rhs: CostHint) -> CostHint {
        CostHint { twoq: self.twoq + rhs.twoq, depth: self.depth + rhs.depth }
    }
}

impl CostHint {
    pub fn to_json(self) -> Value {
        serde_json::json!({ "twoq": self.twoq, "depth": self.depth })
    }
}

/// How a Z-basis readout is produced and decoded.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultSchema {
    pub basis: MeasurementBasis,
    pub datatype: MeasurementSemantics,
    pub bit_significance: BitOrder,
    pub clbit_order: Vec<String>,
}

impl ResultSchema {
    /// Identity readout of every carrier of `qdt`, in index order.
    pub fn for_register(qdt: &QuantumDataType) -> Self {
        Self {
            basis: MeasurementBasis::Z,
            datatype: qdt.measurement_semantics,
            bit_significance: qdt.bit_order,
            clbit_order: qdt.carrier_refs(),
        }
    }

    /// Splits each `clbit_order` entry into `(register id, carrier index)`.
    pub fn carriers(&self) -> Result<Vec<(&str, usize)>> {
        self.clbit_order
            .iter()
            .enumerate()
            .map(|(k, r)| {
                parse_carrier_ref(r).ok_or_else(|| {
                    DescriptorError::schema(
                        format!("result_schema.clbit_order[{k}]"),
                        format!("expected a carrier reference \"reg[i]\", found {r:?}"),
                    )
                })
            })
            .collect()
    }

    /// The register referenced by `clbit_order` (validated to be a single one).
    pub fn register_id(&self) -> Option<&str> {
        self.clbit_order.first().and_then(|r| parse_carrier_ref(r)).map(|(id, _)| id)
    }

    /// Carrier index for each classical-bit position.
    pub fn carrier_indices(&self) -> Result<Vec<usize>> {
        Ok(self.carriers()?.into_iter().map(|(_, i)| i).collect())
    }

    fn from_value(value: &Value) -> Result<Self> {
        let mut f = Fields::new(value, "result_schema", ErrorKind::Schema)?;
        let basis = token_field!(f, "basis", MeasurementBasis)?;
        let datatype = token_field!(f, "datatype", MeasurementSemantics)?;
        let bit_significance = token_field!(f, "bit_significance", BitOrder)?;
        let path = f.at("clbit_order");
        let clbit_order = f
            .req_array("clbit_order")?
            .iter()
            .enumerate()
            .map(|(k, v)| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| DescriptorError::schema(json::index(&path, k), "expected a string"))
            })
            .collect::<Result<Vec<_>>>()?;
        f.deny_rest()?;
        let schema = Self { basis, datatype, bit_significance, clbit_order };
        schema.validate_structure()?;
        Ok(schema)
    }

    fn validate_structure(&self) -> Result<()> {
        if self.clbit_order.is_empty() {
            return Err(DescriptorError::schema("result_schema.clbit_order", "must reference at least one carrier"));
        }
        let carriers = self.carriers()?;
        let reg = carriers[0].0;
        let mut seen = std::collections::BTreeSet::new();
        for (k, (id, i)) in carriers.iter().enumerate() {
            let path = format!("result_schema.clbit_order[{k}]");
            if *id != reg {
                return Err(DescriptorError::schema(
                    path,
                    format!("clbit_order must reference a single register; found {reg:?} and {id:?}"),
                ));
            }
            if !seen.insert(*i) {
                return Err(DescriptorError::schema(path, format!("carrier {reg}[{i}] listed twice")));
            }
        }
        Ok(())
    }

    /// Checks the schema against the register it reads.
    pub fn validate_against(&self, qdts: &QdtSet) -> Result<()> {
        self.validate_structure()?;
        let reg = self.register_id().unwrap_or_default();
        let qdt = qdts.get(reg).ok_or_else(|| {
            DescriptorError::new(
                ErrorKind::UnresolvedReference,
                "result_schema.clbit_order",
                format!("unknown register {reg:?}"),
            )
        })?;
        let indices = self.carrier_indices()?;
        if let Some(k) = indices.iter().position(|&i| i >= qdt.width) {
            return Err(DescriptorError::schema(
                format!("result_schema.clbit_order[{k}]"),
                format!("carrier {} outside register of width {}", indices[k], qdt.width),
            ));
        }
        if indices.len() != qdt.width {
            return Err(DescriptorError::schema(
                "result_schema.clbit_order",
                format!("references {} of the {} carriers of {reg:?}", indices.len(), qdt.width),
            ));
        }
        if self.datatype != qdt.measurement_semantics {
            return Err(DescriptorError::semantics(
                "result_schema.datatype",
                format!("{} does not match register semantics {}", self.datatype, qdt.measurement_semantics),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "basis": self.basis.as_str(),
            "datatype": self.datatype.as_str(),
            "bit_significance": self.bit_significance.as_str(),
            "clbit_order": self.clbit_order,
        })
    }

    /// Parses a standalone schema object (as echoed in results files).
    pub fn from_json(value: &Value) -> Result<Self> {
        Self::from_value(value)
    }
}

fn parse_carrier_ref(r: &str) -> Option<(&str, usize)> {
    let body = r.strip_suffix(']')?;
    let (id, idx) = body.rsplit_once('[')?;
    if id.is_empty() || idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((id, idx.parse().ok()?))
}

/// A named logical transformation on typed registers.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDescriptor {
    pub schema_id: String,
    pub name: String,
    pub domain_qdt: String,
    pub codomain_qdt: String,
    pub params: OperatorParams,
    pub cost_hint: Option<CostHint>,
    pub result_schema: Option<ResultSchema>,
    pub extensions: Map<String, Value>,
}

impl OperatorDescriptor {
    /// An in-place operator on `register` with the canonical schema id.
    pub fn in_place(name: impl Into<String>, register: &str, params: OperatorParams) -> Self {
        Self {
            schema_id: QOD_SCHEMA.to_string(),
            name: name.into(),
            domain_qdt: register.to_string(),
            codomain_qdt: register.to_string(),
            params,
            cost_hint: None,
            result_schema: None,
            extensions: Map::new(),
        }
    }

    pub fn rep_kind(&self) -> RepKind {
        self.params.rep_kind()
    }

    /// Validates the descriptor. With `qdts`, register references and
    /// width-dependent parameters are checked too.
    pub fn validate(&self, qdts: Option<&QdtSet>) -> Result<()> {
        if self.schema_id != QOD_SCHEMA {
            return Err(DescriptorError::schema(
                "$schema",
                format!("expected {QOD_SCHEMA:?}, found {:?}", self.schema_id),
            ));
        }
        let kind = self.rep_kind();
        match (&self.result_schema, kind.requires_result_schema(), kind.allows_result_schema()) {
            (None, true, _) => {
                return Err(DescriptorError::schema("result_schema", format!("{kind} requires a result_schema")))
            }
            (Some(_), _, false) => {
                return Err(DescriptorError::schema("result_schema", format!("{kind} must not carry a result_schema")))
            }
            _ => {}
        }
        let mut width = None;
        if let Some(qdts) = qdts {
            let resolve = |key: &str, id: &str| {
                qdts.get(id).ok_or_else(|| {
                    DescriptorError::new(ErrorKind::UnresolvedReference, key, format!("unknown register {id:?}"))
                })
            };
            let domain = resolve("domain_qdt", &self.domain_qdt)?;
            resolve("codomain_qdt", &self.codomain_qdt)?;
            width = Some(domain.width);
            if let Some(rs) = &self.result_schema {
                rs.validate_against(qdts)?;
            }
        } else if let Some(rs) = &self.result_schema {
            rs.validate_structure()?;
        }
        self.params.validate(width)
    }

    fn from_value(value: &Value, qdts: Option<&QdtSet>) -> Result<Self> {
        let mut f = Fields::new(value, "", ErrorKind::Schema)?;
        let schema_id = f.req_str("$schema")?.to_string();
        let name = f.req_str("name")?.to_string();
        let kind = token_field!(f, "rep_kind", RepKind)?;
        let domain_qdt = f.req_str("domain_qdt")?.to_string();
        let codomain_qdt = f.req_str("codomain_qdt")?.to_string();
        let params = OperatorParams::from_value(kind, f.opt("params"))?;
        let cost_hint = match f.opt("cost_hint") {
            None => None,
            Some(v) => {
                let mut c = Fields::new(v, "cost_hint", ErrorKind::Schema)?;
                let hint = CostHint { twoq: c.req_u64("twoq")?, depth: c.req_u64("depth")? };
                c.deny_rest()?;
                Some(hint)
            }
        };
        let result_schema = f.opt("result_schema").map(ResultSchema::from_value).transpose()?;
        let extensions = f.extensions()?;
        let op = Self { schema_id, name, domain_qdt, codomain_qdt, params, cost_hint, result_schema, extensions };
        op.validate(qdts)?;
        Ok(op)
    }

    pub(crate) fn from_json(value: &Value, qdts: &QdtSet) -> Result<Self> {
        Self::from_value(value, Some(qdts))
    }
}

impl Descriptor for OperatorDescriptor {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("$schema".into(), self.schema_id.clone().into());
        m.insert("name".into(), self.name.clone().into());
        m.insert("rep_kind".into(), self.rep_kind().as_str().into());
        m.insert("domain_qdt".into(), self.domain_qdt.clone().into());
        m.insert("codomain_qdt".into(), self.codomain_qdt.clone().into());
        m.insert("params".into(), self.params.to_json());
        if let Some(hint) = self.cost_hint {
            m.insert("cost_hint".into(), hint.to_json());
        }
        if let Some(rs) = &self.result_schema {
            m.insert("result_schema".into(), rs.to_json());
        }
        if !self.extensions.is_empty() {
            m.insert("extensions".into(), Value::Object(self.extensions.clone()));
        }
        Value::Object(m)
    }
}

/// Parses an operator and resolves its register references against `qdts`.
pub fn parse_operator(text: &str, qdts: &QdtSet) -> Result<OperatorDescriptor> {
    OperatorDescriptor::from_value(&json::parse_text(text)?, Some(qdts))
}

/// Parses an operator in isolation: register references and width-dependent
/// parameter ranges are not checked.
pub fn parse_operator_detached(text: &str) -> Result<OperatorDescriptor> {
    OperatorDescriptor::from_value(&json::parse_text(text)?, None)
}
