use serde_json::{Map, Value};

use super::{Descriptor, RepKind};
use crate::error::{DescriptorError, ErrorKind, Result};
use crate::json::{self, f64_value, Fields};

pub const CTX_SCHEMA: &str = "ctx.schema.json";

pub const DEFAULT_NUM_SWEEPS: u64 = 1000;
pub const DEFAULT_BETA_RANGE: (f64, f64) = (0.1, 10.0);

/// Gate names accepted in `target.basis_gates` (lower case).
pub const KNOWN_BASIS_GATES: &[&str] = &[
    "id", "x", "y", "z", "h", "s", "sdg", "t", "tdg", "sx", "sxdg", "rx", "ry", "rz", "p", "u", "u1", "u2",
    "u3", "cx", "cz", "cy", "cp", "crz", "rzz", "rxx", "ecr", "swap", "iswap", "ccx", "measure", "reset",
];

/// Engines with a reference backend in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    GateStatevector,
    AnnealMetropolis,
}

impl EngineKind {
    pub fn from_name(engine: &str) -> Option<Self> {
        match engine {
            "gate.statevector" | "gate.aer_simulator" => Some(EngineKind::GateStatevector),
            "anneal.metropolis" => Some(EngineKind::AnnealMetropolis),
            _ => None,
        }
    }

    /// Whether this engine's backend can realize operators of `kind`.
    pub fn supports(self, kind: RepKind) -> bool {
        match self {
            EngineKind::GateStatevector => kind != RepKind::IsingProblem,
            EngineKind::AnnealMetropolis => kind == RepKind::IsingProblem,
        }
    }

    pub fn canonical_name(self) -> &'static str {
        match self {
            EngineKind::GateStatevector => "gate.statevector",
            EngineKind::AnnealMetropolis => "anneal.metropolis",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Target {
    pub basis_gates: Option<Vec<String>>,
    /// Undirected qubit pairs. `None` means all-to-all.
    pub coupling_map: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecPolicy {
    pub engine: String,
    pub samples: u64,
    pub seed: u64,
    pub target: Option<Target>,
    /// Free-form engine options; echoed, never interpreted (e.g.
    /// `optimization_level`).
    pub options: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealSettings {
    pub num_reads: u64,
    pub num_sweeps: Option<u64>,
    pub beta_range: Option<(f64, f64)>,
}

impl AnnealSettings {
    pub fn with_reads(num_reads: u64) -> Self {
        Self { num_reads, num_sweeps: None, beta_range: None }
    }

    pub fn effective_sweeps(&self) -> u64 {
        self.num_sweeps.unwrap_or(DEFAULT_NUM_SWEEPS)
    }

    pub fn effective_beta_range(&self) -> (f64, f64) {
        self.beta_range.unwrap_or(DEFAULT_BETA_RANGE)
    }
}

/// Error-correction policy. Parsed and validated only; it never changes
/// how operators are lowered.
#[derive(Debug, Clone, PartialEq)]
pub struct QecPolicy {
    pub code_family: String,
    pub distance: u64,
    pub allocator: String,
    pub logical_gate_set: Vec<String>,
    pub extensions: Map<String, Value>,
}

/// Execution policy, orthogonal to the operators it runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextDescriptor {
    pub schema_id: String,
    pub exec: ExecPolicy,
    pub anneal: Option<AnnealSettings>,
    pub qec: Option<QecPolicy>,
    pub extensions: Map<String, Value>,
}

impl ContextDescriptor {
    /// A context with no target, anneal, or QEC block.
    pub fn new(engine: impl Into<String>, samples: u64, seed: u64) -> Self {
        Self {
            schema_id: CTX_SCHEMA.to_string(),
            exec: ExecPolicy { engine: engine.into(), samples, seed, target: None, options: Map::new() },
            anneal: None,
            qec: None,
            extensions: Map::new(),
        }
    }

    pub fn engine_kind(&self) -> Option<EngineKind> {
        EngineKind::from_name(&self.exec.engine)
    }

    pub fn is_runnable(&self) -> bool {
        self.engine_kind().is_some()
    }

    pub fn coupling_map(&self) -> Option<&[(usize, usize)]> {
        self.exec.target.as_ref()?.coupling_map.as_deref()
    }

    pub fn is_all_to_all(&self) -> bool {
        self.coupling_map().is_none()
    }

    pub fn basis_gates(&self) -> Option<&[String]> {
        self.exec.target.as_ref()?.basis_gates.as_deref()
    }

    /// Non-fatal observations, such as an engine without a reference backend.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_runnable() {
            out.push(format!("engine {:?} has no reference backend; context is not runnable", self.exec.engine));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_id != CTX_SCHEMA {
            return Err(DescriptorError::schema(
                "$schema",
                format!("expected {CTX_SCHEMA:?}, found {:?}", self.schema_id),
            ));
        }
        if self.exec.engine.is_empty() {
            return Err(DescriptorError::schema("exec.engine", "engine must be non-empty"));
        }
        if self.exec.samples == 0 {
            return Err(DescriptorError::schema("exec.samples", "samples must be positive"));
        }
        if let Some(target) = &self.exec.target {
            if let Some(gates) = &target.basis_gates {
                for (k, g) in gates.iter().enumerate() {
                    if !KNOWN_BASIS_GATES.contains(&g.as_str()) {
                        return Err(DescriptorError::schema(
                            format!("exec.target.basis_gates[{k}]"),
                            format!("unrecognized gate {g:?}"),
                        ));
                    }
                }
            }
            if let Some(map) = &target.coupling_map {
                if let Some(k) = map.iter().position(|(a, b)| a == b) {
                    return Err(DescriptorError::schema(
                        format!("exec.target.coupling_map[{k}]"),
                        format!("self-loop on qubit {}", map[k].0),
                    ));
                }
            }
        }
        if let Some(a) = &self.anneal {
            if a.num_reads == 0 {
                return Err(DescriptorError::schema("anneal.num_reads", "num_reads must be positive"));
            }
            if a.num_sweeps == Some(0) {
                return Err(DescriptorError::schema("anneal.num_sweeps", "num_sweeps must be positive"));
            }
            if let Some((lo, hi)) = a.beta_range {
                if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > 0.0) {
                    return Err(DescriptorError::schema("anneal.beta_range", "beta_range entries must be positive"));
                }
            }
        }
        if let Some(q) = &self.qec {
            if q.distance == 0 || q.distance % 2 == 0 {
                return Err(DescriptorError::schema(
                    "qec.distance",
                    format!("distance must be an odd positive integer, found {}", q.distance),
                ));
            }
            if q.code_family.is_empty() {
                return Err(DescriptorError::schema("qec.code_family", "code_family must be non-empty"));
            }
        }
        Ok(())
    }

    /// Checks coupling-map indices against the widest register of a job.
    pub fn validate_for_width(&self, width: usize) -> Result<()> {
        if let Some(map) = self.coupling_map() {
            if let Some(k) = map.iter().position(|&(a, b)| a >= width || b >= width) {
                return Err(DescriptorError::schema(
                    format!("exec.target.coupling_map[{k}]"),
                    format!("pair {:?} exceeds the widest register ({width} qubits)", map[k]),
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn from_value(value: &Value) -> Result<Self> {
        let mut f = Fields::new(value, "", ErrorKind::Schema)?;
        let schema_id = f.req_str("$schema")?.to_string();
        let exec = {
            let mut e = Fields::new(f.req("exec")?, "exec", ErrorKind::Schema)?;
            let engine = e.req_str("engine")?.to_string();
            let samples = e.req_u64("samples")?;
            let seed = e.req_u64("seed")?;
            let target = match e.opt("target") {
                None => None,
                Some(t) => Some(target_from_value(t)?),
            };
            let options = e.opt_object("options")?.cloned().unwrap_or_default();
            e.deny_rest()?;
            ExecPolicy { engine, samples, seed, target, options }
        };
        let anneal = match f.opt("anneal") {
            None => None,
            Some(v) => {
                let mut a = Fields::new(v, "anneal", ErrorKind::Schema)?;
                let num_reads = a.req_u64("num_reads")?;
                let num_sweeps = a.opt_u64("num_sweeps")?;
                let beta_range = match a.opt_array("beta_range")? {
                    None => None,
                    Some(pair) => match pair.as_slice() {
                        [lo, hi] => match (json::finite_f64(lo), json::finite_f64(hi)) {
                            (Some(lo), Some(hi)) => Some((lo, hi)),
                            _ => return Err(a.err("beta_range", "expected two finite numbers")),
                        },
                        _ => return Err(a.err("beta_range", "expected [beta_min, beta_max]")),
                    },
                };
                a.deny_rest()?;
                Some(AnnealSettings { num_reads, num_sweeps, beta_range })
            }
        };
        let qec = match f.opt("qec") {
            None => None,
            Some(v) => {
                let mut q = Fields::new(v, "qec", ErrorKind::Schema)?;
                let code_family = q.req_str("code_family")?.to_string();
                let distance = q.req_u64("distance")?;
                let allocator = q.req_str("allocator")?.to_string();
                let path = q.at("logical_gate_set");
                let logical_gate_set = q
                    .req_array("logical_gate_set")?
                    .iter()
                    .enumerate()
                    .map(|(k, g)| {
                        g.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| DescriptorError::schema(json::index(&path, k), "expected a string"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let extensions = q.extensions()?;
                Some(QecPolicy { code_family, distance, allocator, logical_gate_set, extensions })
            }
        };
        let extensions = f.extensions()?;
        let ctx = Self { schema_id, exec, anneal, qec, extensions };
        ctx.validate()?;
        Ok(ctx)
    }
}

fn target_from_value(value: &Value) -> Result<Target> {
    let mut t = Fields::new(value, "exec.target", ErrorKind::Schema)?;
    let basis_gates = match t.opt_array("basis_gates")? {
        None => None,
        Some(arr) => {
            let path = t.at("basis_gates");
            Some(
                arr.iter()
                    .enumerate()
                    .map(|(k, g)| {
                        g.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| DescriptorError::schema(json::index(&path, k), "expected a gate name"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    let coupling_map = match t.opt_array("coupling_map")? {
        None => None,
        Some(arr) => {
            let path = t.at("coupling_map");
            Some(
                arr.iter()
                    .enumerate()
                    .map(|(k, pair)| match pair.as_array().map(|p| p.as_slice()) {
                        Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                            (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                            _ => Err(DescriptorError::schema(json::index(&path, k), "qubit indices must be nonnegative integers")),
                        },
                        _ => Err(DescriptorError::schema(json::index(&path, k), "expected a [a, b] pair")),
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    t.deny_rest()?;
    Ok(Target { basis_gates, coupling_map })
}

impl Descriptor for ContextDescriptor {
    fn to_json(&self) -> Value {
        let mut exec = Map::new();
        exec.insert("engine".into(), self.exec.engine.clone().into());
        exec.insert("samples".into(), self.exec.samples.into());
        exec.insert("seed".into(), self.exec.seed.into());
        if let Some(target) = &self.exec.target {
            let mut t = Map::new();
            if let Some(g) = &target.basis_gates {
                t.insert("basis_gates".into(), g.clone().into());
            }
            if let Some(map) = &target.coupling_map {
                t.insert(
                    "coupling_map".into(),
                    Value::Array(map.iter().map(|&(a, b)| Value::from(vec![a as u64, b as u64])).collect()),
                );
            }
            exec.insert("target".into(), Value::Object(t));
        }
        if !self.exec.options.is_empty() {
            exec.insert("options".into(), Value::Object(self.exec.options.clone()));
        }
        let mut m = Map::new();
        m.insert("$schema".into(), self.schema_id.clone().into());
        m.insert("exec".into(), Value::Object(exec));
        if let Some(a) = &self.anneal {
            let mut am = Map::new();
            am.insert("num_reads".into(), a.num_reads.into());
            if let Some(s) = a.num_sweeps {
                am.insert("num_sweeps".into(), s.into());
            }
            if let Some((lo, hi)) = a.beta_range {
                am.insert("beta_range".into(), Value::Array(vec![f64_value(lo), f64_value(hi)]));
            }
            m.insert("anneal".into(), Value::Object(am));
        }
        if let Some(q) = &self.qec {
            let mut qm = Map::new();
            qm.insert("code_family".into(), q.code_family.clone().into());
            qm.insert("distance".into(), q.distance.into());
            qm.insert("allocator".into(), q.allocator.clone().into());
            qm.insert("logical_gate_set".into(), q.logical_gate_set.clone().into());
            if !q.extensions.is_empty() {
                qm.insert("extensions".into(), Value::Object(q.extensions.clone()));
            }
            m.insert("qec".into(), Value::Object(qm));
        }
        if !self.extensions.is_empty() {
            m.insert("extensions".into(), Value::Object(self.extensions.clone()));
        }
        Value::Object(m)
    }
}

/// Parses and validates a context descriptor. Unknown engines parse but are
/// reported as non-runnable by [`ContextDescriptor::is_runnable`].
pub fn parse_context(text: &str) -> Result<ContextDescriptor> {
    ContextDescriptor::from_value(&json::parse_text(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GATE_DOC: &str = r#"{
      "$schema": "ctx.schema.json",
      "exec": {
        "engine": "gate.aer_simulator",
        "samples": 4096,
        "seed": 42,
        "target": {
          "basis_gates": ["sx", "rz", "cx"],
          "coupling_map": [[0,1],[1,2],[2,3],
           [3,4],[4,5],[5,6],[6,7],[7,8],[8,9]]
        },
        "options": {
          "optimization_level": 2
        } } }"#;

    fn kind_of(v: &Value) -> ErrorKind {
        parse_context(&v.to_string()).unwrap_err().kind().unwrap()
    }

    #[test]
    fn gate_context_document_parses_and_is_runnable() {
        let ctx = parse_context(GATE_DOC).unwrap();
        assert_eq!(ctx.engine_kind(), Some(EngineKind::GateStatevector));
        assert_eq!(ctx.exec.samples, 4096);
        assert_eq!(ctx.exec.seed, 42);
        assert_eq!(ctx.coupling_map().unwrap().len(), 9);
        assert_eq!(ctx.exec.options["optimization_level"], 2);
        assert!(!ctx.is_all_to_all());
        assert!(ctx.validate_for_width(10).is_ok());
        assert_eq!(ctx.validate_for_width(4).unwrap_err().kind(), Some(ErrorKind::Schema));
    }

    #[test]
    fn anneal_block_with_defaults() {
        let text = r#"{"$schema":"ctx.schema.json",
            "exec":{"engine":"anneal.metropolis","samples":1000,"seed":7},
            "anneal":{"num_reads":1000}}"#;
        let ctx = parse_context(text).unwrap();
        let a = ctx.anneal.as_ref().unwrap();
        assert_eq!(a.num_reads, 1000);
        assert_eq!(a.effective_sweeps(), DEFAULT_NUM_SWEEPS);
        assert_eq!(a.effective_beta_range(), DEFAULT_BETA_RANGE);
        assert!(ctx.is_all_to_all());
        assert_eq!(ctx.engine_kind(), Some(EngineKind::AnnealMetropolis));
    }

    #[test]
    fn qec_block_parses_with_extensions() {
        let text = r#"{"$schema":"ctx.schema.json",
            "exec":{"engine":"gate.statevector","samples":10,"seed":1},
            "qec":{"code_family":"surface","distance":7,"allocator":"auto",
                   "logical_gate_set":["H","S","CNOT","T","MEASURE_Z"],
                   "extensions":{"decoder":"mwpm"}}}"#;
        let ctx = parse_context(text).unwrap();
        let q = ctx.qec.as_ref().unwrap();
        assert_eq!(q.distance, 7);
        assert_eq!(q.logical_gate_set.len(), 5);
        assert_eq!(q.extensions["decoder"], "mwpm");
        assert_eq!(parse_context(&ctx.serialize()).unwrap(), ctx);
    }

    #[test]
    fn even_distance_rejected() {
        let v = serde_json::json!({"$schema":"ctx.schema.json",
            "exec":{"engine":"gate.statevector","samples":10,"seed":1},
            "qec":{"code_family":"surface","distance":4,"allocator":"auto","logical_gate_set":[]}});
        assert_eq!(kind_of(&v), ErrorKind::Schema);
    }

    #[test]
    fn unknown_engine_parses_but_not_runnable() {
        let v = serde_json::json!({"$schema":"ctx.schema.json",
            "exec":{"engine":"cv.gaussian","samples":10,"seed":1}});
        let ctx = parse_context(&v.to_string()).unwrap();
        assert!(!ctx.is_runnable());
        assert_eq!(ctx.warnings().len(), 1);
    }

    #[test]
    fn structural_mutations_rejected() {
        let base: Value = serde_json::from_str(GATE_DOC).unwrap();
        let mut v = base.clone();
        v["exec"]["target"]["coupling_map"][0] = serde_json::json!([3, 3]);
        assert_eq!(kind_of(&v), ErrorKind::Schema);
        let mut v = base.clone();
        v["exec"]["target"]["basis_gates"][0] = "warp".into();
        assert_eq!(kind_of(&v), ErrorKind::Schema);
        let mut v = base.clone();
        v["exec"]["samples"] = 0.into();
        assert_eq!(kind_of(&v), ErrorKind::Schema);
        let mut v = base.clone();
        v["exec"].as_object_mut().unwrap().remove("seed");
        assert_eq!(kind_of(&v), ErrorKind::Schema);
        let mut v = base.clone();
        v["anneal"] = serde_json::json!({"num_reads": 10, "beta_range": [0.0, 1.0]});
        assert_eq!(kind_of(&v), ErrorKind::Schema);
        let mut v = base;
        v["$schema"] = "qdt-core.schema.json".into();
        assert_eq!(kind_of(&v), ErrorKind::Schema);
    }
}
