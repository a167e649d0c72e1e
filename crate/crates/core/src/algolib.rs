//! Builders that turn problems into operator descriptors, and job packaging.
//!
//! Builders emit intent only: no engine names, gate names, or device fields.
//!
//! Conventions shared by both Max-Cut formulations:
//! * bit `b` maps to spin `s = 1 − 2b` (bit 0 is spin +1);
//! * couplings are antiferromagnetic, `J_ij = +w_ij`, so with `h = 0`
//!   `cut(s) = ½ (W_total − E(s))` and minimizing energy maximizes the cut.

use serde_json::{json, Value};
use thiserror::Error;

use crate::descriptor::{
    ContextDescriptor, EncodingKind, IsingParams, JobBundle, OperatorDescriptor,
    OperatorParams, Provenance, QdtSet, QftParams, QuantumDataType, RepKind, ResultSchema,
};
use crate::error::DescriptorError;
use crate::json::f64_value;
use crate::validation::{check_sequence, estimate_cost, SequenceReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("register {register:?} has encoding {found}, expected {expected}")]
    EncodingMismatch { register: String, expected: EncodingKind, found: EncodingKind },
    #[error("graph has {graph} vertices but register {register:?} has width {width}")]
    WidthMismatch { register: String, graph: usize, width: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PackageError {
    #[error("operator sequence rejected: {0}")]
    Sequence(SequenceReport),
    #[error("engine {engine:?} cannot realize operator {index} ({rep_kind})")]
    Unrealizable { engine: String, rep_kind: RepKind, index: usize },
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Undirected weighted graph with edges stored as `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid graph: {0}")]
pub struct GraphError(pub String);

impl Graph {
    /// Validates and normalizes each edge to `i < j`. Rejects self-loops,
    /// duplicates, out-of-range endpoints, and non-finite weights.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError("graph needs at least one vertex".into()));
        }
        let mut out: Vec<Edge> = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(GraphError(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(GraphError(format!("edge ({a}, {b}) outside {n} vertices")));
            }
            if !w.is_finite() {
                return Err(GraphError(format!("edge ({a}, {b}) has non-finite weight")));
            }
            let (i, j) = (a.min(b), a.max(b));
            if out.iter().any(|e| e.i == i && e.j == j) {
                return Err(GraphError(format!("duplicate edge ({i}, {j})")));
            }
            out.push(Edge { i, j, w });
        }
        Ok(Self { n, edges: out })
    }

    /// Cycle `0 – 1 – … – (n−1) – 0` with unit weights.
    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).expect("cycle with n >= 3 is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Parses `{"n": int, "edges": [[i, j, w], ...]}`; `[i, j]` means weight 1.
    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let v: Value = serde_json::from_str(text).map_err(|e| GraphError(e.to_string()))?;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| GraphError("`n` must be an integer".into()))?;
        let items = v.get("edges").and_then(Value::as_array).ok_or_else(|| GraphError("`edges` must be an array".into()))?;
        let mut edges = Vec::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            let bad = || GraphError(format!("edges[{k}] must be [i, j] or [i, j, w]"));
            let arr = item.as_array().ok_or_else(bad)?;
            let (a, b, w) = match arr.as_slice() {
                [a, b] => (a.as_u64(), b.as_u64(), Some(1.0)),
                [a, b, w] => (a.as_u64(), b.as_u64(), w.as_f64()),
                _ => return Err(bad()),
            };
            match (a, b, w) {
                (Some(a), Some(b), Some(w)) => edges.push((a as usize, b as usize, w)),
                _ => return Err(bad()),
            }
        }
        Self::new(n as usize, edges)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "edges": self.edges.iter().map(|e| json!([e.i, e.j, f64_value(e.w)])).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaAngles {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaAngles {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self, BuildError> {
        if gammas.is_empty() || gammas.len() != betas.len() {
            return Err(BuildError::Param(format!(
                "need equal, nonzero numbers of gammas and betas (got {} and {})",
                gammas.len(),
                betas.len()
            )));
        }
        if gammas.iter().chain(&betas).any(|x| !x.is_finite()) {
            return Err(BuildError::Param("angles must be finite".into()));
        }
        Ok(Self { gammas, betas })
    }

    /// Depth `p`.
    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    pub fn layers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.gammas.iter().copied().zip(self.betas.iter().copied())
    }
}

fn require_encoding(qdt: &QuantumDataType, expected: EncodingKind) -> Result<(), BuildError> {
    if qdt.encoding_kind != expected {
        return Err(BuildError::EncodingMismatch {
            register: qdt.id.clone(),
            expected,
            found: qdt.encoding_kind,
        });
    }
    Ok(())
}

fn require_width(qdt: &QuantumDataType, g: &Graph) -> Result<(), BuildError> {
    if qdt.width != g.n() {
        return Err(BuildError::WidthMismatch { register: qdt.id.clone(), graph: g.n(), width: qdt.width });
    }
    Ok(())
}

fn with_estimate(mut op: OperatorDescriptor, width: usize) -> OperatorDescriptor {
    op.cost_hint = Some(estimate_cost(&op, width));
    op
}

/// In-place QFT template on a phase register, with a phase readout schema.
pub fn build_qft(
    qdt: &QuantumDataType,
    approx_degree: usize,
    do_swaps: bool,
    inverse: bool,
) -> Result<OperatorDescriptor, BuildError> {
    require_encoding(qdt, EncodingKind::PhaseRegister)?;
    if approx_degree >= qdt.width {
        return Err(BuildError::Param(format!(
            "approx_degree {approx_degree} must be below the register width {}",
            qdt.width
        )));
    }
    let mut op = OperatorDescriptor::in_place(
        if inverse { "IQFT" } else { "QFT" },
        &qdt.id,
        OperatorParams::QftTemplate(QftParams { approx_degree, do_swaps, inverse }),
    );
    op.result_schema = Some(ResultSchema::for_register(qdt));
    Ok(with_estimate(op, qdt.width))
}

/// Terminal Z-basis readout of every carrier of `qdt`.
pub fn build_measurement(qdt: &QuantumDataType) -> OperatorDescriptor {
    let mut op = OperatorDescriptor::in_place("measure", &qdt.id, OperatorParams::Measurement);
    op.result_schema = Some(ResultSchema::for_register(qdt));
    with_estimate(op, qdt.width)
}

/// `[PREP_UNIFORM, (ISING_COST_PHASE, MIXER_RX) × p, MEASUREMENT]`.
pub fn build_qaoa_maxcut(
    g: &Graph,
    qdt: &QuantumDataType,
    angles: &QaoaAngles,
) -> Result<Vec<OperatorDescriptor>, BuildError> {
    require_encoding(qdt, EncodingKind::IsingSpin)?;
    require_width(qdt, g)?;
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.i, e.j)).collect();
    let weights: Vec<f64> = g.edges().iter().map(|e| e.w).collect();
    let mut ops = Vec::with_capacity(2 + 2 * angles.depth());
    ops.push(with_estimate(
        OperatorDescriptor::in_place("prep_uniform", &qdt.id, OperatorParams::PrepUniform),
        qdt.width,
    ));
    for (layer, (gamma, beta)) in angles.layers().enumerate() {
        ops.push(with_estimate(
            OperatorDescriptor::in_place(
                format!("cost_layer_{layer}"),
                &qdt.id,
                OperatorParams::IsingCostPhase { gamma, edges: edges.clone(), weights: weights.clone() },
            ),
            qdt.width,
        ));
        ops.push(with_estimate(
            OperatorDescriptor::in_place(format!("mixer_layer_{layer}"), &qdt.id, OperatorParams::MixerRx { beta }),
            qdt.width,
        ));
    }
    ops.push(build_measurement(qdt));
    Ok(ops)
}

/// Ising form of Max-Cut: `h = 0`, `J_ij = J_ji = w_ij`.
pub fn build_ising_maxcut(g: &Graph, qdt: &QuantumDataType) -> Result<OperatorDescriptor, BuildError> {
    require_encoding(qdt, EncodingKind::IsingSpin)?;
    require_width(qdt, g)?;
    let n = g.n();
    let mut j = vec![vec![0.0; n]; n];
    for e in g.edges() {
        j[e.i][e.j] = e.w;
        j[e.j][e.i] = e.w;
    }
    let mut op = OperatorDescriptor::in_place(
        "maxcut_ising",
        &qdt.id,
        OperatorParams::IsingProblem(IsingParams { h: vec![0.0; n], j, offset: 0.0 }),
    );
    op.result_schema = Some(ResultSchema::for_register(qdt));
    Ok(with_estimate(op, qdt.width))
}

/// Checks composition and engine capability, then assembles a bundle.
/// Contexts naming an engine without a reference backend are packaged
/// as-is; they fail later at run time.
pub fn package_job(
    qdts: Vec<QuantumDataType>,
    ops: Vec<OperatorDescriptor>,
    context: ContextDescriptor,
    provenance: Provenance,
) -> Result<JobBundle, PackageError> {
    let qdts = QdtSet::new(qdts)?;
    let report = check_sequence(&ops, &qdts);
    if !report.ok {
        return Err(PackageError::Sequence(report));
    }
    if let Some(engine) = context.engine_kind() {
        for (index, op) in ops.iter().enumerate() {
            if !engine.supports(op.rep_kind()) {
                return Err(PackageError::Unrealizable {
                    engine: context.exec.engine.clone(),
                    rep_kind: op.rep_kind(),
                    index,
                });
            }
        }
    }
    let bundle = JobBundle { qdts, operators: ops, context, provenance };
    bundle.validate()?;
    Ok(bundle)
}
