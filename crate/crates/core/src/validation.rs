//! Composition rules over operator sequences, inversion, and cost estimates.
//!
//! Cost estimates are deterministic heuristics:
//!
//! * `QFT_TEMPLATE` on `n` carriers with approximation degree `a` keeps the
//!   controlled-phase pairs `(j, k)`, `k < j`, with `j − k ≤ n − 1 − a`.
//!   Each final-layer SWAP counts as 3 two-qubit gates. Depth is `2n + twoq`.
//! * `ISING_COST_PHASE` costs one two-qubit gate per edge; depth is the ASAP
//!   layering of those gates in edge order.
//! * `PREP_UNIFORM`, `MIXER_RX`, `MEASUREMENT`: no two-qubit gates, depth 1.
//! * `ISING_PROBLEM`: one "coupler" per nonzero coupling above the diagonal,
//!   depth 0.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::descriptor::{CostHint, OperatorDescriptor, OperatorParams, QdtSet, RepKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    DomainMismatch,
    HiddenMeasurement,
    WidthMismatch,
    NotInvertible,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::DomainMismatch => "DOMAIN_MISMATCH",
            Rule::HiddenMeasurement => "HIDDEN_MEASUREMENT",
            Rule::WidthMismatch => "WIDTH_MISMATCH",
            Rule::NotInvertible => "NOT_INVERTIBLE",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub rule: Rule,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub total_cost_hint: CostHint,
}

impl SequenceReport {
    fn from_violations(violations: Vec<Violation>, total_cost_hint: CostHint) -> Self {
        Self { ok: violations.is_empty(), violations, total_cost_hint }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok,
            "violations": self.violations.iter().map(|v| json!({
                "index": v.index,
                "rule": v.rule.as_str(),
                "message": v.message,
            })).collect::<Vec<_>>(),
            "total_cost_hint": {"twoq": self.total_cost_hint.twoq, "depth": self.total_cost_hint.depth},
        })
    }
}

impl fmt::Display for SequenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "sequence ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "operators[{}]: {}: {}", v.index, v.rule, v.message)?;
        }
        Ok(())
    }
}

/// Checks register flow, measurement placement, and widths across `ops`.
/// Violations are reported, never raised.
pub fn check_sequence(ops: &[OperatorDescriptor], qdts: &QdtSet) -> SequenceReport {
    let mut violations = Vec::new();
    let mut total = CostHint::default();
    let last = ops.len().saturating_sub(1);
    for (k, op) in ops.iter().enumerate() {
        let domain = qdts.get(&op.domain_qdt);
        let codomain = qdts.get(&op.codomain_qdt);
        for (field, id, found) in
            [("domain_qdt", &op.domain_qdt, domain), ("codomain_qdt", &op.codomain_qdt, codomain)]
        {
            if found.is_none() {
                violations.push(Violation {
                    index: k,
                    rule: Rule::DomainMismatch,
                    message: format!("{field} {id:?} does not resolve to a register"),
                });
            }
        }
        if k > 0 && ops[k - 1].codomain_qdt != op.domain_qdt {
            violations.push(Violation {
                index: k,
                rule: Rule::DomainMismatch,
                message: format!(
                    "previous operator produces {:?} but this one consumes {:?}",
                    ops[k - 1].codomain_qdt, op.domain_qdt
                ),
            });
        }
        if op.rep_kind() == RepKind::Measurement && k != last {
            violations.push(Violation {
                index: k,
                rule: Rule::HiddenMeasurement,
                message: "MEASUREMENT must be the final operator".into(),
            });
        }
        if let (Some(d), Some(c)) = (domain, codomain) {
            if d.width != c.width {
                violations.push(Violation {
                    index: k,
                    rule: Rule::WidthMismatch,
                    message: format!("domain width {} differs from codomain width {}", d.width, c.width),
                });
            }
            if let Err(e) = op.validate(Some(qdts)) {
                violations.push(Violation { index: k, rule: Rule::WidthMismatch, message: e.to_string() });
            }
            total = total + estimate_cost(op, d.width);
        }
    }
    SequenceReport::from_violations(violations, total)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} has no inverse")]
pub struct NotInvertibleError(pub RepKind);

/// The adjoint operator. The result schema is dropped; the cost hint kept.
pub fn invert(op: &OperatorDescriptor) -> Result<OperatorDescriptor, NotInvertibleError> {
    let params = match &op.params {
        OperatorParams::QftTemplate(p) => {
            let mut p = *p;
            p.inverse = !p.inverse;
            OperatorParams::QftTemplate(p)
        }
        OperatorParams::IsingCostPhase { gamma, edges, weights } => {
            OperatorParams::IsingCostPhase { gamma: -gamma, edges: edges.clone(), weights: weights.clone() }
        }
        OperatorParams::MixerRx { beta } => OperatorParams::MixerRx { beta: -beta },
        other => return Err(NotInvertibleError(other.rep_kind())),
    };
    Ok(OperatorDescriptor {
        params,
        result_schema: None,
        domain_qdt: op.codomain_qdt.clone(),
        codomain_qdt: op.domain_qdt.clone(),
        ..op.clone()
    })
}

/// Inverts a whole sequence (reversed order). Non-invertible members are
/// reported as `NOT_INVERTIBLE` violations.
pub fn invert_sequence(ops: &[OperatorDescriptor]) -> Result<Vec<OperatorDescriptor>, SequenceReport> {
    let mut out = Vec::with_capacity(ops.len());
    let mut violations = Vec::new();
    for (k, op) in ops.iter().enumerate().rev() {
        match invert(op) {
            Ok(inv) => out.push(inv),
            Err(e) => violations.push(Violation { index: k, rule: Rule::NotInvertible, message: e.to_string() }),
        }
    }
    if violations.is_empty() {
        Ok(out)
    } else {
        violations.reverse();
        Err(SequenceReport::from_violations(violations, CostHint::default()))
    }
}

/// Number of controlled-phase pairs kept by a QFT on `n` carriers at
/// approximation degree `approx_degree`.
pub fn qft_phase_pairs(n: usize, approx_degree: usize) -> u64 {
    let max_span = (n as u64).saturating_sub(1).saturating_sub(approx_degree as u64);
    (1..=max_span).map(|d| n as u64 - d).sum()
}

/// Resource estimate for `op` acting on a register of `width` carriers.
pub fn estimate_cost(op: &OperatorDescriptor, width: usize) -> CostHint {
    match &op.params {
        OperatorParams::QftTemplate(p) => {
            let swaps = if p.do_swaps { 3 * (width as u64 / 2) } else { 0 };
            let twoq = qft_phase_pairs(width, p.approx_degree) + swaps;
            CostHint { twoq, depth: 2 * width as u64 + twoq }
        }
        OperatorParams::IsingCostPhase { edges, .. } => {
            let mut layer = std::collections::HashMap::<usize, u64>::new();
            let mut depth = 0;
            for &(a, b) in edges {
                let l = layer.get(&a).copied().unwrap_or(0).max(layer.get(&b).copied().unwrap_or(0)) + 1;
                layer.insert(a, l);
                layer.insert(b, l);
                depth = depth.max(l);
            }
            CostHint { twoq: edges.len() as u64, depth }
        }
        OperatorParams::PrepUniform | OperatorParams::MixerRx { .. } | OperatorParams::Measurement => {
            CostHint { twoq: 0, depth: 1 }
        }
        OperatorParams::IsingProblem(p) => CostHint { twoq: p.coupling_count() as u64, depth: 0 },
    }
}
