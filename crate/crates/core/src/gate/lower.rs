use std::collections::BTreeSet;
use std::f64::consts::PI;

use super::route::route;
use super::{Gate, GateError, GateList};
use crate::descriptor::{ContextDescriptor, EngineKind, OperatorDescriptor, OperatorParams, QdtSet, RepKind};
use crate::validation::check_sequence;

/// Textbook QFT network on qubits `0..n` (qubit `j` has weight `2^j`).
///
/// For `j = n−1 … 0`: `H(j)`, then `CP(π/2^{j−k})` on `(j, k)` for each
/// `k < j` with `j − k ≤ n − 1 − approx_degree`. With `do_swaps`, a final
/// `SWAP(i, n−1−i)` layer reverses the output order. `inverse` emits the
/// adjoint: reversed order, negated angles.
pub fn qft_gates(n: usize, approx_degree: usize, do_swaps: bool, inverse: bool) -> Vec<Gate> {
    let reach = n.saturating_sub(1).saturating_sub(approx_degree);
    let mut gates = Vec::new();
    for j in (0..n).rev() {
        gates.push(Gate::H(j));
        for k in (0..j).rev() {
            if j - k <= reach {
                gates.push(Gate::Cp(j, k, PI / f64::powi(2.0, (j - k) as i32)));
            }
        }
    }
    if do_swaps {
        gates.extend((0..n / 2).map(|i| Gate::Swap(i, n - 1 - i)));
    }
    if inverse {
        gates.reverse();
        gates.iter_mut().for_each(|g| *g = g.adjoint());
    }
    gates
}

/// Gate realization of each operator on a register of `width` qubits,
/// without routing. MEASUREMENT contributes no gates.
pub fn lower_logical(ops: &[OperatorDescriptor], width: usize) -> Result<Vec<Gate>, GateError> {
    let mut gates = Vec::new();
    for op in ops {
        match &op.params {
            OperatorParams::PrepUniform => gates.extend((0..width).map(Gate::H)),
            OperatorParams::IsingCostPhase { gamma, edges, weights } => {
                gates.extend(edges.iter().zip(weights).map(|(&(i, j), w)| Gate::Rzz(i, j, 2.0 * gamma * w)))
            }
            OperatorParams::MixerRx { beta } => gates.extend((0..width).map(|q| Gate::Rx(q, 2.0 * beta))),
            OperatorParams::QftTemplate(p) => gates.extend(qft_gates(width, p.approx_degree, p.do_swaps, p.inverse)),
            OperatorParams::Measurement => {}
            OperatorParams::IsingProblem(_) => {
                return Err(GateError::Unrealizable {
                    engine: EngineKind::GateStatevector.canonical_name().into(),
                    rep_kind: RepKind::IsingProblem,
                })
            }
        }
    }
    Ok(gates)
}

/// Lowers a checked operator sequence on one register to a physical gate list.
///
/// The measured carriers come from the last operator carrying a result
/// schema, or every carrier in index order when none does. With a coupling
/// map the gates are routed and `measure_order` follows the final layout.
pub fn lower(ops: &[OperatorDescriptor], qdts: &QdtSet, ctx: &ContextDescriptor) -> Result<GateList, GateError> {
    let report = check_sequence(ops, qdts);
    if !report.ok {
        return Err(GateError::Sequence(report));
    }
    let unrealizable = |rep_kind| GateError::Unrealizable { engine: ctx.exec.engine.clone(), rep_kind };
    if ctx.engine_kind() != Some(EngineKind::GateStatevector) {
        let rep_kind = ops.first().map(|o| o.rep_kind()).unwrap_or(RepKind::Measurement);
        return Err(unrealizable(rep_kind));
    }
    if let Some(op) = ops.iter().find(|o| o.rep_kind() == RepKind::IsingProblem) {
        return Err(unrealizable(op.rep_kind()));
    }
    let first = ops.first().ok_or_else(|| GateError::InvalidGate("empty operator sequence".into()))?;
    let register = &first.domain_qdt;
    if let Some(op) = ops.iter().find(|o| &o.domain_qdt != register || &o.codomain_qdt != register) {
        return Err(GateError::InvalidGate(format!(
            "operator {:?} leaves register {register:?}; lowering handles a single register",
            op.name
        )));
    }
    let width = qdts
        .get(register)
        .map(|q| q.width)
        .ok_or_else(|| GateError::InvalidGate(format!("unknown register {register:?}")))?;

    let logical = lower_logical(ops, width)?;
    let carriers = match ops.iter().rev().find_map(|o| o.result_schema.as_ref()) {
        Some(rs) => rs.carrier_indices().map_err(|e| GateError::InvalidGate(e.to_string()))?,
        None => (0..width).collect(),
    };

    let (gates, swaps_inserted, final_layout) = match ctx.coupling_map() {
        Some(map) => {
            let r = route(&logical, width, map)?;
            (r.gates, r.swaps_inserted, r.final_layout)
        }
        None => (logical, 0, (0..width).collect()),
    };
    let measure_order = carriers.iter().map(|&c| final_layout[c]).collect();

    let mut warnings = ctx.warnings();
    if let Some(basis) = ctx.basis_gates() {
        let outside: BTreeSet<&str> = gates
            .iter()
            .map(Gate::basis_name)
            .filter(|name| !basis.iter().any(|b| b == name))
            .collect();
        if !outside.is_empty() {
            warnings.push(format!(
                "emitted gates outside the declared basis: {}",
                outside.into_iter().collect::<Vec<_>>().join(", ")
            ));
        }
    }

    let gl = GateList { n_qubits: width, gates, measure_order, swaps_inserted, final_layout, warnings };
    gl.validate()?;
    Ok(gl)
}
