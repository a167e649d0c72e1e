use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{lower, GateError, StateVector};
use crate::counts::Counts;
use crate::descriptor::{CostHint, JobBundle, ResultSchema};
use crate::exec::Execution;
use crate::validation::check_sequence;

/// Outcome of a gate-engine job.
#[derive(Debug, Clone, PartialEq)]
pub struct GateRun {
    pub engine: String,
    pub samples: u64,
    pub seed: u64,
    pub counts: Counts,
    pub swaps_inserted: usize,
    pub gate_counts: BTreeMap<&'static str, u64>,
    pub depth: usize,
    pub cost_hint: CostHint,
    pub result_schema: ResultSchema,
    pub warnings: Vec<String>,
}

impl GateRun {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "engine": self.engine,
            "samples": self.samples,
            "seed": self.seed,
            "counts": self.counts.to_json(),
            "routing_overhead": { "swaps_inserted": self.swaps_inserted },
            "gate_counts": self.gate_counts,
            "depth": self.depth,
            "cost_hint": self.cost_hint.to_json(),
            "result_schema": self.result_schema.to_json(),
        });
        if !self.warnings.is_empty() {
            v["warnings"] = json!(self.warnings);
        }
        v
    }
}

/// Lowers, simulates, and samples a gate-engine bundle.
pub fn run_gate_job(bundle: &JobBundle, exec: Execution) -> Result<GateRun, GateError> {
    let ctx = &bundle.context;
    let gl = lower(&bundle.operators, &bundle.qdts, ctx)?;
    let sv = StateVector::run(&gl, exec)?;
    let counts = sv.sample(ctx.exec.samples, ctx.exec.seed, &gl.measure_order);
    let result_schema = match bundle.operators.iter().rev().find_map(|o| o.result_schema.clone()) {
        Some(rs) => rs,
        None => {
            let register = &bundle.operators[0].codomain_qdt;
            ResultSchema::for_register(bundle.qdts.get(register).expect("lowering resolved the register"))
        }
    };
    Ok(GateRun {
        engine: ctx.exec.engine.clone(),
        samples: ctx.exec.samples,
        seed: ctx.exec.seed,
        counts,
        swaps_inserted: gl.swaps_inserted,
        gate_counts: gl.gate_counts(),
        depth: gl.depth(),
        cost_hint: check_sequence(&bundle.operators, &bundle.qdts).total_cost_hint,
        result_schema,
        warnings: gl.warnings,
    })
}
