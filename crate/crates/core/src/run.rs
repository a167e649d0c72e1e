//! Engine dispatch for job bundles.

use serde_json::Value;
use thiserror::Error;

use crate::anneal::{run_anneal_job, AnnealError, AnnealRun};
use crate::counts::Counts;
use crate::descriptor::{EngineKind, JobBundle, RepKind, ResultSchema};
use crate::error::DescriptorError;
use crate::exec::Execution;
use crate::gate::{run_gate_job, GateError, GateRun};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Invalid(#[from] DescriptorError),
    #[error("engine {engine:?} cannot realize {rep_kind}")]
    Unrealizable { engine: String, rep_kind: RepKind },
    #[error(transparent)]
    Gate(GateError),
    #[error(transparent)]
    Anneal(AnnealError),
}

impl From<GateError> for RunError {
    fn from(e: GateError) -> Self {
        match e {
            GateError::Unrealizable { engine, rep_kind } => RunError::Unrealizable { engine, rep_kind },
            e => RunError::Gate(e),
        }
    }
}

impl From<AnnealError> for RunError {
    fn from(e: AnnealError) -> Self {
        match e {
            AnnealError::Unrealizable { engine, rep_kind } => RunError::Unrealizable { engine, rep_kind },
            e => RunError::Anneal(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunResult {
    Gate(GateRun),
    Anneal(AnnealRun),
}

impl RunResult {
    pub fn counts(&self) -> &Counts {
        match self {
            RunResult::Gate(r) => &r.counts,
            RunResult::Anneal(r) => &r.counts,
        }
    }

    pub fn result_schema(&self) -> &ResultSchema {
        match self {
            RunResult::Gate(r) => &r.result_schema,
            RunResult::Anneal(r) => &r.result_schema,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RunResult::Gate(r) => r.to_json(),
            RunResult::Anneal(r) => r.to_json(),
        }
    }
}

/// Validates `bundle` and runs it on the engine its context names.
pub fn run_job(bundle: &JobBundle, exec: Execution) -> Result<RunResult, RunError> {
    bundle.validate()?;
    match bundle.context.engine_kind() {
        Some(EngineKind::GateStatevector) => Ok(RunResult::Gate(run_gate_job(bundle, exec)?)),
        Some(EngineKind::AnnealMetropolis) => Ok(RunResult::Anneal(run_anneal_job(bundle, exec)?)),
        None => Err(RunError::Unrealizable {
            engine: bundle.context.exec.engine.clone(),
            rep_kind: bundle.operators.first().map(|o| o.rep_kind()).unwrap_or(RepKind::Measurement),
        }),
    }
}
