//! Gate-model backend: lowering, coupling-map routing, and a dense
//! statevector simulator.
//!
//! Gate conventions (qubit `i` is bit `i` of the basis-state index):
//!
//! | gate      | matrix                                   |
//! |-----------|------------------------------------------|
//! | `RX(θ)`   | `exp(−iθX/2)`                            |
//! | `RZ(θ)`   | `exp(−iθZ/2)`                            |
//! | `RZZ(θ)`  | `exp(−iθ Z⊗Z/2)`                         |
//! | `CP(θ)`   | `diag(1, 1, 1, e^{iθ})`                  |
//! | `SX`      | `√X = ½[[1+i, 1−i], [1−i, 1+i]]`         |

mod lower;
mod qaoa;
mod route;
mod run;
mod statevector;

use std::fmt;

use thiserror::Error;

use crate::descriptor::RepKind;
use crate::validation::SequenceReport;

pub use lower::{lower, lower_logical, qft_gates};
pub use qaoa::{qaoa_expectation, qaoa_expected_cut, sweep_angles, AnglePoint, SweepGrid, SweepResult, MAX_SWEEP_QUBITS};
pub use route::{route, Routed};
pub use run::{run_gate_job, GateRun};
pub use statevector::{StateVector, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Sx(usize),
    Rx(usize, f64),
    Rz(usize, f64),
    Cp(usize, usize, f64),
    Rzz(usize, usize, f64),
    Cx(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Sx(_) => "SX",
            Gate::Rx(..) => "RX",
            Gate::Rz(..) => "RZ",
            Gate::Cp(..) => "CP",
            Gate::Rzz(..) => "RZZ",
            Gate::Cx(..) => "CX",
            Gate::Swap(..) => "SWAP",
        }
    }

    /// Operands: one entry for single-qubit gates, `[control, target]` or
    /// the unordered pair for two-qubit gates.
    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Sx(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => ([q, q], 1),
            Gate::Cp(a, b, _) | Gate::Rzz(a, b, _) | Gate::Cx(a, b) | Gate::Swap(a, b) => ([a, b], 2),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1 == 2
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Rz(_, t) | Gate::Cp(_, _, t) | Gate::Rzz(_, _, t) => Some(t),
            _ => None,
        }
    }

    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Sx(q) => Gate::Sx(f(q)),
            Gate::Rx(q, t) => Gate::Rx(f(q), t),
            Gate::Rz(q, t) => Gate::Rz(f(q), t),
            Gate::Cp(a, b, t) => Gate::Cp(f(a), f(b), t),
            Gate::Rzz(a, b, t) => Gate::Rzz(f(a), f(b), t),
            Gate::Cx(a, b) => Gate::Cx(f(a), f(b)),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
        }
    }

    /// The adjoint gate. `SX` has no adjoint in this gate set and is
    /// expressed as `RX(−π/2)` up to global phase, so callers that need
    /// exact adjoints avoid it.
    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::Rx(q, t) => Gate::Rx(q, -t),
            Gate::Rz(q, t) => Gate::Rz(q, -t),
            Gate::Cp(a, b, t) => Gate::Cp(a, b, -t),
            Gate::Rzz(a, b, t) => Gate::Rzz(a, b, -t),
            Gate::Sx(q) => Gate::Rx(q, -std::f64::consts::FRAC_PI_2),
            g => g,
        }
    }

    /// Lower-case name as used in `basis_gates`.
    pub fn basis_name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Sx(_) => "sx",
            Gate::Rx(..) => "rx",
            Gate::Rz(..) => "rz",
            Gate::Cp(..) => "cp",
            Gate::Rzz(..) => "rzz",
            Gate::Cx(..) => "cx",
            Gate::Swap(..) => "swap",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (q, arity) = self.qubits();
        write!(f, "{}", self.kind())?;
        if let Some(t) = self.angle() {
            write!(f, "({t})")?;
        }
        if arity == 1 {
            write!(f, " q{}", q[0])
        } else {
            write!(f, " q{}, q{}", q[0], q[1])
        }
    }
}

/// A concrete gate sequence on physical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateList {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    /// Physical qubit read for each classical bit, in `clbit_order` order.
    pub measure_order: Vec<usize>,
    pub swaps_inserted: usize,
    /// Logical carrier → physical qubit after routing.
    pub final_layout: Vec<usize>,
    pub warnings: Vec<String>,
}

impl GateList {
    /// Checks operand ranges and distinctness.
    pub fn validate(&self) -> Result<(), GateError> {
        for (k, g) in self.gates.iter().enumerate() {
            let (q, arity) = g.qubits();
            if q[..arity].iter().any(|&x| x >= self.n_qubits) {
                return Err(GateError::InvalidGate(format!("gate {k} ({g}) outside {} qubits", self.n_qubits)));
            }
            if arity == 2 && q[0] == q[1] {
                return Err(GateError::InvalidGate(format!("gate {k} ({g}) repeats an operand")));
            }
        }
        if let Some(&q) = self.measure_order.iter().find(|&&q| q >= self.n_qubits) {
            return Err(GateError::InvalidGate(format!("measured qubit {q} outside {} qubits", self.n_qubits)));
        }
        Ok(())
    }

    /// Occurrences of each gate kind.
    pub fn gate_counts(&self) -> std::collections::BTreeMap<&'static str, u64> {
        let mut out = std::collections::BTreeMap::new();
        for g in &self.gates {
            *out.entry(g.kind()).or_insert(0) += 1;
        }
        out
    }

    /// ASAP layered depth.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let (q, arity) = g.qubits();
            let l = q[..arity].iter().map(|&x| level[x]).max().unwrap_or(0) + 1;
            for &x in &q[..arity] {
                level[x] = l;
            }
            depth = depth.max(l);
        }
        depth
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error("engine {engine:?} cannot realize {rep_kind}")]
    Unrealizable { engine: String, rep_kind: RepKind },
    #[error("no coupling path between physical qubits {0} and {1}")]
    DisconnectedCoupling(usize, usize),
    #[error("{n} qubits exceeds the dense simulation limit of {max}")]
    Capacity { n: usize, max: usize },
    #[error("statevector norm drifted to {0}")]
    Normalization(f64),
    #[error("invalid gate list: {0}")]
    InvalidGate(String),
    #[error("operator sequence rejected: {0}")]
    Sequence(SequenceReport),
}
