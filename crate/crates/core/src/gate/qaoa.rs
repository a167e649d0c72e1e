use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{Gate, GateError, StateVector};
use crate::algolib::{Graph, QaoaAngles};
use crate::exec::Execution;
use crate::json::f64_value;

/// Largest graph accepted by the angle sweep.
pub const MAX_SWEEP_QUBITS: usize = 16;

/// Cut value of every basis state, indexed by bitstring (bit `i` = vertex `i`).
pub(crate) fn cut_table(g: &Graph) -> Vec<f64> {
    (0..1usize << g.n())
        .map(|z| g.edges().iter().filter(|e| (z >> e.i ^ z >> e.j) & 1 == 1).map(|e| e.w).sum())
        .collect()
}

/// Final QAOA state, applying each cost layer as one diagonal phase.
///
/// `exp(−iγ Σ w_ij Z_i Z_j)` acts on `|z⟩` as `exp(−iγ (W − 2 cut(z)))`,
/// the same operator the lowered `RZZ(2γw)` network realizes.
fn qaoa_state(g: &Graph, cuts: &[f64], angles: &QaoaAngles, exec: Execution) -> Result<StateVector, GateError> {
    let n = g.n();
    if n > MAX_SWEEP_QUBITS {
        return Err(GateError::Capacity { n, max: MAX_SWEEP_QUBITS });
    }
    let total = g.total_weight();
    let amp = Complex64::new((1.0 / cuts.len() as f64).sqrt(), 0.0);
    let mut sv = StateVector::from_amplitudes(vec![amp; cuts.len()]).with_execution(exec);
    for (gamma, beta) in angles.layers() {
        sv.apply_diagonal(|z| Complex64::from_polar(1.0, -gamma * (total - 2.0 * cuts[z])));
        for q in 0..n {
            sv.apply(&Gate::Rx(q, 2.0 * beta));
        }
    }
    sv.check_norm()?;
    Ok(sv)
}

/// Exact `Σ_z |⟨z|ψ⟩|² cut(z)` for the QAOA state with `angles`.
pub fn qaoa_expectation(g: &Graph, angles: &QaoaAngles) -> Result<f64, GateError> {
    let cuts = cut_table(g);
    let sv = qaoa_state(g, &cuts, angles, Execution::Sequential)?;
    Ok(expectation(&sv, &cuts))
}

/// Exact p = 1 expected cut at `(γ, β)`.
pub fn qaoa_expected_cut(g: &Graph, gamma: f64, beta: f64) -> Result<f64, GateError> {
    let angles = QaoaAngles::new(vec![gamma], vec![beta]).map_err(|e| GateError::InvalidGate(e.to_string()))?;
    qaoa_expectation(g, &angles)
}

fn expectation(sv: &StateVector, cuts: &[f64]) -> f64 {
    sv.amplitudes().iter().zip(cuts).map(|(a, c)| a.norm_sqr() * c).sum()
}

/// Grid resolution: `γ_i = π i / gamma_steps`, `β_j = (π/2) j / beta_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepGrid {
    pub gamma_steps: usize,
    pub beta_steps: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self { gamma_steps: 64, beta_steps: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePoint {
    pub gamma: f64,
    pub beta: f64,
    pub expected_cut: f64,
}

impl AnglePoint {
    pub fn to_json(&self) -> Value {
        json!({
            "gamma": f64_value(self.gamma),
            "beta": f64_value(self.beta),
            "expected_cut": f64_value(self.expected_cut),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SweepGrid,
    /// Row-major by γ index, then β index.
    pub points: Vec<AnglePoint>,
    /// First grid point attaining the maximum.
    pub best: AnglePoint,
    /// `best` after local coordinate refinement off the grid.
    pub refined: AnglePoint,
}

impl SweepResult {
    pub fn to_json(&self) -> Value {
        json!({
            "gamma_steps": self.grid.gamma_steps,
            "beta_steps": self.grid.beta_steps,
            "points": self.points.iter().map(AnglePoint::to_json).collect::<Vec<_>>(),
            "best": self.best.to_json(),
            "refined": self.refined.to_json(),
        })
    }
}

/// Exact p = 1 expected cut over the grid, with deterministic assembly by
/// grid index, followed by a pattern search around the best point.
pub fn sweep_angles(g: &Graph, grid: SweepGrid, exec: Execution) -> Result<SweepResult, GateError> {
    if g.n() > MAX_SWEEP_QUBITS {
        return Err(GateError::Capacity { n: g.n(), max: MAX_SWEEP_QUBITS });
    }
    if grid.gamma_steps == 0 || grid.beta_steps == 0 {
        return Err(GateError::InvalidGate("sweep grid needs at least one step per axis".into()));
    }
    let cuts = cut_table(g);
    let eval = |gamma: f64, beta: f64| -> f64 {
        let angles = QaoaAngles::new(vec![gamma], vec![beta]).expect("finite angles");
        let sv = qaoa_state(g, &cuts, &angles, Execution::Sequential).expect("size checked above");
        expectation(&sv, &cuts)
    };
    let bs = grid.beta_steps;
    let points = exec.map_indexed(grid.gamma_steps * bs, |k| {
        let gamma = PI * (k / bs) as f64 / grid.gamma_steps as f64;
        let beta = FRAC_PI_2 * (k % bs) as f64 / bs as f64;
        AnglePoint { gamma, beta, expected_cut: eval(gamma, beta) }
    });
    let best = points.iter().fold(points[0], |acc, p| if p.expected_cut > acc.expected_cut { *p } else { acc });

    let mut here = best;
    let mut steps = [PI / grid.gamma_steps as f64, FRAC_PI_2 / bs as f64];
    while steps[0] > 1e-12 || steps[1] > 1e-12 {
        let mut moved = false;
        for axis in 0..2 {
            for sign in [1.0, -1.0] {
                let (gamma, beta) = match axis {
                    0 => (here.gamma + sign * steps[0], here.beta),
                    _ => (here.gamma, here.beta + sign * steps[1]),
                };
                let value = eval(gamma, beta);
                if value > here.expected_cut {
                    here = AnglePoint { gamma, beta, expected_cut: value };
                    moved = true;
                }
            }
        }
        if !moved {
            steps = [steps[0] / 2.0, steps[1] / 2.0];
        }
    }
    Ok(SweepResult { grid, points, best, refined: here })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::lower_logical;

    /// Brute force: build the circuit gate by gate and sum over all outcomes.
    fn circuit_expectation(g: &Graph, gamma: f64, beta: f64) -> f64 {
        let mut gates: Vec<Gate> = (0..g.n()).map(Gate::H).collect();
        gates.extend(g.edges().iter().map(|e| Gate::Rzz(e.i, e.j, 2.0 * gamma * e.w)));
        gates.extend((0..g.n()).map(|q| Gate::Rx(q, 2.0 * beta)));
        let mut sv = StateVector::zero(g.n()).unwrap();
        sv.apply_all(&gates);
        let mut total = 0.0;
        for (z, p) in sv.probabilities().into_iter().enumerate() {
            let cut: f64 = g.edges().iter().filter(|e| (z >> e.i & 1) != (z >> e.j & 1)).map(|e| e.w).sum();
            total += p * cut;
        }
        total
    }

    #[test]
    fn diagonal_route_matches_gate_circuit() {
        let g = Graph::new(5, [(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (3, 4, 1.0), (4, 0, 1.5), (1, 3, 0.7)]).unwrap();
        for (gamma, beta) in [(0.0, 0.0), (0.3, 0.9), (2.1, 1.3), (-0.7, 0.2)] {
            let fast = qaoa_expected_cut(&g, gamma, beta).unwrap();
            assert!((fast - circuit_expectation(&g, gamma, beta)).abs() < 1e-12);
        }
    }

    #[test]
    fn lowered_stack_uses_same_conventions() {
        let g = Graph::cycle(4);
        let qdt = crate::descriptor::QuantumDataType::new(
            "ising_vars",
            "s",
            4,
            crate::descriptor::EncodingKind::IsingSpin,
            crate::descriptor::BitOrder::Lsb0,
            None,
        )
        .unwrap();
        let angles = QaoaAngles::new(vec![0.4, 1.0], vec![0.25, 0.6]).unwrap();
        let ops = crate::algolib::build_qaoa_maxcut(&g, &qdt, &angles).unwrap();
        let mut sv = StateVector::zero(4).unwrap();
        sv.apply_all(&lower_logical(&ops, 4).unwrap());
        let cuts = cut_table(&g);
        assert!((expectation(&sv, &cuts) - qaoa_expectation(&g, &angles).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn zero_angles_give_half_the_edges() {
        let g = Graph::cycle(4);
        assert!((qaoa_expected_cut(&g, 0.0, 0.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn four_cycle_optimum_is_three() {
        let r = sweep_angles(&Graph::cycle(4), SweepGrid::default(), Execution::default()).unwrap();
        assert_eq!(r.points.len(), 64 * 64);
        assert!((r.best.expected_cut - 3.0).abs() < 1e-2, "{:?}", r.best);
        assert!(r.refined.expected_cut >= r.best.expected_cut);
        assert!((r.refined.expected_cut - 3.0).abs() < 1e-9, "{:?}", r.refined);
    }

    #[test]
    fn single_edge_is_solved_exactly() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let r = sweep_angles(&g, SweepGrid::default(), Execution::Sequential).unwrap();
        assert!((r.best.expected_cut - 1.0).abs() < 1e-9);
        let brute = circuit_expectation(&g, r.best.gamma, r.best.beta);
        assert!((brute - r.best.expected_cut).abs() < 1e-12);
    }

    #[test]
    fn sweep_modes_agree() {
        let g = Graph::cycle(5);
        let grid = SweepGrid { gamma_steps: 12, beta_steps: 9 };
        let a = sweep_angles(&g, grid, Execution::Sequential).unwrap();
        let b = sweep_angles(&g, grid, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_capacity() {
        let g = Graph::cycle(MAX_SWEEP_QUBITS + 1);
        let err = sweep_angles(&g, SweepGrid { gamma_steps: 1, beta_steps: 1 }, Execution::Sequential).unwrap_err();
        assert!(matches!(err, GateError::Capacity { .. }));
    }
}
