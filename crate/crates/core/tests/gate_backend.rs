use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use qmiddle_core::algolib::{build_measurement, build_qaoa_maxcut, build_qft, Graph, QaoaAngles};
use qmiddle_core::descriptor::{
    BitOrder, ContextDescriptor, Descriptor, EncodingKind, JobBundle, OperatorDescriptor, OperatorParams, Provenance,
    QdtSet, QuantumDataType,
};
use qmiddle_core::exec::Execution;
use qmiddle_core::gate::{lower, qaoa_expected_cut, run_gate_job, Gate, StateVector};
use qmiddle_core::rational::Rational;
use qmiddle_core::run::run_job;

fn phase(n: usize) -> QuantumDataType {
    let scale = Rational::new(1, 1 << n).unwrap();
    QuantumDataType::new("reg_phase", "phase", n, EncodingKind::PhaseRegister, BitOrder::Lsb0, Some(scale)).unwrap()
}

fn spins(n: usize) -> QuantumDataType {
    QuantumDataType::new("ising_vars", "s", n, EncodingKind::IsingSpin, BitOrder::Lsb0, None).unwrap()
}

fn bundle(q: QuantumDataType, ops: Vec<OperatorDescriptor>, samples: u64, seed: u64) -> JobBundle {
    JobBundle {
        qdts: QdtSet::new(vec![q]).unwrap(),
        operators: ops,
        context: ContextDescriptor::new("gate.statevector", samples, seed),
        provenance: Provenance::new("test"),
    }
}

#[test]
fn hadamard_layer_samples_uniformly() {
    let q = spins(4);
    let prep = OperatorDescriptor::in_place("prep", &q.id, OperatorParams::PrepUniform);
    let b = bundle(q.clone(), vec![prep, build_measurement(&q)], 4096, 42);
    let run = run_gate_job(&b, Execution::default()).unwrap();
    assert_eq!(run.counts.len(), 16);
    assert_eq!(run.counts.total(), 4096);
    let p: f64 = 1.0 / 16.0;
    let sigma = (4096.0 * p * (1.0 - p)).sqrt();
    for (bits, c) in run.counts.iter() {
        assert!((c as f64 - 4096.0 * p).abs() < 5.0 * sigma, "{bits}: {c}");
    }
}

#[test]
fn qft_then_inverse_returns_all_zeros() {
    for n in 1..=10 {
        let q = phase(n);
        let mut fwd = build_qft(&q, 0, n % 2 == 1, false).unwrap();
        fwd.result_schema = None;
        let inv = build_qft(&q, 0, n % 2 == 1, true).unwrap();
        let run = run_gate_job(&bundle(q, vec![fwd, inv], 256, 7), Execution::default()).unwrap();
        assert_eq!(run.counts.len(), 1, "n={n}");
        assert_eq!(run.counts.get(&"0".repeat(n)), 256);
    }
}

#[test]
fn qft_of_basis_three_matches_dft_phases() {
    let n = 4;
    let mut op = build_qft(&phase(n), 0, true, false).unwrap();
    op.result_schema = None;
    let b = bundle(phase(n), vec![op], 1, 0);
    let gl = lower(&b.operators, &b.qdts, &b.context).unwrap();
    let mut sv = StateVector::zero(n).unwrap();
    sv.apply_all(&[Gate::X(0), Gate::X(1)]);
    sv.apply_all(&gl.gates);
    for (m, a) in sv.amplitudes().iter().enumerate() {
        assert!((a.norm() - 0.25).abs() < 1e-12);
        let expected = Complex64::from_polar(0.25, 2.0 * PI * 3.0 * m as f64 / 16.0);
        assert!((a - expected).norm() < 1e-12, "m={m}: {a} vs {expected}");
    }
}

#[test]
fn identical_jobs_give_identical_counts() {
    let q = spins(4);
    let ops = build_qaoa_maxcut(&Graph::cycle(4), &q, &QaoaAngles::new(vec![0.4], vec![1.2]).unwrap()).unwrap();
    let text = bundle(q, ops, 2048, 99).serialize();
    let a = run_job(&qmiddle_core::descriptor::parse_bundle(&text).unwrap(), Execution::default()).unwrap();
    let b = run_job(&qmiddle_core::descriptor::parse_bundle(&text).unwrap(), Execution::Sequential).unwrap();
    assert_eq!(a.counts(), b.counts());
    assert_eq!(a.to_json(), b.to_json());
}

fn random_op(kind: u8, n: usize, x: f64, q: &QuantumDataType) -> OperatorDescriptor {
    let params = match kind % 4 {
        0 => OperatorParams::PrepUniform,
        1 => {
            let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).filter(|(a, b)| a != b).collect();
            let weights = edges.iter().enumerate().map(|(k, _)| x * (k as f64 + 1.0)).collect();
            OperatorParams::IsingCostPhase { gamma: x, edges, weights }
        }
        2 => OperatorParams::MixerRx { beta: x },
        _ => return build_qft(q, 0, x > 0.0, x < 0.0).map(|mut o| {
            o.result_schema = None;
            o
        }).unwrap(),
    };
    OperatorDescriptor::in_place("op", &q.id, params)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lowered_sequences_preserve_norm(
        n in 1usize..7,
        seq in proptest::collection::vec((any::<u8>(), -3.0f64..3.0), 1..6),
    ) {
        let q = QuantumDataType::new("r", "r", n, EncodingKind::PhaseRegister, BitOrder::Lsb0, Rational::new(1, 1 << n)).unwrap();
        let ops: Vec<_> = seq.iter().map(|&(k, x)| random_op(k, n, x, &q)).collect();
        let b = bundle(q, ops, 1, 0);
        let gl = lower(&b.operators, &b.qdts, &b.context).unwrap();
        let mut sv = StateVector::zero(n).unwrap();
        for g in &gl.gates {
            sv.apply(g);
            prop_assert!((sv.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn qaoa_expectation_matches_brute_force(gamma in -PI..PI, beta in -PI..PI) {
        let g = Graph::cycle(4);
        let q = spins(4);
        let ops = build_qaoa_maxcut(&g, &q, &QaoaAngles::new(vec![gamma], vec![beta]).unwrap()).unwrap();
        let b = bundle(q, ops, 1, 0);
        let gl = lower(&b.operators, &b.qdts, &b.context).unwrap();
        let sv = StateVector::run(&gl, Execution::Sequential).unwrap();
        let brute: f64 = sv
            .probabilities()
            .iter()
            .enumerate()
            .map(|(z, p)| p * g.edges().iter().filter(|e| (z >> e.i & 1) != (z >> e.j & 1)).map(|e| e.w).sum::<f64>())
            .sum();
        prop_assert!((qaoa_expected_cut(&g, gamma, beta).unwrap() - brute).abs() < 1e-10);
    }
}
