use proptest::prelude::*;
use serde_json::Value;

use qmiddle_core::algolib::{
    build_ising_maxcut, build_qaoa_maxcut, build_qft, package_job, BuildError, Graph, PackageError, QaoaAngles,
};
use qmiddle_core::anneal::{energy, IsingModel};
use qmiddle_core::descriptor::{
    parse_operator, BitOrder, ContextDescriptor, Descriptor, EncodingKind, OperatorParams, Provenance, QdtSet,
    QuantumDataType, RepKind,
};
use qmiddle_core::gate::lower_logical;
use qmiddle_core::rational::Rational;
use qmiddle_core::validation::check_sequence;

fn spins(n: usize) -> QuantumDataType {
    QuantumDataType::new("ising_vars", "s", n, EncodingKind::IsingSpin, BitOrder::Lsb0, None).unwrap()
}

fn phase(n: usize) -> QuantumDataType {
    let scale = Rational::new(1, 1 << n).unwrap();
    QuantumDataType::new("reg_phase", "phase", n, EncodingKind::PhaseRegister, BitOrder::Lsb0, Some(scale)).unwrap()
}

fn ising_params(g: &Graph) -> qmiddle_core::descriptor::IsingParams {
    match build_ising_maxcut(g, &spins(g.n())).unwrap().params {
        OperatorParams::IsingProblem(p) => p,
        other => panic!("unexpected params {other:?}"),
    }
}

fn spin_vec(z: usize, n: usize) -> Vec<i8> {
    (0..n).map(|i| if z >> i & 1 == 1 { -1 } else { 1 }).collect()
}

fn brute_cut(g: &Graph, z: usize) -> f64 {
    g.edges().iter().filter(|e| (z >> e.i & 1) != (z >> e.j & 1)).map(|e| e.w).sum()
}

#[test]
fn qft_descriptor_fields() {
    let op = build_qft(&phase(10), 0, true, false).unwrap();
    let v = op.to_json();
    assert_eq!(v["rep_kind"], "QFT_TEMPLATE");
    assert_eq!(v["domain_qdt"], "reg_phase");
    assert_eq!(v["codomain_qdt"], "reg_phase");
    assert_eq!(v["params"]["approx_degree"], 0);
    assert_eq!(v["params"]["do_swaps"], true);
    assert_eq!(v["params"]["inverse"], false);
    assert_eq!(v["result_schema"]["datatype"], "AS_PHASE");
}

#[test]
fn qft_width_one_is_a_single_basis_change() {
    let op = build_qft(&phase(1), 0, true, false).unwrap();
    assert_eq!(op.cost_hint.unwrap().twoq, 0);
    let gates = lower_logical(&[op], 1).unwrap();
    assert_eq!(gates.len(), 1);
    assert_eq!(gates[0].kind(), "H");
}

#[test]
fn qft_builder_rejects_bad_inputs() {
    assert!(matches!(build_qft(&phase(4), 4, true, false), Err(BuildError::Param(_))));
    assert!(matches!(build_qft(&spins(4), 0, true, false), Err(BuildError::EncodingMismatch { .. })));
}

#[test]
fn qaoa_stack_shape() {
    let g = Graph::cycle(4);
    let p1 = build_qaoa_maxcut(&g, &spins(4), &QaoaAngles::new(vec![0.3], vec![0.2]).unwrap()).unwrap();
    let kinds: Vec<RepKind> = p1.iter().map(|o| o.rep_kind()).collect();
    assert_eq!(kinds, [RepKind::PrepUniform, RepKind::IsingCostPhase, RepKind::MixerRx, RepKind::Measurement]);
    let rs = p1[3].result_schema.as_ref().unwrap();
    assert_eq!(rs.clbit_order, ["ising_vars[0]", "ising_vars[1]", "ising_vars[2]", "ising_vars[3]"]);

    let p2 = build_qaoa_maxcut(&g, &spins(4), &QaoaAngles::new(vec![0.3, 0.4], vec![0.2, 0.1]).unwrap()).unwrap();
    assert_eq!(p2.len(), 6);
    assert_eq!(p2[3].rep_kind(), RepKind::IsingCostPhase);

    let err = build_qaoa_maxcut(&Graph::cycle(5), &spins(4), &QaoaAngles::new(vec![0.3], vec![0.2]).unwrap());
    assert!(matches!(err, Err(BuildError::WidthMismatch { graph: 5, width: 4, .. })));
}

#[test]
fn ising_maxcut_examples() {
    let p = ising_params(&Graph::cycle(4));
    assert_eq!(p.h, vec![0.0; 4]);
    let expected = [[0.0, 1.0, 0.0, 1.0], [1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0], [1.0, 0.0, 1.0, 0.0]];
    assert_eq!(p.j, expected.map(|r| r.to_vec()).to_vec());

    let empty = Graph::new(3, []).unwrap();
    let m = IsingModel::from_params(&ising_params(&empty)).unwrap();
    for z in 0..8 {
        assert_eq!(energy(&m, &spin_vec(z, 3)).unwrap(), 0.0);
        assert_eq!(brute_cut(&empty, z), 0.0);
    }

    let tri = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
    let m = IsingModel::from_params(&ising_params(&tri)).unwrap();
    let ground = (0..8).map(|z| energy(&m, &spin_vec(z, 3)).unwrap()).fold(f64::INFINITY, f64::min);
    let best_cut = (0..8).map(|z| brute_cut(&tri, z)).fold(0.0, f64::max);
    assert_eq!(ground, -1.0);
    assert_eq!(best_cut, 2.0);
}

#[test]
fn package_checks_engine_capability() {
    let g = Graph::cycle(4);
    let q = spins(4);
    let qaoa = build_qaoa_maxcut(&g, &q, &QaoaAngles::new(vec![0.3], vec![0.2]).unwrap()).unwrap();
    let ising = build_ising_maxcut(&g, &q).unwrap();
    let gate = ContextDescriptor::new("gate.statevector", 100, 1);
    let anneal = ContextDescriptor::new("anneal.metropolis", 100, 1);
    let prov = || Provenance::new("test");

    assert!(package_job(vec![q.clone()], qaoa.clone(), gate.clone(), prov()).is_ok());
    assert!(package_job(vec![q.clone()], vec![ising.clone()], anneal.clone(), prov()).is_ok());
    let err = package_job(vec![q.clone()], qaoa.clone(), anneal, prov()).unwrap_err();
    assert!(matches!(err, PackageError::Unrealizable { index: 0, rep_kind: RepKind::PrepUniform, .. }));
    let err = package_job(vec![q.clone()], vec![ising], gate.clone(), prov()).unwrap_err();
    assert!(matches!(err, PackageError::Unrealizable { rep_kind: RepKind::IsingProblem, .. }));

    let mut reordered = qaoa;
    reordered.swap(0, 3);
    assert!(matches!(package_job(vec![q], reordered, gate, prov()), Err(PackageError::Sequence(_))));
}

fn collect_strings(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.push(s.to_lowercase()),
        Value::Array(a) => a.iter().for_each(|x| collect_strings(x, out)),
        Value::Object(m) => m.iter().for_each(|(k, x)| {
            out.push(k.to_lowercase());
            collect_strings(x, out);
        }),
        _ => {}
    }
}

#[test]
fn builders_emit_no_engine_gate_or_device_fields() {
    let g = Graph::cycle(4);
    let mut ops = build_qaoa_maxcut(&g, &spins(4), &QaoaAngles::new(vec![0.3], vec![0.2]).unwrap()).unwrap();
    ops.push(build_ising_maxcut(&g, &spins(4)).unwrap());
    ops.push(build_qft(&phase(6), 1, true, true).unwrap());
    let forbidden = [
        "engine", "gate", "coupling", "basis_gates", "device", "backend", "statevector", "anneal", "cx", "rzz", "rx",
        "sx", "swap", "qubit",
    ];
    for op in &ops {
        let mut words = Vec::new();
        collect_strings(&op.to_json(), &mut words);
        for w in &words {
            assert!(!forbidden.contains(&w.as_str()), "{} emits {w:?}", op.name);
        }
    }
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        let m = pairs.len();
        (Just(n), Just(pairs), proptest::collection::vec(prop_oneof![Just(0.0), 0.1f64..5.0], m)).prop_map(
            |(n, pairs, ws)| {
                Graph::new(n, pairs.into_iter().zip(ws).filter(|(_, w)| *w > 0.0).map(|((i, j), w)| (i, j, w))).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn argmin_energy_is_argmax_cut(g in graph_strategy(12)) {
        let n = g.n();
        let m = IsingModel::from_params(&ising_params(&g)).unwrap();
        let w = g.total_weight();
        let mut min_e = f64::INFINITY;
        let mut argmin = Vec::new();
        let mut max_cut = f64::NEG_INFINITY;
        let mut argmax = Vec::new();
        for z in 0..1usize << n {
            let e = energy(&m, &spin_vec(z, n)).unwrap();
            let c = brute_cut(&g, z);
            prop_assert!((c - 0.5 * (w - e)).abs() < 1e-9);
            if e < min_e - 1e-9 { min_e = e; argmin.clear(); }
            if (e - min_e).abs() <= 1e-9 { argmin.push(z); }
            if c > max_cut + 1e-9 { max_cut = c; argmax.clear(); }
            if (c - max_cut).abs() <= 1e-9 { argmax.push(z); }
        }
        prop_assert_eq!(argmin, argmax);
    }

    #[test]
    fn builder_outputs_round_trip_and_compose(g in graph_strategy(8), p in 1usize..4, seed in any::<u64>()) {
        let q = spins(g.n());
        let gammas: Vec<f64> = (0..p).map(|k| ((seed >> k) % 97) as f64 / 31.0).collect();
        let betas: Vec<f64> = (0..p).map(|k| ((seed >> (2 * k)) % 89) as f64 / 57.0).collect();
        let mut ops = build_qaoa_maxcut(&g, &q, &QaoaAngles::new(gammas, betas).unwrap()).unwrap();
        let set = QdtSet::new(vec![q.clone()]).unwrap();
        prop_assert!(check_sequence(&ops, &set).ok);
        ops.push(build_ising_maxcut(&g, &q).unwrap());
        for op in &ops {
            let back = parse_operator(&op.serialize(), &set).unwrap();
            prop_assert_eq!(&back, op);
        }
        let ph = phase(g.n());
        let qft = build_qft(&ph, (seed as usize) % g.n(), seed & 1 == 1, seed & 2 == 2).unwrap();
        let set = QdtSet::new(vec![ph]).unwrap();
        prop_assert_eq!(parse_operator(&qft.serialize(), &set).unwrap(), qft.clone());
        prop_assert!(check_sequence(&[qft], &set).ok);
    }
}
