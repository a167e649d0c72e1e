//! Schema-driven decoding of counts and Max-Cut objective reporting.

use serde_json::{json, Value};
use thiserror::Error;

use crate::algolib::Graph;
use crate::counts::Counts;
use crate::descriptor::{BitOrder, MeasurementSemantics, QuantumDataType, ResultSchema};
use crate::json::f64_value;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("bitstring {bits:?} has length {found}, clbit_order has {expected} entries")]
    LengthMismatch { bits: String, expected: usize, found: usize },
    #[error("register {0:?} decodes AS_PHASE but has no phase_scale")]
    MissingPhaseScale(String),
    #[error("no outcomes to report")]
    EmptyCounts,
    #[error("schema mismatch: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodedValue {
    /// Exact turns; multiply by 2π for radians.
    Phase(Rational),
    Int(u64),
    /// Indexed by carrier.
    Bools(Vec<bool>),
}

impl DecodedValue {
    pub fn to_json(&self) -> Value {
        match self {
            DecodedValue::Phase(r) => json!({ "phase_turns": r.to_string() }),
            DecodedValue::Int(k) => json!({ "int": k }),
            DecodedValue::Bools(b) => json!({ "bools": b }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodedRecord {
    pub raw: String,
    pub value: DecodedValue,
    pub count: u64,
    /// Cut value, present iff a graph was supplied.
    pub objective: Option<f64>,
}

/// `Σ_edges w_ij · [bit_i ≠ bit_j]`, with `bits` indexed by vertex.
pub fn cut_value(g: &Graph, bits: &[bool]) -> f64 {
    g.edges().iter().filter(|e| bits[e.i] != bits[e.j]).map(|e| e.w).sum()
}

/// Carrier bits of a rendered bitstring: character `p` is carrier `clbit_order[p]`.
fn carrier_bits(raw: &str, carriers: &[usize], width: usize) -> Result<Vec<bool>, DecodeError> {
    if raw.len() != carriers.len() {
        return Err(DecodeError::LengthMismatch { bits: raw.into(), expected: carriers.len(), found: raw.len() });
    }
    let mut bits = vec![false; width];
    for (ch, &c) in raw.bytes().zip(carriers) {
        match ch {
            b'0' => {}
            b'1' => bits[c] = true,
            _ => return Err(DecodeError::Schema(format!("{raw:?} is not a bitstring"))),
        }
    }
    Ok(bits)
}

fn carriers(rs: &ResultSchema, width: usize) -> Result<Vec<usize>, DecodeError> {
    let carriers = rs.carrier_indices().map_err(|e| DecodeError::Schema(e.to_string()))?;
    if let Some(c) = carriers.iter().find(|&&c| c >= width) {
        return Err(DecodeError::Schema(format!("carrier {c} outside width {width}")));
    }
    Ok(carriers)
}

/// Integer whose carrier `c` has weight `2^c` (LSB_0) or `2^(w−1−c)` (MSB_0).
pub fn assemble(bits: &[bool], order: BitOrder) -> u64 {
    let w = bits.len();
    bits.iter().enumerate().filter(|(_, b)| **b).fold(0, |k, (c, _)| match order {
        BitOrder::Lsb0 => k | 1 << c,
        BitOrder::Msb0 => k | 1 << (w - 1 - c),
    })
}

/// Inverse of decoding: renders `k` as a bitstring in `clbit_order`.
pub fn render_int(k: u64, rs: &ResultSchema, width: usize) -> Result<String, DecodeError> {
    let carriers = carriers(rs, width)?;
    Ok(carriers
        .iter()
        .map(|&c| {
            let shift = match rs.bit_significance {
                BitOrder::Lsb0 => c,
                BitOrder::Msb0 => width - 1 - c,
            };
            if k >> shift & 1 == 1 { '1' } else { '0' }
        })
        .collect())
}

/// Decodes every outcome per the schema datatype, in key order.
pub fn decode(
    counts: &Counts,
    rs: &ResultSchema,
    qdt: &QuantumDataType,
    graph: Option<&Graph>,
) -> Result<Vec<DecodedRecord>, DecodeError> {
    if qdt.width > 64 {
        return Err(DecodeError::Schema(format!("width {} exceeds 64-bit decoding", qdt.width)));
    }
    if rs.datatype == MeasurementSemantics::AsPhase && qdt.phase_scale.is_none() {
        return Err(DecodeError::MissingPhaseScale(qdt.id.clone()));
    }
    if let Some(g) = graph {
        if g.n() != qdt.width {
            return Err(DecodeError::Schema(format!("graph has {} vertices, register width {}", g.n(), qdt.width)));
        }
    }
    let carriers = carriers(rs, qdt.width)?;
    counts
        .iter()
        .map(|(raw, count)| {
            let bits = carrier_bits(raw, &carriers, qdt.width)?;
            let value = match rs.datatype {
                MeasurementSemantics::AsBool => DecodedValue::Bools(bits.clone()),
                MeasurementSemantics::AsInt => DecodedValue::Int(assemble(&bits, rs.bit_significance)),
                MeasurementSemantics::AsPhase => {
                    let k = assemble(&bits, rs.bit_significance);
                    let scale = qdt.phase_scale.expect("checked above");
                    DecodedValue::Phase(
                        scale.checked_scale(k).ok_or_else(|| DecodeError::Schema(format!("phase {k}·{scale} overflows")))?,
                    )
                }
            };
            Ok(DecodedRecord { raw: raw.to_string(), value, count, objective: graph.map(|g| cut_value(g, &bits)) })
        })
        .collect()
}

fn objectives(counts: &Counts, g: &Graph, rs: &ResultSchema) -> Result<Vec<(String, f64, u64)>, DecodeError> {
    if counts.total() == 0 {
        return Err(DecodeError::EmptyCounts);
    }
    if rs.datatype != MeasurementSemantics::AsBool {
        return Err(DecodeError::Schema(format!("cut objectives need AS_BOOL, found {}", rs.datatype)));
    }
    let carriers = carriers(rs, g.n())?;
    if carriers.len() != g.n() {
        return Err(DecodeError::Schema(format!("clbit_order has {} entries for {} vertices", carriers.len(), g.n())));
    }
    counts
        .iter()
        .map(|(raw, n)| Ok((raw.to_string(), cut_value(g, &carrier_bits(raw, &carriers, g.n())?), n)))
        .collect()
}

/// `Σ_z count(z)·cut(z) / Σ_z count(z)`.
pub fn expected_objective(counts: &Counts, g: &Graph, rs: &ResultSchema) -> Result<f64, DecodeError> {
    let rows = objectives(counts, g, rs)?;
    let weighted: f64 = rows.iter().map(|(_, cut, n)| cut * *n as f64).sum();
    Ok(weighted / counts.total() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub bits: String,
    pub objective: f64,
    pub count: u64,
}

impl Assignment {
    pub fn to_json(&self) -> Value {
        json!({ "bits": self.bits, "objective": f64_value(self.objective), "count": self.count })
    }
}

/// Top `k` outcomes by objective (descending), then count (descending),
/// then bitstring.
pub fn best_assignments(counts: &Counts, g: &Graph, rs: &ResultSchema, k: usize) -> Result<Vec<Assignment>, DecodeError> {
    let mut rows = objectives(counts, g, rs)?;
    rows.sort_by(|a, b| {
        b.1.total_cmp(&a.1).then_with(|| b.2.cmp(&a.2)).then_with(|| a.0.cmp(&b.0))
    });
    Ok(rows.into_iter().take(k).map(|(bits, objective, count)| Assignment { bits, objective, count }).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub expected_objective: f64,
    pub best: Vec<Assignment>,
    pub n_outcomes: usize,
}

impl Report {
    pub fn new(counts: &Counts, g: &Graph, rs: &ResultSchema, top: usize) -> Result<Self, DecodeError> {
        Ok(Self {
            expected_objective: expected_objective(counts, g, rs)?,
            best: best_assignments(counts, g, rs, top)?,
            n_outcomes: counts.len(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "expected_objective": f64_value(self.expected_objective),
            "best": self.best.iter().map(Assignment::to_json).collect::<Vec<_>>(),
            "n_outcomes": self.n_outcomes,
        })
    }

    /// Plain-text summary for terminals.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "expected objective: {:.6}\noutcomes: {}\n",
            self.expected_objective, self.n_outcomes
        );
        for (rank, a) in self.best.iter().enumerate() {
            out.push_str(&format!("{:>3}. {}  objective {}  count {}\n", rank + 1, a.bits, a.objective, a.count));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::EncodingKind;
    use proptest::prelude::*;

    fn spins(n: usize) -> QuantumDataType {
        QuantumDataType::new("ising_vars", "s", n, EncodingKind::IsingSpin, BitOrder::Lsb0, None).unwrap()
    }

    fn counts(items: &[(&str, u64)]) -> Counts {
        items.iter().map(|&(k, v)| (k, v)).collect()
    }

    #[test]
    fn phase_of_half_turn() {
        let qdt = QuantumDataType::new(
            "reg_phase",
            "phase",
            10,
            EncodingKind::PhaseRegister,
            BitOrder::Lsb0,
            Some(Rational::new(1, 1024).unwrap()),
        )
        .unwrap();
        let rs = ResultSchema::for_register(&qdt);
        let raw = render_int(512, &rs, 10).unwrap();
        assert_eq!(raw, "0000000001");
        let out = decode(&counts(&[(&raw, 7)]), &rs, &qdt, None).unwrap();
        assert_eq!(out[0].value, DecodedValue::Phase(Rational::new(1, 2).unwrap()));
        assert_eq!(out[0].count, 7);
        assert_eq!(out[0].objective, None);
    }

    #[test]
    fn missing_phase_scale() {
        let mut qdt = spins(2);
        qdt.phase_scale = None;
        let mut rs = ResultSchema::for_register(&qdt);
        rs.datatype = MeasurementSemantics::AsPhase;
        assert_eq!(
            decode(&counts(&[("01", 1)]), &rs, &qdt, None).unwrap_err(),
            DecodeError::MissingPhaseScale("ising_vars".into())
        );
    }

    #[test]
    fn bools_and_cut_objective() {
        let qdt = spins(4);
        let rs = ResultSchema::for_register(&qdt);
        let g = Graph::cycle(4);
        let out = decode(&counts(&[("0101", 1), ("1010", 2)]), &rs, &qdt, Some(&g)).unwrap();
        assert_eq!(out[0].value, DecodedValue::Bools(vec![false, true, false, true]));
        assert_eq!(out[1].objective, Some(4.0));
        let err = decode(&counts(&[("010", 1)]), &rs, &qdt, None).unwrap_err();
        assert!(matches!(err, DecodeError::LengthMismatch { expected: 4, found: 3, .. }));
    }

    #[test]
    fn expected_objective_examples() {
        let rs = ResultSchema::for_register(&spins(4));
        let g = Graph::cycle(4);
        assert_eq!(expected_objective(&counts(&[("1010", 500), ("0101", 500)]), &g, &rs).unwrap(), 4.0);
        assert_eq!(expected_objective(&counts(&[("0000", 100)]), &g, &rs).unwrap(), 0.0);
        assert_eq!(expected_objective(&counts(&[("0011", 1)]), &g, &rs).unwrap(), 2.0);
        assert_eq!(expected_objective(&Counts::new(), &g, &rs), Err(DecodeError::EmptyCounts));
    }

    #[test]
    fn best_assignment_ordering() {
        let rs = ResultSchema::for_register(&spins(4));
        let g = Graph::cycle(4);
        let c = counts(&[("0000", 90), ("0101", 40), ("1010", 40), ("0011", 5), ("0110", 5), ("1001", 7)]);
        let best = best_assignments(&c, &g, &rs, 10).unwrap();
        let order: Vec<&str> = best.iter().map(|a| a.bits.as_str()).collect();
        assert_eq!(order, ["0101", "1010", "1001", "0011", "0110", "0000"]);
        assert_eq!(best_assignments(&c, &g, &rs, 2).unwrap().len(), 2);
        assert_eq!(best[0].objective, 4.0);
    }

    #[test]
    fn cut_against_brute_force_pairs() {
        let g = Graph::new(5, [(0, 1, 1.5), (1, 4, 2.0), (2, 3, 0.5), (0, 4, 1.0)]).unwrap();
        for z in 0..32usize {
            let bits: Vec<bool> = (0..5).map(|i| z >> i & 1 == 1).collect();
            let mut brute = 0.0;
            for e in g.edges() {
                if (z >> e.i & 1) + (z >> e.j & 1) == 1 {
                    brute += e.w;
                }
            }
            assert_eq!(cut_value(&g, &bits), brute);
        }
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            prop::collection::vec(prop::option::of(0.1f64..3.0), n * (n - 1) / 2).prop_map(move |ws| {
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        if let Some(w) = ws[k] {
                            edges.push((i, j, w));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn decode_inverts_render(
            (width, order, perm, k) in (1usize..=12, any::<bool>()).prop_flat_map(|(w, msb)| {
                (Just(w), Just(if msb { BitOrder::Msb0 } else { BitOrder::Lsb0 }),
                 Just((0..w).collect::<Vec<_>>()).prop_shuffle(), 0..(1u64 << w))
            })
        ) {
            let qdt = QuantumDataType::new("r", "r", width, EncodingKind::IntRegister, order, None).unwrap();
            let mut rs = ResultSchema::for_register(&qdt);
            rs.clbit_order = perm.iter().map(|&c| qdt.carrier_ref(c)).collect();
            let raw = render_int(k, &rs, width).unwrap();
            let out = decode(&counts(&[(&raw, 1)]), &rs, &qdt, None).unwrap();
            prop_assert_eq!(&out[0].value, &DecodedValue::Int(k));
        }

        #[test]
        fn cut_is_complement_symmetric(g in arb_graph(12), z in any::<u16>()) {
            let bits: Vec<bool> = (0..g.n()).map(|i| z >> i & 1 == 1).collect();
            let flipped: Vec<bool> = bits.iter().map(|b| !b).collect();
            prop_assert_eq!(cut_value(&g, &bits), cut_value(&g, &flipped));
        }

        #[test]
        fn expected_objective_is_scale_invariant(
            weights in prop::collection::vec(1u64..50, 16),
            scale in 1u64..20,
        ) {
            let g = Graph::cycle(4);
            let rs = ResultSchema::for_register(&spins(4));
            let keys: Vec<String> = (0..16).map(|z| (0..4).map(|i| if z >> i & 1 == 1 { '1' } else { '0' }).collect()).collect();
            let base: Counts = keys.iter().zip(&weights).map(|(k, &w)| (k.clone(), w)).collect();
            let scaled: Counts = keys.iter().zip(&weights).map(|(k, &w)| (k.clone(), w * scale)).collect();
            let mut split = Counts::new();
            for (k, &w) in keys.iter().zip(&weights) {
                split.add(k.clone(), w / 2);
                split.add(k.clone(), w - w / 2);
            }
            let a = expected_objective(&base, &g, &rs).unwrap();
            prop_assert!((a - expected_objective(&scaled, &g, &rs).unwrap()).abs() < 1e-12);
            prop_assert!((a - expected_objective(&split, &g, &rs).unwrap()).abs() < 1e-12);
        }
    }
}
