//! Metropolis simulated-annealing sampler for Ising problems.
//!
//! Energy: `E(s) = Σ_i h_i s_i + Σ_{i<j} J_ij s_i s_j + offset`, `s_i ∈ {−1, +1}`.
//!
//! Read `r` draws from `ChaCha8Rng::seed_from_u64(read_seed(seed, r))`:
//!
//! ```text
//! read_seed(seed, r) = splitmix64(seed + (r + 1) · 0x9E3779B97F4A7C15)   (wrapping)
//! splitmix64(z):  z = (z ^ (z >> 30)) · 0xBF58476D1CE4E5B9
//!                 z = (z ^ (z >> 27)) · 0x94D049BB133111EB
//!                 z ^ (z >> 31)
//! ```
//!
//! Each read draws the initial spins with `gen::<bool>()` (true ⇒ +1), then
//! runs `num_sweeps` sweeps. Each sweep visits every site once, one at a
//! time, in an order drawn with `SliceRandom::shuffle` (`rand` 0.8) applied to
//! the previous sweep's order, starting from `0..n`. Sweep `k` uses
//! `β_k = β_min · (β_max/β_min)^(k/(num_sweeps−1))` (just `β_min` for a single
//! sweep). Flipping site `i` changes the energy by
//! `ΔE = −2 s_i (h_i + Σ_j J_ij s_j)`. A flip with `ΔE ≤ 0` is always accepted; otherwise one
//! `gen::<f64>()` draw `u` accepts it when `u < exp(−β ΔE)`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::counts::Counts;
use crate::descriptor::{
    AnnealSettings, ContextDescriptor, EngineKind, IsingParams, JobBundle, MeasurementSemantics, OperatorParams,
    RepKind, ResultSchema,
};
use crate::exec::Execution;
use crate::json::f64_value;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid Ising model: {0}")]
pub struct ModelError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("spin vector has length {found}, model has {expected} spins (entries must be ±1)")]
pub struct DimensionError {
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("beta_range ({0}, {1}) must satisfy 0 < beta_min < beta_max")]
    BetaRange(f64, f64),
    #[error("{0} must be positive")]
    Zero(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("result schema mismatch: {0}")]
pub struct SchemaMismatchError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnealError {
    #[error("engine {engine:?} cannot realize {rep_kind}")]
    Unrealizable { engine: String, rep_kind: RepKind },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Schema(#[from] SchemaMismatchError),
}

/// Validated Ising model with symmetric couplings and zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    h: Vec<f64>,
    j: Vec<Vec<f64>>,
    offset: f64,
    neighbours: Vec<Vec<(usize, f64)>>,
}

impl IsingModel {
    pub fn new(h: Vec<f64>, j: Vec<Vec<f64>>, offset: f64) -> Result<Self, ModelError> {
        let n = h.len();
        if j.len() != n || j.iter().any(|row| row.len() != n) {
            return Err(ModelError(format!("J must be {n}x{n}")));
        }
        if !offset.is_finite() || h.iter().chain(j.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(ModelError("coefficients must be finite".into()));
        }
        for a in 0..n {
            if j[a][a] != 0.0 {
                return Err(ModelError(format!("J[{a}][{a}] must be zero")));
            }
            for b in (a + 1)..n {
                if j[a][b] != j[b][a] {
                    return Err(ModelError(format!("J[{a}][{b}] != J[{b}][{a}]")));
                }
            }
        }
        let neighbours = j
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(b, w)| (b, *w)).collect())
            .collect();
        Ok(Self { h, j, offset, neighbours })
    }

    pub fn from_params(p: &IsingParams) -> Result<Self, ModelError> {
        Self::new(p.h.clone(), p.j.clone(), p.offset)
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn j(&self) -> &[Vec<f64>] {
        &self.j
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn energy_unchecked(&self, s: &[i8]) -> f64 {
        let mut e = self.offset;
        for a in 0..self.n() {
            let sa = f64::from(s[a]);
            e += self.h[a] * sa;
            for b in (a + 1)..self.n() {
                e += self.j[a][b] * sa * f64::from(s[b]);
            }
        }
        e
    }

    fn local_field(&self, s: &[i8], a: usize) -> f64 {
        self.h[a] + self.neighbours[a].iter().map(|&(b, w)| w * f64::from(s[b])).sum::<f64>()
    }
}

/// `E(s)`, summing `h` terms then couplings in `(i, j)` order.
pub fn energy(m: &IsingModel, s: &[i8]) -> Result<f64, DimensionError> {
    if s.len() != m.n() || s.iter().any(|&x| x != 1 && x != -1) {
        return Err(DimensionError { expected: m.n(), found: s.len() });
    }
    Ok(m.energy_unchecked(s))
}

/// Spin `s` as bit `(1 − s)/2`.
pub fn spin_to_bit(s: i8) -> u8 {
    u8::from(s < 0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub spins: Vec<i8>,
    pub energy: f64,
    pub occurrences: u64,
}

/// Distinct samples ordered by energy, then by spin vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub records: Vec<SampleRecord>,
    pub num_reads: u64,
    pub num_sweeps: u64,
    pub beta_range: (f64, f64),
    pub seed: u64,
}

impl SampleSet {
    pub fn lowest(&self) -> Option<&SampleRecord> {
        self.records.first()
    }

    pub fn total_occurrences(&self) -> u64 {
        self.records.iter().map(|r| r.occurrences).sum()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of read `r`; see the module docs.
pub fn read_seed(seed: u64, r: u64) -> u64 {
    splitmix64(seed.wrapping_add(r.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn schedule(sweeps: u64, (lo, hi): (f64, f64)) -> Vec<f64> {
    if sweeps == 1 {
        return vec![lo];
    }
    let ratio = hi / lo;
    (0..sweeps).map(|k| lo * ratio.powf(k as f64 / (sweeps - 1) as f64)).collect()
}

fn anneal_once(m: &IsingModel, betas: &[f64], seed: u64) -> Vec<i8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = m.n();
    let mut s: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let mut field = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for &beta in betas {
        for (a, f) in field.iter_mut().enumerate() {
            *f = m.local_field(&s, a);
        }
        order.shuffle(&mut rng);
        for &a in &order {
            let de = -2.0 * f64::from(s[a]) * field[a];
            if de <= 0.0 || rng.gen::<f64>() < (-beta * de).exp() {
                s[a] = -s[a];
                let delta = 2.0 * f64::from(s[a]);
                for &(b, w) in &m.neighbours[a] {
                    field[b] += w * delta;
                }
            }
        }
    }
    s
}

/// Runs `settings.num_reads` independent anneals. Reads are evaluated in
/// parallel under [`Execution::Parallel`] and merged by read index, so the
/// result does not depend on the execution mode.
pub fn sample(m: &IsingModel, settings: &AnnealSettings, seed: u64, exec: Execution) -> Result<SampleSet, ConfigError> {
    let (lo, hi) = settings.effective_beta_range();
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(ConfigError::BetaRange(lo, hi));
    }
    let sweeps = settings.effective_sweeps();
    if sweeps == 0 {
        return Err(ConfigError::Zero("num_sweeps"));
    }
    if settings.num_reads == 0 {
        return Err(ConfigError::Zero("num_reads"));
    }
    let betas = schedule(sweeps, (lo, hi));
    let reads = exec.map_indexed(settings.num_reads as usize, |r| anneal_once(m, &betas, read_seed(seed, r as u64)));
    let mut tally: BTreeMap<Vec<i8>, u64> = BTreeMap::new();
    for s in reads {
        *tally.entry(s).or_insert(0) += 1;
    }
    let mut records: Vec<SampleRecord> = tally
        .into_iter()
        .map(|(spins, occurrences)| SampleRecord { energy: m.energy_unchecked(&spins), spins, occurrences })
        .collect();
    records.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.spins.cmp(&b.spins)));
    Ok(SampleSet { records, num_reads: settings.num_reads, num_sweeps: sweeps, beta_range: (lo, hi), seed })
}

/// Anneal settings of a context; without an anneal block, one read per
/// requested sample with default sweeps and temperatures.
pub fn settings_for(ctx: &ContextDescriptor) -> AnnealSettings {
    ctx.anneal.clone().unwrap_or_else(|| AnnealSettings::with_reads(ctx.exec.samples))
}

fn render(spins: &[i8], carriers: &[usize]) -> String {
    carriers.iter().map(|&c| if spin_to_bit(spins[c]) == 1 { '1' } else { '0' }).collect()
}

fn carriers_for(rs: &ResultSchema, n: usize) -> Result<Vec<usize>, SchemaMismatchError> {
    if rs.datatype != MeasurementSemantics::AsBool {
        return Err(SchemaMismatchError(format!("datatype {} cannot carry spins; expected AS_BOOL", rs.datatype)));
    }
    let carriers = rs.carrier_indices().map_err(|e| SchemaMismatchError(e.to_string()))?;
    if carriers.len() != n || carriers.iter().any(|&c| c >= n) {
        return Err(SchemaMismatchError(format!(
            "clbit_order references {} carriers for {n} spins",
            carriers.len()
        )));
    }
    Ok(carriers)
}

/// Spins to bitstrings (`+1 ⇒ '0'`, `−1 ⇒ '1'`) in `clbit_order`, with
/// occurrences accumulated.
pub fn decode_samples(ss: &SampleSet, rs: &ResultSchema) -> Result<Counts, SchemaMismatchError> {
    let Some(first) = ss.records.first() else {
        return Ok(Counts::new());
    };
    let carriers = carriers_for(rs, first.spins.len())?;
    Ok(ss.records.iter().map(|r| (render(&r.spins, &carriers), r.occurrences)).collect())
}

/// Outcome of an anneal-engine job.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealRun {
    pub engine: String,
    pub sample_set: SampleSet,
    pub counts: Counts,
    pub result_schema: ResultSchema,
}

impl AnnealRun {
    pub fn to_json(&self) -> Value {
        let ss = &self.sample_set;
        let carriers = self.result_schema.carrier_indices().unwrap_or_default();
        json!({
            "engine": self.engine,
            "num_reads": ss.num_reads,
            "num_sweeps": ss.num_sweeps,
            "beta_range": [f64_value(ss.beta_range.0), f64_value(ss.beta_range.1)],
            "seed": ss.seed,
            "samples": ss.records.iter().map(|r| json!({
                "bits": render(&r.spins, &carriers),
                "spins": r.spins,
                "energy": f64_value(r.energy),
                "occurrences": r.occurrences,
            })).collect::<Vec<_>>(),
            "counts": self.counts.to_json(),
            "result_schema": self.result_schema.to_json(),
        })
    }
}

/// Samples the single ISING_PROBLEM operator of an anneal-engine bundle.
pub fn run_anneal_job(bundle: &JobBundle, exec: Execution) -> Result<AnnealRun, AnnealError> {
    let ctx = &bundle.context;
    let engine = ctx.exec.engine.clone();
    let unrealizable = |rep_kind| AnnealError::Unrealizable { engine: engine.clone(), rep_kind };
    if ctx.engine_kind() != Some(EngineKind::AnnealMetropolis) {
        return Err(unrealizable(bundle.operators.first().map(|o| o.rep_kind()).unwrap_or(RepKind::IsingProblem)));
    }
    if let Some(op) = bundle.operators.iter().find(|o| o.rep_kind() != RepKind::IsingProblem) {
        return Err(unrealizable(op.rep_kind()));
    }
    let op = match bundle.operators.as_slice() {
        [op] => op,
        _ => return Err(ModelError("an anneal job carries exactly one ISING_PROBLEM operator".into()).into()),
    };
    let OperatorParams::IsingProblem(params) = &op.params else { unreachable!("rep_kind checked above") };
    let model = IsingModel::from_params(params)?;
    let result_schema = op.result_schema.clone().ok_or_else(|| SchemaMismatchError("missing result_schema".into()))?;
    carriers_for(&result_schema, model.n())?;
    let sample_set = sample(&model, &settings_for(ctx), ctx.exec.seed, exec)?;
    let counts = decode_samples(&sample_set, &result_schema)?;
    Ok(AnnealRun { engine, sample_set, counts, result_schema })
}
