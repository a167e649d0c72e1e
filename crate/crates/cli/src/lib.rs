//! The `qmiddle` command line: validate descriptors, build jobs, run them on
//! a reference backend, sweep QAOA angles, and report objectives.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O, 3 capacity or
//! unrealizable job. Human-readable text goes to standard output; machine
//! output is written only to `--out` files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use qmiddle_core::algolib::{
    build_ising_maxcut, build_qaoa_maxcut, build_qft, package_job, BuildError, Graph, PackageError, QaoaAngles,
};
use qmiddle_core::counts::Counts;
use qmiddle_core::decode::{decode, DecodeError, DecodedValue, Report};
use qmiddle_core::descriptor::{
    parse_bundle, parse_context, parse_operator, parse_operator_detached, parse_qdt, AnnealSettings, BitOrder,
    ContextDescriptor, Descriptor, EncodingKind, Provenance, QdtSet, QuantumDataType, ResultSchema, CTX_SCHEMA,
    JOB_SCHEMA, QDT_SCHEMA, QOD_SCHEMA,
};
use qmiddle_core::exec::Execution;
use qmiddle_core::gate::{sweep_angles, GateError, SweepGrid};
use qmiddle_core::rational::Rational;
use qmiddle_core::run::{run_job, RunError, RunResult};
use qmiddle_core::to_canonical_string;

/// Register id used for Max-Cut spin variables.
pub const ISING_REGISTER: &str = "ising_vars";
/// Register id used for QFT phase registers.
pub const PHASE_REGISTER: &str = "reg_phase";

#[derive(Debug, Parser)]
#[command(name = "qmiddle", version, about = "Typed quantum descriptors with gate and anneal reference backends")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a QDT, operator, context, or job file.
    Validate(ValidateArgs),
    /// Build a job bundle.
    Build(BuildArgs),
    /// Run a job bundle on the engine named by its context.
    Run(RunArgs),
    /// Exact p = 1 QAOA expected cut over a (γ, β) grid.
    SweepAngles(SweepArgs),
    /// Decode results and report objectives.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub path: PathBuf,
    /// QDT files that operator references resolve against.
    #[arg(long = "qdt")]
    pub qdts: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuildKind {
    QaoaMaxcut,
    IsingMaxcut,
    Qft,
}

#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long = "num-reads")]
    pub num_reads: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(value_enum)]
    pub kind: BuildKind,
    /// Graph file `{"n": .., "edges": [[i, j, w], ..]}`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Context file; a default gate or anneal context is used otherwise.
    #[arg(long)]
    pub context: Option<PathBuf>,
    /// QAOA depth.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Cost angle per layer. Without angles, p = 1 uses the swept optimum.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Vec<f64>,
    /// Mixer angle per layer.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Vec<f64>,
    /// QFT register width.
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub approx_degree: usize,
    #[arg(long)]
    pub no_swaps: bool,
    #[arg(long)]
    pub inverse: bool,
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub job: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Disable data-parallel kernels.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub gamma_steps: usize,
    #[arg(long, default_value_t = 64)]
    pub beta_steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub results: PathBuf,
    /// Max-Cut graph; enables cut objectives.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Job the results came from; enables typed decoding without a graph.
    #[arg(long)]
    pub job: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Unrealizable(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Capacity(_) | CliError::Unrealizable(_) => 3,
        }
    }
}

fn invalid(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })
}

fn exec_mode(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn gate_error(e: GateError) -> CliError {
    match e {
        GateError::Capacity { .. } => CliError::Capacity(e.to_string()),
        GateError::Unrealizable { .. } | GateError::DisconnectedCoupling(..) => CliError::Unrealizable(e.to_string()),
        e => CliError::Invalid(e.to_string()),
    }
}

/// Runs one subcommand and returns the text to print.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Build(a) => cmd_build(a),
        Command::Run(a) => cmd_run(a),
        Command::SweepAngles(a) => cmd_sweep_angles(a),
        Command::Report(a) => cmd_report(a),
    }
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<String, CliError> {
    let path = &args.path;
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| invalid(path, format!("malformed JSON: {e}")))?;
    let schema = value.get("$schema").and_then(Value::as_str).unwrap_or_default();
    let mut out = String::new();
    match schema {
        QDT_SCHEMA => {
            let q = parse_qdt(&text).map_err(|e| invalid(path, e))?;
            writeln!(out, "valid quantum data type {:?}: width {}, {}", q.id, q.width, q.encoding_kind).unwrap();
        }
        QOD_SCHEMA => {
            let op = if args.qdts.is_empty() {
                parse_operator_detached(&text)
            } else {
                let mut set = QdtSet::default();
                for p in &args.qdts {
                    set.insert(parse_qdt(&read(p)?).map_err(|e| invalid(p, e))?).map_err(|e| invalid(p, e))?;
                }
                parse_operator(&text, &set)
            }
            .map_err(|e| invalid(path, e))?;
            writeln!(out, "valid operator {:?}: {} on {:?}", op.name, op.rep_kind(), op.domain_qdt).unwrap();
        }
        CTX_SCHEMA => {
            let ctx = parse_context(&text).map_err(|e| invalid(path, e))?;
            writeln!(out, "valid context: engine {:?}", ctx.exec.engine).unwrap();
            for w in ctx.warnings() {
                writeln!(out, "warning: {w}").unwrap();
            }
        }
        JOB_SCHEMA => {
            let job = parse_bundle(&text).map_err(|e| invalid(path, e))?;
            let report = qmiddle_core::validation::check_sequence(&job.operators, &job.qdts);
            writeln!(
                out,
                "valid job: {} operator(s), engine {:?}, cost hint twoq {} depth {}",
                job.operators.len(),
                job.context.exec.engine,
                report.total_cost_hint.twoq,
                report.total_cost_hint.depth
            )
            .unwrap();
            for w in job.context.warnings() {
                writeln!(out, "warning: {w}").unwrap();
            }
        }
        other => return Err(invalid(path, format!("schema error at `$schema`: unrecognized schema {other:?}"))),
    }
    Ok(out)
}

/// Ising-spin register `ising_vars` of width `n`.
pub fn ising_register(n: usize) -> Result<QuantumDataType, CliError> {
    QuantumDataType::new(ISING_REGISTER, "s", n, EncodingKind::IsingSpin, BitOrder::Lsb0, None)
        .map_err(|e| CliError::Invalid(e.to_string()))
}

/// Phase register `reg_phase` of width `w` with resolution `1/2^w`.
pub fn phase_register(w: usize) -> Result<QuantumDataType, CliError> {
    let scale = (w < 64)
        .then(|| Rational::new(1, 1u64 << w))
        .flatten()
        .ok_or_else(|| CliError::Invalid(format!("width {w} is too large for a phase register")))?;
    QuantumDataType::new(PHASE_REGISTER, "phase", w, EncodingKind::PhaseRegister, BitOrder::Lsb0, Some(scale))
        .map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn default_context(kind: BuildKind) -> ContextDescriptor {
    match kind {
        BuildKind::IsingMaxcut => {
            let mut ctx = ContextDescriptor::new("anneal.metropolis", 1000, 42);
            ctx.anneal = Some(AnnealSettings::with_reads(1000));
            ctx
        }
        BuildKind::QaoaMaxcut | BuildKind::Qft => ContextDescriptor::new("gate.statevector", 4096, 42),
    }
}

fn apply_overrides(ctx: &mut ContextDescriptor, o: &Overrides) -> Map<String, Value> {
    let mut record = Map::new();
    if let Some(seed) = o.seed {
        ctx.exec.seed = seed;
        record.insert("seed".into(), seed.into());
    }
    if let Some(samples) = o.samples {
        ctx.exec.samples = samples;
        record.insert("samples".into(), samples.into());
    }
    if let Some(reads) = o.num_reads {
        match &mut ctx.anneal {
            Some(a) => a.num_reads = reads,
            None => ctx.anneal = Some(AnnealSettings::with_reads(reads)),
        }
        record.insert("num_reads".into(), reads.into());
    }
    record
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::from_json_str(&read(path)?).map_err(|e| invalid(path, e))
}

fn build_error(e: BuildError) -> CliError {
    CliError::Invalid(e.to_string())
}

pub fn cmd_build(args: &BuildArgs) -> Result<String, CliError> {
    let mut ctx = match &args.context {
        Some(p) => parse_context(&read(p)?).map_err(|e| invalid(p, e))?,
        None => default_context(args.kind),
    };
    let overrides = apply_overrides(&mut ctx, &args.overrides);
    let graph_file = || {
        args.graph.as_deref().ok_or_else(|| CliError::Invalid(format!("{:?} needs --graph", args.kind)))
    };

    let (qdt, ops, source, note) = match args.kind {
        BuildKind::QaoaMaxcut | BuildKind::IsingMaxcut => {
            let path = graph_file()?;
            let g = load_graph(path)?;
            let qdt = ising_register(g.n())?;
            let source = format!("graph {}", path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default());
            if args.kind == BuildKind::IsingMaxcut {
                let op = build_ising_maxcut(&g, &qdt).map_err(build_error)?;
                (qdt, vec![op], source, String::new())
            } else {
                let (angles, note) = qaoa_angles(args, &g)?;
                let ops = build_qaoa_maxcut(&g, &qdt, &angles).map_err(build_error)?;
                (qdt, ops, source, note)
            }
        }
        BuildKind::Qft => {
            let w = args.width.ok_or_else(|| CliError::Invalid("qft needs --width".into()))?;
            let qdt = phase_register(w)?;
            let op = build_qft(&qdt, args.approx_degree, !args.no_swaps, args.inverse).map_err(build_error)?;
            (qdt, vec![op], format!("qft width {w}"), String::new())
        }
    };

    let mut provenance = Provenance::new(source);
    provenance.overrides = overrides;
    let bundle = package_job(vec![qdt], ops, ctx, provenance).map_err(|e| match e {
        PackageError::Unrealizable { .. } => CliError::Unrealizable(e.to_string()),
        e => CliError::Invalid(e.to_string()),
    })?;
    write(&args.out, &bundle.serialize())?;
    let mut out = format!(
        "wrote {}: {} operator(s) on engine {:?}\n",
        args.out.display(),
        bundle.operators.len(),
        bundle.context.exec.engine
    );
    out.push_str(&note);
    for w in bundle.context.warnings() {
        writeln!(out, "warning: {w}").unwrap();
    }
    Ok(out)
}

fn qaoa_angles(args: &BuildArgs, g: &Graph) -> Result<(QaoaAngles, String), CliError> {
    if args.gamma.is_empty() && args.beta.is_empty() {
        if args.p != 1 {
            return Err(CliError::Invalid(format!("--p {} needs explicit --gamma and --beta values", args.p)));
        }
        let sweep = sweep_angles(g, SweepGrid::default(), Execution::default()).map_err(gate_error)?;
        let best = sweep.refined;
        let angles = QaoaAngles::new(vec![best.gamma], vec![best.beta]).map_err(build_error)?;
        let note = format!(
            "angles from sweep: gamma {:.12} beta {:.12} (expected cut {:.9})\n",
            best.gamma, best.beta, best.expected_cut
        );
        return Ok((angles, note));
    }
    if args.gamma.len() != args.p || args.beta.len() != args.p {
        return Err(CliError::Invalid(format!(
            "--p {} needs {} --gamma and --beta values (got {} and {})",
            args.p,
            args.p,
            args.gamma.len(),
            args.beta.len()
        )));
    }
    Ok((QaoaAngles::new(args.gamma.clone(), args.beta.clone()).map_err(build_error)?, String::new()))
}

fn run_error(e: RunError) -> CliError {
    match e {
        RunError::Unrealizable { .. } => CliError::Unrealizable(e.to_string()),
        RunError::Gate(g) => gate_error(g),
        e => CliError::Invalid(e.to_string()),
    }
}

pub fn cmd_run(args: &RunArgs) -> Result<String, CliError> {
    let bundle = parse_bundle(&read(&args.job)?).map_err(|e| invalid(&args.job, e))?;
    let result = run_job(&bundle, exec_mode(args.sequential)).map_err(run_error)?;
    if let Some(out) = &args.out {
        write(out, &to_canonical_string(&result.to_json()))?;
    }
    let counts = result.counts();
    let mut out = match &result {
        RunResult::Gate(r) => format!(
            "engine {}: {} samples, seed {}, depth {}, swaps inserted {}\n",
            r.engine, r.samples, r.seed, r.depth, r.swaps_inserted
        ),
        RunResult::Anneal(r) => format!(
            "engine {}: {} reads, seed {}, lowest energy {}\n",
            r.engine,
            r.sample_set.num_reads,
            r.sample_set.seed,
            r.sample_set.lowest().map(|s| s.energy).unwrap_or(f64::NAN)
        ),
    };
    let mut top: Vec<(&str, u64)> = counts.iter().collect();
    top.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    for (bits, n) in top.into_iter().take(5) {
        writeln!(out, "  {bits}  {n}").unwrap();
    }
    Ok(out)
}

pub fn cmd_sweep_angles(args: &SweepArgs) -> Result<String, CliError> {
    let g = load_graph(&args.graph)?;
    let grid = SweepGrid { gamma_steps: args.gamma_steps, beta_steps: args.beta_steps };
    let r = sweep_angles(&g, grid, exec_mode(args.sequential)).map_err(gate_error)?;
    if let Some(out) = &args.out {
        write(out, &to_canonical_string(&r.to_json()))?;
    }
    Ok(format!(
        "grid {}x{}: best gamma {:.12} beta {:.12} expected cut {:.9}\nrefined: gamma {:.12} beta {:.12} expected cut {:.12}\n",
        grid.gamma_steps,
        grid.beta_steps,
        r.best.gamma,
        r.best.beta,
        r.best.expected_cut,
        r.refined.gamma,
        r.refined.beta,
        r.refined.expected_cut
    ))
}

fn decode_error(path: &Path, e: DecodeError) -> CliError {
    invalid(path, e)
}

pub fn cmd_report(args: &ReportArgs) -> Result<String, CliError> {
    let path = &args.results;
    let value: Value = serde_json::from_str(&read(path)?).map_err(|e| invalid(path, format!("malformed JSON: {e}")))?;
    let counts = value
        .get("counts")
        .and_then(Counts::from_json)
        .ok_or_else(|| invalid(path, "`counts` must map bitstrings to integers"))?;
    let rs = value
        .get("result_schema")
        .ok_or_else(|| invalid(path, "missing `result_schema`"))
        .and_then(|v| ResultSchema::from_json(v).map_err(|e| invalid(path, e)))?;

    let (json_out, text) = if let Some(gpath) = &args.graph {
        let g = load_graph(gpath)?;
        let report = Report::new(&counts, &g, &rs, args.top).map_err(|e| decode_error(path, e))?;
        (report.to_json(), report.summary())
    } else if let Some(jpath) = &args.job {
        let bundle = parse_bundle(&read(jpath)?).map_err(|e| invalid(jpath, e))?;
        let reg = rs.register_id().unwrap_or_default();
        let qdt = bundle.qdts.get(reg).ok_or_else(|| invalid(jpath, format!("no register {reg:?}")))?;
        let mut records = decode(&counts, &rs, qdt, None).map_err(|e| decode_error(path, e))?;
        records.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.raw.cmp(&b.raw)));
        let mut text = format!("outcomes: {}\n", records.len());
        for r in records.iter().take(args.top) {
            let shown = match &r.value {
                DecodedValue::Phase(t) => format!("phase {t} turn ({:.6} rad)", t.turns_to_radians()),
                DecodedValue::Int(k) => format!("int {k}"),
                DecodedValue::Bools(b) => format!("bools {:?}", b.iter().map(|&x| u8::from(x)).collect::<Vec<_>>()),
            };
            writeln!(text, "  {}  {}  count {}", r.raw, shown, r.count).unwrap();
        }
        let json_out = json!({
            "n_outcomes": records.len(),
            "decoded": records.iter().map(|r| json!({
                "bits": r.raw,
                "count": r.count,
                "value": r.value.to_json(),
            })).collect::<Vec<_>>(),
        });
        (json_out, text)
    } else {
        return Err(CliError::Invalid("report needs --graph or --job".into()));
    };
    if let Some(out) = &args.out {
        write(out, &to_canonical_string(&json_out))?;
    }
    Ok(text)
}
