//! `sac`: avalanche analysis of Boolean functions from the command line.
//!
//! Subcommands: `analyze` (exact spectra and verdict), `estimate` (the
//! four statistical estimators), `plan` (sample counts for a margin),
//! `table` (per-algorithm costs). Exit codes: 0 success, 2 usage or
//! parse errors, 3 size limits, 4 internal invariant violations.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{
    AnalyzePayload, EstimatePayload, ParamManifest, PlanPayload, PlanRow, RunManifest,
    TablePayload, VERSION,
};
use sac_core::{
    parse_function, plan_samples, run_estimate, Algorithm, BooleanFunction, Error,
    ExperimentConfig, FunctionSource, PlanVariant, ShotPlan,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Quantum estimation stays well inside the simulator's qubit ceiling.
const QUANTUM_ESTIMATE_MAX_VARS: usize = 14;

#[derive(Parser)]
#[command(
    name = "sac",
    version,
    about = "Strict avalanche criterion toolkit: exact spectra, simulated quantum tests, seeded estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact spectral analysis: autocorrelations, spectral halves, verdict
    Analyze(AnalyzeArgs),
    /// Estimate the avalanche distance with a chosen estimator
    Estimate(EstimateArgs),
    /// Sample counts per estimator family for a (t, delta) target
    Plan(PlanArgs),
    /// Per-algorithm cost table under the audit's counting convention
    Table(TableArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Truth table file: "n=<k>" header, then bits or hex
    #[arg(long = "fn-file", value_name = "PATH")]
    fn_file: Option<PathBuf>,
    /// Algebraic normal form, e.g. "x1*x2 + x3*x4"
    #[arg(long, value_name = "EXPR")]
    anf: Option<String>,
    /// Truth table bits in input order, e.g. 0110
    #[arg(long, value_name = "BITS")]
    bits: Option<String>,
    /// Truth table in hex, 4 table bits per digit, e.g. 0x6996
    #[arg(long, value_name = "HEX")]
    hex: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the rendered output to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Variable count when the source leaves it ambiguous
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Classical,
    Qsac,
    Direct,
    Forrelation,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(arg: AlgorithmArg) -> Self {
        match arg {
            AlgorithmArg::Classical => Algorithm::Classical,
            AlgorithmArg::Qsac => Algorithm::Qsac,
            AlgorithmArg::Direct => Algorithm::Direct,
            AlgorithmArg::Forrelation => Algorithm::Forrelation,
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BudgetArgs {
    /// Shots per direction
    #[arg(long, value_name = "M")]
    shots: Option<u64>,
    /// Plan shots from a margin and uncertainty, e.g. 0.05,0.05
    #[arg(long, value_name = "T,DELTA", value_parser = parse_plan_pair)]
    plan: Option<(f64, f64)>,
    /// No sampling: full-domain sweep / exact circuit probabilities
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Variable count when the source leaves it ambiguous
    #[arg(long)]
    n: Option<usize>,
    /// Estimator to run
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Interval uncertainty (confidence 1 - delta); --plan supplies its own
    #[arg(long, default_value_t = 0.05, conflicts_with = "plan")]
    delta: f64,
    /// Master seed; each direction derives its own stream from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PlanArgs {
    /// Margin and uncertainty, e.g. 0.05,0.05
    #[arg(long, value_name = "T,DELTA", value_parser = parse_plan_pair)]
    plan: (f64, f64),
    /// Variable count the n-dependent formulas are evaluated at
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TableArgs {
    /// Variable count the table is evaluated at
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Margin and uncertainty the sample column is evaluated at
    #[arg(long, value_name = "T,DELTA", value_parser = parse_plan_pair, default_value = "0.05,0.05")]
    plan: (f64, f64),
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_plan_pair(raw: &str) -> Result<(f64, f64), String> {
    let (t, delta) = raw
        .split_once(',')
        .ok_or_else(|| format!("expected T,DELTA, got {raw:?}"))?;
    let parse = |part: &str, what: &str| {
        part.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad {what} in {raw:?}: {e}"))
    };
    Ok((parse(t, "margin")?, parse(delta, "delta")?))
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => e.fmt(f),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::SizeLimit { .. }) => 3,
            CliError::Core(Error::Invariant(_)) => 4,
            CliError::Core(_) | CliError::Io(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Plan(args) => cmd_plan(args),
        Command::Table(args) => cmd_table(args),
    }
}

fn load_function(
    source: &SourceArgs,
    n: Option<usize>,
) -> Result<(BooleanFunction, &'static str, String), CliError> {
    let (function_source, kind, descriptor) = if let Some(path) = &source.fn_file {
        let text = std::fs::read_to_string(path)?;
        (
            FunctionSource::TableFile { text },
            "fn-file",
            path.display().to_string(),
        )
    } else if let Some(expr) = &source.anf {
        (
            FunctionSource::Anf {
                expr: expr.clone(),
                n,
            },
            "anf",
            expr.clone(),
        )
    } else if let Some(bits) = &source.bits {
        (
            FunctionSource::Bits {
                bits: bits.clone(),
                n,
            },
            "bits",
            bits.clone(),
        )
    } else if let Some(hex) = &source.hex {
        let digits = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .unwrap_or(hex)
            .to_string();
        (FunctionSource::Hex { digits, n }, "hex", hex.clone())
    } else {
        unreachable!("clap requires exactly one source")
    };
    let f = parse_function(&function_source)?;
    if let Some(expected) = n {
        if f.n() != expected {
            return Err(Error::InvalidArgument(format!(
                "source defines n = {}, but --n says {expected}",
                f.n()
            ))
            .into());
        }
    }
    Ok((f, kind, descriptor))
}

fn emit(rendered: String, output: &OutputArgs) -> Result<(), CliError> {
    print!("{rendered}");
    if let Some(path) = &output.out {
        std::fs::write(path, &rendered)?;
    }
    Ok(())
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let (f, kind, descriptor) = load_function(&args.source, args.n)?;
    let manifest = RunManifest {
        command: "analyze",
        source_kind: kind,
        source: descriptor,
        function_hex: f.to_hex_string(),
        algorithm: None,
        n: f.n(),
        t: None,
        delta: None,
        shots: None,
        exhaustive: None,
        seed: None,
        rng: None,
        version: VERSION,
        timestamp_unix: unix_now(),
    };
    let payload = AnalyzePayload::new(manifest, &f);
    emit(payload.render(args.output.format), &args.output)
}

fn cmd_estimate(args: EstimateArgs) -> Result<(), CliError> {
    let (f, kind, descriptor) = load_function(&args.source, args.n)?;
    let algorithm: Algorithm = args.algorithm.into();
    if algorithm != Algorithm::Classical && f.n() > QUANTUM_ESTIMATE_MAX_VARS {
        return Err(Error::SizeLimit {
            what: "quantum estimation arity",
            n: f.n(),
            min: 2,
            max: QUANTUM_ESTIMATE_MAX_VARS,
        }
        .into());
    }

    let (shots, t, delta) = match (args.budget.shots, args.budget.plan, args.budget.exhaustive) {
        (Some(m), None, false) => (ShotPlan::Explicit(m), None, args.delta),
        (None, Some((t, d)), false) => (ShotPlan::FromMargin { t }, Some(t), d),
        (None, None, true) => (ShotPlan::Exact, None, args.delta),
        _ => unreachable!("clap requires exactly one budget"),
    };
    let cfg = ExperimentConfig {
        algorithm,
        shots,
        delta,
        seed: args.seed,
    };
    let estimate = run_estimate(&f, &cfg)?;

    let manifest = RunManifest {
        command: "estimate",
        source_kind: kind,
        source: descriptor,
        function_hex: f.to_hex_string(),
        algorithm: Some(estimate.algorithm.to_string()),
        n: f.n(),
        t,
        delta: Some(delta),
        shots: estimate.shots_per_direction,
        exhaustive: Some(estimate.exact_mode),
        seed: estimate.seed,
        rng: estimate.rng,
        version: VERSION,
        timestamp_unix: unix_now(),
    };
    let payload = EstimatePayload::new(manifest, estimate);
    emit(payload.render(args.output.format), &args.output)
}

fn cmd_plan(args: PlanArgs) -> Result<(), CliError> {
    let (t, delta) = args.plan;
    let variants = [
        (PlanVariant::Classical, "(2^n/t^2) log(2/delta)", false),
        (PlanVariant::SingleQubit, "(1/(2t^2)) log(2/delta)", true),
        (PlanVariant::NQubit, "((2^n-1)/(2t^2)) log(2/delta)", false),
    ];
    let mut rows = Vec::with_capacity(variants.len());
    for (variant, formula, n_independent) in variants {
        rows.push(PlanRow {
            variant: variant_label(variant),
            formula,
            samples: plan_samples(t, delta, variant, args.n)?,
            n_independent,
        });
    }
    let payload = PlanPayload {
        manifest: ParamManifest {
            command: "plan",
            n: args.n,
            t,
            delta,
            version: VERSION,
        },
        rows,
        note: "the qsac/autocorrelation count does not depend on n",
    };
    emit(payload.render(args.output.format), &args.output)
}

fn variant_label(variant: PlanVariant) -> &'static str {
    match variant {
        PlanVariant::Classical => "classical",
        PlanVariant::SingleQubit => "qsac/autocorrelation",
        PlanVariant::NQubit => "direct/forrelation",
    }
}

fn cmd_table(args: TableArgs) -> Result<(), CliError> {
    let (t, delta) = args.plan;
    let rows = sac_core::table1(args.n, t, delta)?;
    let payload = TablePayload {
        manifest: ParamManifest {
            command: "table",
            n: args.n,
            t,
            delta,
            version: VERSION,
        },
        convention: sac_core::complexity::COUNTING_CONVENTION,
        rows,
    };
    emit(payload.render(args.output.format), &args.output)
}
