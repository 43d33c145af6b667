//! Command implementations behind the `mixmetro` binary.
//!
//! Each command evaluates a grid of `(strategy, N, p)` points on a rayon pool
//! and renders rows in grid order, so output bytes never depend on the
//! number of workers.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use mixmetro_core::correlations::DISCORD_MC_MAX_QUBITS;
use mixmetro_core::verify::{run_verify, VerifyLevel, VerifyReport};
use mixmetro_core::{
    correlation_report, discord_mc, entanglement_boundary, hermitian_eigensystem,
    phase_uncertainty, prepare_probe, qfi_closed, qfi_spectral, HammingGenerator, StrategyId,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest register for which the spectral Fisher column may be requested.
pub const SPECTRAL_HARD_LIMIT: usize = 12;

pub const QFI_HEADER: &str = "strategy,N,p,fisher_closed,fisher_spectral,delta_phi";
pub const CORRELATIONS_HEADER: &str = "strategy,N,p,discord,classical,total,entangled,min_pt_eig";
pub const DISCORD_SAMPLES_HEADER: &str = "strategy,N,p,trial,value_bits";
pub const DISCORD_SUMMARY_HEADER: &str = "strategy,N,p,min,max,conjectured,upper_bound";
pub const BOUNDARIES_HEADER: &str = "strategy,N,p_star";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("compute limit exceeded: {0}")]
    ComputeLimit(String),
    #[error(transparent)]
    Core(#[from] mixmetro_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::ComputeLimit(_) => 3,
            CliError::Core(mixmetro_core::Error::ComputeLimit { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "mixmetro",
    version,
    about = "Mixed-state phase estimation sweeps and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum Fisher information and phase-uncertainty bound per grid point.
    Qfi(QfiArgs),
    /// Discord, classical and total correlations, entanglement flag.
    Correlations(SweepArgs),
    /// Random product-basis dephasing samples bracketing the discord.
    DiscordMc(SweepArgs),
    /// Mixedness where the GHZ-diagonal probes stop being entangled.
    Boundaries(BoundaryArgs),
    /// Oracle-equivalence and invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma-separated subset of S, Cl, Q1, Q2.
    #[arg(long, value_delimiter = ',', value_parser = parse_strategy)]
    pub strategies: Option<Vec<StrategyArg>>,
    /// Qubit counts, comma-separated.
    #[arg(long = "n", value_delimiter = ',', default_value = "10")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_max: f64,
    /// Number of grid intervals; both endpoints are included.
    #[arg(long, default_value_t = 20)]
    pub p_steps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct QfiArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Largest N for which the spectral oracle column is computed.
    #[arg(long, default_value_t = 8)]
    pub spectral_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BoundaryArgs {
    #[arg(
        long = "n",
        value_delimiter = ',',
        default_value = "2,3,4,5,6,7,8,9,10,11,12"
    )]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    pub level: LevelArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyArg(pub StrategyId);

fn ser_strategy<S: serde::Serializer>(s: &StrategyId, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(s.as_str())
}

fn parse_strategy(s: &str) -> Result<StrategyArg, String> {
    s.parse::<StrategyId>()
        .map(StrategyArg)
        .map_err(|e| e.to_string())
}

/// A validated sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub strategies: Vec<StrategyId>,
    pub n: Vec<usize>,
    pub p_min: f64,
    pub p_max: f64,
    pub p_steps: usize,
    pub seed: u64,
    pub trials: usize,
    pub format: OutputFormat,
    pub workers: usize,
}

impl SweepConfig {
    pub fn from_args(args: &SweepArgs, default_strategies: &[StrategyId]) -> CliResult<Self> {
        let strategies = match &args.strategies {
            Some(list) if !list.is_empty() => list.iter().map(|s| s.0).collect(),
            Some(_) => return Err(CliError::Config("--strategies is empty".into())),
            None => default_strategies.to_vec(),
        };
        let cfg = Self {
            strategies,
            n: args.n.clone(),
            p_min: args.p_min,
            p_max: args.p_max,
            p_steps: args.p_steps,
            seed: args.seed,
            trials: args.trials,
            format: args.format,
            workers: args.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(0.0 <= self.p_min && self.p_min <= self.p_max && self.p_max <= 1.0) {
            return Err(CliError::Config(format!(
                "need 0 <= p_min <= p_max <= 1, got p_min={} p_max={}",
                self.p_min, self.p_max
            )));
        }
        if self.p_steps < 1 {
            return Err(CliError::Config("--p-steps must be at least 1".into()));
        }
        if self.n.is_empty() {
            return Err(CliError::Config("--n needs at least one value".into()));
        }
        for &s in &self.strategies {
            for &n in &self.n {
                if n < s.min_qubits() {
                    return Err(CliError::Config(format!(
                        "strategy {s} needs N >= {}, got {n}",
                        s.min_qubits()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Inclusive grid; a single point when `p_min == p_max`.
    pub fn p_grid(&self) -> Vec<f64> {
        if self.p_min == self.p_max {
            return vec![self.p_min];
        }
        (0..=self.p_steps)
            .map(|k| {
                if k == self.p_steps {
                    self.p_max
                } else {
                    self.p_min + (self.p_max - self.p_min) * k as f64 / self.p_steps as f64
                }
            })
            .collect()
    }

    /// Grid points in output order: strategy, then N, then p.
    pub fn points(&self) -> Vec<(StrategyId, usize, f64)> {
        let grid = self.p_grid();
        self.strategies
            .iter()
            .flat_map(|&s| self.n.iter().map(move |&n| (s, n)))
            .flat_map(|(s, n)| grid.iter().map(move |&p| (s, n, p)))
            .collect()
    }

    fn metadata(&self, command: &str, extra: &[(&str, serde_json::Value)]) -> Metadata {
        let mut config = serde_json::json!({
            "strategies": self.strategies.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            "N": self.n,
            "p_min": self.p_min,
            "p_max": self.p_max,
            "p_steps": self.p_steps,
            "seed": self.seed,
            "trials": self.trials,
        });
        for (k, v) in extra {
            config[*k] = v.clone();
        }
        Metadata {
            tool: "mixmetro".into(),
            version: VERSION.into(),
            command: command.into(),
            seed: self.seed,
            config,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
}

impl Metadata {
    fn csv_comment(&self) -> String {
        format!(
            "# {} {}\n# command: {}\n# seed: {}\n# config: {}\n",
            self.tool, self.version, self.command, self.seed, self.config
        )
    }
}

/// Shortest round-trip decimal; `inf` for infinities.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

fn ser_number<S: serde::Serializer>(x: &f64, ser: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        ser.serialize_f64(*x)
    } else {
        ser.serialize_str(&fmt_f64(*x))
    }
}

fn ser_opt_number<S: serde::Serializer>(x: &Option<f64>, ser: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_number(v, ser),
        None => ser.serialize_none(),
    }
}

pub trait Row: Serialize {
    fn csv_fields(&self) -> Vec<String>;
}

#[derive(Debug, Clone, Serialize)]
pub struct QfiRow {
    #[serde(serialize_with = "ser_strategy")]
    pub strategy: StrategyId,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub fisher_closed: f64,
    #[serde(serialize_with = "ser_opt_number")]
    pub fisher_spectral: Option<f64>,
    #[serde(serialize_with = "ser_number")]
    pub delta_phi: f64,
}

impl Row for QfiRow {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.strategy.to_string(),
            self.n.to_string(),
            fmt_f64(self.p),
            fmt_f64(self.fisher_closed),
            self.fisher_spectral.map(fmt_f64).unwrap_or_default(),
            fmt_f64(self.delta_phi),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationRow {
    #[serde(serialize_with = "ser_strategy")]
    pub strategy: StrategyId,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub discord: f64,
    pub classical: f64,
    pub total: f64,
    pub entangled: bool,
    pub min_pt_eig: f64,
}

impl Row for CorrelationRow {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.strategy.to_string(),
            self.n.to_string(),
            fmt_f64(self.p),
            fmt_f64(self.discord),
            fmt_f64(self.classical),
            fmt_f64(self.total),
            self.entangled.to_string(),
            fmt_f64(self.min_pt_eig),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscordSampleRow {
    #[serde(serialize_with = "ser_strategy")]
    pub strategy: StrategyId,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub trial: u64,
    pub value_bits: f64,
}

impl Row for DiscordSampleRow {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.strategy.to_string(),
            self.n.to_string(),
            fmt_f64(self.p),
            self.trial.to_string(),
            fmt_f64(self.value_bits),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscordSummaryRow {
    #[serde(serialize_with = "ser_strategy")]
    pub strategy: StrategyId,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub min: f64,
    pub max: f64,
    pub conjectured: f64,
    pub upper_bound: f64,
}

impl Row for DiscordSummaryRow {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.strategy.to_string(),
            self.n.to_string(),
            fmt_f64(self.p),
            fmt_f64(self.min),
            fmt_f64(self.max),
            fmt_f64(self.conjectured),
            fmt_f64(self.upper_bound),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryRow {
    #[serde(serialize_with = "ser_strategy")]
    pub strategy: StrategyId,
    #[serde(rename = "N")]
    pub n: usize,
    pub p_star: f64,
}

impl Row for BoundaryRow {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.strategy.to_string(),
            self.n.to_string(),
            fmt_f64(self.p_star),
        ]
    }
}

/// Renders a table with its metadata header.
pub fn render<R: Row>(meta: &Metadata, header: &str, rows: &[R], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut s = meta.csv_comment();
            s.push_str(header);
            s.push('\n');
            for r in rows {
                s.push_str(&r.csv_fields().join(","));
                s.push('\n');
            }
            s
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({ "metadata": meta, "rows": rows });
            let mut s = serde_json::to_string_pretty(&doc).expect("rows serialize");
            s.push('\n');
            s
        }
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(f)
}

pub fn qfi_rows(cfg: &SweepConfig, spectral_max: usize) -> CliResult<Vec<QfiRow>> {
    if spectral_max > SPECTRAL_HARD_LIMIT {
        return Err(CliError::ComputeLimit(format!(
            "--spectral-max {spectral_max} exceeds {SPECTRAL_HARD_LIMIT}"
        )));
    }
    with_pool(cfg.workers, || {
        cfg.points()
            .par_iter()
            .map(|&(s, n, p)| {
                let fisher_closed = qfi_closed(s, n, p)?;
                let fisher_spectral = if n <= spectral_max {
                    let rho = prepare_probe(s, n, p)?;
                    let es = hermitian_eigensystem(rho.matrix())?;
                    Some(qfi_spectral(&es, &HammingGenerator::new(n)?)?)
                } else {
                    None
                };
                Ok(QfiRow {
                    strategy: s,
                    n,
                    p,
                    fisher_closed,
                    fisher_spectral,
                    delta_phi: phase_uncertainty(fisher_closed)?,
                })
            })
            .collect()
    })
}

pub fn cmd_qfi(args: &QfiArgs) -> CliResult<String> {
    let cfg = SweepConfig::from_args(&args.sweep, &StrategyId::ALL)?;
    let rows = qfi_rows(&cfg, args.spectral_max)?;
    let meta = cfg.metadata("qfi", &[("spectral_max", args.spectral_max.into())]);
    Ok(render(&meta, QFI_HEADER, &rows, cfg.format))
}

pub fn correlation_rows(cfg: &SweepConfig) -> CliResult<Vec<CorrelationRow>> {
    with_pool(cfg.workers, || {
        cfg.points()
            .par_iter()
            .map(|&(s, n, p)| {
                let r = correlation_report(s, n, p)?;
                Ok(CorrelationRow {
                    strategy: s,
                    n,
                    p,
                    discord: r.discord_bits,
                    classical: r.classical_bits,
                    total: r.total_bits,
                    entangled: r.entangled,
                    min_pt_eig: r.min_pt_eigenvalue,
                })
            })
            .collect()
    })
}

pub fn cmd_correlations(args: &SweepArgs) -> CliResult<String> {
    let cfg = SweepConfig::from_args(args, &StrategyId::ALL)?;
    let rows = correlation_rows(&cfg)?;
    Ok(render(
        &cfg.metadata("correlations", &[]),
        CORRELATIONS_HEADER,
        &rows,
        cfg.format,
    ))
}

pub struct DiscordMcOutput {
    pub samples: String,
    pub summary: String,
}

pub fn discord_mc_rows(
    cfg: &SweepConfig,
) -> CliResult<(Vec<DiscordSampleRow>, Vec<DiscordSummaryRow>)> {
    for &s in &cfg.strategies {
        if !matches!(s, StrategyId::Q1 | StrategyId::Q2) {
            return Err(CliError::Config(format!(
                "discord-mc supports Q1 and Q2 only, got {s}"
            )));
        }
    }
    if cfg.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    if let Some(&n) = cfg.n.iter().find(|&&n| n > DISCORD_MC_MAX_QUBITS) {
        return Err(CliError::ComputeLimit(format!(
            "discord-mc needs N <= {DISCORD_MC_MAX_QUBITS}, got {n}"
        )));
    }
    let runs = with_pool(cfg.workers, || {
        cfg.points()
            .into_iter()
            .map(|(s, n, p)| discord_mc(s, n, p, cfg.trials, cfg.seed))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut samples = Vec::new();
    let mut summary = Vec::new();
    for run in runs {
        samples.extend(run.samples.iter().map(|smp| DiscordSampleRow {
            strategy: run.strategy,
            n: run.num_qubits,
            p: run.p,
            trial: smp.trial,
            value_bits: smp.value_bits,
        }));
        summary.push(DiscordSummaryRow {
            strategy: run.strategy,
            n: run.num_qubits,
            p: run.p,
            min: run.min,
            max: run.max,
            conjectured: run.conjectured,
            upper_bound: run.upper_bound,
        });
    }
    Ok((samples, summary))
}

pub fn cmd_discord_mc(args: &SweepArgs) -> CliResult<DiscordMcOutput> {
    let cfg = SweepConfig::from_args(args, &[StrategyId::Q1, StrategyId::Q2])?;
    let (samples, summary) = discord_mc_rows(&cfg)?;
    let meta = cfg.metadata("discord-mc", &[]);
    Ok(DiscordMcOutput {
        samples: render(&meta, DISCORD_SAMPLES_HEADER, &samples, cfg.format),
        summary: render(&meta, DISCORD_SUMMARY_HEADER, &summary, cfg.format),
    })
}

pub fn boundary_rows(ns: &[usize]) -> CliResult<Vec<BoundaryRow>> {
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(CliError::Config(format!("boundaries need N >= 2, got {n}")));
    }
    let mut rows = Vec::new();
    for s in [StrategyId::Q1, StrategyId::Q2] {
        for &n in ns {
            rows.push(BoundaryRow {
                strategy: s,
                n,
                p_star: entanglement_boundary(s, n)?,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_boundaries(args: &BoundaryArgs) -> CliResult<String> {
    if args.n.is_empty() {
        return Err(CliError::Config("--n needs at least one value".into()));
    }
    let rows = boundary_rows(&args.n)?;
    let meta = Metadata {
        tool: "mixmetro".into(),
        version: VERSION.into(),
        command: "boundaries".into(),
        seed: 0,
        config: serde_json::json!({ "N": args.n }),
    };
    Ok(render(&meta, BOUNDARIES_HEADER, &rows, args.format))
}

pub fn cmd_verify(args: &VerifyArgs) -> (VerifyReport, String) {
    let level = match args.level {
        LevelArg::Quick => VerifyLevel::Quick,
        LevelArg::Full => VerifyLevel::Full,
    };
    let report = run_verify(level);
    let mut text = String::new();
    let _ = writeln!(text, "mixmetro {VERSION} verify ({:?})", level);
    let _ = writeln!(text, "{report}");
    (report, text)
}

/// Path for the discord-mc summary next to the samples file.
pub fn summary_path(out: &std::path::Path) -> std::path::PathBuf {
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("discord_mc");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}.summary.{ext}"))
}

fn emit(out: &Option<std::path::PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result: CliResult<i32> = (|| match &cli.command {
        Command::Qfi(args) => {
            emit(&args.sweep.out, &cmd_qfi(args)?)?;
            Ok(0)
        }
        Command::Correlations(args) => {
            emit(&args.out, &cmd_correlations(args)?)?;
            Ok(0)
        }
        Command::DiscordMc(args) => {
            let output = cmd_discord_mc(args)?;
            match &args.out {
                Some(path) => {
                    std::fs::write(path, &output.samples)?;
                    std::fs::write(summary_path(path), &output.summary)?;
                }
                None => print!("{}\n{}", output.samples, output.summary),
            }
            Ok(0)
        }
        Command::Boundaries(args) => {
            emit(&args.out, &cmd_boundaries(args)?)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let (report, text) = cmd_verify(args);
            print!("{text}");
            Ok(if report.passed() { 0 } else { 1 })
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
