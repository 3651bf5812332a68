//! `clustersync`: batch driver for mutation, period search, exchange graphs,
//! identity verification and synchronicity reports.
//!
//! Exit codes: 0 ok, 1 CRITICAL finding, 2 usage error, 3 node cap reached.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use clustersync::explore::Horizon;
use clustersync::period::ObjectKind;
use clustersync::run::{parse_matrix, parse_r, parse_word, run, Command, RunConfig, RunError};
use clustersync::seed::CoeffKind;
use clustersync::verify::Suite;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    /// Seed and FGC-seed at the end of `--word`.
    Mutate,
    /// Every node along `--word`.
    Trace,
    /// σ-periods of `--object` over the explored nodes.
    PeriodSearch,
    /// Exchange graph as JSON, and DOT with `--dot`.
    ExchangeGraph,
    /// Identity suites selected by `--suite`.
    Verify,
    /// Period comparisons between the patterns selected by `--suite`.
    Synchronicity,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Mutate => Command::Mutate,
            Cmd::Trace => Command::Trace,
            Cmd::PeriodSearch => Command::PeriodSearch,
            Cmd::ExchangeGraph => Command::ExchangeGraph,
            Cmd::Verify => Command::Verify,
            Cmd::Synchronicity => Command::Synchronicity,
        }
    }
}

fn coeff(s: &str) -> Result<CoeffKind, String> {
    CoeffKind::parse(s).ok_or_else(|| format!("expected one of trivial, principal, y-principal, universal, got {s:?}"))
}

fn suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| format!("expected one of ca, gca, dualities, conjugate, companions, all, got {s:?}"))
}

fn object(s: &str) -> Result<ObjectKind, String> {
    ObjectKind::parse(s).ok_or_else(|| format!("unknown object {s:?}"))
}

#[derive(Debug, Parser)]
#[command(name = "clustersync", version, about = "Exact cluster-pattern computations")]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Exchange matrix as row-major JSON, e.g. "[[0,1],[-1,0]]".
    #[arg(long = "B", value_name = "JSON")]
    b: String,
    /// Degrees r_i as a JSON list, e.g. "[2,1]"; selects generalized patterns
    /// for mutate/trace/period-search/exchange-graph.
    #[arg(long = "R", value_name = "JSON")]
    r: Option<String>,
    /// Coefficient choice; repeat for several.
    #[arg(long, value_parser = coeff)]
    coeff: Vec<CoeffKind>,
    /// 1-based mutation word, e.g. 121 or 1,2,1.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    word: String,
    /// Explore every node up to this depth.
    #[arg(long, conflicts_with = "closure")]
    depth: Option<usize>,
    /// Explore until a full layer adds no new seed.
    #[arg(long)]
    closure: bool,
    /// Identity suite; repeat for several.
    #[arg(long, value_parser = suite)]
    suite: Vec<Suite>,
    /// Object for period-search: seed, yseed, x, y, z, C, G, F, gca-seed.
    #[arg(long, value_parser = object)]
    object: Option<ObjectKind>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the exchange graph in DOT here.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Export the labeled exchange graph (σ on every arrow).
    #[arg(long)]
    labeled: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Cap on explored nodes.
    #[arg(long, env = "CLUSTERSYNC_MAX_NODES", default_value_t = clustersync::run::DEFAULT_MAX_NODES)]
    max_nodes: usize,
}

fn config(cli: &Cli) -> Result<RunConfig, RunError> {
    let b = parse_matrix(&cli.b)?;
    let n = b.n();
    let mut cfg = RunConfig::new(cli.command.into(), b);
    cfg.r = cli.r.as_deref().map(|r| parse_r(r, n)).transpose()?;
    cfg.coeffs = cli.coeff.clone();
    cfg.object = cli.object;
    cfg.word = parse_word(&cli.word, n)?;
    if cli.closure {
        cfg.horizon = Horizon::Closure;
    } else if let Some(d) = cli.depth {
        cfg.horizon = Horizon::Depth(d);
    }
    if !cli.suite.is_empty() {
        cfg.suites = cli.suite.clone();
    }
    cfg.jobs = cli.jobs;
    cfg.max_nodes = cli.max_nodes;
    cfg.labeled = cli.labeled;
    Ok(cfg)
}

fn write(path: &PathBuf, text: &str) -> Result<(), RunError> {
    fs::write(path, text).map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn main_inner(cli: &Cli) -> Result<i32, RunError> {
    let out = run(&config(cli)?)?;
    let json = out.report.to_json();
    match &cli.out {
        Some(p) => write(p, &json)?,
        None => print!("{json}"),
    }
    if let (Some(p), Some(dot)) = (&cli.dot, &out.dot) {
        write(p, dot)?;
    }
    Ok(out.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = main_inner(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
