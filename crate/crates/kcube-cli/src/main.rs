//! `kcube`: connectivity certificates, structural verification, fault
//! simulation, and graph export for k-ary n-cube networks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 infeasible or refused (a message names the exceeded ceiling).

mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kcube::cuts::SurvivorCondition;
use kcube::reliability::{self, FaultModel};
use kcube::solver::{self, SearchConfig};
use kcube::verify::{self, VerificationReport, VerifyMode};
use kcube::{Error, Torus};

use report::{EstimateRow, ExportMeta, KappaPayload, Payload, RunReport, TorusParams};

#[derive(Parser)]
#[command(name = "kcube", version, about = "k-ary n-cube connectivity and fault-tolerance toolkit")]
struct Cli {
    /// Worker threads for search, verification, and simulation.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Write the machine-readable run report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute or bound the h-extra connectivity kappa_h.
    Kappa(KappaArgs),
    /// Run structural checks exhaustively or by seeded sampling.
    Verify(VerifyArgs),
    /// Estimate disconnection probabilities under random vertex faults.
    Simulate(SimulateArgs),
    /// Write the graph as an edge list or DOT document.
    Export(ExportArgs),
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    h: u32,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Largest cut size to search for (defaults to the closed-form value).
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Formula,
    Subsets,
    Boundary,
    UpperBound,
    Flow,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check to run, or `all` for every check in domain.
    #[arg(long, value_enum)]
    check: CheckArg,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Trials for sampled mode.
    #[arg(long)]
    trials: Option<u64>,
    /// Seed for sampled mode.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    CommonNeighbors,
    ClosedNbhd,
    EdgeCut,
    PathCut,
    Thm1,
    Thm2,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    n: u32,
    /// Fault count, or an inclusive range `LO..HI` for a sweep.
    #[arg(long)]
    faults: String,
    #[arg(long, value_enum, default_value = "none")]
    condition: ConditionArg,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Write the estimate table as CSV to this path.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditionArg {
    None,
    NoIsolatedVertex,
    NoIsolatedVertexOrEdge,
}

impl From<ConditionArg> for SurvivorCondition {
    fn from(c: ConditionArg) -> Self {
        match c {
            ConditionArg::None => SurvivorCondition::None,
            ConditionArg::NoIsolatedVertex => SurvivorCondition::NoIsolatedVertex,
            ConditionArg::NoIsolatedVertexOrEdge => SurvivorCondition::NoIsolatedVertexOrEdge,
        }
    }
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Output path; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Edgelist,
}

enum CliError {
    Lib(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lib(e) => write!(f, "{e}"),
            Self::Io { path, source } => write!(f, "cannot write {}: {source}", path.display()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            // refusals: the work was declined, not misspecified
            Self::Lib(
                Error::CeilingExceeded { .. }
                | Error::CompleteGraph
                | Error::PoolBuild { .. }
                | Error::ConditionStarved,
            ) => 3,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = search_config(cli.workers)?;
    let (command, params, payload, code) = match &cli.command {
        Command::Kappa(args) => {
            let (params, payload) = cmd_kappa(args, &cfg)?;
            ("kappa", params, payload, ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let (params, payload, failed) = cmd_verify(args, &cfg)?;
            let code = if failed { ExitCode::from(1) } else { ExitCode::SUCCESS };
            ("verify", params, payload, code)
        }
        Command::Simulate(args) => {
            let (params, payload) = cmd_simulate(args, &cfg)?;
            ("simulate", params, payload, ExitCode::SUCCESS)
        }
        Command::Export(args) => {
            let (params, payload) = cmd_export(args)?;
            ("export", params, payload, ExitCode::SUCCESS)
        }
    };
    if let Some(path) = &cli.json {
        let report = RunReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            params,
            payload,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        };
        let doc = serde_json::to_string_pretty(&report).expect("report serializes");
        write_file(path, &(doc + "\n"))?;
    }
    Ok(code)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Worker count from the flag (default: all cores) and ceilings from the
/// KCUBE_SUBSET_CEILING / KCUBE_VERTEX_CEILING environment variables.
fn search_config(workers: Option<usize>) -> Result<SearchConfig, CliError> {
    let mut cfg = SearchConfig {
        worker_count: workers.unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, usize::from)
        }),
        ..SearchConfig::default()
    };
    if let Ok(raw) = std::env::var("KCUBE_SUBSET_CEILING") {
        cfg.subset_ceiling = raw.parse().map_err(|_| {
            CliError::Lib(Error::InvalidConfig {
                reason: "KCUBE_SUBSET_CEILING must be a nonnegative integer",
            })
        })?;
    }
    if let Ok(raw) = std::env::var("KCUBE_VERTEX_CEILING") {
        cfg.vertex_ceiling = raw.parse().map_err(|_| {
            CliError::Lib(Error::InvalidConfig {
                reason: "KCUBE_VERTEX_CEILING must be a nonnegative integer",
            })
        })?;
    }
    Ok(cfg)
}

fn cmd_kappa(args: &KappaArgs, cfg: &SearchConfig) -> Result<(TorusParams, Payload), CliError> {
    let t = Torus::new(args.k, args.n)?;
    let mut cfg = cfg.clone();
    cfg.max_cut_size = args.budget;
    let payload = match args.method {
        MethodArg::Formula => report::kappa_payload(&t, &solver::kappa_formula(&t, args.h)?),
        MethodArg::Subsets => {
            report::kappa_payload(&t, &solver::kappa_subset_oracle(&t, args.h, &cfg)?)
        }
        MethodArg::Boundary => {
            report::kappa_payload(&t, &solver::kappa_boundary_enum(&t, args.h, &cfg)?)
        }
        MethodArg::UpperBound => report::kappa_payload(&t, &solver::kappa_upper_bound(&t, args.h)?),
        MethodArg::Flow => {
            if args.h != 0 {
                return Err(Error::Unsupported {
                    op: "flow method",
                    requires: "h = 0",
                }
                .into());
            }
            KappaPayload {
                h: 0,
                value: solver::classic_connectivity_flow(&t, &cfg)?,
                method: "flow".to_string(),
                exhaustive: true,
                witness: None,
            }
        }
    };
    let relation = if payload.exhaustive {
        "="
    } else if payload.witness.is_some() {
        "<="
    } else {
        ">="
    };
    println!(
        "kappa_{}(Q_{}^{}) {} {}",
        payload.h, args.n, args.k, relation, payload.value
    );
    println!(
        "  method: {}   exhaustive: {}",
        payload.method, payload.exhaustive
    );
    if let Some(w) = &payload.witness {
        println!("  witness ({} vertices): {}", w.len(), w.join(" "));
    }
    Ok((
        TorusParams { k: args.k, n: args.n },
        Payload::Kappa { certificate: payload },
    ))
}

struct CheckEntry {
    token: CheckArg,
    id: &'static str,
    run: fn(u32, VerifyMode, &SearchConfig) -> kcube::Result<VerificationReport>,
}

const CHECKS: &[CheckEntry] = &[
    CheckEntry {
        token: CheckArg::CommonNeighbors,
        id: "common-neighbors",
        run: verify::verify_common_neighbors,
    },
    CheckEntry {
        token: CheckArg::ClosedNbhd,
        id: "closed-neighborhood-connected",
        run: verify::verify_closed_neighborhood_connected,
    },
    CheckEntry {
        token: CheckArg::EdgeCut,
        id: "edge-cut",
        run: verify::verify_edge_cut_lemma,
    },
    CheckEntry {
        token: CheckArg::PathCut,
        id: "path-cut",
        run: verify::verify_path_cut_lemma,
    },
    CheckEntry {
        token: CheckArg::Thm1,
        id: "thm1",
        run: verify::verify_theorem1_conditional,
    },
    CheckEntry {
        token: CheckArg::Thm2,
        id: "thm2",
        run: verify::verify_theorem2_conditional,
    },
];

fn cmd_verify(
    args: &VerifyArgs,
    cfg: &SearchConfig,
) -> Result<(TorusParams, Payload, bool), CliError> {
    let mode = match args.mode {
        ModeArg::Exhaustive => VerifyMode::Exhaustive,
        ModeArg::Sampled => VerifyMode::Sampled {
            trials: args.trials.unwrap_or(100_000),
            seed: args.seed.unwrap_or(42),
        },
    };
    let mut checks = Vec::new();
    let mut failed = false;
    for entry in CHECKS {
        if args.check != CheckArg::All && args.check != entry.token {
            continue;
        }
        match (entry.run)(args.n, mode, cfg) {
            Ok(rep) => {
                let status = if rep.passed { "PASS" } else { "FAIL" };
                println!(
                    "{status} {}: {} cases in {:.3} s",
                    rep.check_id,
                    rep.cases_checked,
                    rep.elapsed.as_secs_f64()
                );
                if let Some(ce) = &rep.counterexample {
                    println!("  counterexample: {}", ce.detail);
                    for s in &ce.sets {
                        println!("    set: {}", report::render_set(&rep.torus, s).join(" "));
                    }
                }
                failed |= !rep.passed;
                checks.push(report::check_payload(&rep));
            }
            Err(Error::Unsupported { requires, .. }) => {
                println!("SKIP {}: requires {}", entry.id, requires);
                checks.push(report::skipped_payload(entry.id, requires));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((
        TorusParams { k: 3, n: args.n },
        Payload::Verify { checks },
        failed,
    ))
}

/// Parses `N` or an inclusive `LO..HI` range.
fn parse_faults(raw: &str) -> Result<Vec<u64>, CliError> {
    let invalid = || {
        CliError::Lib(Error::InvalidConfig {
            reason: "faults must be a count N or an inclusive range LO..HI",
        })
    };
    match raw.split_once("..") {
        None => Ok(vec![raw.trim().parse().map_err(|_| invalid())?]),
        Some((lo, hi)) => {
            let lo: u64 = lo.trim().parse().map_err(|_| invalid())?;
            let hi: u64 = hi.trim().parse().map_err(|_| invalid())?;
            if lo > hi {
                return Err(invalid());
            }
            Ok((lo..=hi).collect())
        }
    }
}

fn cmd_simulate(
    args: &SimulateArgs,
    cfg: &SearchConfig,
) -> Result<(TorusParams, Payload), CliError> {
    let t = Torus::new(args.k, args.n)?;
    let sizes = parse_faults(&args.faults)?;
    let condition: SurvivorCondition = args.condition.into();
    let table: Vec<EstimateRow> = if args.faults.contains("..") {
        reliability::sweep_fault_sizes(&t, &sizes, condition, args.trials, args.seed, cfg)?
            .iter()
            .map(report::estimate_row)
            .collect()
    } else {
        let model = FaultModel {
            fault_count: sizes[0],
            condition,
            seed: args.seed,
        };
        vec![report::estimate_row(&reliability::estimate_disconnection(
            &t,
            &model,
            args.trials,
            cfg,
        )?)]
    };
    println!("condition: {}   trials per size: {}", condition.label(), args.trials);
    for row in &table {
        println!(
            "f={:<3} accepted={:<8} disconnected={:<8} p={:.6} wilson=[{:.6}, {:.6}]",
            row.fault_count,
            row.accepted,
            row.disconnected,
            row.point_estimate,
            row.wilson_low,
            row.wilson_high
        );
    }
    if let Some(path) = &args.csv {
        write_file(path, &report::csv_table(&table))?;
    }
    Ok((
        TorusParams { k: args.k, n: args.n },
        Payload::Simulate { table },
    ))
}

fn cmd_export(args: &ExportArgs) -> Result<(TorusParams, Payload), CliError> {
    let t = Torus::new(args.k, args.n)?;
    let (format, content) = match args.format {
        FormatArg::Dot => ("dot", report::render_dot(&t)),
        FormatArg::Edgelist => ("edgelist", report::render_edgelist(&t)),
    };
    match &args.out {
        Some(path) => {
            write_file(path, &content)?;
            println!(
                "wrote {} edges ({} vertices) to {}",
                t.edge_count(),
                t.vertex_count(),
                path.display()
            );
        }
        None => print!("{content}"),
    }
    let meta = ExportMeta {
        format: format.to_string(),
        path: args.out.as_ref().map(|p| p.display().to_string()),
        vertex_count: t.vertex_count(),
        edge_count: t.edge_count(),
    };
    Ok((
        TorusParams { k: args.k, n: args.n },
        Payload::Export { meta },
    ))
}
