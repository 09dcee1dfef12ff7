//! `spaf`: solve, query, verify and benchmark shortest paths for all flows.

mod bench;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use spaf::apsp::{solve_apsp_af, solve_apsp_af_by_sources, MemoryBudget};
use spaf::graph::{build_flow_index, parse_graph, Graph, Vertex};
use spaf::io::{from_binary, from_json, to_binary, to_json, Solved};
use spaf::{solve_sssp_af_auto, Backend, SolveError, SolveStats};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Flags(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    NoPath(String),
    #[error("{0}")]
    Disagree(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Flags(_) => 2,
            CliError::Budget(_) => 3,
            CliError::NoPath(_) => 4,
            CliError::Disagree(_) => 5,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::MemoryBudget { .. } => CliError::Budget(format!(
                "{e}; rerun with --by-sources or raise --mem-budget"
            )),
            SolveError::SourceOutOfRange { .. } | SolveError::NonUnitCost { .. } => {
                CliError::Flags(e.to_string())
            }
            SolveError::Queue(_) => CliError::Io(format!("internal error: {e}")),
        }
    }
}

#[derive(Parser)]
#[command(name = "spaf", version, about = "Shortest paths for all flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve from one source or for all pairs and write the Pareto lists.
    Solve(SolveArgs),
    /// Shortest path able to carry a flow demand.
    Query(QueryArgs),
    /// Differential checks against the brute-force oracles.
    Verify(verify::VerifyArgs),
    /// Operation counters over generated instance families.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Binary,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["source", "all_pairs"]))]
struct SolveArgs {
    /// Graph file in the `n m` / `src dst cost cap` text format.
    input: PathBuf,
    #[arg(long)]
    source: Option<Vertex>,
    #[arg(long)]
    all_pairs: bool,
    #[arg(long, default_value = "one-level")]
    backend: Backend,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Use the label-setting solver even when every cost is 1.
    #[arg(long)]
    force_int: bool,
    /// All pairs as independent single-source runs (no shared label table).
    #[arg(long, requires = "all_pairs")]
    by_sources: bool,
    /// Label table budget in bytes for --all-pairs; overrides SPAF_MEM_BUDGET.
    #[arg(long)]
    mem_budget: Option<u64>,
}

#[derive(Args)]
struct QueryArgs {
    /// Graph file, or a result written by `spaf solve` (JSON or binary).
    input: PathBuf,
    #[arg(long)]
    source: Vertex,
    #[arg(long)]
    dest: Vertex,
    /// Flow demand; rounded up to the next capacity present in the graph.
    #[arg(long)]
    flow: f64,
    #[arg(long, default_value = "one-level")]
    backend: Backend,
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn summary(g: &Graph, solver: &str, s: &SolveStats) -> String {
    let q = &s.queue;
    format!(
        "n={} m={} F={} c={} solver={solver} records={} edge_inspections={} spt_cuts={} spt_adds={} \
         queue_ops={} slot_visits={} cascades={} cascade_moves={} pruned={}",
        g.n(),
        g.m(),
        g.flow_count(),
        g.c_max(),
        s.records,
        s.edge_inspections,
        s.spt_cuts,
        s.spt_adds,
        q.queue_ops(),
        q.slot_visits,
        q.cascades,
        q.cascade_moves,
        s.pruned
    )
}

fn cmd_solve(a: SolveArgs) -> Result<(), CliError> {
    let g = read_graph(&a.input)?;
    let values = g.flow_index().values().to_vec();
    let (solved, solver, stats) = if a.all_pairs {
        let run = if a.by_sources {
            solve_apsp_af_by_sources(&g, a.backend)?
        } else {
            let budget = a
                .mem_budget
                .map(MemoryBudget)
                .unwrap_or_else(MemoryBudget::from_env);
            solve_apsp_af(&g, a.backend, budget)?
        };
        let mode = if a.by_sources {
            "by-sources"
        } else {
            "all-pairs"
        };
        (
            Solved::all_pairs(values, run.pairs),
            format!("{mode}/{}", a.backend),
            run.stats,
        )
    } else {
        let s = a.source.expect("clap enforces the mode group");
        if !g.check_vertex(s) {
            return Err(CliError::Flags(format!(
                "--source {s} out of range 1..={}",
                g.n()
            )));
        }
        let unit = !a.force_int && g.is_unit_cost();
        let run = solve_sssp_af_auto(&g, s, a.backend, a.force_int)?;
        let solver = if unit {
            "unit".to_string()
        } else {
            format!("int/{}", a.backend)
        };
        (Solved::single(values, run.lists), solver, run.stats)
    };
    let bytes = match a.format {
        Format::Json => to_json(&solved).into_bytes(),
        Format::Binary => to_binary(&solved),
    };
    write_output(a.output.as_deref(), &bytes)?;
    eprintln!("{}", summary(&g, &solver, &stats));
    Ok(())
}

/// Result file contents, or a graph solved from `source` on the spot.
fn load_for_query(a: &QueryArgs) -> Result<Solved, CliError> {
    let bytes =
        fs::read(&a.input).map_err(|e| CliError::Parse(format!("{}: {e}", a.input.display())))?;
    let shown = a.input.display();
    if bytes.starts_with(spaf::io::MAGIC) {
        return from_binary(&bytes).map_err(|e| CliError::Parse(format!("{shown}: {e}")));
    }
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Parse(format!("{shown}: not UTF-8 text")))?;
    if text.trim_start().starts_with('{') {
        return from_json(&text).map_err(|e| CliError::Parse(format!("{shown}: {e}")));
    }
    let g = parse_graph(&text).map_err(|e| CliError::Parse(format!("{shown}: {e}")))?;
    if !g.check_vertex(a.source) {
        return Err(CliError::Flags(format!(
            "--source {} out of range 1..={}",
            a.source,
            g.n()
        )));
    }
    let run = solve_sssp_af_auto(&g, a.source, a.backend, false)?;
    Ok(Solved::single(g.flow_index().values().to_vec(), run.lists))
}

fn cmd_query(a: QueryArgs) -> Result<(), CliError> {
    if !a.flow.is_finite() || a.flow < 0.0 {
        return Err(CliError::Flags(format!(
            "--flow must be a finite non-negative number, got {}",
            a.flow
        )));
    }
    let solved = load_for_query(&a)?;
    let row = solved
        .row(a.source)
        .ok_or_else(|| CliError::Flags(format!("result holds no lists for source {}", a.source)))?;
    if a.dest == 0 || a.dest as usize > row.n() {
        return Err(CliError::Flags(format!(
            "--dest {} out of range 1..={}",
            a.dest,
            row.n()
        )));
    }
    if a.source == a.dest {
        // the empty path carries any demand
        println!("distance 0\npath {}", a.source);
        return Ok(());
    }
    let no_path = || {
        CliError::NoPath(format!(
            "NO-PATH: no path from {} to {} carries flow {}",
            a.source, a.dest, a.flow
        ))
    };
    let f = build_flow_index(&solved.flow_values)
        .ceil_index(a.flow)
        .ok_or_else(no_path)?;
    let d = row.best_distance(a.dest, f).ok_or_else(no_path)?;
    let path = row
        .reconstruct_path(a.dest, f)
        .map_err(|e| CliError::Io(format!("corrupt result: {e}")))?
        .ok_or_else(no_path)?;
    let p: Vec<String> = path.iter().map(Vertex::to_string).collect();
    println!("distance {d}\npath {}", p.join(" "));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Query(a) => cmd_query(a),
        Command::Verify(a) => verify::cmd_verify(a),
        Command::Bench(a) => bench::cmd_bench(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spaf: {e}");
            ExitCode::from(e.code())
        }
    }
}
