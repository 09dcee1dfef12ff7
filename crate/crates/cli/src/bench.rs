use std::path::PathBuf;

use clap::{Args, ValueEnum};

use spaf::bench::{
    affine_fit, format_csv, format_text, loglog_slope, measure, scaled_cost_family, staircase_unit,
    BenchRow, Solver,
};
use spaf::graph::Cost;
use spaf::Backend;

use crate::{read_graph, CliError};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Unit-cost staircase graphs, one per `--sizes` entry, m = 4n.
    Unit,
    /// One random topology with costs scaled by each `--costs` entry.
    Cost,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Measure this graph instead of a generated family.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    family: Family,
    #[arg(long, value_delimiter = ',', default_values_t = [50usize, 100, 200, 400])]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1000])]
    costs: Vec<Cost>,
    /// Vertex count of the cost family; it has 4n edges.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value = "one-level")]
    backend: Backend,
    /// Print fitted growth of the counters after the table.
    #[arg(long)]
    counters: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: TableFormat,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn fits(rows: &[BenchRow]) -> Vec<String> {
    let mut out = Vec::new();
    let unit: Vec<&BenchRow> = rows.iter().filter(|r| r.family == "unit").collect();
    if unit.len() >= 2 {
        let xs: Vec<f64> = unit.iter().map(|r| (r.m * r.n) as f64).collect();
        let ys: Vec<f64> = unit
            .iter()
            .map(|r| r.stats.edge_inspections as f64)
            .collect();
        let worst = unit
            .iter()
            .map(|r| r.stats.edge_inspections as f64 / (r.m * r.n.saturating_sub(1)).max(1) as f64)
            .fold(0.0, f64::max);
        out.push(format!(
            "unit: edge_inspections ~ (m*n)^{:.3}; max inspections / (m*(n-1)) = {worst:.3}",
            loglog_slope(&xs, &ys)
        ));
    }
    let cost: Vec<&BenchRow> = rows.iter().filter(|r| r.family == "cost").collect();
    if cost.len() >= 2 {
        let xs: Vec<f64> = cost.iter().map(|r| (r.n as u64 * r.c_max) as f64).collect();
        let ys: Vec<f64> = cost
            .iter()
            .map(|r| r.stats.queue.slot_visits as f64)
            .collect();
        let (a, b, worst) = affine_fit(&xs, &ys);
        out.push(format!(
            "cost: slot_visits ~ {a:.1} + {b:.5}*n*c; worst relative residual {:.2}%",
            worst * 100.0
        ));
    }
    out
}

pub fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    if let Some(path) = &a.input {
        let g = read_graph(path)?;
        let solver = if g.is_unit_cost() {
            Solver::Unit
        } else {
            Solver::Int(a.backend)
        };
        rows.push(measure("input", &g, solver)?);
    } else {
        if matches!(a.family, Family::Unit | Family::All) {
            for &n in &a.sizes {
                if n < 2 {
                    return Err(CliError::Flags(format!(
                        "--sizes entries must be at least 2, got {n}"
                    )));
                }
                rows.push(measure("unit", &staircase_unit(n, a.seed), Solver::Unit)?);
            }
        }
        if matches!(a.family, Family::Cost | Family::All) {
            if a.n < 2 {
                return Err(CliError::Flags("--n must be at least 2".into()));
            }
            for g in scaled_cost_family(a.n, 4 * a.n, &a.costs, a.seed) {
                rows.push(measure("cost", &g, Solver::Int(a.backend))?);
            }
        }
    }
    let table = match a.format {
        TableFormat::Text => format_text(&rows),
        TableFormat::Csv => format_csv(&rows),
    };
    print!("{table}");
    if a.counters {
        for line in fits(&rows) {
            println!("{line}");
        }
    }
    Ok(())
}
