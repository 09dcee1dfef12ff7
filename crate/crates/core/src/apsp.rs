//! All-pairs shortest paths for all flows.
//!
//! [`solve_apsp_af`] runs one label-setting loop over `(source, vertex, flow)`
//! labels with a single shared queue. [`solve_apsp_af_by_sources`] instead
//! runs the single-source solver from every vertex in parallel.

use rayon::prelude::*;

use crate::graph::{Cost, FlowIdx, Graph, Vertex};
use crate::pareto::SourceLists;
use crate::pqueue::{MinQueue, QueueSpec};
use crate::sssp::{simple_path_bound, solve_sssp_af_int, SolveError, SolveOptions, SolveStats};

/// Approximate bytes held per `(source, vertex, flow)` label: distance,
/// predecessor and the queue's per-identity node.
pub const BYTES_PER_LABEL: u64 = 40;

pub const DEFAULT_BUDGET: u64 = 2 << 30;

/// Environment variable overriding [`DEFAULT_BUDGET`], in bytes.
pub const BUDGET_ENV: &str = "SPAF_MEM_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget(pub u64);

impl MemoryBudget {
    /// Budget from `SPAF_MEM_BUDGET` when set and valid, otherwise the default.
    pub fn from_env() -> MemoryBudget {
        let v = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok());
        MemoryBudget(v.unwrap_or(DEFAULT_BUDGET))
    }

    pub fn unlimited() -> MemoryBudget {
        MemoryBudget(u64::MAX)
    }
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget(DEFAULT_BUDGET)
    }
}

pub fn label_table_bytes(g: &Graph) -> u64 {
    let n = g.n() as u64;
    (g.flow_count() as u64)
        .saturating_mul(n)
        .saturating_mul(n)
        .saturating_mul(BYTES_PER_LABEL)
}

fn check_budget(g: &Graph, budget: MemoryBudget) -> Result<(), SolveError> {
    let required = label_table_bytes(g);
    if required > budget.0 {
        return Err(SolveError::MemoryBudget {
            required,
            budget: budget.0,
        });
    }
    Ok(())
}

/// One [`SourceLists`] per source, indexed by source vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllPairs {
    rows: Vec<SourceLists>,
}

impl AllPairs {
    pub fn from_rows(rows: Vec<SourceLists>) -> AllPairs {
        AllPairs { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, s: Vertex) -> &SourceLists {
        &self.rows[s as usize - 1]
    }

    pub fn rows(&self) -> &[SourceLists] {
        &self.rows
    }

    pub fn record_count(&self) -> usize {
        self.rows.iter().map(SourceLists::record_count).sum()
    }
}

#[derive(Debug, Clone)]
pub struct ApspRun {
    pub pairs: AllPairs,
    pub stats: SolveStats,
}

pub fn solve_apsp_af(
    g: &Graph,
    opts: impl Into<SolveOptions>,
    budget: MemoryBudget,
) -> Result<ApspRun, SolveError> {
    let opts = opts.into();
    check_budget(g, budget)?;
    let n = g.n();
    let flows = g.flow_count() as usize;
    let labels = n * n * flows;
    let spec = QueueSpec {
        identity_space: labels + n,
        max_key: simple_path_bound(g),
        window: g.c_max(),
        item_count: (g.m() as u64).max(1) * (n as u64) * (n as u64),
        cbs_override: opts.cbs_override,
    };
    let mut q = spec.build(opts.backend);
    let key_limit = spec.max_key;
    let label = |u: Vertex, v: Vertex, f: FlowIdx| {
        ((u as usize - 1) * n + (v as usize - 1)) * flows + (f as usize - 1)
    };

    let mut dist = vec![Cost::MAX; labels];
    let mut pred = vec![0 as Vertex; labels];
    let mut stats = SolveStats::default();
    let mut rows: Vec<SourceLists> = (1..=n as Vertex).map(|s| SourceLists::new(s, n)).collect();

    for v in 0..n {
        q.insert(labels + v, 0)?;
    }
    while let Some((id, d)) = q.delete_min() {
        let (u, v, f, seed) = if id >= labels {
            let v = (id - labels) as Vertex + 1;
            (v, v, FlowIdx::MAX, true)
        } else {
            let f = (id % flows) as FlowIdx + 1;
            let uv = id / flows;
            ((uv / n) as Vertex + 1, (uv % n) as Vertex + 1, f, false)
        };
        for e in g.out_edges(v) {
            stats.edge_inspections += 1;
            if e.dst == u {
                continue;
            }
            let d2 = d + e.cost;
            if d2 > key_limit {
                stats.pruned += 1;
                continue;
            }
            let to = label(u, e.dst, f.min(e.cap));
            if d2 < dist[to] {
                if dist[to] == Cost::MAX {
                    q.insert(to, d2)?;
                } else {
                    q.decrease_key(to, d2)?;
                }
                dist[to] = d2;
                pred[to] = v;
            }
        }
        let list = rows[u as usize - 1].list_mut(v);
        if seed {
            list.emit(0, flows as FlowIdx, None);
        } else {
            list.emit(d, f, Some(pred[id]));
        }
    }
    let pairs = AllPairs::from_rows(rows);
    stats.records = pairs.record_count() as u64;
    stats.queue = q.stats();
    Ok(ApspRun { pairs, stats })
}

/// Independent single-source runs from every vertex, in parallel. Rows are
/// assembled in source order, so the result does not depend on scheduling.
pub fn solve_apsp_af_by_sources(
    g: &Graph,
    opts: impl Into<SolveOptions>,
) -> Result<ApspRun, SolveError> {
    let opts = opts.into();
    let runs: Vec<_> = (1..=g.n() as Vertex)
        .into_par_iter()
        .map(|s| solve_sssp_af_int(g, s, opts))
        .collect::<Result<_, _>>()?;
    let mut stats = SolveStats::default();
    let mut rows = Vec::with_capacity(runs.len());
    for run in runs {
        stats.absorb(&run.stats);
        rows.push(run.lists);
    }
    Ok(ApspRun {
        pairs: AllPairs::from_rows(rows),
        stats,
    })
}
