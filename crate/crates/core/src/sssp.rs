//! Single-source shortest paths for all flows.
//!
//! [`solve_sssp_af_unit`] maintains one persistent shortest-path tree for
//! unit-cost graphs and repairs it as the flow level rises.
//! [`solve_sssp_af_int`] runs a Dijkstra-style label-setting loop over
//! `(vertex, flow)` labels sharing a single monotone queue, so the distance
//! range is scanned once for all flows together.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cost, FlowIdx, Graph, Vertex};
use crate::pareto::SourceLists;
use crate::pqueue::{Backend, CbsParams, MinQueue, QueueError, QueueSpec, QueueStats};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("source vertex {s} out of range 1..={n}")]
    SourceOutOfRange { s: Vertex, n: usize },
    #[error("edge {src}->{dst} has cost {cost}; the unit-cost solver needs every cost to be 1")]
    NonUnitCost {
        src: Vertex,
        dst: Vertex,
        cost: Cost,
    },
    #[error("all-pairs label table needs {required} bytes, budget is {budget} bytes")]
    MemoryBudget { required: u64, budget: u64 },
    #[error("queue contract violated: {0}")]
    Queue(#[from] QueueError),
}

/// Operation counters of one solver run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Edges examined: incoming edges for the unit-cost solver, outgoing
    /// edges for the label-setting solvers.
    pub edge_inspections: u64,
    pub spt_cuts: u64,
    pub spt_adds: u64,
    /// Relaxations dropped because they exceed the longest simple-path cost.
    pub pruned: u64,
    pub records: u64,
    pub queue: QueueStats,
}

impl SolveStats {
    pub fn absorb(&mut self, other: &SolveStats) {
        self.edge_inspections += other.edge_inspections;
        self.spt_cuts += other.spt_cuts;
        self.spt_adds += other.spt_adds;
        self.pruned += other.pruned;
        self.records += other.records;
        let (q, o) = (&mut self.queue, &other.queue);
        q.inserts += o.inserts;
        q.decrease_keys += o.decrease_keys;
        q.delete_mins += o.delete_mins;
        q.slot_visits += o.slot_visits;
        q.cascades += o.cascades;
        q.cascade_moves += o.cascade_moves;
    }
}

#[derive(Debug, Clone)]
pub struct SsspRun {
    pub lists: SourceLists,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub backend: Backend,
    pub cbs_override: Option<CbsParams>,
}

impl From<Backend> for SolveOptions {
    fn from(backend: Backend) -> Self {
        SolveOptions {
            backend,
            cbs_override: None,
        }
    }
}

pub(crate) fn check_source(g: &Graph, s: Vertex) -> Result<(), SolveError> {
    if g.check_vertex(s) {
        Ok(())
    } else {
        Err(SolveError::SourceOutOfRange { s, n: g.n() })
    }
}

/// Largest distance of any simple path; labels above it can never be useful.
pub(crate) fn simple_path_bound(g: &Graph) -> Cost {
    (g.n().saturating_sub(1) as Cost).saturating_mul(g.c_max())
}

const FLOW_INF: FlowIdx = FlowIdx::MAX;

/// Unit-cost solver: iterate flows upward, cutting tree vertices whose
/// bottleneck no longer carries the flow and re-attaching them one distance
/// step at a time through the distance buckets `1..n`.
pub fn solve_sssp_af_unit(g: &Graph, s: Vertex) -> Result<SsspRun, SolveError> {
    check_source(g, s)?;
    if let Some(e) = g.edges().iter().find(|e| e.cost != 1) {
        return Err(SolveError::NonUnitCost {
            src: e.src,
            dst: e.dst,
            cost: e.cost,
        });
    }
    let n = g.n();
    let flows = g.flow_count();
    let mut stats = SolveStats::default();
    let mut out = SourceLists::new(s, n);
    out.list_mut(s).emit(0, flows, None);

    let si = s as usize;
    let mut bottleneck = vec![0 as FlowIdx; n + 1];
    let mut dist = vec![0usize; n + 1];
    let mut parent: Vec<Option<Vertex>> = vec![None; n + 1];
    let mut in_tree = vec![false; n + 1];
    let mut dead = vec![false; n + 1];
    bottleneck[si] = FLOW_INF;
    in_tree[si] = true;
    let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); n.max(1)];

    // next distance for v, or dead once it would exceed n - 1
    let requeue = |v: usize, dist: &mut [usize], dead: &mut [bool], buckets: &mut [Vec<Vertex>]| {
        dist[v] += 1;
        if dist[v] > n - 1 {
            dead[v] = true;
        } else {
            buckets[dist[v]].push(v as Vertex);
        }
    };

    for f in 1..=flows {
        for v in 1..=n {
            if v == si || dead[v] || bottleneck[v] >= f {
                continue;
            }
            if in_tree[v] {
                in_tree[v] = false;
                parent[v] = None;
                stats.spt_cuts += 1;
            }
            requeue(v, &mut dist, &mut dead, &mut buckets);
        }
        for i in 1..n {
            while let Some(v) = buckets[i].pop() {
                let vi = v as usize;
                for e in g.in_edges(v) {
                    stats.edge_inspections += 1;
                    let u = e.src as usize;
                    if in_tree[u] && dist[u] + 1 == dist[vi] {
                        let b = e.cap.min(bottleneck[u]);
                        if b > bottleneck[vi] {
                            bottleneck[vi] = b;
                            parent[vi] = Some(e.src);
                            in_tree[vi] = true;
                        }
                    }
                }
                if in_tree[vi] {
                    stats.spt_adds += 1;
                    out.list_mut(v)
                        .emit(dist[vi] as Cost, bottleneck[vi], parent[vi]);
                } else {
                    requeue(vi, &mut dist, &mut dead, &mut buckets);
                }
            }
        }
    }
    stats.records = out.record_count() as u64;
    Ok(SsspRun { lists: out, stats })
}

/// Label-setting solver over `(vertex, flow)` labels with the requested queue.
pub fn solve_sssp_af_int(
    g: &Graph,
    s: Vertex,
    opts: impl Into<SolveOptions>,
) -> Result<SsspRun, SolveError> {
    let opts = opts.into();
    check_source(g, s)?;
    let n = g.n();
    let flows = g.flow_count() as usize;
    let labels = n * flows;
    let seed = labels;
    let spec = QueueSpec {
        identity_space: labels + 1,
        max_key: simple_path_bound(g),
        window: g.c_max(),
        item_count: (g.m() as u64).max(1) * n as u64,
        cbs_override: opts.cbs_override,
    };
    let mut q = spec.build(opts.backend);
    let key_limit = spec.max_key;
    let label = |v: Vertex, f: FlowIdx| (v as usize - 1) * flows + (f as usize - 1);

    let mut dist = vec![Cost::MAX; labels];
    let mut pred = vec![0 as Vertex; labels];
    let mut stats = SolveStats::default();
    let mut out = SourceLists::new(s, n);

    q.insert(seed, 0)?;
    while let Some((id, d)) = q.delete_min() {
        let (v, f) = if id == seed {
            (s, FLOW_INF)
        } else {
            ((id / flows) as Vertex + 1, (id % flows) as FlowIdx + 1)
        };
        for e in g.out_edges(v) {
            stats.edge_inspections += 1;
            if e.dst == s {
                continue;
            }
            let f2 = f.min(e.cap);
            let d2 = d + e.cost;
            if d2 > key_limit {
                stats.pruned += 1;
                continue;
            }
            let to = label(e.dst, f2);
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
        let (emit_f, emit_pred) = if id == seed {
            (flows as FlowIdx, None)
        } else {
            (f, Some(pred[id]))
        };
        out.list_mut(v).emit(d, emit_f, emit_pred);
    }
    if flows == 0 {
        // no edges: the seed was still extracted and recorded with flow 0
        debug_assert_eq!(out.list(s).len(), 1);
    }
    stats.records = out.record_count() as u64;
    stats.queue = q.stats();
    Ok(SsspRun { lists: out, stats })
}

/// Unit-cost solver when every edge costs 1 (and `force_int` is off),
/// label-setting solver otherwise.
pub fn solve_sssp_af_auto(
    g: &Graph,
    s: Vertex,
    opts: impl Into<SolveOptions>,
    force_int: bool,
) -> Result<SsspRun, SolveError> {
    if !force_int && g.is_unit_cost() {
        solve_sssp_af_unit(g, s)
    } else {
        solve_sssp_af_int(g, s, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    const G1: &str = "4 5\n1 2 1 5\n2 4 1 5\n1 3 1 10\n3 4 2 10\n1 4 5 20\n";
    const G2: &str = "5 5\n1 2 1 3\n2 4 1 3\n1 3 1 7\n3 5 1 7\n5 4 1 7\n";

    fn records(run: &SsspRun, v: Vertex) -> Vec<(Cost, FlowIdx, Option<Vertex>)> {
        run.lists
            .list(v)
            .records()
            .iter()
            .map(|r| (r.d, r.f, r.pred))
            .collect()
    }

    #[test]
    fn g1_integer_costs_all_backends() {
        let g = parse_graph(G1).unwrap();
        for b in Backend::ALL {
            let run = solve_sssp_af_int(&g, 1, b).unwrap();
            assert_eq!(
                records(&run, 4),
                vec![(2, 1, Some(2)), (3, 2, Some(3)), (5, 3, Some(1))],
                "{b}"
            );
            assert_eq!(run.lists.list(2).pairs(), vec![(1, 1)]);
            assert_eq!(run.lists.list(3).pairs(), vec![(1, 2)]);
            assert_eq!(records(&run, 1), vec![(0, 3, None)]);
        }
    }

    #[test]
    fn g1_paths() {
        let g = parse_graph(G1).unwrap();
        let run = solve_sssp_af_int(&g, 1, Backend::OneLevel).unwrap();
        assert_eq!(run.lists.reconstruct_path(4, 2), Ok(Some(vec![1, 3, 4])));
        assert_eq!(run.lists.reconstruct_path(4, 1), Ok(Some(vec![1, 2, 4])));
        assert_eq!(run.lists.reconstruct_path(4, 3), Ok(Some(vec![1, 4])));
        assert_eq!(run.lists.reconstruct_path(1, 2), Ok(Some(vec![1])));
        assert_eq!(run.lists.reconstruct_path(4, 4), Ok(None));
    }

    #[test]
    fn single_edge_serves_every_flow() {
        let g = parse_graph("2 1\n1 2 2 9").unwrap();
        let run = solve_sssp_af_int(&g, 1, Backend::Cascading).unwrap();
        assert_eq!(run.lists.list(2).pairs(), vec![(2, 1)]);
    }

    #[test]
    fn unit_costs_g2() {
        let g = parse_graph(G2).unwrap();
        let run = solve_sssp_af_unit(&g, 1).unwrap();
        // flow indices: 3 -> 1, 7 -> 2
        assert_eq!(records(&run, 4), vec![(2, 1, Some(2)), (3, 2, Some(5))]);
        assert_eq!(run.lists.reconstruct_path(4, 2), Ok(Some(vec![1, 3, 5, 4])));
        let int = solve_sssp_af_int(&g, 1, Backend::Heap).unwrap();
        assert_eq!(int.lists.pairs(), run.lists.pairs());
    }

    #[test]
    fn unit_single_vertex_and_unreachable() {
        let g = parse_graph("1 0\n").unwrap();
        let run = solve_sssp_af_unit(&g, 1).unwrap();
        assert_eq!(records(&run, 1), vec![(0, 0, None)]);
        let g = parse_graph("2 1\n1 2 1 4").unwrap();
        let run = solve_sssp_af_unit(&g, 2).unwrap();
        assert!(run.lists.list(1).is_empty());
        assert_eq!(run.lists.list(2).pairs(), vec![(0, 1)]);
    }

    #[test]
    fn unit_star() {
        let g = parse_graph("5 4\n1 2 1 1\n1 3 1 2\n1 4 1 3\n1 5 1 4\n").unwrap();
        let run = solve_sssp_af_unit(&g, 1).unwrap();
        for v in 2..=5 {
            assert_eq!(run.lists.list(v).pairs(), vec![(1, v - 1)]);
        }
    }

    #[test]
    fn unit_solver_errors() {
        let g = parse_graph(G1).unwrap();
        assert!(matches!(
            solve_sssp_af_unit(&g, 1),
            Err(SolveError::NonUnitCost { .. })
        ));
        let g = parse_graph(G2).unwrap();
        assert_eq!(
            solve_sssp_af_unit(&g, 6).unwrap_err(),
            SolveError::SourceOutOfRange { s: 6, n: 5 }
        );
        assert!(solve_sssp_af_int(&g, 0, Backend::Heap).is_err());
    }

    #[test]
    fn zero_cost_cycles_terminate() {
        let g = parse_graph("3 4\n1 2 0 5\n2 3 0 1\n3 2 0 5\n2 1 0 5\n").unwrap();
        for b in Backend::ALL {
            let run = solve_sssp_af_int(&g, 1, b).unwrap();
            assert_eq!(run.lists.list(2).pairs(), vec![(0, 2)]);
            assert_eq!(run.lists.list(3).pairs(), vec![(0, 1)]);
            assert_eq!(run.lists.reconstruct_path(3, 1), Ok(Some(vec![1, 2, 3])));
        }
    }

    #[test]
    fn empty_graph() {
        let g = parse_graph("3 0\n").unwrap();
        for b in Backend::ALL {
            let run = solve_sssp_af_int(&g, 2, b).unwrap();
            assert_eq!(run.lists.list(2).pairs(), vec![(0, 0)]);
            assert!(run.lists.list(1).is_empty() && run.lists.list(3).is_empty());
        }
    }
}
