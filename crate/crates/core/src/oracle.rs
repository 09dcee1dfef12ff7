//! Brute-force reference solvers and the random test corpus.
//!
//! Nothing here touches the bucket queues: distances come from a plain
//! `BinaryHeap` Dijkstra (or BFS for unit costs) on each capacity-filtered
//! subgraph, or from exhaustive simple-path enumeration.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Cost, Edge, FlowIdx, Graph, Vertex};
use crate::pareto::{ParetoList, Record, SourceLists};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("source vertex {s} out of range 1..={n}")]
    SourceOutOfRange { s: Vertex, n: usize },
    #[error("path enumeration is limited to {max} vertices, graph has {n}")]
    TooLarge { n: usize, max: usize },
}

pub const ENUMERATION_LIMIT: usize = 10;

fn check_source(g: &Graph, s: Vertex) -> Result<(), OracleError> {
    if g.check_vertex(s) {
        Ok(())
    } else {
        Err(OracleError::SourceOutOfRange { s, n: g.n() })
    }
}

/// Shortest distances and predecessors from `s` using only edges with
/// capacity index at least `f` (`f = 0` keeps every edge).
pub fn dijkstra_at_flow(
    g: &Graph,
    s: Vertex,
    f: FlowIdx,
) -> (Vec<Option<Cost>>, Vec<Option<Vertex>>) {
    let n = g.n();
    let mut dist: Vec<Option<Cost>> = vec![None; n + 1];
    let mut pred: Vec<Option<Vertex>> = vec![None; n + 1];
    dist[s as usize] = Some(0);
    if g.is_unit_cost() {
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize].unwrap();
            for e in g.out_edges(v).filter(|e| e.cap >= f) {
                if dist[e.dst as usize].is_none() {
                    dist[e.dst as usize] = Some(d + 1);
                    pred[e.dst as usize] = Some(v);
                    queue.push_back(e.dst);
                }
            }
        }
    } else {
        let mut done = vec![false; n + 1];
        let mut heap = BinaryHeap::from([Reverse((0, s))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if std::mem::replace(&mut done[v as usize], true) {
                continue;
            }
            for e in g.out_edges(v).filter(|e| e.cap >= f) {
                let d2 = d + e.cost;
                let w = e.dst as usize;
                if dist[w].is_none_or(|old| d2 < old) {
                    dist[w] = Some(d2);
                    pred[w] = Some(v);
                    heap.push(Reverse((d2, e.dst)));
                }
            }
        }
    }
    (dist, pred)
}

/// One shortest-path computation per flow index on the subgraph of edges that
/// carry it, merged into Pareto lists in increasing flow order.
pub fn straightforward_sssp_af(g: &Graph, s: Vertex) -> Result<SourceLists, OracleError> {
    check_source(g, s)?;
    let flows = g.flow_count();
    let mut out = SourceLists::new(s, g.n());
    out.list_mut(s).emit(0, flows, None);
    for f in 1..=flows {
        let (dist, pred) = dijkstra_at_flow(g, s, f);
        for v in g.vertices().filter(|&v| v != s) {
            if let Some(d) = dist[v as usize] {
                out.list_mut(v).emit(d, f, pred[v as usize]);
            }
        }
    }
    Ok(out)
}

/// Keep the non-dominated pairs: sort by distance, larger flow first, and
/// retain a pair only if its flow beats every shorter one.
pub fn pareto_filter(mut cands: Vec<Record>) -> ParetoList {
    cands.sort_by(|a, b| a.d.cmp(&b.d).then(b.f.cmp(&a.f)));
    let mut kept: Vec<Record> = Vec::new();
    for c in cands {
        if kept.last().is_none_or(|k| c.f > k.f) {
            kept.push(c);
        }
    }
    ParetoList::from_records(kept)
}

/// Every simple path from `s`, reduced to its `(cost, bottleneck)` pair.
pub fn enumerate_paths_af(g: &Graph, s: Vertex) -> Result<SourceLists, OracleError> {
    check_source(g, s)?;
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            max: ENUMERATION_LIMIT,
        });
    }
    let mut cands: Vec<Vec<Record>> = vec![Vec::new(); n + 1];
    cands[s as usize].push(Record {
        d: 0,
        f: g.flow_count(),
        pred: None,
    });
    let mut on_path = vec![false; n + 1];
    on_path[s as usize] = true;

    fn walk(
        g: &Graph,
        v: Vertex,
        d: Cost,
        f: FlowIdx,
        on_path: &mut [bool],
        cands: &mut [Vec<Record>],
    ) {
        for e in g.out_edges(v) {
            let w = e.dst as usize;
            if on_path[w] {
                continue;
            }
            let (d2, f2) = (d + e.cost, f.min(e.cap));
            cands[w].push(Record {
                d: d2,
                f: f2,
                pred: Some(v),
            });
            on_path[w] = true;
            walk(g, e.dst, d2, f2, on_path, cands);
            on_path[w] = false;
        }
    }
    walk(g, s, 0, FlowIdx::MAX, &mut on_path, &mut cands);

    let lists = cands.into_iter().skip(1).map(pareto_filter).collect();
    Ok(SourceLists::from_lists(s, lists))
}

/// The decremental shortcut: compute one shortest-path tree on the full graph,
/// then delete edges from the highest capacity downward, after each deletion
/// patching the distances of vertices whose tree path lost an edge. Every
/// tree seen contributes `(distance, tree-path bottleneck)` candidates.
/// High-capacity edges are gone before the low flows that need them in
/// combination with others are examined, so the result can be wrong.
pub fn naive_decremental(g: &Graph, s: Vertex) -> Result<SourceLists, OracleError> {
    check_source(g, s)?;
    let n = g.n();
    let flows = g.flow_count();
    let mut cands: Vec<Vec<Record>> = vec![Vec::new(); n + 1];
    cands[s as usize].push(Record {
        d: 0,
        f: flows,
        pred: None,
    });
    let mut alive = vec![true; g.m()];
    let mut dist: Vec<Option<Cost>> = vec![None; n + 1];
    // tree edge into each vertex
    let mut tree: Vec<Option<u32>> = vec![None; n + 1];
    dist[s as usize] = Some(0);
    let all: Vec<Vertex> = g.vertices().collect();
    patch(g, &alive, &all, &mut dist, &mut tree);
    record(g, s, &dist, &tree, &mut cands);

    let mut order: Vec<u32> = (0..g.m() as u32).collect();
    order.sort_by_key(|&id| (Reverse(g.edge(id).cap), id));
    for id in order {
        alive[id as usize] = false;
        let dst = g.edge(id).dst;
        if tree[dst as usize] != Some(id) {
            continue;
        }
        // the subtree below the removed edge loses its distances
        let mut affected = vec![dst];
        let mut i = 0;
        while i < affected.len() {
            let v = affected[i];
            dist[v as usize] = None;
            tree[v as usize] = None;
            for &eid in g.out_edge_ids(v) {
                let w = g.edge(eid).dst;
                if tree[w as usize] == Some(eid) {
                    affected.push(w);
                }
            }
            i += 1;
        }
        patch(g, &alive, &affected, &mut dist, &mut tree);
        record(g, s, &dist, &tree, &mut cands);
    }
    let lists = cands.into_iter().skip(1).map(pareto_filter).collect();
    Ok(SourceLists::from_lists(s, lists))
}

/// Dijkstra over `targets`, seeded from their surviving in-edges.
fn patch(
    g: &Graph,
    alive: &[bool],
    targets: &[Vertex],
    dist: &mut [Option<Cost>],
    tree: &mut [Option<u32>],
) {
    let mut heap = BinaryHeap::new();
    for &v in targets {
        for &eid in g.in_edge_ids(v) {
            let e = g.edge(eid);
            if let (true, Some(du)) = (alive[eid as usize], dist[e.src as usize]) {
                relax(e, eid, du, dist, tree, &mut heap);
            }
        }
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v as usize] != Some(d) {
            continue;
        }
        for &eid in g.out_edge_ids(v) {
            if alive[eid as usize] {
                relax(g.edge(eid), eid, d, dist, tree, &mut heap);
            }
        }
    }
}

fn relax(
    e: &Edge,
    eid: u32,
    du: Cost,
    dist: &mut [Option<Cost>],
    tree: &mut [Option<u32>],
    heap: &mut BinaryHeap<Reverse<(Cost, Vertex)>>,
) {
    let d2 = du + e.cost;
    let w = e.dst as usize;
    if dist[w].is_none_or(|old| d2 < old) {
        dist[w] = Some(d2);
        tree[w] = Some(eid);
        heap.push(Reverse((d2, e.dst)));
    }
}

fn record(
    g: &Graph,
    s: Vertex,
    dist: &[Option<Cost>],
    tree: &[Option<u32>],
    cands: &mut [Vec<Record>],
) {
    for v in g.vertices().filter(|&v| v != s) {
        let Some(d) = dist[v as usize] else { continue };
        let mut f = FlowIdx::MAX;
        let mut at = v;
        while at != s {
            let e = g.edge(tree[at as usize].expect("reached vertex has a tree edge"));
            f = f.min(e.cap);
            at = e.src;
        }
        let pred = g.edge(tree[v as usize].unwrap()).src;
        cands[v as usize].push(Record {
            d,
            f,
            pred: Some(pred),
        });
    }
}

/// Source vertex used with [`decremental_counterexample`].
pub const DECREMENTAL_SOURCE: Vertex = 1;

/// Text form of the frozen counterexample, as shipped in
/// `fixtures/decremental.graph`.
pub const DECREMENTAL_GRAPH: &str =
    "4 8\n1 2 10 3.5\n1 3 9 1\n1 4 10 7.75\n2 1 8 7.75\n2 3 1 7.75\n3 4 7 3.5\n4 1 11 4\n4 3 7 0.5\n";

/// A graph on which [`naive_decremental`] from [`DECREMENTAL_SOURCE`]
/// disagrees with [`straightforward_sssp_af`].
pub fn decremental_counterexample() -> Graph {
    crate::graph::parse_graph(DECREMENTAL_GRAPH).expect("frozen fixture parses")
}

/// Shape of randomly generated test graphs.
#[derive(Debug, Clone)]
pub struct CorpusParams {
    pub n: (usize, usize),
    pub edge_prob: (f64, f64),
    pub cost: (Cost, Cost),
    /// Capacities are drawn from this pool; a short pool forces ties.
    pub capacities: Vec<f64>,
    /// Probability of an extra parallel edge next to each generated edge.
    pub parallel_prob: f64,
}

impl CorpusParams {
    pub fn unit() -> CorpusParams {
        CorpusParams {
            n: (2, 10),
            edge_prob: (0.3, 0.8),
            cost: (1, 1),
            capacities: (1..=6).map(f64::from).collect(),
            parallel_prob: 0.05,
        }
    }

    pub fn integer() -> CorpusParams {
        CorpusParams {
            n: (2, 10),
            edge_prob: (0.2, 0.7),
            cost: (0, 12),
            capacities: vec![0.5, 1.0, 1.25, 2.0, 3.5, 4.0, 7.75, 10.0],
            parallel_prob: 0.1,
        }
    }

    pub fn all_pairs() -> CorpusParams {
        CorpusParams {
            n: (1, 8),
            ..CorpusParams::integer()
        }
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, p: &CorpusParams) -> Graph {
    let n = rng.gen_range(p.n.0..=p.n.1);
    let prob = rng.gen_range(p.edge_prob.0..=p.edge_prob.1);
    // a per-graph subset of the capacity pool keeps the flow count varied
    let take = rng.gen_range(1..=p.capacities.len());
    let pool: Vec<f64> = p.capacities.choose_multiple(rng, take).copied().collect();
    let mut edges = Vec::new();
    for u in 1..=n as Vertex {
        for v in 1..=n as Vertex {
            if u == v || !rng.gen_bool(prob) {
                continue;
            }
            let copies = if rng.gen_bool(p.parallel_prob) { 2 } else { 1 };
            for _ in 0..copies {
                let cost = rng.gen_range(p.cost.0..=p.cost.1);
                edges.push((u, v, cost, *pool.choose(rng).unwrap()));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are valid")
}

/// Instance `i` of a corpus depends only on `(seed, i)`, so any failing
/// instance can be regenerated on its own.
pub fn corpus_instance(seed: u64, i: u64, p: &CorpusParams) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    random_graph(&mut rng, p)
}

pub fn corpus(seed: u64, count: usize, p: &CorpusParams) -> Vec<Graph> {
    (0..count as u64)
        .map(|i| corpus_instance(seed, i, p))
        .collect()
}
