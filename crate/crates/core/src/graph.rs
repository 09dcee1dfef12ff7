//! Directed multigraph with integer costs and discretized capacities.
//!
//! Vertices are 1-based (`1..=n`) everywhere in the public API. Capacities are
//! only ever compared, so they are replaced on edges by their rank among the
//! distinct capacity values ("flow index", `1..=F`) as soon as a graph is built.

use std::fmt::Write as _;

use thiserror::Error;

pub type Vertex = u32;
pub type FlowIdx = u32;
pub type Cost = u64;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: negative cost {cost}")]
    NegativeCost { line: usize, cost: i64 },
    #[error("line {line}: capacity {cap} is not a finite non-negative number")]
    BadCapacity { line: usize, cap: f64 },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("flow index {f} out of range 1..={max}")]
    FlowOutOfRange { f: FlowIdx, max: FlowIdx },
}

/// Sorted distinct capacities; flow index `i` (1-based) names `values[i - 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowIndex {
    values: Vec<f64>,
}

impl FlowIndex {
    /// Sort and deduplicate; callers guarantee every capacity is finite and non-negative.
    pub fn build(capacities: &[f64]) -> FlowIndex {
        let mut values = capacities.to_vec();
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite capacities"));
        values.dedup();
        FlowIndex { values }
    }

    pub fn count(&self) -> FlowIdx {
        self.values.len() as FlowIdx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn index_of(&self, cap: f64) -> Option<FlowIdx> {
        self.values
            .binary_search_by(|v| v.partial_cmp(&cap).unwrap_or(std::cmp::Ordering::Less))
            .ok()
            .map(|i| i as FlowIdx + 1)
    }

    pub fn value_of(&self, f: FlowIdx) -> Option<f64> {
        if f == 0 {
            return None;
        }
        self.values.get(f as usize - 1).copied()
    }

    /// Smallest flow index whose capacity is at least `demand`.
    pub fn ceil_index(&self, demand: f64) -> Option<FlowIdx> {
        let i = self.values.partition_point(|&v| v < demand);
        (i < self.values.len()).then_some(i as FlowIdx + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: Vertex,
    pub dst: Vertex,
    pub cost: Cost,
    pub cap: FlowIdx,
}

/// Immutable graph with forward and reverse adjacency in CSR form.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    out_start: Vec<usize>,
    out_edges: Vec<u32>,
    in_start: Vec<usize>,
    in_edges: Vec<u32>,
    c_max: Cost,
    flow_index: FlowIndex,
}

fn csr(n: usize, edges: &[Edge], key: impl Fn(&Edge) -> Vertex) -> (Vec<usize>, Vec<u32>) {
    let mut start = vec![0usize; n + 2];
    for e in edges {
        start[key(e) as usize + 1] += 1;
    }
    for v in 1..start.len() {
        start[v] += start[v - 1];
    }
    let mut fill = start.clone();
    let mut ids = vec![0u32; edges.len()];
    for (id, e) in edges.iter().enumerate() {
        let slot = &mut fill[key(e) as usize];
        ids[*slot] = id as u32;
        *slot += 1;
    }
    (start, ids)
}

impl Graph {
    /// Build from edges that already carry flow indices into `flow_index`.
    pub fn from_indexed(n: usize, edges: Vec<Edge>, flow_index: FlowIndex) -> Graph {
        for e in &edges {
            debug_assert!(e.src >= 1 && e.src as usize <= n && e.dst >= 1 && e.dst as usize <= n);
            debug_assert!(e.cap >= 1 && e.cap <= flow_index.count());
        }
        let (out_start, out_edges) = csr(n, &edges, |e| e.src);
        let (in_start, in_edges) = csr(n, &edges, |e| e.dst);
        let c_max = edges.iter().map(|e| e.cost).max().unwrap_or(0);
        Graph {
            n,
            edges,
            out_start,
            out_edges,
            in_start,
            in_edges,
            c_max,
            flow_index,
        }
    }

    /// Build from `(src, dst, cost, capacity)` tuples with real capacities.
    pub fn from_edges(n: usize, raw: &[(Vertex, Vertex, Cost, f64)]) -> Result<Graph, GraphError> {
        for (i, &(src, dst, _, cap)) in raw.iter().enumerate() {
            let line = i + 2;
            for v in [src, dst] {
                if v == 0 || v as usize > n {
                    return Err(GraphError::VertexOutOfRange {
                        line,
                        vertex: v as i64,
                        n,
                    });
                }
            }
            if !cap.is_finite() || cap < 0.0 {
                return Err(GraphError::BadCapacity { line, cap });
            }
        }
        let caps: Vec<f64> = raw.iter().map(|e| e.3).collect();
        let flow_index = FlowIndex::build(&caps);
        let edges = raw
            .iter()
            .map(|&(src, dst, cost, cap)| Edge {
                src,
                dst,
                cost,
                cap: flow_index.index_of(cap).expect("capacity indexed"),
            })
            .collect();
        Ok(Graph::from_indexed(n, edges, flow_index))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn c_max(&self) -> Cost {
        self.c_max
    }

    pub fn flow_count(&self) -> FlowIdx {
        self.flow_index.count()
    }

    pub fn flow_index(&self) -> &FlowIndex {
        &self.flow_index
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: u32) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        let v = v as usize;
        self.out_edges[self.out_start[v]..self.out_start[v + 1]]
            .iter()
            .map(move |&id| &self.edges[id as usize])
    }

    pub fn in_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        let v = v as usize;
        self.in_edges[self.in_start[v]..self.in_start[v + 1]]
            .iter()
            .map(move |&id| &self.edges[id as usize])
    }

    pub fn out_edge_ids(&self, v: Vertex) -> &[u32] {
        let v = v as usize;
        &self.out_edges[self.out_start[v]..self.out_start[v + 1]]
    }

    pub fn in_edge_ids(&self, v: Vertex) -> &[u32] {
        let v = v as usize;
        &self.in_edges[self.in_start[v]..self.in_start[v + 1]]
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_edge_ids(v).len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    pub fn is_unit_cost(&self) -> bool {
        self.edges.iter().all(|e| e.cost == 1)
    }

    pub fn check_vertex(&self, v: Vertex) -> bool {
        v >= 1 && v as usize <= self.n
    }

    /// Edges able to carry flow index `f`; the vertex set and flow index are kept.
    pub fn subgraph_at_flow(&self, f: FlowIdx) -> Result<Graph, GraphError> {
        let max = self.flow_count();
        if f == 0 || f > max {
            return Err(GraphError::FlowOutOfRange { f, max });
        }
        let edges = self.edges.iter().copied().filter(|e| e.cap >= f).collect();
        Ok(Graph::from_indexed(self.n, edges, self.flow_index.clone()))
    }

    /// Serialize back to the text edge-list format. Capacities use the shortest
    /// decimal form that parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.m()).unwrap();
        for e in &self.edges {
            let cap = self.flow_index.value_of(e.cap).expect("indexed capacity");
            writeln!(out, "{} {} {} {}", e.src, e.dst, e.cost, fmt_capacity(cap)).unwrap();
        }
        out
    }
}

pub fn fmt_capacity(cap: f64) -> String {
    // Display for f64 is the shortest round-trip representation.
    format!("{cap}")
}

pub fn build_flow_index(capacities: &[f64]) -> FlowIndex {
    FlowIndex::build(capacities)
}

/// Parse the text edge-list format: a header `n m`, then `m` lines `src dst cost cap`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(GraphError::MissingHeader)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Malformed {
            line: hline,
            msg: format!("expected header \"n m\", got {header:?}"),
        });
    }
    let count = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| GraphError::Malformed {
            line: hline,
            msg: format!("invalid {what} {s:?}"),
        })
    };
    let n = count(fields[0], "vertex count")?;
    let m = count(fields[1], "edge count")?;

    let mut raw = Vec::with_capacity(m);
    for (line, l) in lines {
        if raw.len() == m {
            return Err(GraphError::EdgeCount {
                expected: m,
                found: m + 1,
            });
        }
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 4 {
            return Err(GraphError::Malformed {
                line,
                msg: format!("expected \"src dst cost cap\", got {l:?}"),
            });
        }
        let int = |s: &str, what: &str| {
            s.parse::<i64>().map_err(|_| GraphError::Malformed {
                line,
                msg: format!("invalid {what} {s:?}"),
            })
        };
        let mut ends = [0 as Vertex; 2];
        for (slot, s) in ends.iter_mut().zip(&f[..2]) {
            let v = int(s, "vertex")?;
            if v < 1 || v as u64 > n as u64 {
                return Err(GraphError::VertexOutOfRange { line, vertex: v, n });
            }
            *slot = v as Vertex;
        }
        let cost = int(f[2], "cost")?;
        if cost < 0 {
            return Err(GraphError::NegativeCost { line, cost });
        }
        let cap: f64 = f[3].parse().map_err(|_| GraphError::Malformed {
            line,
            msg: format!("invalid capacity {:?}", f[3]),
        })?;
        if !cap.is_finite() || cap < 0.0 {
            return Err(GraphError::BadCapacity { line, cap });
        }
        raw.push((ends[0], ends[1], cost as Cost, cap));
    }
    if raw.len() != m {
        return Err(GraphError::EdgeCount {
            expected: m,
            found: raw.len(),
        });
    }
    Graph::from_edges(n, &raw)
}
