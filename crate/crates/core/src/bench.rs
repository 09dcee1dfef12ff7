//! Generated instance families and counter measurements.

use std::fmt::Write;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Cost, Graph, Vertex};
use crate::pqueue::Backend;
use crate::sssp::{solve_sssp_af_int, solve_sssp_af_unit, SolveError, SolveStats};

/// Unit-cost graph with about `4n` edges on which the unit-cost solver has
/// to re-attach most vertices over many distance levels.
///
/// Vertex 1 is the source and `v_i = i + 1`. A shortcut `1 -> v_i` carries
/// capacity `i`, a chain `1 -> v_1 -> ... -> v_{n-1}` carries capacity `n`,
/// and the remaining edges are random with capacity 0.5. At flow level `f`
/// every `v_i` with `i < f` falls back from distance 1 to its chain depth.
pub fn staircase_unit(n: usize, seed: u64) -> Graph {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(4 * n);
    let top = n as f64;
    edges.push((1, 2, 1, top));
    for i in 1..n as Vertex {
        edges.push((1, i + 1, 1, f64::from(i)));
        if i + 1 < n as Vertex {
            edges.push((i + 1, i + 2, 1, top));
        }
    }
    while edges.len() < 4 * n {
        let u = rng.gen_range(1..=n as Vertex);
        let v = rng.gen_range(2..=n as Vertex);
        if u != v {
            edges.push((u, v, 1, 0.5));
        }
    }
    Graph::from_edges(n, &edges).expect("valid family edges")
}

/// One random topology with `m` edges on `n` vertices, reused for every
/// `c` in `costs`: an edge with fraction `u` gets cost `max(1, round(u * c))`.
/// A Hamiltonian cycle through all vertices keeps everything reachable.
pub fn scaled_cost_family(n: usize, m: usize, costs: &[Cost], seed: u64) -> Vec<Graph> {
    assert!(n >= 2 && m >= n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let caps = [1.0, 2.0, 3.0, 5.0, 8.0];
    let mut shape: Vec<(Vertex, Vertex, f64, f64)> = Vec::with_capacity(m);
    for v in 1..=n as Vertex {
        let w = v % n as Vertex + 1;
        shape.push((v, w, rng.gen(), caps[rng.gen_range(0..caps.len())]));
    }
    while shape.len() < m {
        let u = rng.gen_range(1..=n as Vertex);
        let v = rng.gen_range(1..=n as Vertex);
        if u != v {
            shape.push((u, v, rng.gen(), caps[rng.gen_range(0..caps.len())]));
        }
    }
    costs
        .iter()
        .map(|&c| {
            let edges: Vec<_> = shape
                .iter()
                .map(|&(u, v, frac, cap)| (u, v, ((frac * c as f64).round() as Cost).max(1), cap))
                .collect();
            Graph::from_edges(n, &edges).expect("valid family edges")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Unit,
    Int(Backend),
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Unit => "unit",
            Solver::Int(b) => b.name(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub family: String,
    pub solver: Solver,
    pub n: usize,
    pub m: usize,
    pub flows: u32,
    pub c_max: Cost,
    pub stats: SolveStats,
    pub wall_ms: f64,
}

/// Solve from vertex 1 (if any) and collect counters. An empty graph yields
/// all-zero counters.
pub fn measure(family: &str, g: &Graph, solver: Solver) -> Result<BenchRow, SolveError> {
    let start = Instant::now();
    let stats = if g.n() == 0 {
        SolveStats::default()
    } else {
        match solver {
            Solver::Unit => solve_sssp_af_unit(g, 1)?.stats,
            Solver::Int(b) => solve_sssp_af_int(g, 1, b)?.stats,
        }
    };
    Ok(BenchRow {
        family: family.to_string(),
        solver,
        n: g.n(),
        m: g.m(),
        flows: g.flow_count(),
        c_max: g.c_max(),
        stats,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

const COLUMNS: [&str; 16] = [
    "family",
    "solver",
    "n",
    "m",
    "flows",
    "c",
    "edge_inspections",
    "spt_cuts",
    "spt_adds",
    "records",
    "queue_ops",
    "slot_visits",
    "cascades",
    "cascade_moves",
    "pruned",
    "wall_ms",
];

fn cells(r: &BenchRow) -> [String; 16] {
    let s = &r.stats;
    [
        r.family.clone(),
        r.solver.name().to_string(),
        r.n.to_string(),
        r.m.to_string(),
        r.flows.to_string(),
        r.c_max.to_string(),
        s.edge_inspections.to_string(),
        s.spt_cuts.to_string(),
        s.spt_adds.to_string(),
        s.records.to_string(),
        s.queue.queue_ops().to_string(),
        s.queue.slot_visits.to_string(),
        s.queue.cascades.to_string(),
        s.queue.cascade_moves.to_string(),
        s.pruned.to_string(),
        format!("{:.3}", r.wall_ms),
    ]
}

pub fn format_csv(rows: &[BenchRow]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&cells(r).join(","));
        out.push('\n');
    }
    out
}

pub fn format_text(rows: &[BenchRow]) -> String {
    let body: Vec<[String; 16]> = rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|i| {
            body.iter()
                .map(|c| c[i].len())
                .chain([COLUMNS[i].len()])
                .max()
                .unwrap()
        })
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, cols: &[&str]| {
        let parts: Vec<String> = cols
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(&mut out, &COLUMNS);
    for c in &body {
        let refs: Vec<&str> = c.iter().map(String::as_str).collect();
        line(&mut out, &refs);
    }
    out
}

/// Least-squares line `y = a + b x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    fit_line(&lx, &ly).1
}

/// Affine fit and its largest relative residual `|y - fit| / y`.
pub fn affine_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let (a, b) = fit_line(xs, ys);
    let worst = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| ((a + b * x) - y).abs() / y.abs())
        .fold(0.0, f64::max);
    (a, b, worst)
}
