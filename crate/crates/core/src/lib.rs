//! Shortest paths for all flows: for every destination, the Pareto frontier of
//! (path distance, bottleneck capacity) pairs.

pub mod apsp;
pub mod bench;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pareto;
pub mod pqueue;
pub mod sssp;

pub use apsp::{solve_apsp_af, solve_apsp_af_by_sources, AllPairs, ApspRun, MemoryBudget};
pub use graph::{parse_graph, Cost, FlowIdx, FlowIndex, Graph, GraphError, Vertex};
pub use pareto::{emit_pair, reconstruct_path, ParetoList, PathError, Record, SourceLists};
pub use pqueue::Backend;
pub use sssp::{
    solve_sssp_af_auto, solve_sssp_af_int, solve_sssp_af_unit, SolveError, SolveOptions,
    SolveStats, SsspRun,
};
