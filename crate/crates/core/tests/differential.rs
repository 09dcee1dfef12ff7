mod common;

use proptest::prelude::*;

use spaf::apsp::{solve_apsp_af, solve_apsp_af_by_sources, MemoryBudget};
use spaf::graph::{Cost, Edge, Graph, Vertex};
use spaf::io::{from_binary, from_json, to_binary, to_json, Solved};
use spaf::oracle::{enumerate_paths_af, straightforward_sssp_af};
use spaf::pqueue::Backend;
use spaf::{solve_sssp_af_int, solve_sssp_af_unit};

use common::{check_shape, check_witnesses, same_pairs};

const CAPS: [f64; 5] = [0.25, 1.0, 2.5, 4.0, 9.0];

fn arb_graph(max_n: usize, max_cost: Cost) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        let edge = (
            1..=n as Vertex,
            1..=n as Vertex,
            0..=max_cost,
            0..CAPS.len(),
        );
        proptest::collection::vec(edge, 0..n * n + 2).prop_map(move |raw| {
            let edges: Vec<_> = raw
                .into_iter()
                .map(|(u, v, c, k)| (u, v, c, CAPS[k]))
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn with_unit_costs(g: &Graph) -> Graph {
    let edges = g.edges().iter().map(|e| Edge { cost: 1, ..*e }).collect();
    Graph::from_indexed(g.n(), edges, g.flow_index().clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn integer_solver_matches_oracles(g in arb_graph(7, 9)) {
        for s in g.vertices() {
            let want = straightforward_sssp_af(&g, s).unwrap();
            same_pairs("enumeration", &enumerate_paths_af(&g, s).unwrap(), &want).unwrap();
            for b in Backend::ALL {
                let got = solve_sssp_af_int(&g, s, b).unwrap().lists;
                same_pairs(b.name(), &got, &want).unwrap();
                check_witnesses(&g, &got).unwrap();
                check_shape(&got).unwrap();
            }
        }
    }

    #[test]
    fn unit_solver_matches_oracle_within_counter_bounds(g in arb_graph(9, 1)) {
        let g = with_unit_costs(&g);
        let (n, m) = (g.n() as u64, g.m() as u64);
        for s in g.vertices() {
            let run = solve_sssp_af_unit(&g, s).unwrap();
            same_pairs("unit", &run.lists, &straightforward_sssp_af(&g, s).unwrap()).unwrap();
            check_witnesses(&g, &run.lists).unwrap();
            prop_assert!(run.stats.edge_inspections <= m * n.saturating_sub(1));
            prop_assert!(run.stats.spt_cuts + run.stats.spt_adds <= n * n.saturating_sub(1));
        }
    }

    #[test]
    fn best_distance_grows_with_flow(g in arb_graph(7, 9)) {
        let run = solve_sssp_af_int(&g, 1, Backend::Cascading).unwrap();
        for v in g.vertices() {
            let ds: Vec<Option<Cost>> = (1..=g.flow_count()).map(|f| run.lists.best_distance(v, f)).collect();
            for w in ds.windows(2) {
                // unreachable at a lower flow stays unreachable higher up
                match (w[0], w[1]) {
                    (Some(a), Some(b)) => prop_assert!(a <= b),
                    (None, b) => prop_assert!(b.is_none()),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn all_pairs_rows_match_single_source(g in arb_graph(6, 9)) {
        let by_sources = solve_apsp_af_by_sources(&g, Backend::OneLevel).unwrap().pairs;
        for b in Backend::ALL {
            let matrix = solve_apsp_af(&g, b, MemoryBudget::unlimited()).unwrap().pairs;
            for u in g.vertices() {
                prop_assert_eq!(matrix.row(u).pairs(), by_sources.row(u).pairs());
                prop_assert_eq!(matrix.row(u).list(u).pairs(), vec![(0, g.flow_count())]);
                check_witnesses(&g, matrix.row(u)).unwrap();
            }
        }
    }

    #[test]
    fn serialized_results_round_trip(g in arb_graph(6, 9), all in any::<bool>()) {
        let values = g.flow_index().values().to_vec();
        let solved = if all {
            Solved::all_pairs(values, solve_apsp_af(&g, Backend::Heap, MemoryBudget::unlimited()).unwrap().pairs)
        } else {
            Solved::single(values, solve_sssp_af_int(&g, 1, Backend::Heap).unwrap().lists)
        };
        let json = to_json(&solved);
        prop_assert_eq!(to_json(&from_binary(&to_binary(&solved)).unwrap()), json.clone());
        prop_assert_eq!(from_json(&json).unwrap(), solved);
    }
}

#[test]
fn solver_output_is_deterministic() {
    let g = spaf::oracle::corpus_instance(
        11,
        0,
        &spaf::oracle::CorpusParams {
            n: (60, 60),
            ..spaf::oracle::CorpusParams::integer()
        },
    );
    for b in Backend::ALL {
        let a = to_json(&Solved::single(
            vec![],
            solve_sssp_af_int(&g, 1, b).unwrap().lists,
        ));
        let c = to_json(&Solved::single(
            vec![],
            solve_sssp_af_int(&g, 1, b).unwrap().lists,
        ));
        assert_eq!(a, c);
    }
    let a = solve_apsp_af_by_sources(&g, Backend::Cascading)
        .unwrap()
        .pairs;
    let c = solve_apsp_af_by_sources(&g, Backend::Cascading)
        .unwrap()
        .pairs;
    assert_eq!(a, c);
}

#[test]
fn larger_graphs_agree_with_straightforward_oracle() {
    let params = spaf::oracle::CorpusParams {
        n: (20, 60),
        edge_prob: (0.05, 0.2),
        ..spaf::oracle::CorpusParams::integer()
    };
    for g in spaf::oracle::corpus(99, 30, &params) {
        let want = straightforward_sssp_af(&g, 1).unwrap();
        for b in Backend::ALL {
            same_pairs(b.name(), &solve_sssp_af_int(&g, 1, b).unwrap().lists, &want).unwrap();
        }
        let u = with_unit_costs(&g);
        same_pairs(
            "unit",
            &solve_sssp_af_unit(&u, 1).unwrap().lists,
            &straightforward_sssp_af(&u, 1).unwrap(),
        )
        .unwrap();
    }
}
