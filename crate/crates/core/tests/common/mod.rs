#![allow(dead_code)]

use spaf::graph::{Cost, FlowIdx, Graph, Vertex};
use spaf::SourceLists;

/// Cheapest edge `u -> w` able to carry flow index `f`.
pub fn hop_cost(g: &Graph, u: Vertex, w: Vertex, f: FlowIdx) -> Option<Cost> {
    g.out_edges(u)
        .filter(|e| e.dst == w && e.cap >= f)
        .map(|e| e.cost)
        .min()
}

/// Every record's reconstructed path must cost exactly `d` using only edges
/// that carry its flow. Returns the number of records checked.
pub fn check_witnesses(g: &Graph, lists: &SourceLists) -> Result<usize, String> {
    let mut checked = 0;
    for (v, list) in lists.iter() {
        for r in list.records() {
            let path = lists
                .reconstruct_path(v, r.f)
                .map_err(|e| format!("{v} f={}: {e}", r.f))?
                .ok_or_else(|| format!("{v} f={}: no path", r.f))?;
            if path.first() != Some(&lists.source) || path.last() != Some(&v) {
                return Err(format!("{v} f={}: path {path:?} has wrong endpoints", r.f));
            }
            let mut total = 0;
            for hop in path.windows(2) {
                total += hop_cost(g, hop[0], hop[1], r.f)
                    .ok_or_else(|| format!("{v} f={}: hop {hop:?} cannot carry the flow", r.f))?;
            }
            if total != r.d {
                return Err(format!(
                    "{v} f={}: path {path:?} costs {total}, record says {}",
                    r.f, r.d
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub fn check_shape(lists: &SourceLists) -> Result<usize, String> {
    for (v, l) in lists.iter() {
        if !l.is_strictly_increasing() {
            return Err(format!(
                "list of {v} from {} is not strictly increasing: {:?}",
                lists.source,
                l.pairs()
            ));
        }
    }
    Ok(lists.n())
}

pub fn same_pairs(what: &str, got: &SourceLists, want: &SourceLists) -> Result<(), String> {
    if got.pairs() == want.pairs() {
        Ok(())
    } else {
        Err(format!(
            "{what} from {}: got {:?}, want {:?}",
            got.source,
            got.pairs(),
            want.pairs()
        ))
    }
}
