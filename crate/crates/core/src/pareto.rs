//! Per-destination Pareto lists of `(distance, flow, predecessor)` records.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cost, FlowIdx, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Record {
    pub d: Cost,
    pub f: FlowIdx,
    /// Vertex immediately before the destination; `None` only for the source.
    pub pred: Option<Vertex>,
}

/// Records strictly increasing in both `d` and `f`: a longer path is kept only
/// when it carries a strictly larger flow.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParetoList {
    records: Vec<Record>,
}

impl ParetoList {
    pub fn new() -> ParetoList {
        ParetoList::default()
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    /// `(d, f)` pairs without predecessors.
    pub fn pairs(&self) -> Vec<(Cost, FlowIdx)> {
        self.records.iter().map(|r| (r.d, r.f)).collect()
    }

    /// Offer a record; emissions must arrive in nondecreasing `d`. Appends when
    /// `f` beats the last flow, replacing the last record if it has the same
    /// distance. Returns whether the list changed.
    pub fn emit(&mut self, d: Cost, f: FlowIdx, pred: Option<Vertex>) -> bool {
        let rec = Record { d, f, pred };
        match self.records.last_mut() {
            None => {
                self.records.push(rec);
                true
            }
            Some(last) if last.f < f => {
                debug_assert!(last.d <= d, "emission out of distance order");
                if last.d == d {
                    *last = rec;
                } else {
                    self.records.push(rec);
                }
                true
            }
            Some(_) => false,
        }
    }

    /// Shortest record able to carry flow index `f`.
    pub fn best_for(&self, f: FlowIdx) -> Option<&Record> {
        let i = self.records.partition_point(|r| r.f < f);
        self.records.get(i)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[0].d < w[1].d && w[0].f < w[1].f)
    }

    pub fn from_records(records: Vec<Record>) -> ParetoList {
        ParetoList { records }
    }
}

/// Functional form of [`ParetoList::emit`].
pub fn emit_pair(mut list: ParetoList, d: Cost, f: FlowIdx, pred: Option<Vertex>) -> ParetoList {
    list.emit(d, f, pred);
    list
}

/// Pareto lists for every destination from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLists {
    pub source: Vertex,
    lists: Vec<ParetoList>,
}

impl SourceLists {
    pub fn new(source: Vertex, n: usize) -> SourceLists {
        SourceLists {
            source,
            lists: vec![ParetoList::new(); n],
        }
    }

    pub fn from_lists(source: Vertex, lists: Vec<ParetoList>) -> SourceLists {
        SourceLists { source, lists }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: Vertex) -> &ParetoList {
        &self.lists[v as usize - 1]
    }

    pub fn list_mut(&mut self, v: Vertex) -> &mut ParetoList {
        &mut self.lists[v as usize - 1]
    }

    /// `(vertex, list)` for every vertex, 1-based.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &ParetoList)> {
        self.lists
            .iter()
            .enumerate()
            .map(|(i, l)| (i as Vertex + 1, l))
    }

    /// Per-destination `(d, f)` pairs, for comparisons that ignore predecessors.
    pub fn pairs(&self) -> Vec<Vec<(Cost, FlowIdx)>> {
        self.lists.iter().map(ParetoList::pairs).collect()
    }

    pub fn record_count(&self) -> usize {
        self.lists.iter().map(ParetoList::len).sum()
    }

    /// Minimum distance of a path carrying flow index `f`, if any.
    pub fn best_distance(&self, v: Vertex, f: FlowIdx) -> Option<Cost> {
        self.list(v).best_for(f).map(|r| r.d)
    }

    pub fn reconstruct_path(
        &self,
        v: Vertex,
        f: FlowIdx,
    ) -> Result<Option<Vec<Vertex>>, PathError> {
        reconstruct_path(self, self.source, v, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("predecessor chain broken at vertex {at}: {why}")]
    Corrupt { at: Vertex, why: &'static str },
}

/// Walk predecessors back from `v` using, at every hop, the shortest record
/// that carries `f`. Returns `Ok(None)` when no record at `v` carries `f`.
pub fn reconstruct_path(
    all: &SourceLists,
    s: Vertex,
    v: Vertex,
    f: FlowIdx,
) -> Result<Option<Vec<Vertex>>, PathError> {
    for x in [s, v] {
        if x == 0 || x as usize > all.n() {
            return Err(PathError::VertexOutOfRange(x));
        }
    }
    if v == s {
        return Ok(Some(vec![s]));
    }
    let Some(mut rec) = all.list(v).best_for(f) else {
        return Ok(None);
    };
    let mut path = vec![v];
    let mut at = v;
    while at != s {
        if path.len() > all.n() {
            return Err(PathError::Corrupt {
                at,
                why: "cycle in predecessor chain",
            });
        }
        let pred = rec.pred.ok_or(PathError::Corrupt {
            at,
            why: "missing predecessor",
        })?;
        let prec = all.list(pred).best_for(f).ok_or(PathError::Corrupt {
            at,
            why: "predecessor cannot carry the flow",
        })?;
        // zero-cost edges allow equal distances along the chain
        if prec.d > rec.d {
            return Err(PathError::Corrupt {
                at,
                why: "distance increases toward the source",
            });
        }
        path.push(pred);
        at = pred;
        rec = prec;
    }
    path.reverse();
    Ok(Some(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(pairs: &[(Cost, FlowIdx)]) -> ParetoList {
        ParetoList::from_records(
            pairs
                .iter()
                .map(|&(d, f)| Record {
                    d,
                    f,
                    pred: Some(1),
                })
                .collect(),
        )
    }

    #[test]
    fn emit_appends_longer_path_with_more_flow() {
        assert_eq!(
            emit_pair(list(&[(2, 1)]), 3, 2, Some(1)).pairs(),
            vec![(2, 1), (3, 2)]
        );
    }

    #[test]
    fn emit_replaces_equal_distance_with_more_flow() {
        assert_eq!(
            emit_pair(list(&[(2, 1)]), 2, 2, Some(1)).pairs(),
            vec![(2, 2)]
        );
    }

    #[test]
    fn emit_drops_dominated_pair() {
        assert_eq!(
            emit_pair(list(&[(2, 3)]), 4, 2, Some(1)).pairs(),
            vec![(2, 3)]
        );
        assert_eq!(
            emit_pair(list(&[(2, 3)]), 4, 3, Some(1)).pairs(),
            vec![(2, 3)]
        );
        assert_eq!(
            emit_pair(ParetoList::new(), 7, 1, None).pairs(),
            vec![(7, 1)]
        );
    }

    #[test]
    fn best_for_binary_searches_flow_column() {
        let l = list(&[(2, 1), (3, 2), (5, 3)]);
        assert_eq!(l.best_for(1).unwrap().d, 2);
        assert_eq!(l.best_for(2).unwrap().d, 3);
        assert_eq!(l.best_for(3).unwrap().d, 5);
        assert!(l.best_for(4).is_none());
        assert!(ParetoList::new().best_for(1).is_none());
    }

    #[test]
    fn reconstruct_detects_corruption() {
        let mut s = SourceLists::new(1, 3);
        s.list_mut(1).emit(0, 2, None);
        s.list_mut(2).emit(1, 2, Some(3));
        s.list_mut(3).emit(1, 2, Some(2));
        assert!(matches!(
            s.reconstruct_path(2, 1),
            Err(PathError::Corrupt { .. })
        ));
        let mut s = SourceLists::new(1, 3);
        s.list_mut(2).emit(1, 2, None);
        assert!(matches!(
            s.reconstruct_path(2, 1),
            Err(PathError::Corrupt { .. })
        ));
        assert_eq!(
            s.reconstruct_path(4, 1),
            Err(PathError::VertexOutOfRange(4))
        );
        assert_eq!(s.reconstruct_path(1, 9), Ok(Some(vec![1])));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn emissions_keep_strict_pareto_shape(mut offers in proptest::collection::vec((0u64..30, 1u32..10), 0..40)) {
                offers.sort_by_key(|o| o.0);
                let mut l = ParetoList::new();
                for &(d, f) in &offers {
                    l.emit(d, f, None);
                }
                prop_assert!(l.is_strictly_increasing());
                // every offer is dominated by (or equal to) a kept record
                for &(d, f) in &offers {
                    prop_assert!(l.records().iter().any(|r| r.d <= d && r.f >= f));
                }
            }
        }
    }
}
