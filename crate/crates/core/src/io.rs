//! Result serialization.
//!
//! JSON, single source:
//! `{"source": s, "flow_values": [...], "lists": {"v": [{"d", "f_index", "f_value", "pred"}]}}`.
//! All pairs wrap one such document per source in a map keyed by source.
//!
//! Binary (little-endian): magic `SPAF`, `u16` version, `u8` kind (0 single
//! source, 1 all pairs), `u32` n, `u32` F, F `f64` flow values, `u32` block
//! count, then per block a `u32` source followed, for every vertex in order,
//! by a `u32` record count and records of `u64` d, `u32` f, `u32` pred
//! (0 when absent).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apsp::AllPairs;
use crate::graph::{FlowIdx, Vertex};
use crate::pareto::{ParetoList, Record, SourceLists};

pub const MAGIC: &[u8; 4] = b"SPAF";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON result: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid binary result: {0}")]
    Binary(&'static str),
    #[error("inconsistent result: {0}")]
    Invalid(String),
}

/// Solver output plus the capacity values behind its flow indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub flow_values: Vec<f64>,
    pub rows: Vec<SourceLists>,
    pub all_pairs: bool,
}

impl Solved {
    pub fn single(flow_values: Vec<f64>, lists: SourceLists) -> Solved {
        Solved {
            flow_values,
            rows: vec![lists],
            all_pairs: false,
        }
    }

    pub fn all_pairs(flow_values: Vec<f64>, pairs: AllPairs) -> Solved {
        Solved {
            flow_values,
            rows: pairs.rows().to_vec(),
            all_pairs: true,
        }
    }

    pub fn row(&self, s: Vertex) -> Option<&SourceLists> {
        self.rows.iter().find(|r| r.source == s)
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, SourceLists::n)
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    d: u64,
    f_index: FlowIdx,
    f_value: Option<f64>,
    pred: Option<Vertex>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceJson {
    source: Vertex,
    flow_values: Vec<f64>,
    lists: BTreeMap<Vertex, Vec<RecordJson>>,
}

fn source_json(flow_values: &[f64], lists: &SourceLists) -> SourceJson {
    let value = |f: FlowIdx| {
        (f >= 1)
            .then(|| flow_values.get(f as usize - 1).copied())
            .flatten()
    };
    SourceJson {
        source: lists.source,
        flow_values: flow_values.to_vec(),
        lists: lists
            .iter()
            .map(|(v, l)| {
                let recs = l
                    .records()
                    .iter()
                    .map(|r| RecordJson {
                        d: r.d,
                        f_index: r.f,
                        f_value: value(r.f),
                        pred: r.pred,
                    })
                    .collect();
                (v, recs)
            })
            .collect(),
    }
}

fn check_row(flows: usize, lists: &SourceLists) -> Result<(), IoError> {
    let n = lists.n();
    if lists.source == 0 || lists.source as usize > n {
        return Err(IoError::Invalid(format!(
            "source {} out of range 1..={n}",
            lists.source
        )));
    }
    for (v, l) in lists.iter() {
        if !l.is_strictly_increasing() {
            return Err(IoError::Invalid(format!(
                "list for vertex {v} is not strictly increasing"
            )));
        }
        for r in l.records() {
            if r.f as usize > flows || r.pred.is_some_and(|p| p == 0 || p as usize > n) {
                return Err(IoError::Invalid(format!(
                    "record out of range at vertex {v}"
                )));
            }
        }
    }
    Ok(())
}

fn from_source_json(doc: SourceJson) -> Result<(Vec<f64>, SourceLists), IoError> {
    let n = doc.lists.len();
    if doc.lists.keys().copied().ne(1..=n as Vertex) {
        return Err(IoError::Invalid("list keys must be exactly 1..=n".into()));
    }
    let lists = doc
        .lists
        .into_values()
        .map(|recs| {
            ParetoList::from_records(
                recs.into_iter()
                    .map(|r| Record {
                        d: r.d,
                        f: r.f_index,
                        pred: r.pred,
                    })
                    .collect(),
            )
        })
        .collect();
    let lists = SourceLists::from_lists(doc.source, lists);
    check_row(doc.flow_values.len(), &lists)?;
    Ok((doc.flow_values, lists))
}

pub fn to_json(s: &Solved) -> String {
    let mut out = if s.all_pairs {
        let m: BTreeMap<Vertex, SourceJson> = s
            .rows
            .iter()
            .map(|r| (r.source, source_json(&s.flow_values, r)))
            .collect();
        serde_json::to_string_pretty(&m)
    } else {
        serde_json::to_string_pretty(&source_json(&s.flow_values, &s.rows[0]))
    }
    .expect("result serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<Solved, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("source").is_some() {
        let (flow_values, lists) = from_source_json(serde_json::from_value(value)?)?;
        return Ok(Solved::single(flow_values, lists));
    }
    let docs: BTreeMap<Vertex, SourceJson> = serde_json::from_value(value)?;
    let mut flow_values = None;
    let mut rows = Vec::with_capacity(docs.len());
    for (key, doc) in docs {
        if key != doc.source {
            return Err(IoError::Invalid(format!(
                "row keyed {key} holds source {}",
                doc.source
            )));
        }
        let (fv, lists) = from_source_json(doc)?;
        if flow_values.get_or_insert_with(|| fv.clone()) != &fv {
            return Err(IoError::Invalid("rows disagree on flow values".into()));
        }
        rows.push(lists);
    }
    Ok(Solved {
        flow_values: flow_values.unwrap_or_default(),
        rows,
        all_pairs: true,
    })
}

pub fn to_binary(s: &Solved) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(s.all_pairs as u8);
    out.extend_from_slice(&(s.n() as u32).to_le_bytes());
    out.extend_from_slice(&(s.flow_values.len() as u32).to_le_bytes());
    for v in &s.flow_values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(s.rows.len() as u32).to_le_bytes());
    for row in &s.rows {
        out.extend_from_slice(&row.source.to_le_bytes());
        for (_, l) in row.iter() {
            out.extend_from_slice(&(l.len() as u32).to_le_bytes());
            for r in l.records() {
                out.extend_from_slice(&r.d.to_le_bytes());
                out.extend_from_slice(&r.f.to_le_bytes());
                out.extend_from_slice(&r.pred.unwrap_or(0).to_le_bytes());
            }
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], IoError> {
        if self.buf.len() < N {
            return Err(IoError::Binary("truncated"));
        }
        let (head, rest) = self.buf.split_at(N);
        self.buf = rest;
        Ok(head.try_into().unwrap())
    }

    fn u32(&mut self) -> Result<u32, IoError> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64, IoError> {
        self.take().map(u64::from_le_bytes)
    }
}

pub fn from_binary(bytes: &[u8]) -> Result<Solved, IoError> {
    let mut r = Reader { buf: bytes };
    if &r.take::<4>()? != MAGIC {
        return Err(IoError::Binary("bad magic"));
    }
    if u16::from_le_bytes(r.take()?) != VERSION {
        return Err(IoError::Binary("unsupported version"));
    }
    let all_pairs = match r.take::<1>()?[0] {
        0 => false,
        1 => true,
        _ => return Err(IoError::Binary("unknown kind")),
    };
    let n = r.u32()? as usize;
    let flows = r.u32()? as usize;
    let flow_values = (0..flows)
        .map(|_| r.u64().map(f64::from_bits))
        .collect::<Result<Vec<_>, _>>()?;
    let blocks = r.u32()?;
    let mut rows = Vec::new();
    for _ in 0..blocks {
        let source = r.u32()?;
        let mut lists = Vec::with_capacity(n);
        for _ in 0..n {
            let count = r.u32()? as usize;
            let mut recs = Vec::with_capacity(count.min(r.buf.len() / 16));
            for _ in 0..count {
                let d = r.u64()?;
                let f = r.u32()?;
                let pred = Some(r.u32()?).filter(|&p| p != 0);
                recs.push(Record { d, f, pred });
            }
            lists.push(ParetoList::from_records(recs));
        }
        let row = SourceLists::from_lists(source, lists);
        check_row(flows, &row)?;
        rows.push(row);
    }
    if !r.buf.is_empty() {
        return Err(IoError::Binary("trailing bytes"));
    }
    if !all_pairs && rows.len() != 1 {
        return Err(IoError::Binary("single-source result must hold one block"));
    }
    Ok(Solved {
        flow_values,
        rows,
        all_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apsp::{solve_apsp_af, MemoryBudget};
    use crate::graph::parse_graph;
    use crate::pqueue::Backend;
    use crate::sssp::solve_sssp_af_int;

    const G1: &str = "4 5\n1 2 1 5\n2 4 1 5\n1 3 1 10\n3 4 2 10\n1 4 5 20\n";

    #[test]
    fn single_source_json_shape() {
        let g = parse_graph(G1).unwrap();
        let run = solve_sssp_af_int(&g, 1, Backend::Heap).unwrap();
        let solved = Solved::single(g.flow_index().values().to_vec(), run.lists);
        let v: serde_json::Value = serde_json::from_str(&to_json(&solved)).unwrap();
        assert_eq!(v["source"], 1);
        let four = v["lists"]["4"].as_array().unwrap();
        assert_eq!(four.len(), 3);
        assert_eq!(four[1]["d"], 3);
        assert_eq!(four[1]["f_index"], 2);
        assert_eq!(four[1]["f_value"], 10.0);
        assert_eq!(four[1]["pred"], 3);
        assert!(v["lists"]["1"][0]["pred"].is_null());
        assert_eq!(from_json(&to_json(&solved)).unwrap(), solved);
    }

    #[test]
    fn binary_round_trip_matches_json() {
        let g = parse_graph(G1).unwrap();
        let run = solve_apsp_af(&g, Backend::OneLevel, MemoryBudget::default()).unwrap();
        let solved = Solved::all_pairs(g.flow_index().values().to_vec(), run.pairs);
        let bytes = to_binary(&solved);
        let back = from_binary(&bytes).unwrap();
        assert_eq!(to_json(&back), to_json(&solved));
        assert!(from_binary(&bytes[..bytes.len() - 1]).is_err());
        assert!(from_binary(b"NOPE").is_err());
    }

    #[test]
    fn zero_flow_source_record() {
        let g = parse_graph("2 0\n").unwrap();
        let run = solve_sssp_af_int(&g, 2, Backend::Heap).unwrap();
        let solved = Solved::single(vec![], run.lists);
        let text = to_json(&solved);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["lists"]["2"][0]["f_value"].is_null());
        assert_eq!(v["lists"]["2"][0]["f_index"], 0);
        assert_eq!(from_binary(&to_binary(&solved)).unwrap(), solved);
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(from_json("{").is_err());
        assert!(from_json(r#"{"source": 1, "flow_values": [], "lists": {"2": []}}"#).is_err());
        let bad = r#"{"source": 1, "flow_values": [1.0], "lists": {"1": [{"d": 0, "f_index": 3, "f_value": null, "pred": null}]}}"#;
        assert!(from_json(bad).is_err());
    }
}
