use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;

use spaf::apsp::{solve_apsp_af, solve_apsp_af_by_sources, MemoryBudget};
use spaf::graph::Graph;
use spaf::oracle::{
    corpus_instance, enumerate_paths_af, naive_decremental, straightforward_sssp_af, CorpusParams,
    ENUMERATION_LIMIT,
};
use spaf::pqueue::workload::{group_by_key, Op, Workload};
use spaf::pqueue::{CascadingBuckets, CbsParams, OneLevelBuckets, ReferenceHeap};
use spaf::{solve_sssp_af_int, solve_sssp_af_unit, Backend, SourceLists};

use crate::{read_graph, CliError};

#[derive(Args)]
pub struct VerifyArgs {
    /// Check this graph instead of a generated corpus.
    input: Option<PathBuf>,
    /// Instances per suite.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also run the naive decremental procedure, which is expected to disagree.
    #[arg(long)]
    naive_decremental: bool,
    /// Directory for replay files of disagreeing instances.
    #[arg(long, default_value = ".")]
    replay_dir: PathBuf,
}

/// Largest graph checked with the shared all-pairs table.
const APSP_LIMIT: usize = 40;

#[derive(Default)]
struct Suite {
    name: &'static str,
    total: u64,
    agree: u64,
    replays: Vec<PathBuf>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite {
            name,
            ..Suite::default()
        }
    }

    fn record(
        &mut self,
        ok: Result<(), String>,
        dir: &Path,
        instance: &str,
    ) -> Result<(), CliError> {
        self.total += 1;
        match ok {
            Ok(()) => self.agree += 1,
            Err(why) => {
                let ext = if self.name == "pqueue" {
                    "ops"
                } else {
                    "graph"
                };
                let path = dir.join(format!("spaf-replay-{}-{}.{ext}", self.name, self.total));
                let body = format!("# {why}\n{instance}");
                fs::write(&path, body)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                self.replays.push(path);
            }
        }
        Ok(())
    }
}

fn agree(what: &str, got: &SourceLists, want: &SourceLists) -> Result<(), String> {
    if got.pairs() == want.pairs() {
        Ok(())
    } else {
        Err(format!(
            "{what} from source {}: {:?} != {:?}",
            got.source,
            got.pairs(),
            want.pairs()
        ))
    }
}

fn check_sssp(g: &Graph, unit_only: bool) -> Result<(), String> {
    for s in g.vertices() {
        let want = straightforward_sssp_af(g, s).map_err(|e| e.to_string())?;
        if g.n() <= ENUMERATION_LIMIT {
            agree(
                "enumeration",
                &enumerate_paths_af(g, s).map_err(|e| e.to_string())?,
                &want,
            )?;
        }
        if g.is_unit_cost() {
            agree(
                "unit",
                &solve_sssp_af_unit(g, s).map_err(|e| e.to_string())?.lists,
                &want,
            )?;
        }
        if unit_only {
            continue;
        }
        for b in Backend::ALL {
            agree(
                b.name(),
                &solve_sssp_af_int(g, s, b).map_err(|e| e.to_string())?.lists,
                &want,
            )?;
        }
    }
    Ok(())
}

fn check_apsp(g: &Graph) -> Result<(), String> {
    let by_sources = solve_apsp_af_by_sources(g, Backend::Heap)
        .map_err(|e| e.to_string())?
        .pairs;
    for b in Backend::ALL {
        let m = solve_apsp_af(g, b, MemoryBudget::unlimited())
            .map_err(|e| e.to_string())?
            .pairs;
        for u in g.vertices() {
            agree(
                &format!("all-pairs {b}"),
                m.row(u),
                &straightforward_sssp_af(g, u).map_err(|e| e.to_string())?,
            )?;
            agree("by-sources", by_sources.row(u), m.row(u))?;
        }
    }
    Ok(())
}

fn check_naive(g: &Graph) -> Result<(), String> {
    for s in g.vertices() {
        let want = straightforward_sssp_af(g, s).map_err(|e| e.to_string())?;
        agree(
            "naive decremental",
            &naive_decremental(g, s).map_err(|e| e.to_string())?,
            &want,
        )?;
    }
    Ok(())
}

fn check_queues(w: &Workload) -> Result<(), String> {
    let want = w
        .replay(&mut ReferenceHeap::new(w.identity_space))
        .map_err(|e| e.to_string())?;
    let want = group_by_key(&want);
    let one = w
        .replay(&mut OneLevelBuckets::new(w.identity_space, w.max_key + 1))
        .map_err(|e| e.to_string())?;
    if group_by_key(&one) != want {
        return Err("one-level differs from heap".into());
    }
    for CbsParams { k, p } in [CbsParams { k: 2, p: 32 }, CbsParams { k: 3, p: 10 }] {
        let got = w
            .replay(&mut CascadingBuckets::new(w.identity_space, k, p))
            .map_err(|e| e.to_string())?;
        if group_by_key(&got) != want {
            return Err(format!("cbs({k},{p}) differs from heap"));
        }
    }
    Ok(())
}

fn workload_text(w: &Workload) -> String {
    let mut out = format!("window {}\n", w.window);
    for op in &w.ops {
        match op {
            Op::Insert(id, key) => writeln!(out, "insert {id} {key}"),
            Op::Decrease(id, key) => writeln!(out, "decrease {id} {key}"),
            Op::DeleteMin => writeln!(out, "delete-min"),
        }
        .unwrap();
    }
    out
}

pub fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let dir = &a.replay_dir;
    let mut suites = Vec::new();
    if let Some(path) = &a.input {
        let g = read_graph(path)?;
        let text = g.to_text();
        let mut sssp = Suite::new("sssp");
        sssp.record(check_sssp(&g, false), dir, &text)?;
        suites.push(sssp);
        if g.n() <= APSP_LIMIT {
            let mut apsp = Suite::new("apsp");
            apsp.record(check_apsp(&g), dir, &text)?;
            suites.push(apsp);
        }
        if a.naive_decremental {
            let mut naive = Suite::new("naive-decremental");
            naive.record(check_naive(&g), dir, &text)?;
            suites.push(naive);
        }
    } else {
        let mut unit = Suite::new("sssp-unit");
        let mut int = Suite::new("sssp-int");
        let mut apsp = Suite::new("apsp");
        let mut queues = Suite::new("pqueue");
        let mut naive = Suite::new("naive-decremental");
        for i in 0..a.trials {
            let g = corpus_instance(a.seed, i, &CorpusParams::unit());
            unit.record(check_sssp(&g, true), dir, &g.to_text())?;
            let g = corpus_instance(a.seed, i, &CorpusParams::integer());
            int.record(check_sssp(&g, false), dir, &g.to_text())?;
            if a.naive_decremental {
                naive.record(check_naive(&g), dir, &g.to_text())?;
            }
            let g = corpus_instance(a.seed, i, &CorpusParams::all_pairs());
            apsp.record(check_apsp(&g), dir, &g.to_text())?;
            let w = Workload::generate(a.seed ^ i, 2000, 1000);
            queues.record(check_queues(&w), dir, &workload_text(&w))?;
        }
        suites.extend([unit, int, apsp, queues]);
        if a.naive_decremental {
            suites.push(naive);
        }
    }

    let mut failed = 0;
    for s in &suites {
        println!("{}: {}/{} agree", s.name, s.agree, s.total);
        for r in &s.replays {
            println!("  replay: {}", r.display());
        }
        failed += s.total - s.agree;
    }
    if failed > 0 {
        return Err(CliError::Disagree(format!("{failed} disagreement(s)")));
    }
    Ok(())
}
