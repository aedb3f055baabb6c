//! Census of minimal viewing graphs.
//!
//! For a vertex count `n`, every connected graph with `e(n)` edges is
//! classified by the necessary conditions, the move closure and (for the
//! candidates) the finite solvability test. Per-graph records are appended
//! to a JSON-lines file as they finish so an interrupted run can resume.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::e_min;
use crate::enumerate::enumerate_connected;
use crate::error::{Error, Result};
use crate::graph::ViewingGraph;
use crate::graph6;
use crate::lintest::{finite_solvable, FiniteOptions};
use crate::moves::solvable_with_moves;
use crate::necessary::{check_all_necessary, NecessaryVerdict};

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub n: usize,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    pub finite: FiniteOptions,
    /// JSON-lines record file.
    pub records: Option<PathBuf>,
    /// Reuse matching records already in `records`.
    pub resume: bool,
}

impl CensusOptions {
    pub fn new(n: usize) -> Self {
        CensusOptions {
            n,
            jobs: None,
            finite: FiniteOptions::default(),
            records: None,
            resume: false,
        }
    }
}

/// Verdicts for one graph, keyed by its canonical graph6 string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub graph6: String,
    pub necessary: NecessaryVerdict,
    pub moves_solvable: bool,
    /// Present for candidates only.
    pub finite_solvable: Option<bool>,
    pub kernel_dim: Option<usize>,
    /// Seed actually used for this graph's pinholes.
    pub seed: u64,
    pub trials: usize,
    pub bound: i64,
}

impl GraphRecord {
    pub fn is_candidate(&self) -> bool {
        self.necessary.passed
    }

    /// Candidate and finite solvable, yet the moves do not settle it.
    pub fn is_undecided(&self) -> bool {
        self.is_candidate() && self.finite_solvable == Some(true) && !self.moves_solvable
    }
}

/// One column of the census table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub e: usize,
    pub connected: usize,
    pub candidates: usize,
    pub moves_solvable: usize,
    pub finite_solvable: usize,
    /// Candidates that are finite solvable but not solvable by moves.
    pub undecided: Vec<String>,
    /// Candidates that fail the finite solvability test.
    pub not_finite: Vec<String>,
    /// Moves-solvable graphs rejected by a necessary condition; always
    /// empty unless something is wrong.
    pub inconsistent: Vec<String>,
    #[serde(skip)]
    pub records: Vec<GraphRecord>,
}

/// Per-graph seed: the global seed mixed with the graph6 bytes (FNV-1a
/// followed by a splitmix64 finalizer), independent of scheduling.
pub fn graph_seed(seed: u64, graph6: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for &b in graph6.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

/// Classifies one graph.
pub fn evaluate(g: &ViewingGraph, finite: &FiniteOptions) -> Result<GraphRecord> {
    let code = graph6::encode(g);
    let seed = graph_seed(finite.seed, &code);
    let necessary = check_all_necessary(g)?;
    let moves_solvable = solvable_with_moves(g);
    let (finite_solvable, kernel_dim) = if necessary.passed {
        let opts = FiniteOptions { seed, ..*finite };
        let v = finite_solvable(g, &opts)?;
        (Some(v.finite_solvable), Some(v.kernel_dim))
    } else {
        (None, None)
    };
    Ok(GraphRecord {
        graph6: code,
        necessary,
        moves_solvable,
        finite_solvable,
        kernel_dim,
        seed,
        trials: finite.trials,
        bound: finite.bound,
    })
}

fn load_records(path: &PathBuf, finite: &FiniteOptions) -> Result<HashMap<String, GraphRecord>> {
    let mut out = HashMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        // a torn final line from an interrupted run is skipped
        let Ok(rec) = serde_json::from_str::<GraphRecord>(&line) else {
            continue;
        };
        if rec.trials == finite.trials
            && rec.bound == finite.bound
            && rec.seed == graph_seed(finite.seed, &rec.graph6)
        {
            out.insert(rec.graph6.clone(), rec);
        }
    }
    Ok(out)
}

fn ends_with_newline(path: &PathBuf) -> Result<bool> {
    let bytes = std::fs::read(path)?;
    Ok(bytes.last().is_none_or(|&b| b == b'\n'))
}

/// Enumerates and classifies every connected `(n, e(n))` graph.
pub fn run_census(opts: &CensusOptions) -> Result<CensusRow> {
    let n = opts.n;
    if !(3..=9).contains(&n) {
        return Err(Error::Domain(format!(
            "the census covers 3..=9 views, got {n}"
        )));
    }
    let e = e_min(n)?;
    let graphs = enumerate_connected(n, e)?;

    let mut done = match (&opts.records, opts.resume) {
        (Some(path), true) => load_records(path, &opts.finite)?,
        _ => HashMap::new(),
    };
    let sink = match &opts.records {
        Some(path) => {
            let mut file = OpenOptions::new()
                .create(true)
                .append(opts.resume)
                .write(true)
                .truncate(!opts.resume)
                .open(path)?;
            if opts.resume && !ends_with_newline(path)? {
                file.write_all(b"\n")?;
            }
            Some(Mutex::new(BufWriter::new(file)))
        }
        None => None,
    };

    let todo: Vec<&ViewingGraph> = graphs
        .iter()
        .filter(|g| !done.contains_key(&graph6::encode(g)))
        .collect();
    let work = || -> Result<Vec<GraphRecord>> {
        todo.par_iter()
            .map(|g| {
                let rec = evaluate(g, &opts.finite)?;
                if let Some(sink) = &sink {
                    let line = serde_json::to_string(&rec)?;
                    let mut w = sink.lock().expect("record writer poisoned");
                    writeln!(w, "{line}")?;
                }
                Ok(rec)
            })
            .collect()
    };
    let fresh = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    if let Some(sink) = sink {
        sink.into_inner().expect("record writer poisoned").flush()?;
    }
    for rec in fresh {
        done.insert(rec.graph6.clone(), rec);
    }

    let mut records: Vec<GraphRecord> = graphs
        .iter()
        .map(|g| {
            done.remove(&graph6::encode(g))
                .expect("every graph has a record")
        })
        .collect();
    records.sort_by(|a, b| a.graph6.cmp(&b.graph6));
    Ok(summarize(n, e, records))
}

fn summarize(n: usize, e: usize, records: Vec<GraphRecord>) -> CensusRow {
    let pick = |f: &dyn Fn(&GraphRecord) -> bool| -> Vec<String> {
        records
            .iter()
            .filter(|r| f(r))
            .map(|r| r.graph6.clone())
            .collect()
    };
    CensusRow {
        n,
        e,
        connected: records.len(),
        candidates: records.iter().filter(|r| r.is_candidate()).count(),
        moves_solvable: records
            .iter()
            .filter(|r| r.is_candidate() && r.moves_solvable)
            .count(),
        finite_solvable: records
            .iter()
            .filter(|r| r.finite_solvable == Some(true))
            .count(),
        undecided: pick(&|r| r.is_undecided()),
        not_finite: pick(&|r| r.finite_solvable == Some(false)),
        inconsistent: pick(&|r| r.moves_solvable && !r.is_candidate()),
        records,
    }
}

/// Machine-readable report: parameters plus one entry per row. Contains no
/// timings, so it is identical across runs and worker counts.
pub fn report_json(rows: &[CensusRow], finite: &FiniteOptions) -> Result<String> {
    #[derive(Serialize)]
    struct Report<'a> {
        seed: u64,
        trials: usize,
        bound: i64,
        rows: &'a [CensusRow],
    }
    let mut text = serde_json::to_string_pretty(&Report {
        seed: finite.seed,
        trials: finite.trials,
        bound: finite.bound,
        rows,
    })?;
    text.push('\n');
    Ok(text)
}

type Line = (&'static str, fn(&CensusRow) -> usize);

/// Aligned table with one column per `(n, e)`.
pub fn text_table(rows: &[CensusRow]) -> String {
    let heads: Vec<String> = rows.iter().map(|r| format!("({},{})", r.n, r.e)).collect();
    let width = heads.iter().map(String::len).max().unwrap_or(0).max(5);
    let mut out = String::new();
    let label_w = 20;
    let _ = write!(out, "{:<label_w$}", "(n, e)");
    for h in &heads {
        let _ = write!(out, " {h:>width$}");
    }
    out.push('\n');
    let lines: [Line; 4] = [
        ("connected", |r| r.connected),
        ("candidates", |r| r.candidates),
        ("solvable with moves", |r| r.moves_solvable),
        ("finite solvable", |r| r.finite_solvable),
    ];
    for (label, get) in lines {
        let _ = write!(out, "{label:<label_w$}");
        for r in rows {
            let _ = write!(out, " {:>width$}", get(r));
        }
        out.push('\n');
    }
    out
}

/// Writes the records as JSON lines, sorted by graph6.
pub fn write_records(row: &CensusRow, out: impl Write) -> Result<()> {
    let mut out = BufWriter::new(out);
    for rec in &row.records {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_depend_on_graph_and_global_seed() {
        assert_eq!(graph_seed(42, "Bw"), graph_seed(42, "Bw"));
        assert_ne!(graph_seed(42, "Bw"), graph_seed(43, "Bw"));
        assert_ne!(graph_seed(42, "Bw"), graph_seed(42, "C^"));
    }

    #[test]
    fn small_census() {
        let row = run_census(&CensusOptions::new(6)).unwrap();
        assert_eq!(
            (
                row.connected,
                row.candidates,
                row.moves_solvable,
                row.finite_solvable
            ),
            (22, 4, 4, 4)
        );
        assert!(row.inconsistent.is_empty());
        assert!(run_census(&CensusOptions::new(2)).is_err());
    }

    #[test]
    fn resume_reuses_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let mut opts = CensusOptions::new(5);
        opts.records = Some(path.clone());
        let first = run_census(&opts).unwrap();
        // drop the last record and tear the one before it
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        lines.pop();
        let torn = lines.pop().unwrap();
        let mut partial = lines.join("\n");
        partial.push('\n');
        partial.push_str(&torn[..torn.len() / 2]);
        std::fs::write(&path, partial).unwrap();
        opts.resume = true;
        let second = run_census(&opts).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.records, second.records);
    }

    #[test]
    fn table_layout() {
        let row = run_census(&CensusOptions::new(4)).unwrap();
        let table = text_table(&[row]);
        assert!(table.contains("(4,5)"));
        assert!(table.lines().nth(1).unwrap().starts_with("connected"));
    }
}
