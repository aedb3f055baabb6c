//! The `vgraph` command-line tool.
//!
//! Edge lists on the command line are 1-based, as are all vertex labels in
//! reports; the library itself is 0-based.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::census::{report_json, run_census, text_table, CensusOptions};
use crate::counting::minimal_solvable;
use crate::epipolar;
use crate::error::{Error, Result};
use crate::graph::{format_edge_list, parse_edge_list, GraphFormat, ViewingGraph};
use crate::graph6;
use crate::lintest::FiniteOptions;
use crate::moves::{closure, to_dot, MixedGraph};
use crate::report::analyze;

/// Exit code for unreadable or invalid input.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for every other failure.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "vgraph",
    version,
    about = "Solvability analysis for viewing graphs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "VG_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Pinhole samples tried before a graph is declared not finite solvable.
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    /// Pinhole coordinates are drawn from [-bound, bound].
    #[arg(long, global = true, default_value_t = 1000)]
    pub bound: i64,
    /// Graph encoding for input and output; detected from the input when
    /// omitted, edge list on output.
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    EdgeList,
    Graph6,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::EdgeList => GraphFormat::EdgeList,
            FormatArg::Graph6 => GraphFormat::Graph6,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GraphInput {
    /// The graph (`n=4; 1-2, 2-3, ...` or graph6). Read from stdin when
    /// omitted or `-`.
    pub graph: Option<String>,
    /// Read the graph from a file.
    #[arg(long, short, conflicts_with = "graph")]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full analysis of one graph as a JSON report. The exit code encodes
    /// the verdict: 0 solvable by moves, 10 finite solvable but undecided,
    /// 20 not finite solvable, 30 fails a necessary condition.
    Check {
        #[command(flatten)]
        input: GraphInput,
        /// Leave out the timing section.
        #[arg(long)]
        no_timings: bool,
    },
    /// Runs the move closure.
    Closure {
        #[command(flatten)]
        input: GraphInput,
        /// Print every move application.
        #[arg(long)]
        trace: bool,
        /// Print the graph before and after as DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Classifies every minimal connected graph with the given vertex counts.
    Census {
        /// Vertex counts (3 to 9); all of them when omitted.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        n: Vec<usize>,
        /// Worker threads.
        #[arg(long, env = "VG_JOBS")]
        jobs: Option<usize>,
        /// Per-graph JSON-lines records; with several vertex counts, one
        /// file per count with `.n<N>` inserted before the extension.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Reuse matching records from an earlier, possibly interrupted run.
        #[arg(long, requires = "records")]
        resume: bool,
        /// Emit the JSON report instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Prints a solvable graph with `n` vertices and the fewest edges.
    Construct {
        #[arg(long)]
        n: usize,
    },
    /// Re-encodes a graph in the format given by `--to`.
    Convert {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum)]
        to: FormatArg,
    },
    /// Checks the geometric facts behind the moves on random cameras.
    #[command(hide = true)]
    Oracle {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 10)]
        entries: i64,
    },
}

/// Parses arguments and runs the tool, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return e.exit_code();
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Parse { .. } | Error::Validation(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn read_input(input: &GraphInput) -> Result<String> {
    match (&input.input, input.graph.as_deref()) {
        (Some(path), _) => Ok(fs::read_to_string(path)?),
        (None, Some(text)) if text != "-" => Ok(text.to_string()),
        _ => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

/// Parses command-line graph text; edge lists are 1-based here.
pub fn parse_input(text: &str, format: Option<FormatArg>) -> Result<ViewingGraph> {
    let format = format
        .map(GraphFormat::from)
        .unwrap_or_else(|| GraphFormat::detect(text));
    match format {
        GraphFormat::EdgeList => parse_edge_list(text, 1),
        GraphFormat::Graph6 => graph6::decode(text.trim()),
    }
}

fn render(g: &ViewingGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => format_edge_list(g, 1),
        GraphFormat::Graph6 => graph6::encode(g),
    }
}

fn emit(global: &GlobalOpts, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &global.output {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn finite_opts(global: &GlobalOpts) -> FiniteOptions {
    FiniteOptions {
        trials: global.trials,
        bound: global.bound,
        seed: global.seed,
    }
}

fn records_path(base: &std::path::Path, n: usize, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.n{n}.{}", ext.to_string_lossy()),
        None => format!("{stem}.n{n}"),
    };
    base.with_file_name(name)
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let global = &cli.global;
    match &cli.command {
        Command::Check { input, no_timings } => {
            let g = parse_input(&read_input(input)?, global.format)?;
            let mut report = analyze(&g, &finite_opts(global))?;
            if *no_timings {
                report.timings = None;
            }
            let mut json = serde_json::to_string_pretty(&report)?;
            json.push('\n');
            emit(global, stdout, &json)?;
            Ok(report.overall.exit_code())
        }
        Command::Closure {
            input,
            trace: show_trace,
            dot,
        } => {
            let g = parse_input(&read_input(input)?, global.format)?;
            let (state, trace) = closure(&g);
            let mut out = String::new();
            if *show_trace {
                out.push_str(&trace.to_text(1));
            }
            if *dot {
                out.push_str(&to_dot(&MixedGraph::from_graph(&g), "before", 1));
                out.push_str(&to_dot(&state, "after", 1));
            }
            let arrows: Vec<String> = state
                .dashed_arrows()
                .iter()
                .map(|(a, b)| format!("{}->{}", a + 1, b + 1))
                .collect();
            out.push_str(&format!(
                "{} after {} steps; solid edges {}, dashed arrows [{}]\n",
                if state.is_complete() {
                    "complete"
                } else {
                    "stalled"
                },
                trace.steps.len(),
                state.solid_count(),
                arrows.join(", ")
            ));
            emit(global, stdout, &out)?;
            Ok(0)
        }
        Command::Census {
            n,
            jobs,
            records,
            resume,
            json,
        } => {
            let sizes: Vec<usize> = if n.is_empty() {
                (3..=9).collect()
            } else {
                n.clone()
            };
            let mut rows = Vec::with_capacity(sizes.len());
            for &size in &sizes {
                let opts = CensusOptions {
                    n: size,
                    jobs: *jobs,
                    finite: finite_opts(global),
                    records: records
                        .as_ref()
                        .map(|p| records_path(p, size, sizes.len() > 1)),
                    resume: *resume,
                };
                rows.push(run_census(&opts)?);
            }
            let out = if *json {
                let mut s = report_json(&rows, &finite_opts(global))?;
                s.push('\n');
                s
            } else {
                let mut s = text_table(&rows);
                for row in &rows {
                    if !row.undecided.is_empty() {
                        s.push_str(&format!("\nundecided at n = {}:\n", row.n));
                        for g6 in &row.undecided {
                            s.push_str(&format!("  {g6}\n"));
                        }
                    }
                }
                s
            };
            emit(global, stdout, &out)?;
            Ok(0)
        }
        Command::Construct { n } => {
            let g = minimal_solvable(*n)?;
            let format = global
                .format
                .map(GraphFormat::from)
                .unwrap_or(GraphFormat::EdgeList);
            emit(global, stdout, &(render(&g, format) + "\n"))?;
            Ok(0)
        }
        Command::Convert { input, to } => {
            let g = parse_input(&read_input(input)?, global.format)?;
            emit(global, stdout, &(render(&g, (*to).into()) + "\n"))?;
            Ok(0)
        }
        Command::Oracle { instances, entries } => {
            let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
            let (mut ii, mut iii) = (0, 0);
            for _ in 0..*instances {
                let four = epipolar::random_generic_cameras(&mut rng, 4, *entries);
                ii += usize::from(epipolar::verify_move_ii(
                    &four.try_into().expect("four cameras"),
                )?);
                let five = epipolar::random_generic_cameras(&mut rng, 5, *entries);
                iii += usize::from(epipolar::verify_move_iii(
                    &five.try_into().expect("five cameras"),
                )?);
            }
            let sample = epipolar::random_generic_cameras(&mut rng, 3, *entries);
            let mut out = epipolar::describe(&sample);
            out.push_str(&format!(
                "move II held on {ii}/{instances}, move III on {iii}/{instances}\n"
            ));
            emit(global, stdout, &out)?;
            Ok(if ii == *instances && iii == *instances {
                0
            } else {
                EXIT_FAILURE
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("vgraph").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn check_exit_codes() {
        assert_eq!(run_capture(&["check", "n=3; 1-2, 2-3, 1-3"]).0, 0);
        let (code, out, _) = run_capture(&["check", "--no-timings", "n=4; 1-2, 2-3, 3-4, 4-1"]);
        assert_eq!(code, 30);
        assert!(
            out.contains("\"violated_rule\": \"min-degree\"") || out.contains("adjacent-degree2")
        );
        let (code, _, err) = run_capture(&["check", "n=3; 1-2, 2-"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error:"));
        assert_eq!(run_capture(&["check", "--bogus"]).0, 2);
    }

    #[test]
    fn construct_and_convert() {
        let (code, out, _) = run_capture(&["construct", "--n", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out.matches('-').count(), 6);
        let (_, g6, _) = run_capture(&["convert", "--to", "graph6", out.trim()]);
        let (_, back, _) = run_capture(&["convert", "--to", "edge-list", g6.trim()]);
        assert_eq!(back, out);
    }

    #[test]
    fn closure_output() {
        let (code, out, _) = run_capture(&["closure", "--trace", "n=4; 1-2,2-3,3-4,4-1,1-3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
        assert!(out.ends_with("complete after 1 steps; solid edges 6, dashed arrows []\n"));
    }

    #[test]
    fn records_paths() {
        let base = PathBuf::from("/tmp/run.jsonl");
        assert_eq!(records_path(&base, 7, false), base);
        assert_eq!(
            records_path(&base, 7, true),
            PathBuf::from("/tmp/run.n7.jsonl")
        );
    }
}
