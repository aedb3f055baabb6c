//! The combined per-graph verdict.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{format_edge_list, ViewingGraph};
use crate::lintest::{finite_solvable, FiniteOptions};
use crate::moves::{closure, MoveTrace};
use crate::necessary::{check_all_necessary, NecessaryVerdict};

/// Overall classification. Exactly one applies to every graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    /// A necessary condition fails.
    NotSolvable,
    /// The move closure is complete.
    SolvableByMoves,
    /// A candidate that is finite solvable but not settled by the moves.
    FiniteSolvableUndecided,
    /// A candidate whose tangent space is too large.
    FailsFiniteSolvable,
}

impl Overall {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Overall::SolvableByMoves => 0,
            Overall::FiniteSolvableUndecided => 10,
            Overall::FailsFiniteSolvable => 20,
            Overall::NotSolvable => 30,
        }
    }

    pub fn classify(necessary: bool, moves: bool, finite: Option<bool>) -> Overall {
        match (necessary, moves, finite) {
            (false, _, _) => Overall::NotSolvable,
            (true, true, _) => Overall::SolvableByMoves,
            (true, false, Some(true)) => Overall::FiniteSolvableUndecided,
            (true, false, _) => Overall::FailsFiniteSolvable,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub graph6: String,
    /// 1-based edge list.
    pub edges: String,
    pub n: usize,
    pub e: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MovesSummary {
    pub solvable: bool,
    pub steps: usize,
    /// Solid edges of the fixpoint, 1-based.
    pub closure_edges: Vec<(usize, usize)>,
    #[serde(skip)]
    pub trace: MoveTrace,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteSummary {
    pub finite_solvable: bool,
    pub kernel_dim: usize,
    pub expected: usize,
    pub trials: usize,
    pub trials_run: usize,
    pub seed: u64,
    pub bound: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub necessary_ms: f64,
    pub moves_ms: f64,
    pub finite_ms: f64,
}

/// Everything known about one graph. Vertex labels are 1-based.
#[derive(Clone, Debug, Serialize)]
pub struct SolvabilityReport {
    pub graph: GraphSummary,
    pub necessary: NecessaryVerdict,
    pub moves: MovesSummary,
    /// Absent when a necessary condition already fails.
    pub finite: Option<FiniteSummary>,
    pub overall: Overall,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs the full pipeline on one graph.
pub fn analyze(g: &ViewingGraph, opts: &FiniteOptions) -> Result<SolvabilityReport> {
    let t = Instant::now();
    let mut necessary = check_all_necessary(g)?;
    let necessary_ms = elapsed_ms(t);
    necessary.witness = necessary.witness.map(|w| w.relabeled(1));

    let t = Instant::now();
    let (state, trace) = closure(g);
    let moves_ms = elapsed_ms(t);
    let moves = MovesSummary {
        solvable: state.is_complete(),
        steps: trace.steps.len(),
        closure_edges: state
            .solid_edges()
            .into_iter()
            .map(|(a, b)| (a + 1, b + 1))
            .collect(),
        trace,
    };

    let t = Instant::now();
    let finite = if necessary.passed && g.n() >= 2 {
        let v = finite_solvable(g, opts)?;
        Some(FiniteSummary {
            finite_solvable: v.finite_solvable,
            kernel_dim: v.kernel_dim,
            expected: v.expected,
            trials: opts.trials,
            trials_run: v.trials_run,
            seed: opts.seed,
            bound: opts.bound,
        })
    } else {
        None
    };
    let finite_ms = elapsed_ms(t);

    let overall = Overall::classify(
        necessary.passed,
        moves.solvable,
        finite.as_ref().map(|f| f.finite_solvable),
    );
    Ok(SolvabilityReport {
        graph: GraphSummary {
            graph6: g.to_graph6(),
            edges: format_edge_list(g, 1),
            n: g.n(),
            e: g.edge_count(),
        },
        necessary,
        moves,
        finite,
        overall,
        timings: Some(Timings {
            necessary_ms,
            moves_ms,
            finite_ms,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    #[test]
    fn classification_is_exclusive() {
        assert_eq!(Overall::classify(false, false, None), Overall::NotSolvable);
        assert_eq!(
            Overall::classify(true, true, Some(true)),
            Overall::SolvableByMoves
        );
        assert_eq!(
            Overall::classify(true, false, Some(true)),
            Overall::FiniteSolvableUndecided
        );
        assert_eq!(
            Overall::classify(true, false, Some(false)),
            Overall::FailsFiniteSolvable
        );
    }

    #[test]
    fn small_reports() {
        let opts = FiniteOptions::default();
        let k3 = analyze(&ViewingGraph::complete(3).unwrap(), &opts).unwrap();
        assert_eq!(k3.overall, Overall::SolvableByMoves);
        assert_eq!(k3.finite.as_ref().unwrap().kernel_dim, 18);

        let c4 = analyze(&ViewingGraph::cycle(4).unwrap(), &opts).unwrap();
        assert_eq!(c4.overall, Overall::NotSolvable);
        assert!(c4.finite.is_none());

        let grid =
            parse_edge_list("n=9; 1-2,2-3,4-5,5-6,7-8,8-9,1-4,4-7,2-5,5-8,3-6,6-9", 1).unwrap();
        let r = analyze(&grid, &opts).unwrap();
        assert_eq!(r.overall, Overall::FiniteSolvableUndecided);
        assert_eq!(r.finite.unwrap().kernel_dim, 27);
        assert_eq!(r.graph.edges.split(", ").next(), Some("n=9; 1-2"));
    }
}
