//! Solvability analysis for viewing graphs.
//!
//! A viewing graph has one vertex per camera and one edge per known
//! fundamental matrix. The crate decides whether such a graph can determine
//! its cameras (up to a global projective transformation) by three
//! independent routes:
//!
//! * [`necessary`]: counting and connectivity conditions every solvable
//!   graph satisfies; failing one proves the graph unsolvable.
//! * [`moves`]: a closure of three local inference moves; reaching the
//!   complete graph proves solvability.
//! * [`lintest`]: the exact tangent-space dimension at random pinholes,
//!   which decides finite solvability.
//!
//! [`enumerate`] and [`census`] run all three over every minimal graph of a
//! given size. [`epipolar`] checks the geometric facts the moves rely on with
//! exact camera arithmetic.

pub mod canon;
pub mod census;
pub mod cli;
pub mod counting;
pub mod enumerate;
pub mod epipolar;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod linalg;
pub mod lintest;
pub mod moves;
pub mod necessary;
pub mod report;

pub use canon::{canonical_form, CanonicalForm};
pub use counting::{deficiency, e_min, glue, minimal_solvable, EdgeBudget};
pub use error::{Error, Result};
pub use graph::{parse_graph, serialize_graph, GraphFormat, ViewingGraph};
pub use lintest::{finite_solvable, FiniteOptions, FiniteVerdict};
pub use moves::{closure, solvable_with_moves, MixedGraph, MoveTrace};
pub use necessary::{check_all_necessary, NecessaryVerdict, Rule, Witness};
pub use report::{analyze, Overall, SolvabilityReport};
