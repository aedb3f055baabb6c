//! Move closure: a sufficient condition for solvability.
//!
//! The state is a mixed graph. A solid edge `i - j` means the fundamental
//! matrix between views `i` and `j` is known; a dashed arrow `i -> j` means
//! the epipole of camera `i` in image `j` is known. Every solid edge counts
//! as a double arrow. Three moves add information:
//!
//! * **I**: a four-cycle of solid edges with one solid diagonal gets the
//!   other diagonal.
//! * **II**: arrows `1 -> 2`, `1 -> 3` and solid edges `2 - 4`, `3 - 4` give
//!   the arrow `1 -> 4`.
//! * **III**: a double arrow `1 <-> 2` plus arrows `i -> 1`, `i -> 2` for
//!   three further vertices `i` make `1 - 2` solid.
//!
//! All pattern vertices are pairwise distinct. The moves are monotone, so
//! the fixpoint does not depend on the order they are applied in. If it is
//! the complete graph, the viewing graph is solvable.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ViewingGraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    n: usize,
    /// Solid adjacency, one bitmask per vertex.
    solid: Vec<u64>,
    /// `out[i]` has bit `j` set for each arrow `i -> j`.
    out: Vec<u64>,
    /// Transpose of `out`.
    inc: Vec<u64>,
}

impl MixedGraph {
    /// Seeds the state from the known fundamental matrices.
    pub fn from_graph(g: &ViewingGraph) -> Self {
        let n = g.n();
        let mut m = MixedGraph {
            n,
            solid: vec![0; n],
            out: vec![0; n],
            inc: vec![0; n],
        };
        for &(a, b) in g.edges() {
            m.add_solid(a, b);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_solid(&self, a: usize, b: usize) -> bool {
        self.solid[a] >> b & 1 == 1
    }

    pub fn has_arrow(&self, from: usize, to: usize) -> bool {
        self.out[from] >> to & 1 == 1
    }

    /// Solid edges as sorted pairs.
    pub fn solid_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.is_solid(a, b) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// Arrows that are not part of a solid edge, sorted.
    pub fn dashed_arrows(&self) -> Vec<(usize, usize)> {
        let mut arrows = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.has_arrow(a, b) && !self.is_solid(a, b) {
                    arrows.push((a, b));
                }
            }
        }
        arrows
    }

    pub fn solid_count(&self) -> usize {
        self.solid
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn arrow_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.solid_count() == self.n * (self.n - 1) / 2
    }

    /// The solid part as a viewing graph.
    pub fn solid_graph(&self) -> ViewingGraph {
        ViewingGraph::from_adjacency(self.solid.clone())
    }

    fn add_solid(&mut self, a: usize, b: usize) {
        self.solid[a] |= 1 << b;
        self.solid[b] |= 1 << a;
        self.add_arrow(a, b);
        self.add_arrow(b, a);
    }

    fn add_arrow(&mut self, from: usize, to: usize) {
        self.out[from] |= 1 << to;
        self.inc[to] |= 1 << from;
    }

    /// Applies an addition; returns whether anything changed.
    pub fn apply(&mut self, addition: Addition) -> bool {
        match addition {
            Addition::Solid(a, b) => {
                let fresh = !self.is_solid(a, b);
                self.add_solid(a, b);
                fresh
            }
            Addition::Arrow(a, b) => {
                let fresh = !self.has_arrow(a, b);
                self.add_arrow(a, b);
                fresh
            }
        }
    }

    /// Whether every solid edge also appears as a double arrow.
    pub fn solid_implies_dashed(&self) -> bool {
        (0..self.n).all(|a| self.solid[a] & !self.out[a] == 0 && self.solid[a] & !self.inc[a] == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Move {
    I,
    II,
    III,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::I => "I",
            Move::II => "II",
            Move::III => "III",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Addition {
    Solid(usize, usize),
    Arrow(usize, usize),
}

/// One move application.
///
/// `vertices` lists the matched pattern in the order of the move's
/// description: `[a, b, c, d]` for the square `a-b-c-d` with diagonal `a-c`
/// (adds `b-d`), `[1, 2, 3, 4]` for Move II, `[1, 2, 3, 4, 5]` for Move III.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    #[serde(rename = "move")]
    pub mv: Move,
    pub vertices: Vec<usize>,
    pub added: Addition,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveTrace {
    pub steps: Vec<Step>,
}

fn lowest(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let v = lowest(mask);
            mask &= mask - 1;
            v
        })
    })
}

/// Move I instances for a missing pair `b - d`, if any.
fn match_move_i(g: &MixedGraph, b: usize, d: usize) -> Option<Vec<usize>> {
    let common = g.solid[b] & g.solid[d];
    bits(common).find_map(|a| {
        let partner = g.solid[a] & common & !(1 << a);
        (partner != 0).then(|| vec![a, b, lowest(partner), d])
    })
}

fn match_move_ii(g: &MixedGraph, one: usize, four: usize) -> Option<Vec<usize>> {
    let mids = g.out[one] & g.solid[four] & !(1 << one) & !(1 << four);
    if mids.count_ones() < 2 {
        return None;
    }
    let two = lowest(mids);
    let three = lowest(mids & !(1 << two));
    Some(vec![one, two, three, four])
}

fn match_move_iii(g: &MixedGraph, one: usize, two: usize) -> Option<Vec<usize>> {
    if !(g.has_arrow(one, two) && g.has_arrow(two, one)) {
        return None;
    }
    let witnesses = g.inc[one] & g.inc[two] & !(1 << one) & !(1 << two);
    (witnesses.count_ones() >= 3).then(|| {
        let mut v = vec![one, two];
        v.extend(bits(witnesses).take(3));
        v
    })
}

/// All Move I additions available in `g`, in lexicographic order of the
/// added pair.
pub fn apply_move_i(g: &MixedGraph) -> Vec<Step> {
    let mut steps = Vec::new();
    for b in 0..g.n {
        for d in b + 1..g.n {
            if g.is_solid(b, d) {
                continue;
            }
            if let Some(vertices) = match_move_i(g, b, d) {
                steps.push(Step {
                    mv: Move::I,
                    vertices,
                    added: Addition::Solid(b, d),
                });
            }
        }
    }
    steps
}

/// All Move II additions available in `g`.
pub fn apply_move_ii(g: &MixedGraph) -> Vec<Step> {
    let mut steps = Vec::new();
    for one in 0..g.n {
        for four in 0..g.n {
            if one == four || g.has_arrow(one, four) {
                continue;
            }
            if let Some(vertices) = match_move_ii(g, one, four) {
                steps.push(Step {
                    mv: Move::II,
                    vertices,
                    added: Addition::Arrow(one, four),
                });
            }
        }
    }
    steps
}

/// All Move III promotions available in `g`.
pub fn apply_move_iii(g: &MixedGraph) -> Vec<Step> {
    let mut steps = Vec::new();
    for one in 0..g.n {
        for two in one + 1..g.n {
            if g.is_solid(one, two) {
                continue;
            }
            if let Some(vertices) = match_move_iii(g, one, two) {
                steps.push(Step {
                    mv: Move::III,
                    vertices,
                    added: Addition::Solid(one, two),
                });
            }
        }
    }
    steps
}

/// Available steps for one move.
pub fn available(g: &MixedGraph, mv: Move) -> Vec<Step> {
    match mv {
        Move::I => apply_move_i(g),
        Move::II => apply_move_ii(g),
        Move::III => apply_move_iii(g),
    }
}

/// Runs Moves I, II, III in rounds until nothing changes.
///
/// Within a round each move's additions are found against the state left
/// by the previous move and then applied together; a step is logged only
/// when it still adds something at the time it is applied.
pub fn closure(g: &ViewingGraph) -> (MixedGraph, MoveTrace) {
    let mut state = MixedGraph::from_graph(g);
    let mut trace = MoveTrace::default();
    loop {
        let mut changed = false;
        for mv in [Move::I, Move::II, Move::III] {
            for step in available(&state, mv) {
                if state.apply(step.added) {
                    trace.steps.push(step);
                    changed = true;
                }
            }
        }
        if !changed {
            return (state, trace);
        }
    }
}

/// Whether the move closure of `g` is complete.
pub fn solvable_with_moves(g: &ViewingGraph) -> bool {
    closure(g).0.is_complete()
}

fn step_holds(state: &MixedGraph, step: &Step) -> bool {
    let v = &step.vertices;
    let mut seen = 0u64;
    for &x in v {
        if x >= state.n || seen >> x & 1 == 1 {
            return false;
        }
        seen |= 1 << x;
    }
    match (step.mv, step.added) {
        (Move::I, Addition::Solid(b, d)) if v.len() == 4 => {
            let [a, b2, c, d2] = [v[0], v[1], v[2], v[3]];
            (b, d) == (b2.min(d2), b2.max(d2))
                && [(a, b2), (b2, c), (c, d2), (d2, a), (a, c)]
                    .iter()
                    .all(|&(x, y)| state.is_solid(x, y))
        }
        (Move::II, Addition::Arrow(one, four)) if v.len() == 4 => {
            (one, four) == (v[0], v[3])
                && state.has_arrow(v[0], v[1])
                && state.has_arrow(v[0], v[2])
                && state.is_solid(v[1], v[3])
                && state.is_solid(v[2], v[3])
        }
        (Move::III, Addition::Solid(a, b)) if v.len() == 5 => {
            (a, b) == (v[0].min(v[1]), v[0].max(v[1]))
                && state.has_arrow(v[0], v[1])
                && state.has_arrow(v[1], v[0])
                && v[2..]
                    .iter()
                    .all(|&i| state.has_arrow(i, v[0]) && state.has_arrow(i, v[1]))
        }
        _ => false,
    }
}

/// Replays a trace from the seed state, checking each step's pattern
/// before applying it.
pub fn replay(g: &ViewingGraph, trace: &MoveTrace) -> Result<MixedGraph> {
    let mut state = MixedGraph::from_graph(g);
    for (i, step) in trace.steps.iter().enumerate() {
        if !step_holds(&state, step) {
            return Err(Error::Validation(format!(
                "step {} (move {}) does not match the state it is applied to",
                i + 1,
                step.mv
            )));
        }
        state.apply(step.added);
    }
    Ok(state)
}

impl fmt::Display for Addition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Addition::Solid(a, b) => write!(f, "{a} - {b}"),
            Addition::Arrow(a, b) => write!(f, "{a} -> {b}"),
        }
    }
}

impl Addition {
    fn shifted(self, base: usize) -> Addition {
        match self {
            Addition::Solid(a, b) => Addition::Solid(a + base, b + base),
            Addition::Arrow(a, b) => Addition::Arrow(a + base, b + base),
        }
    }
}

impl MoveTrace {
    /// One line per step with labels offset by `base`, e.g.
    /// `II  1->2 1->3 2-4 3-4  =>  1 -> 4`.
    pub fn to_text(&self, base: usize) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            let v: Vec<usize> = step.vertices.iter().map(|x| x + base).collect();
            let pattern = match step.mv {
                Move::I => format!(
                    "square {}-{}-{}-{} with diagonal {}-{}",
                    v[0], v[1], v[2], v[3], v[0], v[2]
                ),
                Move::II => format!(
                    "{a}->{b} {a}->{c} {b}-{d} {c}-{d}",
                    a = v[0],
                    b = v[1],
                    c = v[2],
                    d = v[3]
                ),
                Move::III => format!(
                    "{a}<->{b} via {c}, {d}, {e}",
                    a = v[0],
                    b = v[1],
                    c = v[2],
                    d = v[3],
                    e = v[4]
                ),
            };
            let _ = writeln!(
                out,
                "{:>3}  {:<3} {}  =>  {}",
                i + 1,
                step.mv,
                pattern,
                step.added.shifted(base)
            );
        }
        out
    }
}

/// DOT rendering of a mixed graph: solid edges undirected, dashed arrows
/// dashed, with double arrows merged into one `dir=both` edge.
pub fn to_dot(state: &MixedGraph, name: &str, base: usize) -> String {
    let mut out = format!("digraph \"{name}\" {{\n  node [shape=circle];\n");
    for v in 0..state.n {
        let _ = writeln!(out, "  {};", v + base);
    }
    for (a, b) in state.solid_edges() {
        let _ = writeln!(out, "  {} -> {} [dir=none];", a + base, b + base);
    }
    for (a, b) in state.dashed_arrows() {
        if state.has_arrow(b, a) {
            if a < b {
                let _ = writeln!(
                    out,
                    "  {} -> {} [style=dashed, dir=both];",
                    a + base,
                    b + base
                );
            }
        } else {
            let _ = writeln!(out, "  {} -> {} [style=dashed];", a + base, b + base);
        }
    }
    out.push_str("}\n");
    out
}
