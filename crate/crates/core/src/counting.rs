//! Edge counting: the minimal edge count `e(n)`, the constraint count
//! `d(n, e)`, vertex-pair gluing and the minimal solvable graph builder.

use crate::error::{Error, Result};
use crate::graph::ViewingGraph;
use crate::graph6;

/// Minimal solvable edge count for `n` views, `ceil((11n - 15) / 7)`.
pub fn e_min(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "e(n) is defined for n >= 2, got {n}"
        )));
    }
    Ok((11 * n - 15).div_ceil(7))
}

/// Number of constraints `7e - 11n + 15` a solvable graph imposes on its
/// fundamental matrices; negative when there are too few edges.
pub fn deficiency(n: usize, e: usize) -> i64 {
    7 * e as i64 - 11 * n as i64 + 15
}

/// `e(n)` and `d(n, e(n))` together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EdgeBudget {
    pub n: usize,
    pub e_min: usize,
    pub d: i64,
}

impl EdgeBudget {
    pub fn for_views(n: usize) -> Result<Self> {
        let e = e_min(n)?;
        Ok(EdgeBudget {
            n,
            e_min: e,
            d: deficiency(n, e),
        })
    }
}

/// Identifies `pair2` of `g2` onto `pair1` of `g1`.
///
/// Vertices of `g1` keep their labels; the remaining vertices of `g2`
/// follow in increasing order. Coinciding edges are merged.
pub fn glue(
    g1: &ViewingGraph,
    g2: &ViewingGraph,
    pair1: (usize, usize),
    pair2: (usize, usize),
) -> Result<ViewingGraph> {
    if pair1.0 == pair1.1 || pair2.0 == pair2.1 {
        return Err(Error::Validation(
            "glued vertex pairs must be distinct vertices".into(),
        ));
    }
    if pair1.0.max(pair1.1) >= g1.n() || pair2.0.max(pair2.1) >= g2.n() {
        return Err(Error::Validation("glued vertex outside its graph".into()));
    }
    let n1 = g1.n();
    let mut map = vec![usize::MAX; g2.n()];
    map[pair2.0] = pair1.0;
    map[pair2.1] = pair1.1;
    let mut next = n1;
    for slot in map.iter_mut().filter(|m| **m == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let mut edges: Vec<(usize, usize)> = g1.edges().to_vec();
    for &(a, b) in g2.edges() {
        let (x, y) = (map[a], map[b]);
        let e = (x.min(y), x.max(y));
        if !g1.has_edge(e.0, e.1) {
            edges.push(e);
        }
    }
    ViewingGraph::new(next, edges)
}

/// Minimal moves-solvable graphs for `n = 2..=9`, as graph6.
///
/// `n = 2` is a single edge and `n = 3` the triangle; for `n >= 4` each is
/// the moves-solvable `(n, e(n))` graph with the smallest canonical form,
/// taken from the census (see the `base_catalog` tests).
const BASE_CATALOG: [&str; 8] = [
    "A_", "Bw", "C^", "DFw", "E?~o", "F?NN_", "G??^No", "H??@}Zo",
];

/// The catalog graph for `2 <= n <= 9`.
pub fn base_graph(n: usize) -> Result<ViewingGraph> {
    match n {
        2..=9 => graph6::decode(BASE_CATALOG[n - 2]),
        _ => Err(Error::Domain(format!(
            "the base catalog covers 2..=9 views, got {n}"
        ))),
    }
}

/// A solvable viewing graph with `n` vertices and `e(n)` edges.
///
/// For `n > 9`, writes `n = 7q + r` with `2 <= r <= 8` and glues `q` copies
/// of the 9-vertex base onto the `r`-vertex base, each time along the
/// lexicographically smallest edge of both operands.
pub fn minimal_solvable(n: usize) -> Result<ViewingGraph> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "minimal solvable graphs need n >= 2, got {n}"
        )));
    }
    if n <= 9 {
        return base_graph(n);
    }
    let r = (n - 2) % 7 + 2;
    let q = (n - r) / 7;
    let g0 = base_graph(9)?;
    let mut g = base_graph(r)?;
    for _ in 0..q {
        g = glue(&g, &g0, g.edges()[0], g0.edges()[0])?;
    }
    Ok(g)
}
