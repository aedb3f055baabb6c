//! Necessary conditions for solvability.
//!
//! Every solvable graph is biconnected, has no vertex of degree below two,
//! no two adjacent degree-2 vertices, at least `e(n)` edges, and no
//! subgraph (or edge-disjoint family of subgraphs) imposing more
//! constraints than the whole graph does. Failing any of these proves the
//! graph unsolvable; passing all of them makes it a *candidate*.

use serde::{Deserialize, Serialize};

use crate::counting::{deficiency, e_min};
use crate::error::{Error, Result};
use crate::graph::ViewingGraph;

/// Largest graph accepted by the exhaustive subgraph searches.
pub const MAX_EXHAUSTIVE_VERTICES: usize = 16;

/// Nodes the family search may visit before giving up.
const FAMILY_NODE_LIMIT: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    NotConnected,
    NotBiconnected,
    MinDegree,
    AdjacentDegree2,
    TooFewEdges,
    SubgraphDeficiency,
    DisjointFamilyDeficiency,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::NotConnected => "the graph is not connected",
            Rule::NotBiconnected => "removing one vertex disconnects the graph",
            Rule::MinDegree => "a vertex has too few neighbors",
            Rule::AdjacentDegree2 => "two adjacent vertices both have degree 2",
            Rule::TooFewEdges => "fewer edges than the minimum for this many views",
            Rule::SubgraphDeficiency => "a subgraph imposes more constraints than the whole graph",
            Rule::DisjointFamilyDeficiency => {
                "edge-disjoint subgraphs together impose more constraints than the whole graph"
            }
        }
    }
}

/// Evidence for a violated rule. Labels are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Witness {
    /// A vertex: too low a degree, or an articulation point.
    Vertex { vertex: usize },
    /// An edge whose endpoints both have degree 2.
    Edge { a: usize, b: usize },
    /// Two vertices in different components.
    Separated { a: usize, b: usize },
    /// Actual versus required edge count.
    EdgeCount { edges: usize, required: usize },
    /// A vertex set whose induced subgraph is over-constrained.
    Subset {
        vertices: Vec<usize>,
        d: i64,
        bound: i64,
    },
    /// Edge-disjoint subgraphs whose constraint counts sum past the bound.
    Family {
        members: Vec<Vec<(usize, usize)>>,
        total: i64,
        bound: i64,
    },
}

impl Witness {
    /// Copy with every vertex label shifted by `base`.
    pub fn relabeled(&self, base: usize) -> Witness {
        let pair = |&(a, b): &(usize, usize)| (a + base, b + base);
        match self {
            Witness::Vertex { vertex } => Witness::Vertex {
                vertex: vertex + base,
            },
            Witness::Edge { a, b } => Witness::Edge {
                a: a + base,
                b: b + base,
            },
            Witness::Separated { a, b } => Witness::Separated {
                a: a + base,
                b: b + base,
            },
            Witness::EdgeCount { .. } => self.clone(),
            Witness::Subset { vertices, d, bound } => Witness::Subset {
                vertices: vertices.iter().map(|v| v + base).collect(),
                d: *d,
                bound: *bound,
            },
            Witness::Family {
                members,
                total,
                bound,
            } => Witness::Family {
                members: members
                    .iter()
                    .map(|m| m.iter().map(pair).collect())
                    .collect(),
                total: *total,
                bound: *bound,
            },
        }
    }
}

/// Outcome of one or more necessary-condition checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryVerdict {
    pub passed: bool,
    pub violated_rule: Option<Rule>,
    pub witness: Option<Witness>,
}

impl NecessaryVerdict {
    pub fn pass() -> Self {
        NecessaryVerdict {
            passed: true,
            violated_rule: None,
            witness: None,
        }
    }

    pub fn fail(rule: Rule, witness: Witness) -> Self {
        NecessaryVerdict {
            passed: false,
            violated_rule: Some(rule),
            witness: Some(witness),
        }
    }

    /// Re-derives the violation from the witness alone.
    pub fn recheck(&self, g: &ViewingGraph) -> bool {
        let (Some(rule), Some(witness)) = (self.violated_rule, &self.witness) else {
            return self.passed;
        };
        let bound = (g.n() >= 2).then(|| deficiency(g.n(), g.edge_count()));
        match (rule, witness) {
            (Rule::NotConnected, &Witness::Separated { a, b }) => {
                let comp = g.components().into_iter().find(|c| c >> a & 1 == 1);
                comp.is_some_and(|c| c >> b & 1 == 0)
            }
            (Rule::NotBiconnected, &Witness::Vertex { vertex }) => {
                g.n() >= 3 && !g.is_connected_within(g.vertex_mask() & !(1 << vertex))
            }
            (Rule::MinDegree, &Witness::Vertex { vertex }) => {
                vertex < g.n() && g.degree(vertex) < required_degree(g.n())
            }
            (Rule::AdjacentDegree2, &Witness::Edge { a, b }) => {
                g.n() > 3 && g.has_edge(a, b) && g.degree(a) == 2 && g.degree(b) == 2
            }
            (Rule::TooFewEdges, &Witness::EdgeCount { edges, required }) => {
                edges == g.edge_count() && e_min(g.n()).is_ok_and(|e| e == required && edges < e)
            }
            (Rule::SubgraphDeficiency, Witness::Subset { vertices, .. }) => {
                let mask = vertices.iter().fold(0u64, |m, &v| m | 1 << v);
                vertices.len() >= 2 && bound.is_some_and(|b| subset_deficiency(g, mask) > b)
            }
            (Rule::DisjointFamilyDeficiency, Witness::Family { members, .. }) => {
                bound.is_some_and(|b| family_is_valid(g, members) && family_total(members) > b)
            }
            _ => false,
        }
    }
}

fn required_degree(n: usize) -> usize {
    // below four views only complete graphs are solvable
    if n <= 3 {
        n - 1
    } else {
        2
    }
}

/// Degree conditions: minimum degree two and no adjacent pair of degree-2
/// vertices. Graphs with at most three vertices must be complete.
pub fn check_levi(g: &ViewingGraph) -> NecessaryVerdict {
    let need = required_degree(g.n());
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) < need) {
        return NecessaryVerdict::fail(Rule::MinDegree, Witness::Vertex { vertex: v });
    }
    if g.n() > 3 {
        for &(a, b) in g.edges() {
            if g.degree(a) == 2 && g.degree(b) == 2 {
                return NecessaryVerdict::fail(Rule::AdjacentDegree2, Witness::Edge { a, b });
            }
        }
    }
    NecessaryVerdict::pass()
}

fn subset_deficiency(g: &ViewingGraph, subset: u64) -> i64 {
    deficiency(subset.count_ones() as usize, g.induced_edge_count(subset))
}

fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

fn guard(g: &ViewingGraph) -> Result<()> {
    if g.n() > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::TooLarge(format!(
            "exhaustive subgraph search is limited to {MAX_EXHAUSTIVE_VERTICES} vertices, got {}",
            g.n()
        )));
    }
    Ok(())
}

/// Single-subgraph deficiency test: no vertex subset `S` with `|S| >= 2`
/// may induce a subgraph with `d(|S|, e(S)) > d(n, e)`.
///
/// Induced subgraphs suffice because dropping edges only lowers `d`.
pub fn check_subgraph_deficiency(g: &ViewingGraph) -> Result<NecessaryVerdict> {
    guard(g)?;
    let n = g.n();
    if n < 2 {
        return Ok(NecessaryVerdict::pass());
    }
    let bound = deficiency(n, g.edge_count());
    // report the smallest violating subset, ties broken by mask order
    let mut best: Option<(u32, u64, i64)> = None;
    for mask in 1u64..1 << n {
        let size = mask.count_ones();
        if size < 2 || best.is_some_and(|(s, _, _)| size >= s) {
            continue;
        }
        let d = subset_deficiency(g, mask);
        if d > bound {
            best = Some((size, mask, d));
        }
    }
    Ok(match best {
        None => NecessaryVerdict::pass(),
        Some((_, mask, d)) => NecessaryVerdict::fail(
            Rule::SubgraphDeficiency,
            Witness::Subset {
                vertices: mask_vertices(mask),
                d,
                bound,
            },
        ),
    })
}

/// Default family size limit: `e / 3`, since a member needs at least three
/// edges (a triangle) before it contributes a positive term.
pub fn default_k_max(g: &ViewingGraph) -> usize {
    (g.edge_count() / 3).max(2)
}

/// Multi-subgraph deficiency test: no family of at most `k_max` pairwise
/// edge-disjoint connected subgraphs may have `sum d_i > d(n, e)`.
///
/// Only members with `d_i >= 1` can raise the sum. Two members sharing two
/// or more vertices can be merged into one whose `d` is larger than their
/// sum (`d1 + d2 - 15 + 11k` for `k >= 2` shared vertices), so the search
/// only needs vertex sets that pairwise share at most one vertex; such sets
/// have disjoint induced edge sets, and taking every induced edge only
/// raises each term.
pub fn check_disjoint_family(g: &ViewingGraph, k_max: usize) -> Result<NecessaryVerdict> {
    guard(g)?;
    let n = g.n();
    if n < 2 || k_max == 0 {
        return Ok(NecessaryVerdict::pass());
    }
    let bound = deficiency(n, g.edge_count());
    if bound < 0 {
        // a single edge has d = 0
        if let Some(&edge) = g.edges().first() {
            return Ok(NecessaryVerdict::fail(
                Rule::DisjointFamilyDeficiency,
                Witness::Family {
                    members: vec![vec![edge]],
                    total: 0,
                    bound,
                },
            ));
        }
    }
    let mut candidates: Vec<(i64, u64)> = (1u64..1 << n)
        .filter(|m| m.count_ones() >= 3)
        .filter_map(|m| {
            let d = subset_deficiency(g, m);
            (d >= 1 && g.is_connected_within(m)).then_some((d, m))
        })
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut search = Packing {
        candidates: &candidates,
        k_max,
        bound,
        chosen: Vec::new(),
        nodes: 0,
    };
    let found = search.run(0, 0)?;
    Ok(match found {
        None => NecessaryVerdict::pass(),
        Some(masks) => {
            let members: Vec<Vec<(usize, usize)>> = masks
                .iter()
                .map(|&m| {
                    g.edges()
                        .iter()
                        .copied()
                        .filter(|&(a, b)| m >> a & 1 == 1 && m >> b & 1 == 1)
                        .collect()
                })
                .collect();
            let total = family_total(&members);
            NecessaryVerdict::fail(
                Rule::DisjointFamilyDeficiency,
                Witness::Family {
                    members,
                    total,
                    bound,
                },
            )
        }
    })
}

struct Packing<'a> {
    candidates: &'a [(i64, u64)],
    k_max: usize,
    bound: i64,
    chosen: Vec<u64>,
    nodes: u64,
}

impl Packing<'_> {
    /// Depth-first search for a packing whose total exceeds the bound.
    /// Candidates are sorted by decreasing `d`, so `d` of the next candidate
    /// times the free slots bounds what the rest of a branch can add.
    fn run(&mut self, start: usize, total: i64) -> Result<Option<Vec<u64>>> {
        if total > self.bound {
            return Ok(Some(self.chosen.clone()));
        }
        let slots = self.k_max - self.chosen.len();
        if slots == 0 {
            return Ok(None);
        }
        for i in start..self.candidates.len() {
            let (d, mask) = self.candidates[i];
            if total + d * slots as i64 <= self.bound {
                break;
            }
            self.nodes += 1;
            if self.nodes > FAMILY_NODE_LIMIT {
                return Err(Error::TooLarge(
                    "edge-disjoint family search exceeded its node budget".into(),
                ));
            }
            if self.chosen.iter().any(|&c| (c & mask).count_ones() > 1) {
                continue;
            }
            self.chosen.push(mask);
            if let Some(found) = self.run(i + 1, total + d)? {
                return Ok(Some(found));
            }
            self.chosen.pop();
        }
        Ok(None)
    }
}

fn member_vertices(member: &[(usize, usize)]) -> u64 {
    member.iter().fold(0, |m, &(a, b)| m | 1 << a | 1 << b)
}

fn family_total(members: &[Vec<(usize, usize)>]) -> i64 {
    members
        .iter()
        .map(|m| deficiency(member_vertices(m).count_ones() as usize, m.len()))
        .sum()
}

fn family_is_valid(g: &ViewingGraph, members: &[Vec<(usize, usize)>]) -> bool {
    let mut seen = std::collections::HashSet::new();
    members.iter().all(|m| {
        !m.is_empty()
            && m.iter()
                .all(|&(a, b)| g.has_edge(a, b) && seen.insert((a.min(b), a.max(b))))
            && ViewingGraph::new(g.n(), m.iter().copied())
                .is_ok_and(|sub| sub.is_connected_within(member_vertices(m)))
    })
}

/// Runs every condition in order (connectivity, biconnectivity, degrees,
/// edge count, single-subgraph deficiency, family deficiency); the first
/// failure is reported.
pub fn check_all_necessary(g: &ViewingGraph) -> Result<NecessaryVerdict> {
    let comps = g.components();
    if comps.len() > 1 {
        let a = comps[0].trailing_zeros() as usize;
        let b = comps[1].trailing_zeros() as usize;
        return Ok(NecessaryVerdict::fail(
            Rule::NotConnected,
            Witness::Separated { a, b },
        ));
    }
    if g.n() >= 3 {
        if let Some(v) = g.articulation_point() {
            return Ok(NecessaryVerdict::fail(
                Rule::NotBiconnected,
                Witness::Vertex { vertex: v },
            ));
        }
    }
    let levi = check_levi(g);
    if !levi.passed {
        return Ok(levi);
    }
    if g.n() < 2 {
        return Ok(NecessaryVerdict::pass());
    }
    let required = e_min(g.n())?;
    if g.edge_count() < required {
        return Ok(NecessaryVerdict::fail(
            Rule::TooFewEdges,
            Witness::EdgeCount {
                edges: g.edge_count(),
                required,
            },
        ));
    }
    let single = check_subgraph_deficiency(g)?;
    if !single.passed {
        return Ok(single);
    }
    check_disjoint_family(g, default_k_max(g))
}
