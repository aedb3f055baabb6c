//! Viewing graphs: simple undirected graphs on `n` labeled cameras.
//!
//! Vertices are dense 0-based integers. Adjacency is stored as one `u64`
//! bitmask per vertex, which caps graphs at [`MAX_VERTICES`] vertices; all
//! exhaustive procedures in this crate are far below that limit anyway.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph6;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// An undirected simple graph whose vertices are cameras and whose edges are
/// known fundamental matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ViewingGraph {
    n: usize,
    /// Sorted `(a, b)` pairs with `a < b`.
    edges: Vec<(usize, usize)>,
    adj: Vec<u64>,
}

impl ViewingGraph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation(
                "a viewing graph needs at least one vertex".into(),
            ));
        }
        if n > MAX_VERTICES {
            return Err(Error::Validation(format!(
                "{n} vertices exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        let mut adj = vec![0u64; n];
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "edge {a}-{b} has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop at vertex {a}")));
            }
            if adj[a] >> b & 1 == 1 {
                return Err(Error::Validation(format!("duplicate edge {a}-{b}")));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        Ok(ViewingGraph {
            n,
            edges: list,
            adj,
        })
    }

    /// Builds a graph from bitmask adjacency rows (must be symmetric, loop-free).
    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Self {
        let n = adj.len();
        let mut edges = Vec::new();
        for (a, &row) in adj.iter().enumerate() {
            debug_assert_eq!(row >> a & 1, 0);
            let mut higher = row & !mask_upto(a + 1);
            while higher != 0 {
                let b = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                edges.push((a, b));
            }
        }
        ViewingGraph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain("a cycle needs at least 3 vertices".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(a, b)` pairs with `a < b`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] >> b & 1 == 1
    }

    /// Neighborhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub(crate) fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Bitmask with one bit per vertex.
    pub fn vertex_mask(&self) -> u64 {
        mask_upto(self.n)
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    /// Number of edges with both endpoints in `subset`.
    pub fn induced_edge_count(&self, subset: u64) -> usize {
        let mut total = 0;
        let mut rest = subset;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += (self.adj[v] & subset).count_ones() as usize;
        }
        total / 2
    }

    /// Whether the subgraph induced by `subset` is connected (false for the empty set).
    pub fn is_connected_within(&self, subset: u64) -> bool {
        if subset == 0 {
            return false;
        }
        let start = subset & subset.wrapping_neg();
        self.reach_within(start, subset) == subset
    }

    fn reach_within(&self, start: u64, allowed: u64) -> u64 {
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & allowed & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_within(self.vertex_mask())
    }

    /// Connected components as vertex bitmasks, ordered by smallest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut left = self.vertex_mask();
        while left != 0 {
            let start = left & left.wrapping_neg();
            let comp = self.reach_within(start, left);
            left &= !comp;
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Smallest articulation point of a connected graph, if any.
    pub fn articulation_point(&self) -> Option<usize> {
        if self.n < 3 || !self.is_connected() {
            return None;
        }
        let mut state = Lowpoint {
            adj: &self.adj,
            disc: vec![usize::MAX; self.n],
            low: vec![0; self.n],
            timer: 0,
            cut: 0,
        };
        state.visit(0, usize::MAX);
        (state.cut != 0).then(|| state.cut.trailing_zeros() as usize)
    }

    /// 2-connectivity; for `n <= 2` this coincides with connectivity.
    pub fn is_biconnected(&self) -> bool {
        if self.n <= 2 {
            return self.is_connected();
        }
        self.is_connected() && self.articulation_point().is_none()
    }

    /// Applies `perm`, where `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> ViewingGraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut adj = vec![0u64; self.n];
        for &(a, b) in &self.edges {
            let (x, y) = (perm[a], perm[b]);
            adj[x] |= 1 << y;
            adj[y] |= 1 << x;
        }
        ViewingGraph::from_adjacency(adj)
    }

    /// Copy with the edge `a-b` added (no-op if present).
    pub fn with_edge(&self, a: usize, b: usize) -> ViewingGraph {
        let mut adj = self.adj.clone();
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
        ViewingGraph::from_adjacency(adj)
    }

    /// Copy with the edge `a-b` removed (no-op if absent).
    pub fn without_edge(&self, a: usize, b: usize) -> ViewingGraph {
        let mut adj = self.adj.clone();
        adj[a] &= !(1 << b);
        adj[b] &= !(1 << a);
        ViewingGraph::from_adjacency(adj)
    }

    /// graph6 encoding of this graph.
    pub fn to_graph6(&self) -> String {
        graph6::encode(self)
    }
}

struct Lowpoint<'a> {
    adj: &'a [u64],
    disc: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    cut: u64,
}

impl Lowpoint<'_> {
    fn visit(&mut self, v: usize, parent: usize) {
        self.disc[v] = self.timer;
        self.low[v] = self.timer;
        self.timer += 1;
        let mut children = 0;
        let mut nbrs = self.adj[v];
        while nbrs != 0 {
            let w = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if self.disc[w] == usize::MAX {
                children += 1;
                self.visit(w, v);
                self.low[v] = self.low[v].min(self.low[w]);
                if parent != usize::MAX && self.low[w] >= self.disc[v] {
                    self.cut |= 1 << v;
                }
            } else if w != parent {
                self.low[v] = self.low[v].min(self.disc[w]);
            }
        }
        if parent == usize::MAX && children > 1 {
            self.cut |= 1 << v;
        }
    }
}

pub(crate) fn mask_upto(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

impl fmt::Debug for ViewingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ViewingGraph({})", format_edge_list(self, 0))
    }
}

impl fmt::Display for ViewingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_edge_list(self, 0))
    }
}

/// Text encodings understood by [`parse_graph`] and [`serialize_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    /// `n=K; a-b, c-d, ...`
    EdgeList,
    Graph6,
}

impl GraphFormat {
    /// Guesses the format: anything mentioning `n=` is an edge list.
    pub fn detect(text: &str) -> GraphFormat {
        let squashed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if squashed.starts_with("n=") || squashed.contains("\nn=") || squashed.contains('-') {
            GraphFormat::EdgeList
        } else {
            GraphFormat::Graph6
        }
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "edges" => Ok(GraphFormat::EdgeList),
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            other => Err(Error::Domain(format!("unknown graph format `{other}`"))),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::EdgeList => "edge-list",
            GraphFormat::Graph6 => "graph6",
        })
    }
}

/// Parses a graph with 0-based labels in the edge-list format.
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<ViewingGraph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text, 0),
        GraphFormat::Graph6 => graph6::decode(text.trim()),
    }
}

/// Inverse of [`parse_graph`]; edge lists are emitted sorted.
pub fn serialize_graph(g: &ViewingGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => format_edge_list(g, 0),
        GraphFormat::Graph6 => graph6::encode(g),
    }
}

/// Formats `n=K; a-b, ...` with labels offset by `base` (0 or 1).
pub fn format_edge_list(g: &ViewingGraph, base: usize) -> String {
    let body: Vec<String> = g
        .edges()
        .iter()
        .map(|&(a, b)| format!("{}-{}", a + base, b + base))
        .collect();
    format!("n={}; {}", g.n(), body.join(", "))
}

/// Parses `n=K; a-b, c-d, ...` where labels start at `base`.
///
/// Edges may be separated by commas, semicolons or newlines; `#` starts a
/// comment running to the end of the line.
pub fn parse_edge_list(text: &str, base: usize) -> Result<ViewingGraph> {
    let mut sc = Scanner::new(text);
    sc.skip_blank();
    sc.expect('n')?;
    sc.skip_inline();
    sc.expect('=')?;
    sc.skip_inline();
    let n = sc.number()?;
    sc.skip_inline();
    match sc.peek() {
        None | Some(';' | ',' | '\n' | '\r' | '#') => {}
        Some(c) => return Err(sc.error(format!("expected `;` after vertex count, found `{c}`"))),
    }
    let mut pairs = Vec::new();
    loop {
        sc.skip_blank();
        if sc.peek().is_none() {
            break;
        }
        let a = sc.number()?;
        sc.skip_inline();
        sc.expect('-')?;
        sc.skip_inline();
        let b = sc.number()?;
        sc.skip_inline();
        match sc.peek() {
            None | Some(';' | ',' | '\n' | '\r' | '#') => {}
            Some(c) => return Err(sc.error(format!("expected a separator, found `{c}`"))),
        }
        if a < base || b < base {
            return Err(Error::Validation(format!(
                "label in edge {a}-{b} is below the first label {base}"
            )));
        }
        pairs.push((a - base, b - base));
    }
    ViewingGraph::new(n, pairs)
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, message)
    }

    /// Spaces and tabs only.
    fn skip_inline(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.bump();
        }
    }

    /// Whitespace, separators and comments.
    fn skip_blank(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else if c.is_whitespace() || c == ',' || c == ';' {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected a number, found `{c}`")),
                None => self.error("expected a number, found end of input"),
            });
        }
        digits
            .parse()
            .map_err(|_| self.error(format!("number `{digits}` is too large")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> ViewingGraph {
        parse_graph(text, GraphFormat::EdgeList).unwrap()
    }

    #[test]
    fn parses_triangle() {
        let k3 = g("n=3; 0-1,1-2,0-2");
        assert_eq!(k3, ViewingGraph::complete(3).unwrap());
        assert!(k3.is_complete());
        assert_eq!(
            (0..3).map(|v| k3.degree(v)).collect::<Vec<_>>(),
            vec![2, 2, 2]
        );
    }

    #[test]
    fn tolerates_whitespace_newlines_and_comments() {
        let a = g("  n = 4 ;\n 0 - 1\n1-2 # spine\n\n2-3,\n");
        assert_eq!(a, ViewingGraph::path(4).unwrap());
        let b = g("n=2");
        assert_eq!(b.edge_count(), 0);
    }

    #[test]
    fn rejects_self_loop_range_and_duplicates() {
        for bad in ["n=2; 0-0", "n=2; 0-2", "n=3; 0-1, 1-0"] {
            match parse_graph(bad, GraphFormat::EdgeList) {
                Err(Error::Validation(_)) => {}
                other => panic!("{bad}: expected validation error, got {other:?}"),
            }
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_graph("n=3;\n0-1,\n1*2", GraphFormat::EdgeList) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_graph("m=3; 0-1", GraphFormat::EdgeList),
            Err(Error::Parse {
                line: 1,
                column: 1,
                ..
            })
        ));
    }

    #[test]
    fn one_based_labels() {
        let a = parse_edge_list("n=3; 1-2, 2-3, 1-3", 1).unwrap();
        assert!(a.is_complete());
        assert_eq!(format_edge_list(&a, 1), "n=3; 1-2, 1-3, 2-3");
        assert!(parse_edge_list("n=3; 0-1", 1).is_err());
    }

    #[test]
    fn connectivity_and_articulation() {
        // two triangles sharing vertex 2
        let bowtie = g("n=5; 0-1,1-2,0-2,2-3,3-4,2-4");
        assert!(bowtie.is_connected());
        assert!(!bowtie.is_biconnected());
        assert_eq!(bowtie.articulation_point(), Some(2));

        let c4 = ViewingGraph::cycle(4).unwrap();
        assert!(c4.is_biconnected());

        let split = g("n=4; 0-1, 2-3");
        assert!(!split.is_connected());
        assert_eq!(split.component_count(), 2);

        assert!(ViewingGraph::path(2).unwrap().is_biconnected());
        assert!(!ViewingGraph::empty(2).unwrap().is_biconnected());
        assert!(!ViewingGraph::path(3).unwrap().is_biconnected());
    }

    #[test]
    fn format_detection() {
        assert_eq!(GraphFormat::detect("n=3; 0-1"), GraphFormat::EdgeList);
        assert_eq!(GraphFormat::detect("D?{"), GraphFormat::Graph6);
    }
}
