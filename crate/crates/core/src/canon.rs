//! Canonical labeling by partition refinement and backtracking.
//!
//! A small search in the style of McKay's canonical labeling: refine an
//! ordered partition to an equitable one, individualize a vertex of the
//! first non-singleton cell, recurse. Every leaf is a labeling; the
//! canonical one is the leaf whose packed upper triangle is largest.
//! Automorphisms found at equal leaves prune sibling branches that lie in
//! the same orbit of the pointwise stabilizer of the current prefix.

use std::fmt;

use crate::graph::ViewingGraph;
use crate::graph6;

/// Largest vertex count accepted by the canonical labeling.
pub const MAX_CANON_VERTICES: usize = 16;

/// Isomorphism-invariant label: the graph6 string of the canonically
/// relabeled graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The canonical representative graph.
    pub fn graph(&self) -> ViewingGraph {
        graph6::decode(&self.0).expect("canonical forms are valid graph6")
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.0)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Result of a canonical labeling search.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `order[p]` is the vertex that receives canonical label `p`.
    pub order: Vec<usize>,
    /// Packed upper triangle of the relabeled graph in graph6 bit order,
    /// first pair in the most significant position.
    pub certificate: u128,
}

impl Labeling {
    /// `perm[old] = new`, suitable for [`ViewingGraph::relabel`].
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm = vec![0; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            perm[v] = p;
        }
        perm
    }
}

/// Canonical form of `g`.
///
/// # Panics
/// If `g` has more than [`MAX_CANON_VERTICES`] vertices.
pub fn canonical_form(g: &ViewingGraph) -> CanonicalForm {
    CanonicalForm(canonical_graph(g).to_graph6())
}

/// The canonically relabeled copy of `g`.
pub fn canonical_graph(g: &ViewingGraph) -> ViewingGraph {
    g.relabel(&canonical_labeling(g).permutation())
}

/// Runs the search and returns the canonical labeling.
pub fn canonical_labeling(g: &ViewingGraph) -> Labeling {
    let n = g.n();
    assert!(
        n <= MAX_CANON_VERTICES,
        "canonical labeling supports at most {MAX_CANON_VERTICES} vertices, got {n}"
    );
    let adj: Vec<u32> = g.adjacency().iter().map(|&m| m as u32).collect();
    let mut search = Search {
        adj: &adj,
        n,
        best: None,
        generators: Vec::new(),
        prefix: Vec::with_capacity(n),
    };
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    search.descend(vec![all]);
    let (certificate, order) = search.best.expect("search visits at least one leaf");
    Labeling {
        order: order[..n].iter().map(|&v| v as usize).collect(),
        certificate,
    }
}

/// Whether two graphs are isomorphic (same vertex count and canonical form).
pub fn isomorphic(a: &ViewingGraph, b: &ViewingGraph) -> bool {
    a.n() == b.n()
        && a.edge_count() == b.edge_count()
        && canonical_labeling(a).certificate == canonical_labeling(b).certificate
}

struct Search<'a> {
    adj: &'a [u32],
    n: usize,
    best: Option<(u128, [u8; MAX_CANON_VERTICES])>,
    /// Automorphisms as `gamma[v]` images.
    generators: Vec<[u8; MAX_CANON_VERTICES]>,
    prefix: Vec<u8>,
}

impl Search<'_> {
    fn descend(&mut self, mut cells: Vec<u32>) {
        refine(self.adj, &mut cells);
        if cells.len() == self.n {
            self.leaf(&cells);
            return;
        }
        let target = cells
            .iter()
            .position(|c| c.count_ones() > 1)
            .expect("non-discrete partition has a non-singleton cell");
        let cell = cells[target];
        let mut tried = 0u32;
        let mut rest = cell;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if tried != 0 && self.same_orbit_as_tried(v as usize, tried) {
                continue;
            }
            tried |= 1 << v;
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cell & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            self.prefix.push(v as u8);
            self.descend(child);
            self.prefix.pop();
        }
    }

    /// Orbit test under the automorphisms that fix the current prefix pointwise.
    fn same_orbit_as_tried(&self, v: usize, tried: u32) -> bool {
        let mut parent: [u8; MAX_CANON_VERTICES] = std::array::from_fn(|i| i as u8);
        fn find(parent: &mut [u8; MAX_CANON_VERTICES], mut x: usize) -> usize {
            while parent[x] as usize != x {
                parent[x] = parent[parent[x] as usize];
                x = parent[x] as usize;
            }
            x
        }
        let mut any = false;
        for gamma in &self.generators {
            if self.prefix.iter().any(|&p| gamma[p as usize] != p) {
                continue;
            }
            any = true;
            for (x, &y) in gamma.iter().enumerate().take(self.n) {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y as usize));
                if a != b {
                    parent[a] = b as u8;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        let mut t = tried;
        while t != 0 {
            let u = t.trailing_zeros() as usize;
            t &= t - 1;
            if find(&mut parent, u) == root {
                return true;
            }
        }
        false
    }

    fn leaf(&mut self, cells: &[u32]) {
        let n = self.n;
        let mut order = [0u8; MAX_CANON_VERTICES];
        for (p, c) in cells.iter().enumerate() {
            order[p] = c.trailing_zeros() as u8;
        }
        let total = n * n.saturating_sub(1) / 2;
        let mut cert = 0u128;
        let mut k = 0;
        for j in 1..n {
            let row = self.adj[order[j] as usize];
            for &oi in &order[..j] {
                if row >> oi & 1 == 1 {
                    cert |= 1u128 << (total - 1 - k);
                }
                k += 1;
            }
        }
        match &self.best {
            Some((best, _)) if cert < *best => {}
            Some((best, best_order)) if cert == *best => {
                let mut gamma = [0u8; MAX_CANON_VERTICES];
                for p in 0..n {
                    gamma[best_order[p] as usize] = order[p];
                }
                if (0..n).any(|v| gamma[v] as usize != v) {
                    self.generators.push(gamma);
                }
            }
            _ => self.best = Some((cert, order)),
        }
    }
}

/// Refines an ordered partition (cells as vertex bitmasks) to the coarsest
/// equitable refinement, splitting cells by neighbor counts into splitters.
fn refine(adj: &[u32], cells: &mut Vec<u32>) {
    let mut queue: Vec<u32> = cells.clone();
    let mut head = 0;
    let mut fragments: Vec<u32> = Vec::with_capacity(16);
    while head < queue.len() {
        let splitter = queue[head];
        head += 1;
        let mut idx = 0;
        while idx < cells.len() {
            let cell = cells[idx];
            if cell.count_ones() == 1 {
                idx += 1;
                continue;
            }
            // counts are at most 16, so a 17-slot histogram of masks suffices
            let mut by_count = [0u32; 17];
            let mut rest = cell;
            let (mut lo, mut hi) = (u32::MAX, 0);
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                let c = (adj[v as usize] & splitter).count_ones();
                by_count[c as usize] |= 1 << v;
                lo = lo.min(c);
                hi = hi.max(c);
            }
            if lo == hi {
                idx += 1;
                continue;
            }
            fragments.clear();
            fragments.extend(
                by_count[lo as usize..=hi as usize]
                    .iter()
                    .copied()
                    .filter(|&m| m != 0),
            );
            cells.splice(idx..idx + 1, fragments.iter().copied());
            queue.extend_from_slice(&fragments);
            idx += fragments.len();
        }
    }
}
