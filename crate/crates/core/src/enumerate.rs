//! Isomorph-free generation of connected graphs with a fixed edge count.
//!
//! Graphs are grown one edge at a time from the empty graph (canonical
//! construction path). A child `C = P + ab` is kept only if removing its
//! canonical deletion edge, an edge chosen from the canonical labeling of
//! `C`, gives a graph isomorphic to `P`. Every class then has a single
//! parent class, and duplicates among siblings of one parent are removed by
//! canonical form. Branches that cannot become connected with the edges
//! left are cut.

use std::collections::{BTreeSet, HashSet};
use std::io::BufRead;

use crate::canon::{canonical_form, canonical_labeling, CanonicalForm, Labeling};
use crate::error::{Error, Result};
use crate::graph::ViewingGraph;
use crate::graph6;

/// Largest vertex count the generator accepts.
pub const MAX_ENUM_VERTICES: usize = 10;

/// One representative (in canonical labeling) per isomorphism class of
/// connected graphs with `n` vertices and `e` edges, sorted by canonical
/// form.
pub fn enumerate_connected(n: usize, e: usize) -> Result<Vec<ViewingGraph>> {
    let mut out = Vec::new();
    enumerate_with(n, e, |g| out.push(g))?;
    out.sort_by_cached_key(|g| g.to_graph6());
    Ok(out)
}

/// Streaming form of [`enumerate_connected`]; graphs arrive in generation
/// order.
pub fn enumerate_with(n: usize, e: usize, mut visit: impl FnMut(ViewingGraph)) -> Result<()> {
    if !(1..=MAX_ENUM_VERTICES).contains(&n) {
        return Err(Error::TooLarge(format!(
            "enumeration supports 1..={MAX_ENUM_VERTICES} vertices, got {n}"
        )));
    }
    let max_edges = n * (n - 1) / 2;
    if e > max_edges {
        return Err(Error::Domain(format!(
            "{n} vertices admit at most {max_edges} edges, got {e}"
        )));
    }
    let root = ViewingGraph::empty(n)?;
    let cert = canonical_labeling(&root).certificate;
    grow(&root, cert, e, &mut visit);
    Ok(())
}

/// An edge of `g` fixed by the canonical labeling: the pair whose canonical
/// labels `(i, j)` come last in graph6 bit order.
fn deletion_edge(g: &ViewingGraph, lab: &Labeling) -> (usize, usize) {
    let perm = lab.permutation();
    let &(a, b) = g
        .edges()
        .iter()
        .max_by_key(|&&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.max(y), x.min(y))
        })
        .expect("children have at least one edge");
    (a, b)
}

fn grow(
    parent: &ViewingGraph,
    parent_cert: u128,
    target: usize,
    visit: &mut impl FnMut(ViewingGraph),
) {
    let k = parent.edge_count();
    if k == target {
        if parent.is_connected() {
            visit(parent.clone());
        }
        return;
    }
    let n = parent.n();
    let left = target - k - 1;
    let mut siblings: HashSet<u128> = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if parent.has_edge(a, b) {
                continue;
            }
            let child = parent.with_edge(a, b);
            if child.component_count() - 1 > left {
                continue;
            }
            let lab = canonical_labeling(&child);
            if siblings.contains(&lab.certificate) {
                continue;
            }
            let del = deletion_edge(&child, &lab);
            let accepted = del == (a, b)
                || canonical_labeling(&child.without_edge(del.0, del.1)).certificate == parent_cert;
            if !accepted {
                continue;
            }
            siblings.insert(lab.certificate);
            let canon_child = child.relabel(&lab.permutation());
            grow(&canon_child, lab.certificate, target, visit);
        }
    }
}

/// Canonical forms of all connected `(n, e)` graphs by sieving every edge
/// subset. Exponential; meant as an oracle for small `n`.
pub fn brute_force_connected(n: usize, e: usize) -> BTreeSet<CanonicalForm> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut out = BTreeSet::new();
    let total = pairs.len();
    assert!(total <= 21, "brute force is limited to n <= 7");
    for mask in 0u32..1 << total {
        if mask.count_ones() as usize != e {
            continue;
        }
        let edges = (0..total).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]);
        let g = ViewingGraph::new(n, edges).expect("pairs are valid");
        if g.is_connected() {
            out.insert(canonical_form(&g));
        }
    }
    out
}

/// Reads graph6 lines from an external generator, keeping the first graph
/// of each isomorphism class in canonical labeling.
pub fn ingest_graph6(reader: impl BufRead) -> Result<Vec<ViewingGraph>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in graph6::read_stream(reader)? {
        let form = canonical_form(&g);
        if seen.insert(form.clone()) {
            out.push(form.graph());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms(graphs: &[ViewingGraph]) -> BTreeSet<CanonicalForm> {
        let set: BTreeSet<_> = graphs.iter().map(canonical_form).collect();
        assert_eq!(set.len(), graphs.len(), "duplicate classes generated");
        set
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_connected(4, 6).unwrap().len(), 1);
        assert_eq!(enumerate_connected(5, 6).unwrap().len(), 5);
        assert_eq!(enumerate_connected(6, 8).unwrap().len(), 22);
        assert_eq!(enumerate_connected(1, 0).unwrap().len(), 1);
        assert_eq!(enumerate_connected(4, 2).unwrap().len(), 0);
        assert!(enumerate_connected(11, 12).is_err());
        assert!(enumerate_connected(4, 7).is_err());
    }

    #[test]
    fn output_is_canonical() {
        for g in enumerate_connected(6, 7).unwrap() {
            assert_eq!(canonical_form(&g).graph(), g);
        }
    }

    #[test]
    fn matches_brute_force_up_to_six_vertices() {
        for n in 1..=6 {
            for e in 0..=n * (n - 1) / 2 {
                let generated = forms(&enumerate_connected(n, e).unwrap());
                assert_eq!(
                    generated,
                    brute_force_connected(n, e),
                    "(n, e) = ({n}, {e})"
                );
            }
        }
    }

    #[test]
    fn ingestion_deduplicates() {
        // two labelings of the path on three vertices, then a triangle
        let input = "Bg\nBW\nBw\n";
        let graphs = ingest_graph6(input.as_bytes()).unwrap();
        assert_eq!(graphs.len(), 2);
    }
}
