//! Property checks shared by the acceptance harness and the property tests.
//! Each returns a short description of the first counterexample.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use viewing_graphs::canon::canonical_form;
use viewing_graphs::enumerate::{brute_force_connected, enumerate_connected};
use viewing_graphs::epipolar::{
    fundamental, random_generic_cameras, random_transform, triple_residuals, verify_move_ii,
    verify_move_iii, Camera,
};
use viewing_graphs::linalg::IntMatrix;
use viewing_graphs::lintest::{
    assemble_pairwise, assemble_system, explicit_kernel_basis, kernel_dimension, lc_rows,
    sample_pinholes,
};
use viewing_graphs::moves::{available, closure, Move};
use viewing_graphs::necessary::Rule;
use viewing_graphs::{check_all_necessary, MixedGraph, ViewingGraph};

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn random_connected(rng: &mut impl Rng, n: usize, extra: usize) -> ViewingGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|i| (order[rng.gen_range(0..i)], order[i]))
        .collect();
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push((a, b));
        }
    }
    edges.sort_unstable_by_key(|&(a, b)| (a.min(b), a.max(b)));
    edges.dedup_by_key(|&mut (a, b)| (a.min(b), a.max(b)));
    ViewingGraph::new(n, edges).unwrap()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![0; n]; n];
    let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    for (k, (a, b)) in pairs.enumerate() {
        idx[a][b] = k;
        idx[b][a] = k;
    }
    idx
}

/// Smallest edge bitmask over all relabelings: slow, but obviously an
/// isomorphism invariant that separates classes.
pub fn brute_key(edges: &[(usize, usize)], perms: &[Vec<usize>], idx: &[Vec<usize>]) -> u32 {
    perms
        .iter()
        .map(|p| {
            edges
                .iter()
                .fold(0u32, |m, &(a, b)| m | 1 << idx[p[a]][p[b]])
        })
        .min()
        .unwrap_or(0)
}

/// The per-edge stabilizer has exactly the 5-dimensional kernel
/// `{a I + c v^T}`.
pub fn lc_rows_kernel() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let c: [i64; 4] = loop {
            let c = std::array::from_fn(|_| rng.gen_range(-50..=50));
            if c != [0; 4] {
                break c;
            }
        };
        let m = lc_rows(&c).map_err(|e| e.to_string())?;
        ensure(m.cols() - m.rank() == 5, || {
            format!("kernel of c = {c:?} is not 5-dimensional")
        })?;
        let alpha = rng.gen_range(-9..=9);
        let v: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        let x: Vec<i64> = (0..16)
            .map(|k| alpha * i64::from(k / 4 == k % 4) + c[k / 4] * v[k % 4])
            .collect();
        ensure(m.mul_vec(&x).iter().all(|&y| y == 0), || {
            format!("stabilizer of {c:?} not in kernel")
        })?;
    }
    Ok(())
}

pub fn tangent_kernel_contains_basis() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for trial in 0..100 {
        let n = rng.gen_range(3..=8);
        let extra = rng.gen_range(0..=n);
        let g = random_connected(&mut rng, n, extra);
        let sys = assemble_system(&g, &sample_pinholes(n, 1000, trial).unwrap()).unwrap();
        let basis = explicit_kernel_basis(&g);
        for v in &basis {
            ensure(sys.matrix.mul_vec(v).iter().all(|&x| x == 0), || {
                format!("basis vector outside the kernel for {}", g.to_graph6())
            })?;
        }
        let stacked = IntMatrix::from_rows(sys.unknowns(), &basis);
        ensure(stacked.rank() == sys.baseline(), || {
            format!("basis rank for {}", g.to_graph6())
        })?;
        ensure(kernel_dimension(&sys) >= sys.baseline(), || {
            format!("kernel below 15 + e for {}", g.to_graph6())
        })?;
    }
    Ok(())
}

pub fn star_matches_pairwise() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for trial in 0..100 {
        let n = rng.gen_range(3..=7);
        let extra = rng.gen_range(0..=2 * n);
        let g = random_connected(&mut rng, n, extra);
        let pins = sample_pinholes(n, 1000, 500 + trial).unwrap();
        let star = kernel_dimension(&assemble_system(&g, &pins).unwrap());
        let pairwise = kernel_dimension(&assemble_pairwise(&g, &pins).unwrap());
        ensure(star == pairwise, || {
            format!("{}: star {star}, pairwise {pairwise}", g.to_graph6())
        })?;
    }
    Ok(())
}

fn random_order_fixpoint(g: &ViewingGraph, rng: &mut ChaCha8Rng) -> MixedGraph {
    let mut state = MixedGraph::from_graph(g);
    loop {
        let mut steps: Vec<_> = [Move::I, Move::II, Move::III]
            .iter()
            .flat_map(|&mv| available(&state, mv))
            .collect();
        steps.retain(|s| state.clone().apply(s.added));
        match steps.choose(rng) {
            Some(step) => {
                state.apply(step.added);
            }
            None => return state,
        }
    }
}

/// The closure does not depend on the order in which moves fire.
pub fn closure_confluence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..200 {
        let n = rng.gen_range(4..=9);
        let extra = rng.gen_range(0..=2 * n);
        let g = random_connected(&mut rng, n, extra);
        let (fixpoint, _) = closure(&g);
        for _ in 0..10 {
            ensure(random_order_fixpoint(&g, &mut rng) == fixpoint, || {
                format!("order-dependent closure for {}", g.to_graph6())
            })?;
        }
    }
    Ok(())
}

pub fn canonical_form_exhaustive() -> Check {
    for n in 1..=6 {
        let perms = permutations(n);
        let idx = pair_index(n);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let mut forward: HashMap<String, u32> = HashMap::new();
        let mut backward: HashMap<u32, String> = HashMap::new();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<_> = (0..pairs.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            let g = ViewingGraph::new(n, edges.iter().copied()).unwrap();
            let form = canonical_form(&g).as_str().to_string();
            let key = brute_key(&edges, &perms, &idx);
            ensure(*forward.entry(form.clone()).or_insert(key) == key, || {
                format!("n = {n}: form {form} covers two classes")
            })?;
            ensure(*backward.entry(key).or_insert(form.clone()) == form, || {
                format!("n = {n}: class {key} has two forms")
            })?;
        }
    }
    Ok(())
}

pub fn enumeration_complete() -> Check {
    for n in 1..=6 {
        for e in 0..=n * (n - 1) / 2 {
            let generated: Vec<_> = enumerate_connected(n, e)
                .unwrap()
                .iter()
                .map(canonical_form)
                .collect();
            let set: std::collections::BTreeSet<_> = generated.iter().cloned().collect();
            ensure(set.len() == generated.len(), || {
                format!("duplicates at ({n}, {e})")
            })?;
            ensure(set == brute_force_connected(n, e), || {
                format!("mismatch at ({n}, {e})")
            })?;
        }
    }
    Ok(())
}

fn random_point(rng: &mut impl Rng) -> [BigInt; 4] {
    std::array::from_fn(|_| BigInt::from(rng.gen_range(-50..=50)))
}

/// Point correspondences, zero determinant, triple compatibility and
/// projective invariance on random camera triples.
pub fn camera_triples() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for i in 0..500 {
        let cams = random_generic_cameras(&mut rng, 3, 10);
        let f12 = fundamental(&cams[0], &cams[1]).map_err(|e| e.to_string())?;
        let f23 = fundamental(&cams[1], &cams[2]).map_err(|e| e.to_string())?;
        let f31 = fundamental(&cams[2], &cams[0]).map_err(|e| e.to_string())?;
        ensure([&f12, &f23, &f31].iter().all(|f| f.det().is_zero()), || {
            format!("triple {i}: det")
        })?;
        let x = random_point(&mut rng);
        ensure(
            f12.bilinear(&cams[0].project(&x), &cams[1].project(&x))
                .is_zero(),
            || format!("triple {i}: correspondence"),
        )?;
        let r = triple_residuals(&f12, &f23, &f31).map_err(|e| e.to_string())?;
        ensure(r.iter().all(Zero::is_zero), || {
            format!("triple {i}: residuals {r:?}")
        })?;
        let t = random_transform(&mut rng, 5);
        let moved = fundamental(
            &cams[0].transformed(&t).map_err(|e| e.to_string())?,
            &cams[1].transformed(&t).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure(moved.proportional(&f12), || {
            format!("triple {i}: not projectively invariant")
        })?;
    }
    Ok(())
}

pub fn move_ii_geometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for i in 0..1000 {
        let cams: [Camera; 4] = random_generic_cameras(&mut rng, 4, 10).try_into().unwrap();
        ensure(verify_move_ii(&cams).map_err(|e| e.to_string())?, || {
            format!("instance {i}")
        })?;
    }
    Ok(())
}

pub fn move_iii_geometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for i in 0..1000 {
        let cams: [Camera; 5] = random_generic_cameras(&mut rng, 5, 10).try_into().unwrap();
        ensure(verify_move_iii(&cams).map_err(|e| e.to_string())?, || {
            format!("instance {i}")
        })?;
    }
    Ok(())
}

/// Four blocks in a ring, consecutive blocks sharing a vertex: every
/// instance fails the family test even though no single block violates
/// the single-subgraph test.
pub fn ring_of_blocks_rejected() -> Check {
    let block_edges = |size: usize| -> Vec<(usize, usize)> {
        (0..size)
            .flat_map(|a| (a + 1..size).map(move |b| (a, b)))
            .collect()
    };
    for size in [3usize, 4] {
        let step = size - 1;
        let n = 4 * step;
        let mut edges = Vec::new();
        for block in 0..4 {
            let vs: Vec<usize> = (0..size).map(|i| (step * block + i) % n).collect();
            edges.extend(block_edges(size).into_iter().map(|(a, b)| (vs[a], vs[b])));
        }
        let g = ViewingGraph::new(n, edges).unwrap();
        let v = check_all_necessary(&g).map_err(|e| e.to_string())?;
        ensure(
            v.violated_rule == Some(Rule::DisjointFamilyDeficiency),
            || format!("ring of K{size}: {:?}", v.violated_rule),
        )?;
    }
    Ok(())
}
