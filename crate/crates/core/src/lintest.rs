//! Finite solvability by a linear test at random pinholes.
//!
//! Fixing the pinholes `c_1..c_n`, a configuration compatible with the
//! fundamental matrices assigns a matrix `g_l` in `GL(4)` to every edge such
//! that `g_l g_l'^{-1} = a I + c_i v^T` whenever edges `l` and `l'` share
//! vertex `i`. At the identity the tangent directions are tuples `(h_l)`
//! with `h_l - h_l'` in `W_{c_i} = { a I + c_i v^T }`, a linear space cut
//! out by twenty forms in the entries of the difference.
//!
//! The tangent space always contains the global `gl(4)` action (16
//! dimensions) and a scaling per edge, overlapping in one dimension, so its
//! dimension is at least `15 + e`. The graph is finite solvable when equality
//! holds at generic pinholes. Special pinholes can only enlarge the kernel,
//! so the minimum over a few random samples is the generic value.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ViewingGraph;
use crate::linalg::IntMatrix;

/// Sampling attempts before [`sample_pinholes`] gives up.
const MAX_RESAMPLES: usize = 100;

/// Random integer pinholes passing the genericity screen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinholeSet {
    pub points: Vec<[i64; 4]>,
    pub seed: u64,
    pub bound: i64,
}

/// Nonzero, and every four points linearly independent.
pub fn is_generic(points: &[[i64; 4]]) -> bool {
    if points.iter().any(|p| p.iter().all(|&x| x == 0)) {
        return false;
    }
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if det4([points[a], points[b], points[c], points[d]]) == 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub(crate) fn det4(m: [[i64; 4]; 4]) -> i128 {
    let m: [[i128; 4]; 4] = m.map(|r| r.map(i128::from));
    let det3 = |r: [usize; 3], c: [usize; 3]| {
        m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
            - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
            + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
    };
    (0..4)
        .map(|j| {
            let cols: Vec<usize> = (0..4).filter(|&k| k != j).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det3([1, 2, 3], [cols[0], cols[1], cols[2]])
        })
        .sum()
}

fn sample_from(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Result<Vec<[i64; 4]>> {
    for _ in 0..MAX_RESAMPLES {
        let points: Vec<[i64; 4]> = (0..n)
            .map(|_| std::array::from_fn(|_| rng.gen_range(-bound..=bound)))
            .collect();
        if is_generic(&points) {
            return Ok(points);
        }
    }
    Err(Error::Domain(format!(
        "no generic pinholes found in {MAX_RESAMPLES} attempts with bound {bound}"
    )))
}

/// Uniform integer pinholes in `[-bound, bound]^4`, resampled until generic.
pub fn sample_pinholes(n: usize, bound: i64, seed: u64) -> Result<PinholeSet> {
    check_sampling(n, bound)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(PinholeSet {
        points: sample_from(&mut rng, n, bound)?,
        seed,
        bound,
    })
}

fn check_sampling(n: usize, bound: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "pinhole sampling needs n >= 2, got {n}"
        )));
    }
    if bound < 10 {
        return Err(Error::Domain(format!(
            "coordinate bound must be at least 10, got {bound}"
        )));
    }
    Ok(())
}

/// The twenty forms as `(coefficient, row, column, c-index)`: each term is
/// `coefficient * m[row][column] * c[c-index]`.
const FORMS: [&[(i64, usize, usize, usize)]; 20] = [
    &[(1, 3, 1, 2), (-1, 2, 1, 3)],
    &[(1, 3, 0, 2), (-1, 2, 0, 3)],
    &[(1, 3, 2, 1), (-1, 1, 2, 3)],
    &[(1, 3, 0, 1), (-1, 1, 0, 3)],
    &[(1, 2, 3, 1), (-1, 1, 3, 2)],
    &[(1, 2, 0, 1), (-1, 1, 0, 2)],
    &[(1, 3, 2, 0), (-1, 0, 2, 3)],
    &[(1, 3, 1, 0), (-1, 0, 1, 3)],
    &[(1, 2, 3, 0), (-1, 0, 3, 2)],
    &[(1, 2, 1, 0), (-1, 0, 1, 2)],
    &[(1, 1, 3, 0), (-1, 0, 3, 1)],
    &[(1, 1, 2, 0), (-1, 0, 2, 1)],
    &[(1, 2, 2, 1), (-1, 3, 3, 1), (-1, 1, 2, 2), (1, 1, 3, 3)],
    &[(1, 2, 1, 1), (-1, 1, 1, 2), (1, 3, 3, 2), (-1, 2, 3, 3)],
    &[(1, 3, 0, 0), (-1, 3, 2, 2), (-1, 0, 0, 3), (1, 2, 2, 3)],
    &[(1, 2, 2, 0), (-1, 3, 3, 0), (-1, 0, 2, 2), (1, 0, 3, 3)],
    &[(1, 2, 0, 0), (-1, 0, 0, 2), (1, 3, 3, 2), (-1, 2, 3, 3)],
    &[(1, 3, 1, 1), (-1, 3, 2, 2), (-1, 1, 1, 3), (1, 2, 2, 3)],
    &[(1, 1, 1, 0), (-1, 3, 3, 0), (-1, 0, 1, 1), (1, 0, 3, 3)],
    &[(1, 1, 0, 0), (-1, 0, 0, 1), (1, 3, 3, 1), (-1, 1, 3, 3)],
];

/// The twenty linear forms vanishing exactly on `{ a I + c v^T }`, as a
/// 20 x 16 matrix over the entries `m00, m01, ..., m33` (row-major).
pub fn lc_rows(c: &[i64; 4]) -> Result<IntMatrix> {
    if c.iter().all(|&x| x == 0) {
        return Err(Error::Domain("the pinhole must be a nonzero vector".into()));
    }
    let mut m = IntMatrix::zeros(20, 16);
    for (k, form) in FORMS.iter().enumerate() {
        for &(coef, r, col, ci) in form.iter() {
            let at = 4 * r + col;
            m.set(k, at, m.get(k, at) + coef * c[ci]);
        }
    }
    Ok(m)
}

/// The linear system whose kernel is the tangent space at the identity.
/// Unknowns are the sixteen entries of `h_l` for each edge `l`, edges in
/// sorted order.
#[derive(Clone, Debug)]
pub struct TangentSystem {
    pub graph: ViewingGraph,
    pub pinholes: PinholeSet,
    pub matrix: IntMatrix,
}

impl TangentSystem {
    pub fn unknowns(&self) -> usize {
        16 * self.graph.edge_count()
    }

    /// The always-present lower bound `15 + e`.
    pub fn baseline(&self) -> usize {
        15 + self.graph.edge_count()
    }

    /// Writes one `row col value` line per nonzero entry, preceded by a
    /// `rows cols nonzeros` header.
    pub fn write_triplets(&self, mut out: impl Write) -> Result<()> {
        let m = &self.matrix;
        writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nonzeros().count())?;
        for (r, c, v) in m.nonzeros() {
            writeln!(out, "{r} {c} {v}")?;
        }
        Ok(())
    }
}

fn incident_edges(g: &ViewingGraph) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); g.n()];
    for (k, &(a, b)) in g.edges().iter().enumerate() {
        inc[a].push(k);
        inc[b].push(k);
    }
    inc
}

fn emit_difference(m: &mut IntMatrix, forms: &IntMatrix, l: usize, l0: usize) {
    for k in 0..forms.rows() {
        let r = m.push_zero_row();
        for (j, &v) in forms.row(k).iter().enumerate() {
            if v != 0 {
                m.set(r, 16 * l + j, v);
                m.set(r, 16 * l0 + j, -v);
            }
        }
    }
}

fn check_points(g: &ViewingGraph, pinholes: &PinholeSet) -> Result<()> {
    if pinholes.points.len() != g.n() {
        return Err(Error::Validation(format!(
            "{} pinholes for a graph on {} vertices",
            pinholes.points.len(),
            g.n()
        )));
    }
    Ok(())
}

/// Star assembly: at each vertex of degree `k >= 2`, constrain the
/// differences between its lowest-numbered incident edge and each of the
/// other `k - 1`. All pairwise differences follow, since `W_c` is a linear
/// space. Rows: `20 * sum(max(deg - 1, 0))`; columns: `16 e`.
pub fn assemble_system(g: &ViewingGraph, pinholes: &PinholeSet) -> Result<TangentSystem> {
    check_points(g, pinholes)?;
    let mut m = IntMatrix::zeros(0, 16 * g.edge_count());
    for (v, edges) in incident_edges(g).iter().enumerate() {
        if edges.len() < 2 {
            continue;
        }
        let forms = lc_rows(&pinholes.points[v])?;
        for &l in &edges[1..] {
            emit_difference(&mut m, &forms, l, edges[0]);
        }
    }
    Ok(TangentSystem {
        graph: g.clone(),
        pinholes: pinholes.clone(),
        matrix: m,
    })
}

/// Like [`assemble_system`] but with every pair of edges sharing a vertex.
pub fn assemble_pairwise(g: &ViewingGraph, pinholes: &PinholeSet) -> Result<TangentSystem> {
    check_points(g, pinholes)?;
    let mut m = IntMatrix::zeros(0, 16 * g.edge_count());
    for (v, edges) in incident_edges(g).iter().enumerate() {
        if edges.len() < 2 {
            continue;
        }
        let forms = lc_rows(&pinholes.points[v])?;
        for (i, &l0) in edges.iter().enumerate() {
            for &l in &edges[i + 1..] {
                emit_difference(&mut m, &forms, l, l0);
            }
        }
    }
    Ok(TangentSystem {
        graph: g.clone(),
        pinholes: pinholes.clone(),
        matrix: m,
    })
}

/// Exact kernel dimension of the tangent system.
///
/// The rank modulo a large prime is computed first. It never exceeds the
/// rational rank, and the rational kernel is known to be at least
/// `15 + e`; when the modular kernel already equals that, the answer is
/// certified. Otherwise the exact big-integer elimination decides.
pub fn kernel_dimension(sys: &TangentSystem) -> usize {
    let cols = sys.matrix.cols();
    let modular = cols - sys.matrix.rank_mod_p();
    if modular <= sys.baseline() {
        return modular;
    }
    kernel_dimension_exact(sys)
}

/// Kernel dimension by Bareiss elimination alone.
pub fn kernel_dimension_exact(sys: &TangentSystem) -> usize {
    sys.matrix.kernel_dim()
}

/// The explicit `15 + e` kernel vectors: `h_l = E_ab` on every edge for
/// fifteen matrix units, then the identity on one edge at a time. The
/// per-edge identities add up to the global identity, so the sixteenth
/// unit `E_33` is left out to keep the set independent.
pub fn explicit_kernel_basis(g: &ViewingGraph) -> Vec<Vec<i64>> {
    let e = g.edge_count();
    let mut basis = Vec::with_capacity(15 + e);
    for unit in 0..15 {
        let mut v = vec![0; 16 * e];
        for l in 0..e {
            v[16 * l + unit] = 1;
        }
        basis.push(v);
    }
    for l in 0..e {
        let mut v = vec![0; 16 * e];
        for d in 0..4 {
            v[16 * l + 5 * d] = 1;
        }
        basis.push(v);
    }
    basis
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteOptions {
    pub trials: usize,
    pub bound: i64,
    pub seed: u64,
}

impl Default for FiniteOptions {
    fn default() -> Self {
        FiniteOptions {
            trials: 3,
            bound: 1000,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteVerdict {
    pub finite_solvable: bool,
    /// Smallest kernel dimension over the samples.
    pub kernel_dim: usize,
    /// `15 + e`.
    pub expected: usize,
    /// Samples actually drawn; sampling stops once the minimum is reached.
    pub trials_run: usize,
}

/// Runs up to `trials` pinhole samples and reports the smallest kernel
/// dimension seen; finite solvable iff it equals `15 + e`.
pub fn finite_solvable(g: &ViewingGraph, opts: &FiniteOptions) -> Result<FiniteVerdict> {
    if !g.is_connected() {
        return Err(Error::Domain(
            "the finite solvability test needs a connected graph".into(),
        ));
    }
    check_sampling(g.n(), opts.bound)?;
    if opts.trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let expected = 15 + g.edge_count();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = usize::MAX;
    let mut trials_run = 0;
    for _ in 0..opts.trials {
        let pinholes = PinholeSet {
            points: sample_from(&mut rng, g.n(), opts.bound)?,
            seed: opts.seed,
            bound: opts.bound,
        };
        let sys = assemble_system(g, &pinholes)?;
        best = best.min(kernel_dimension(&sys));
        trials_run += 1;
        if best == expected {
            break;
        }
    }
    Ok(FiniteVerdict {
        finite_solvable: best == expected,
        kernel_dim: best,
        expected,
        trials_run,
    })
}
