//! Exact camera geometry behind the moves.
//!
//! Cameras are integer 3 x 4 matrices and everything downstream is computed
//! with big integers, so incidences are checked as equalities. Conventions:
//!
//! * the pinhole `c` of `P` is its null vector, `c_j = (-1)^j det(P without
//!   column j)`;
//! * `F12 = fundamental(P1, P2)` satisfies `u1^T F12 u2 = 0` for the images
//!   `u1 = P1 X`, `u2 = P2 X` of any world point;
//! * `e_ij = P_i c_j` is the image of pinhole `j` in view `i`, so `e12` is the
//!   left and `e21` the right null vector of `F12`;
//! * the epipolar line in view 2 of a point `u1` in view 1 is `F12^T u1`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{det_big, kernel_basis, rank_big};

pub type Vec3 = [BigInt; 3];
pub type Vec4 = [BigInt; 4];

fn big3(v: [i64; 3]) -> Vec3 {
    v.map(BigInt::from)
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot3(a: &Vec3, b: &Vec3) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn is_zero3(a: &Vec3) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Nonzero and equal up to a nonzero scalar.
pub fn proportional3(a: &Vec3, b: &Vec3) -> bool {
    !is_zero3(a) && !is_zero3(b) && is_zero3(&cross(a, b))
}

/// A projective camera of rank 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Camera {
    matrix: [[BigInt; 4]; 3],
    pinhole: Vec4,
}

impl Camera {
    pub fn new(rows: [[i64; 4]; 3]) -> Result<Camera> {
        Camera::from_big(rows.map(|r| r.map(BigInt::from)))
    }

    pub fn from_big(matrix: [[BigInt; 4]; 3]) -> Result<Camera> {
        let pinhole: Vec4 = std::array::from_fn(|j| {
            let minor: Vec<Vec<BigInt>> = matrix
                .iter()
                .map(|row| (0..4).filter(|&k| k != j).map(|k| row[k].clone()).collect())
                .collect();
            let d = det_big(&minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        });
        if pinhole.iter().all(Zero::is_zero) {
            return Err(Error::Degenerate("camera matrix has rank below 3".into()));
        }
        Ok(Camera { matrix, pinhole })
    }

    pub fn matrix(&self) -> &[[BigInt; 4]; 3] {
        &self.matrix
    }

    pub fn pinhole(&self) -> &Vec4 {
        &self.pinhole
    }

    /// `P X`.
    pub fn project(&self, x: &Vec4) -> Vec3 {
        std::array::from_fn(|i| (0..4).map(|k| &self.matrix[i][k] * &x[k]).sum())
    }

    /// `P T` for a 4 x 4 transformation `T`.
    pub fn transformed(&self, t: &[[BigInt; 4]; 4]) -> Result<Camera> {
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| &self.matrix[i][k] * &t[k][j]).sum())
        });
        Camera::from_big(m)
    }
}

/// A 3 x 3 matrix of rank 2, meaningful up to scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalMatrix {
    m: [[BigInt; 3]; 3],
}

impl FundamentalMatrix {
    pub fn from_rows(m: [[BigInt; 3]; 3]) -> Self {
        FundamentalMatrix { m }
    }

    pub fn entries(&self) -> &[[BigInt; 3]; 3] {
        &self.m
    }

    pub fn det(&self) -> BigInt {
        det_big(&self.m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// `u1^T F u2`.
    pub fn bilinear(&self, u1: &Vec3, u2: &Vec3) -> BigInt {
        (0..3)
            .flat_map(|i| (0..3).map(move |l| (i, l)))
            .map(|(i, l)| &u1[i] * &self.m[i][l] * &u2[l])
            .sum()
    }

    /// `F u`: the epipolar line in the first view of a point in the second.
    pub fn apply(&self, u: &Vec3) -> Vec3 {
        std::array::from_fn(|i| (0..3).map(|l| &self.m[i][l] * &u[l]).sum())
    }

    /// `F^T u`: the epipolar line in the second view of a point in the first.
    pub fn apply_transpose(&self, u: &Vec3) -> Vec3 {
        std::array::from_fn(|l| (0..3).map(|i| &self.m[i][l] * &u[i]).sum())
    }

    fn row(&self, i: usize) -> Vec3 {
        self.m[i].clone()
    }

    fn column(&self, l: usize) -> Vec3 {
        std::array::from_fn(|i| self.m[i][l].clone())
    }

    fn null_from(lines: [Vec3; 3]) -> Option<Vec3> {
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(a, b)| cross(&lines[a], &lines[b]))
            .find(|v| !is_zero3(v))
    }

    /// Right null vector (the epipole in the second view), if the rank is 2.
    pub fn right_null(&self) -> Option<Vec3> {
        Self::null_from([self.row(0), self.row(1), self.row(2)])
    }

    /// Left null vector (the epipole in the first view), if the rank is 2.
    pub fn left_null(&self) -> Option<Vec3> {
        Self::null_from([self.column(0), self.column(1), self.column(2)])
    }

    /// Equal up to a nonzero scalar.
    pub fn proportional(&self, other: &FundamentalMatrix) -> bool {
        let a: Vec<&BigInt> = self.m.iter().flatten().collect();
        let b: Vec<&BigInt> = other.m.iter().flatten().collect();
        let nonzero = |v: &[&BigInt]| v.iter().any(|x| !x.is_zero());
        nonzero(&a) && nonzero(&b) && (0..9).all(|i| (i + 1..9).all(|j| a[i] * b[j] == a[j] * b[i]))
    }
}

/// The fundamental matrix of two cameras from signed 4 x 4 minors:
/// `f_il = (-1)^(i+l) det(P1 without row i; P2 without row l)`.
pub fn fundamental(p1: &Camera, p2: &Camera) -> Result<FundamentalMatrix> {
    let m: [[BigInt; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|l| {
            let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(4);
            rows.extend((0..3).filter(|&r| r != i).map(|r| p1.matrix[r].to_vec()));
            rows.extend((0..3).filter(|&r| r != l).map(|r| p2.matrix[r].to_vec()));
            let d = det_big(&rows);
            if (i + l) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    });
    let f = FundamentalMatrix { m };
    if f.m.iter().flatten().all(Zero::is_zero) {
        return Err(Error::Degenerate("cameras share a pinhole".into()));
    }
    Ok(f)
}

/// The six epipoles of a camera triple, read off the null vectors of the
/// three fundamental matrices.
#[derive(Clone, Debug)]
pub struct TripleEpipoles {
    pub e12: Vec3,
    pub e21: Vec3,
    pub e23: Vec3,
    pub e32: Vec3,
    pub e31: Vec3,
    pub e13: Vec3,
}

impl TripleEpipoles {
    pub fn from_fundamentals(
        f12: &FundamentalMatrix,
        f23: &FundamentalMatrix,
        f31: &FundamentalMatrix,
    ) -> Result<Self> {
        let need = |v: Option<Vec3>| v.ok_or_else(|| Error::Degenerate("rank above 2".into()));
        Ok(TripleEpipoles {
            e12: need(f12.left_null())?,
            e21: need(f12.right_null())?,
            e23: need(f23.left_null())?,
            e32: need(f23.right_null())?,
            e31: need(f31.left_null())?,
            e13: need(f31.right_null())?,
        })
    }
}

/// The three compatibility forms of a triple,
/// `(e13^T F12 e23, e21^T F23 e31, e32^T F31 e12)`, all zero exactly when the
/// three matrices come from one camera triple.
///
/// Fails when the epipoles reveal aligned pinholes (both epipoles in some
/// view coincide), where the forms no longer characterize compatibility.
pub fn triple_residuals(
    f12: &FundamentalMatrix,
    f23: &FundamentalMatrix,
    f31: &FundamentalMatrix,
) -> Result<[BigInt; 3]> {
    let ep = TripleEpipoles::from_fundamentals(f12, f23, f31)?;
    if proportional3(&ep.e12, &ep.e13)
        || proportional3(&ep.e21, &ep.e23)
        || proportional3(&ep.e31, &ep.e32)
    {
        return Err(Error::Degenerate("the three pinholes are aligned".into()));
    }
    Ok([
        f12.bilinear(&ep.e13, &ep.e23),
        f23.bilinear(&ep.e21, &ep.e31),
        f31.bilinear(&ep.e32, &ep.e12),
    ])
}

/// Move II on cameras `1..4` (indices `0..3`): transfers `e21` through
/// `F24` and `e31` through `F34` and checks that the two lines in view 4
/// meet exactly at `e41 = P4 c1`.
pub fn verify_move_ii(cams: &[Camera; 4]) -> Result<bool> {
    let [c1, c2, c3, c4] = cams;
    let f24 = fundamental(c2, c4)?;
    let f34 = fundamental(c3, c4)?;
    let l41 = f24.apply_transpose(&c2.project(c1.pinhole()));
    let m41 = f34.apply_transpose(&c3.project(c1.pinhole()));
    if is_zero3(&l41) {
        return Err(Error::Degenerate("pinholes 1, 2, 4 are aligned".into()));
    }
    if is_zero3(&m41) {
        return Err(Error::Degenerate("pinholes 1, 3, 4 are aligned".into()));
    }
    let meet = cross(&l41, &m41);
    if is_zero3(&meet) {
        return Err(Error::Degenerate("pinholes 1, 2, 3, 4 are coplanar".into()));
    }
    Ok(proportional3(&meet, &c4.project(c1.pinhole())))
}

/// Move III on cameras `1..5` (indices `0..4`): the epipoles `e12`, `e21`
/// and the correspondences `(P1 c_i, P2 c_i)` for `i = 3, 4, 5` give nine
/// linear conditions on `F12`. They must have rank 8, with `F12` spanning
/// the solution.
pub fn verify_move_iii(cams: &[Camera; 5]) -> Result<bool> {
    let (c1, c2) = (&cams[0], &cams[1]);
    let e12 = c1.project(c2.pinhole());
    let e21 = c2.project(c1.pinhole());
    let pairs: Vec<(Vec3, Vec3)> = cams[2..]
        .iter()
        .map(|c| (c1.project(c.pinhole()), c2.project(c.pinhole())))
        .collect();

    let lines: Vec<Vec3> = pairs.iter().map(|(u1, _)| cross(&e12, u1)).collect();
    if lines.iter().any(is_zero3) {
        return Err(Error::Degenerate(
            "a pinhole lies on the line through pinholes 1 and 2".into(),
        ));
    }
    for a in 0..3 {
        for b in a + 1..3 {
            if proportional3(&lines[a], &lines[b]) {
                return Err(Error::Degenerate(format!(
                    "pinholes {} and {} lie in one plane with pinholes 1 and 2",
                    a + 3,
                    b + 3
                )));
            }
        }
    }

    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(9);
    for (u1, u2) in &pairs {
        rows.push((0..9).map(|k| &u1[k / 3] * &u2[k % 3]).collect());
    }
    for l in 0..3 {
        rows.push(
            (0..9)
                .map(|k| {
                    if k % 3 == l {
                        e12[k / 3].clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect(),
        );
    }
    for i in 0..3 {
        rows.push(
            (0..9)
                .map(|k| {
                    if k / 3 == i {
                        e21[k % 3].clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect(),
        );
    }
    let f = fundamental(c1, c2)?;
    let flat: Vec<&BigInt> = f.entries().iter().flatten().collect();
    let satisfied = rows.iter().all(|r| {
        r.iter()
            .zip(&flat)
            .map(|(a, b)| a * *b)
            .sum::<BigInt>()
            .is_zero()
    });
    Ok(satisfied && rank_big(rows) == 8)
}

/// Whether `P (a I + c v^T) = a P`, the stabilizer identity.
pub fn stabilizer_fixes(p: &Camera, alpha: i64, v: [i64; 4]) -> bool {
    let c = p.pinhole();
    let a = BigInt::from(alpha);
    let m: [[BigInt; 4]; 4] = std::array::from_fn(|r| {
        std::array::from_fn(|col| {
            let diag = if r == col { a.clone() } else { BigInt::zero() };
            diag + &c[r] * v[col]
        })
    });
    let pm = p.transformed(&m);
    match pm {
        Ok(q) => (0..3).all(|i| (0..4).all(|j| q.matrix[i][j] == &a * &p.matrix[i][j])),
        // a = 0 collapses the camera, which is consistent with a P = 0
        Err(_) => alpha == 0,
    }
}

/// Dimension of `{ (M, s1, s2) : P1 M = s1 P1, P2 M = s2 P2 }`. For distinct
/// pinholes only scalar matrices qualify, so this is 1.
pub fn joint_stabilizer_dim(p1: &Camera, p2: &Camera) -> usize {
    // unknowns: m00..m33 then s1, s2
    let mut rows = Vec::with_capacity(24);
    for (which, p) in [p1, p2].into_iter().enumerate() {
        for i in 0..3 {
            for j in 0..4 {
                let mut row = vec![BigInt::zero(); 18];
                for k in 0..4 {
                    row[4 * k + j] = p.matrix[i][k].clone();
                }
                row[16 + which] = -p.matrix[i][j].clone();
                rows.push(row);
            }
        }
    }
    kernel_basis(&rows, 18).len()
}

/// A random camera with entries in `[-bound, bound]`.
pub fn random_camera(rng: &mut impl Rng, bound: i64) -> Camera {
    loop {
        let rows: [[i64; 4]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-bound..=bound)));
        if let Ok(c) = Camera::new(rows) {
            return c;
        }
    }
}

/// Whether no three pinholes are aligned and no four coplanar.
pub fn pinholes_generic(cams: &[Camera]) -> bool {
    let k = cams.len();
    let rank = |idx: &[usize]| rank_big(idx.iter().map(|&i| cams[i].pinhole().to_vec()).collect());
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                if rank(&[a, b, c]) < 3 {
                    return false;
                }
                for d in c + 1..k {
                    if rank(&[a, b, c, d]) < 4 {
                        return false;
                    }
                }
            }
        }
    }
    k < 2 || (0..k).all(|a| (a + 1..k).all(|b| rank(&[a, b]) == 2))
}

/// `k` random cameras with generic pinholes.
pub fn random_generic_cameras(rng: &mut impl Rng, k: usize, bound: i64) -> Vec<Camera> {
    loop {
        let cams: Vec<Camera> = (0..k).map(|_| random_camera(rng, bound)).collect();
        if pinholes_generic(&cams) {
            return cams;
        }
    }
}

/// A random invertible 4 x 4 integer matrix.
pub fn random_transform(rng: &mut impl Rng, bound: i64) -> [[BigInt; 4]; 4] {
    loop {
        let t: [[BigInt; 4]; 4] = std::array::from_fn(|_| {
            std::array::from_fn(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        });
        if !det_big(&t.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).is_zero() {
            return t;
        }
    }
}

/// A random rank-2 matrix (for incompatibility checks).
pub fn random_rank_two(rng: &mut impl Rng, bound: i64) -> FundamentalMatrix {
    loop {
        let a: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        let b: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        let c: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        let d: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        let (a, b, c, d) = (big3(a), big3(b), big3(c), big3(d));
        let m = std::array::from_fn(|i| std::array::from_fn(|l| &a[i] * &b[l] + &c[i] * &d[l]));
        let f = FundamentalMatrix { m };
        if f.right_null().is_some() {
            return f;
        }
    }
}

/// Short textual dump used by the hidden CLI subcommand.
pub fn describe(cams: &[Camera]) -> String {
    let mut out = String::new();
    for (i, c) in cams.iter().enumerate() {
        let p: Vec<String> = c.pinhole().iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("camera {}: pinhole [{}]\n", i + 1, p.join(", ")));
    }
    for i in 0..cams.len() {
        for j in i + 1..cams.len() {
            if let Ok(f) = fundamental(&cams[i], &cams[j]) {
                let max = f
                    .entries()
                    .iter()
                    .flatten()
                    .map(|x| x.abs())
                    .max()
                    .unwrap_or_default();
                out.push_str(&format!(
                    "F{}{}: det {}, largest entry {}\n",
                    i + 1,
                    j + 1,
                    f.det(),
                    max
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn random_point(rng: &mut ChaCha8Rng) -> Vec4 {
        std::array::from_fn(|_| BigInt::from(rng.gen_range(-20..=20)))
    }

    #[test]
    fn pinhole_is_null_vector() {
        let mut r = rng(1);
        for _ in 0..50 {
            let c = random_camera(&mut r, 10);
            assert!(is_zero3(&c.project(c.pinhole())));
        }
        assert!(Camera::new([[1, 0, 0, 0], [2, 0, 0, 0], [0, 1, 0, 0]]).is_err());
    }

    #[test]
    fn correspondences_and_epipoles() {
        let mut r = rng(2);
        for _ in 0..100 {
            let cams = random_generic_cameras(&mut r, 2, 10);
            let f = fundamental(&cams[0], &cams[1]).unwrap();
            let x = random_point(&mut r);
            assert!(f
                .bilinear(&cams[0].project(&x), &cams[1].project(&x))
                .is_zero());
            assert!(f.det().is_zero());
            let e12 = cams[0].project(cams[1].pinhole());
            let e21 = cams[1].project(cams[0].pinhole());
            assert!(proportional3(&f.left_null().unwrap(), &e12));
            assert!(proportional3(&f.right_null().unwrap(), &e21));
        }
        let c = random_camera(&mut r, 10);
        assert!(fundamental(&c, &c).is_err());
    }

    #[test]
    fn move_ii_flags_coplanar_and_aligned_pinholes() {
        // pinholes are the unit points and (1, 1, 0, 0): all in the plane x3 = 0
        let cams = [
            Camera::new([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]).unwrap(),
            Camera::new([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]).unwrap(),
            Camera::new([[1, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]).unwrap(),
            Camera::new([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]).unwrap(),
        ];
        assert_eq!(cams[2].pinhole().iter().filter(|x| !x.is_zero()).count(), 2);
        assert!(matches!(verify_move_ii(&cams), Err(Error::Degenerate(_))));
    }
}
