//! Exact linear algebra over the integers and rationals.
//!
//! Ranks are computed by fraction-free (Bareiss) elimination on big
//! integers, so no decision depends on a tolerance. A rank modulo the
//! Mersenne prime `2^61 - 1` is also available; it never exceeds the
//! rational rank, which makes it a certificate whenever it already meets an
//! upper bound known from elsewhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix with small integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            m.row_mut(i).copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [i64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Appends a zero row and returns its index.
    pub fn push_zero_row(&mut self) -> usize {
        self.data.resize(self.data.len() + self.cols, 0);
        self.rows += 1;
        self.rows - 1
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(k, &v)| (k / self.cols, k % self.cols, v))
    }

    /// `self * x` in exact arithmetic.
    pub fn mul_vec(&self, x: &[i64]) -> Vec<i128> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum()
            })
            .collect()
    }

    pub fn to_big(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    /// Exact rank by Bareiss elimination.
    pub fn rank(&self) -> usize {
        rank_big(self.to_big())
    }

    /// Rank over `GF(2^61 - 1)`; a lower bound on the rational rank.
    pub fn rank_mod_p(&self) -> usize {
        let rows: Vec<Vec<u64>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| to_field(v)).collect())
            .collect();
        rank_mod_p(rows, self.cols)
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

/// The Mersenne prime `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

fn to_field(v: i64) -> u64 {
    let r = (v as i128).rem_euclid(MODULUS as i128);
    r as u64
}

fn mul_mod(a: u64, b: u64) -> u64 {
    let prod = a as u128 * b as u128;
    let folded = (prod & MODULUS as u128) + (prod >> 61);
    let mut r = folded as u64;
    if r >= MODULUS {
        r -= MODULUS;
    }
    r
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn rank_mod_p(mut m: Vec<Vec<u64>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c], MODULUS - 2);
        for v in &mut m[rank][c..] {
            *v = mul_mod(*v, inv);
        }
        let (top, below) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in below.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, pivot[j]);
                row[j] = if row[j] >= sub {
                    row[j] - sub
                } else {
                    row[j] + MODULUS - sub
                };
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Exact rank of a big-integer matrix by fraction-free elimination.
///
/// After processing pivot `k`, every remaining entry is a `(k+1) x (k+1)`
/// minor of the input, so the division by the previous pivot is exact.
pub fn rank_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, below) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[c];
        for row in below.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = top[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in &mut m[r] {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let pivot_row = m[r][c..cols].to_vec();
            for (x, p) in m[i][c..cols].iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Integer basis of the right kernel, one primitive vector per free column.
pub fn kernel_basis(m: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut q: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    let pivots = rref(&mut q);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -q[r][free].clone();
        }
        basis.push(primitive(&v));
    }
    basis
}

/// Scales a rational vector to a primitive integer vector.
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    ints.into_iter().map(|x| x / &gcd * sign).collect()
}

/// Determinant by fraction-free elimination.
pub fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}
