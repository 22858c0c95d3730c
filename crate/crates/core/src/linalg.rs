//! Small exact integer / rational linear algebra used by the lattice code.
//!
//! Everything here works on dense row-major matrices of modest size (the rank
//! of a root datum), so no attempt is made at asymptotic efficiency.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A square integer matrix acting on `Z^n` by `v -> M v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    /// Builds a matrix from rows. Returns `None` unless the rows form a square.
    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(IntMatrix { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(|c| c.to_vec()).take(self.n).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.get(r, c) == i64::from(r == c)))
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|r| {
                let row = &self.data[r * self.n..(r + 1) * self.n];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Applies the transpose, i.e. pulls a covector back along the matrix.
    pub fn apply_transpose(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|c| (0..self.n).map(|r| self.get(r, c) * v[r]).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        let n = self.n;
        let mut data = vec![0; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * other.get(k, c);
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        bareiss_det(rows)
    }

    /// Inverse over the integers, if the determinant is a unit.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let rows: Vec<Vec<BigRational>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
            .collect();
        let inv = rational_inverse(rows)?;
        let mut data = Vec::with_capacity(self.n * self.n);
        for row in inv {
            for x in row {
                if !x.is_integer() {
                    return None;
                }
                data.push(x.to_integer().to_i64()?);
            }
        }
        Some(IntMatrix { n: self.n, data })
    }
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of the principal submatrix on `indices`.
pub fn principal_minor(rows: &[Vec<i64>], indices: &[usize]) -> BigInt {
    let sub = indices
        .iter()
        .map(|&i| indices.iter().map(|&j| BigInt::from(rows[i][j])).collect())
        .collect();
    bareiss_det(sub)
}

fn rational_inverse(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        inv.swap(k, p);
        let piv = a[k][k].clone();
        for j in 0..n {
            a[k][j] = &a[k][j] / &piv;
            inv[k][j] = &inv[k][j] / &piv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
                let t = &f * &inv[k][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Rank of an integer matrix given by rows (over the rationals).
pub fn rank(rows: &[Vec<i64>]) -> usize {
    row_echelon_pivots(rows).len()
}

/// Returns the pivot columns of the reduced row echelon form.
fn row_echelon_pivots(rows: &[Vec<i64>]) -> Vec<usize> {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let m = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        for i in 0..m {
            if i != row && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[row][col];
                for j in col..ncols {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Exact left inverse of a full-column-rank integer matrix `M` (`m x k`,
/// `m >= k`), scaled to integers: returns `(L, d)` with `L M = d I`, `d > 0`.
///
/// Used to read off coordinates of a lattice vector in the span of the
/// columns of `M`.
pub fn scaled_left_inverse(columns: &[Vec<i64>]) -> Option<(Vec<Vec<i64>>, i64)> {
    let k = columns.len();
    if k == 0 {
        return Some((Vec::new(), 1));
    }
    let m = columns[0].len();
    // M^T has the columns as rows; pivots of M^T's row space tell us nothing
    // about rows of M, so pick independent rows of M directly.
    let rows_of_m: Vec<Vec<i64>> = (0..m).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let transposed: Vec<Vec<i64>> = (0..k).map(|c| rows_of_m.iter().map(|r| r[c]).collect()).collect();
    let chosen = row_echelon_pivots(&transposed);
    if chosen.len() != k {
        return None;
    }
    let square: Vec<Vec<BigRational>> = chosen
        .iter()
        .map(|&r| rows_of_m[r].iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    // square is S with S c = v_S; inverse gives c = S^{-1} v_S.
    let inv = rational_inverse(square)?;
    let mut denom = BigInt::one();
    for row in &inv {
        for x in row {
            denom = denom.lcm(x.denom());
        }
    }
    let d = denom.to_i64()?;
    let mut out = vec![vec![0i64; m]; k];
    for (i, row) in inv.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let scaled = x * BigRational::from_integer(denom.clone());
            out[i][chosen[j]] = scaled.to_integer().to_i64()?;
        }
    }
    Some((out, d))
}

/// Smith normal form `U A V = D` of an integer matrix (`m x n`).
///
/// Returns `(U, D, V)` with `U`, `V` unimodular.
#[allow(clippy::type_complexity)]
pub fn smith_normal_form(a: &[Vec<i64>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut d: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut u = big_identity(m);
    let mut v = big_identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // pick the smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        let mut clean = true;
        for i in t + 1..m {
            let q = d[i][t].div_floor(&d[t][t]);
            if !q.is_zero() {
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
            }
            if !d[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..n {
            let q = d[t][j].div_floor(&d[t][t]);
            if !q.is_zero() {
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
            }
            if !d[t][j].is_zero() {
                clean = false;
            }
        }
        if clean {
            // divisibility condition is not needed for solving, skip it
            if d[t][t].is_negative() {
                for x in d[t].iter_mut() {
                    *x = -x.clone();
                }
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
            t += 1;
        }
    }
    (u, d, v)
}

fn big_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// row[i] -= q * row[k]
fn row_axpy(a: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
    let src = a[k].clone();
    for (x, s) in a[i].iter_mut().zip(src) {
        *x -= q * s;
    }
}

/// col[j] -= q * col[k]
fn col_axpy(a: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[k].clone();
        row[j] -= q * s;
    }
}

/// All integral solutions of `A x = b` as a particular solution plus a
/// lattice basis of the kernel. `None` when no integral solution exists.
pub fn integral_solutions(a: &[Vec<i64>], b: &[i64]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let (u, d, v) = smith_normal_form(a);
    // D y = U b, x = V y
    let ub: Vec<BigInt> = (0..m)
        .map(|i| (0..m).map(|k| &u[i][k] * BigInt::from(b[k])).sum())
        .collect();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m {
        let di = if i < n { d[i][i].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let x: Vec<BigInt> = (0..n)
        .map(|r| (0..n).map(|c| &v[r][c] * &y[c]).sum())
        .collect();
    let kernel = (0..n)
        .filter(|&j| j >= m || d[j][j].is_zero())
        .map(|j| (0..n).map(|r| v[r][j].clone()).collect())
        .collect();
    Some((x, kernel))
}
