//! Dense matrices over `Z[X]` and fraction-free (Bareiss) elimination.

use crate::laurent::{LaurentError, LaurentPoly, PolySum};

pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

pub fn identity(n: usize, rank: usize) -> PolyMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { LaurentPoly::one(rank) } else { LaurentPoly::zero(rank) })
                .collect()
        })
        .collect()
}

pub fn mul(a: &PolyMatrix, b: &PolyMatrix, rank: usize) -> PolyMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    // nonzero columns of each row of b
    let support: Vec<Vec<usize>> = b.iter().map(|r| (0..m).filter(|&j| !r[j].is_zero()).collect()).collect();
    let mut out = Vec::with_capacity(n);
    for row in a.iter().take(n) {
        let mut acc: Vec<PolySum> = (0..m).map(|_| PolySum::new(rank)).collect();
        for l in 0..k {
            if row[l].is_zero() {
                continue;
            }
            for &j in &support[l] {
                acc[j].add_product(&row[l], &b[l][j]);
            }
        }
        out.push(acc.into_iter().map(PolySum::finish).collect());
    }
    out
}

pub fn mul_vec(a: &PolyMatrix, v: &[LaurentPoly], rank: usize) -> Vec<LaurentPoly> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(LaurentPoly::zero(rank), |acc, (x, y)| &acc + &(x * y))
        })
        .collect()
}

pub fn add(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

/// Fraction-free elimination on `[A | B]`.
///
/// Returns `det A` and, when it is nonzero, `det(A) · A^{-1} B`.
pub fn bareiss_solve(a: &PolyMatrix, b: &PolyMatrix, rank: usize) -> Result<(LaurentPoly, Option<PolyMatrix>), LaurentError> {
    let n = a.len();
    if n == 0 {
        return Ok((LaurentPoly::one(rank), Some(Vec::new())));
    }
    let m = b.first().map_or(0, |r| r.len());
    let mut aug: PolyMatrix = a.iter().zip(b).map(|(r, s)| r.iter().chain(s).cloned().collect()).collect();
    let mut negate = false;
    let mut prev = LaurentPoly::one(rank);
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !aug[i][k].is_zero())
            .min_by_key(|&i| aug[i][k].num_terms());
        let Some(p) = pivot else {
            return Ok((LaurentPoly::zero(rank), None));
        };
        if p != k {
            aug.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = aug.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n + m {
                let v = &(&row[j] * &pivot_row[k]) - &(&row[k] * &pivot_row[j]);
                row[j] = v.div_exact(&prev)?;
            }
            row[k] = LaurentPoly::zero(rank);
        }
        prev = aug[k][k].clone();
    }
    let last = aug[n - 1][n - 1].clone();
    let det = if negate { -&last } else { last.clone() };
    // y = last · x solves U y = last · c
    let mut y: PolyMatrix = vec![vec![LaurentPoly::zero(rank); m]; n];
    for c in 0..m {
        for i in (0..n).rev() {
            let mut num = &last * &aug[i][n + c];
            for j in i + 1..n {
                if !aug[i][j].is_zero() && !y[j][c].is_zero() {
                    num = &num - &(&aug[i][j] * &y[j][c]);
                }
            }
            y[i][c] = num.div_exact(&aug[i][i])?;
        }
    }
    if negate {
        for row in y.iter_mut() {
            for x in row.iter_mut() {
                *x = -std::mem::replace(x, LaurentPoly::zero(rank));
            }
        }
    }
    Ok((det, Some(y)))
}

pub fn determinant(a: &PolyMatrix, rank: usize) -> Result<LaurentPoly, LaurentError> {
    Ok(bareiss_solve(a, &vec![Vec::new(); a.len()], rank)?.0)
}
