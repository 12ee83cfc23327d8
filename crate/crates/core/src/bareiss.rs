//! Fraction-free (Bareiss) elimination for square integer systems.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact_arith::ExactRational;

/// Solves `a x = b` exactly over the rationals.
///
/// Forward elimination stays in the integers (every Bareiss step divides
/// exactly by the previous pivot); only back substitution uses fractions.
/// Returns `None` when the matrix is singular.
pub fn solve(mut a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> Option<Vec<ExactRational>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length");
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    for (row, rhs) in a.iter_mut().zip(b) {
        row.push(rhs);
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(k, swap);
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..=n {
                let v = &row[j] * pivot - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![ExactRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = ExactRational::from(a[i][n].clone());
        for j in i + 1..n {
            if !a[i][j].is_zero() {
                acc -= &(ExactRational::from(a[i][j].clone()) * &x[j]);
            }
        }
        x[i] = acc / ExactRational::from(a[i][i].clone());
    }
    Some(x)
}

/// Solves a possibly singular but consistent system `a x = b`.
///
/// Reduces to fraction-free row echelon form, skipping columns without a
/// pivot; free variables are set to zero. Returns `None` when some zero
/// row carries a nonzero right-hand side.
pub fn solve_consistent(mut a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> Option<Vec<ExactRational>> {
    let rows = a.len();
    assert_eq!(b.len(), rows, "right-hand side length");
    let cols = a.first().map_or(0, Vec::len);
    for (row, rhs) in a.iter_mut().zip(b) {
        row.push(rhs);
    }
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(swap) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, swap);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..=cols {
                let v = &row[j] * &pivot_row[c] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![ExactRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate().rev() {
        let mut acc = ExactRational::from(a[i][cols].clone());
        for j in c + 1..cols {
            if !a[i][j].is_zero() && !x[j].is_zero() {
                acc -= &(ExactRational::from(a[i][j].clone()) * &x[j]);
            }
        }
        x[c] = acc / ExactRational::from(a[i][c].clone());
    }
    Some(x)
}

/// Determinant by the same elimination (used in tests and diagnostics).
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(s) => {
                    a.swap(k, s);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}
