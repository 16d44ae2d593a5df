//! Gaussian elimination over the rationals, plus a floating-point
//! least-squares helper.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::rational::Rational;

pub type QVec = Vec<Rational>;

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<QVec>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A basis of `{x : rows · x = 0}`, one vector per free column.
pub fn null_space(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Solves `rows · x = rhs`, returning the solution with free variables set
/// to zero together with a kernel basis, or `None` if inconsistent.
pub fn solve(rows: &[QVec], rhs: &[Rational], ncols: usize) -> Option<(QVec, Vec<QVec>)> {
    let mut aug: Vec<QVec> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some((x, null_space(rows, ncols)))
}

/// Reduced echelon basis of the span of `vectors`.
pub fn span_basis(mut vectors: Vec<QVec>, dim: usize) -> Vec<QVec> {
    rref(&mut vectors, dim);
    vectors
}

/// Minimum-norm least-squares solution of `a · x = b` by SVD.
pub fn least_squares(a: &[Vec<f64>], ncols: usize, b: &[f64]) -> Vec<f64> {
    if ncols == 0 || a.is_empty() {
        return vec![0.0; ncols];
    }
    let m = DMatrix::from_fn(a.len(), ncols, |i, j| a[i][j]);
    let rhs = DVector::from_column_slice(b);
    let svd = m.svd(true, true);
    let scale = svd.singular_values.max().max(1.0);
    svd.solve(&rhs, 1e-12 * scale)
        .map(|x| x.iter().copied().collect())
        .unwrap_or_else(|_| vec![0.0; ncols])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(row: &[i64]) -> QVec {
        row.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_of_rank_two() {
        let mut m = vec![q(&[2, 4, 2]), q(&[1, 2, 3]), q(&[3, 6, 5])];
        let pivots = rref(&mut m, 3);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(m, vec![q(&[1, 2, 0]), q(&[0, 0, 1])]);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = vec![q(&[1, 1, -1, 0]), q(&[0, 2, 0, -2])];
        let ns = null_space(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = vec![q(&[1, 1]), q(&[2, 2])];
        assert!(solve(&m, &[int(1), int(3)], 2).is_none());
        let (x, k) = solve(&m, &[int(1), int(2)], 2).unwrap();
        assert_eq!(x, q(&[1, 0]));
        assert_eq!(k, vec![q(&[-1, 1])]);
        let (x, _) = solve(&[q(&[3])], &[int(1)], 1).unwrap();
        assert_eq!(x, vec![ratio(1, 3)]);
    }

    #[test]
    fn least_squares_minimum_norm() {
        let x = least_squares(&[vec![1.0, 1.0]], 2, &[2.0]);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
        assert_eq!(least_squares(&[], 3, &[]), vec![0.0; 3]);
    }
}
