use crate::error::{Error, Result};
use crate::numerics::matrix::{Complex64, ComplexMatrix, ONE};

/// Lexicographically ordered k-subsets of {0, …, n−1}.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(n, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(n, k, 0, &mut current, &mut out);
    out
}

/// Determinant of a small dense complex matrix by Gaussian elimination
/// with partial pivoting.
fn det_in_place(m: &mut [Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut det = ONE;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| m[a][col].norm().partial_cmp(&m[b][col].norm()).unwrap())
            .unwrap();
        if m[pivot_row][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col];
        det *= pivot;
        for row in col + 1..n {
            let factor = m[row][col] / pivot;
            for j in col..n {
                let sub = factor * m[col][j];
                m[row][j] -= sub;
            }
        }
    }
    det
}

/// k-th compound of a rectangular matrix: the C(rows,k)×C(cols,k) matrix
/// of all k×k minors over lexicographically ordered index sets. Satisfies
/// the Cauchy–Binet identity compound(XY) = compound(X)·compound(Y).
pub fn compound_rect(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let max = a.rows().min(a.cols());
    if k == 0 || k > max {
        return Err(Error::BadRank { k, max });
    }
    let row_sets = index_subsets(a.rows(), k);
    let col_sets = index_subsets(a.cols(), k);
    let mut out = ComplexMatrix::zeros(row_sets.len(), col_sets.len());
    let mut scratch = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for (bi, rows) in row_sets.iter().enumerate() {
        for (bj, cols) in col_sets.iter().enumerate() {
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    scratch[i][j] = a[(r, c)];
                }
            }
            out[(bi, bj)] = det_in_place(&mut scratch);
        }
    }
    Ok(out)
}

/// k-th compound (exterior power) matrix of a square input. For a
/// Hermitian input its spectrum consists of all k-fold products of
/// eigenvalues of A.
pub fn compound(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "compound needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    compound_rect(a, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_compound_is_identity_map() {
        let a = ComplexMatrix::from_real(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0])
            .unwrap();
        assert_eq!(compound(&a, 1).unwrap(), a);
    }

    #[test]
    fn top_compound_is_determinant() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let c = compound(&a, 2).unwrap();
        assert_eq!(c.rows(), 1);
        assert!((c[(0, 0)].re + 2.0).abs() < 1e-12);
        assert!(c[(0, 0)].im.abs() < 1e-14);
    }

    #[test]
    fn diagonal_second_compound() {
        let a = ComplexMatrix::diag_real(&[3.0, 2.0, 1.0]);
        let c = compound(&a, 2).unwrap();
        // brute-force oracle over all index pairs: minors of a diagonal
        // matrix are the pairwise products 3·2, 3·1, 2·1 on the diagonal
        let expect = [6.0, 3.0, 2.0];
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { expect[i] } else { 0.0 };
                assert!((c[(i, j)].re - want).abs() < 1e-12);
                assert!(c[(i, j)].im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bad_rank_rejected() {
        let a = ComplexMatrix::identity(3);
        assert!(matches!(compound(&a, 0), Err(Error::BadRank { .. })));
        assert!(matches!(compound(&a, 4), Err(Error::BadRank { .. })));
    }
}
