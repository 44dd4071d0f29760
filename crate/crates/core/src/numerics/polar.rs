use crate::error::{Error, Result};
use crate::numerics::eig::{eig_hermitian, Tolerance};
use crate::numerics::matrix::{Complex64, ComplexMatrix, ZERO};

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthogonalizes `v` against `basis` in place (one modified Gram-Schmidt
/// pass), returning the residual norm.
fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) -> f64 {
    for b in basis {
        let coeff = dot(b, v);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= coeff * bi;
        }
    }
    norm(v)
}

/// Unitary polar factor W with X = W·|X|, |X| = (X*X)^{1/2}. Directions in
/// the kernel of X are completed to a unitary by matching orthonormal bases
/// of ker X and ker X* index-wise; any completion satisfies the contract.
pub fn polar_unitary(x: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "polar_unitary needs a square matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let n = x.rows();
    let gram = x.adjoint().matmul(x);
    let decomp = eig_hermitian(&gram, tol)?;
    let sigma: Vec<f64> = decomp.eigenvalues().iter().map(|&l| l.max(0.0).sqrt()).collect();
    let cutoff = sigma[0] * 1e-12;

    // left singular vectors u_k = X v_k / σ_k on the support of X
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..n {
        if sigma[k] <= cutoff {
            break;
        }
        let v_k = decomp.eigenvectors().column(k);
        let mut u: Vec<Complex64> = (0..n)
            .map(|i| (0..n).map(|j| x[(i, j)] * v_k[j]).sum::<Complex64>() / sigma[k])
            .collect();
        // remove rounding drift against the columns collected so far
        orthogonalize(&mut u, &u_cols);
        let len = norm(&u);
        for z in &mut u {
            *z /= len;
        }
        u_cols.push(u);
    }

    // complete to an orthonormal basis of ker X* from the standard basis
    let mut j = 0;
    while u_cols.len() < n {
        let mut cand: Vec<Complex64> = (0..n)
            .map(|i| if i == j { Complex64::new(1.0, 0.0) } else { ZERO })
            .collect();
        let res = orthogonalize(&mut cand, &u_cols);
        if res > 1e-8 {
            for z in &mut cand {
                *z /= res;
            }
            // second pass for orthogonality quality
            let res2 = orthogonalize(&mut cand, &u_cols);
            for z in &mut cand {
                *z /= res2;
            }
            u_cols.push(cand);
        }
        j += 1;
        assert!(j <= n, "kernel completion exhausted the standard basis");
    }

    let u = ComplexMatrix::from_columns(n, &u_cols);
    Ok(u.matmul(&decomp.eigenvectors().adjoint()))
}
