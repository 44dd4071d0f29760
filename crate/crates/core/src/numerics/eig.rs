use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::matrix::{Complex64, ComplexMatrix};

/// Mixed absolute/relative comparison tolerance. Margins are compared
/// against `-(absolute + relative * scale)` so checks track instance norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { absolute: 1e-8, relative: 1e-8 }
    }
}

impl Tolerance {
    pub fn new(absolute: f64, relative: f64) -> Self {
        assert!(absolute >= 0.0 && relative >= 0.0);
        Tolerance { absolute, relative }
    }

    /// Acceptance bound for a margin at the given scale.
    pub fn bound(&self, scale: f64) -> f64 {
        self.absolute + self.relative * scale.abs()
    }
}

/// Eigenvalues in descending order with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// max |λ_i| — the operator norm of the decomposed Hermitian matrix.
    pub fn operator_norm(&self) -> f64 {
        self.lambda_max().abs().max(self.lambda_min().abs())
    }

    /// V · diag(g(λ_i)) · V*. The backbone of all matrix functions.
    pub fn apply_scalar(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        self.recombine(&values)
    }

    /// V · diag(values) · V* for explicit replacement eigenvalues.
    pub fn recombine(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        assert_eq!(values.len(), n);
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let w = values[k];
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        // the result of V diag V* is Hermitian up to rounding; symmetrize
        out.hermitian_part()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_scalar(|t| t)
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOLERANCE: f64 = 1e-12;

/// Off-diagonal Frobenius mass sqrt(Σ_{i≠j} |a_ij|²).
fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi with complex
/// rotations. Deterministic: fixed pivot order, convergence when the
/// off-diagonal mass drops below `1e-12 · ‖A‖_F`, budget of 100 sweeps.
pub fn eig_hermitian(a: &ComplexMatrix, tol: Tolerance) -> Result<SpectralDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let fro = a.frobenius_norm();
    let deviation = a.hermitian_deviation();
    let bound = tol.absolute * (1.0 + fro);
    if deviation > bound {
        return Err(Error::NotHermitian { deviation, bound });
    }

    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOLERANCE * fro;

    let mut converged = false;
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(&m) <= threshold {
            converged = true;
            break;
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let beta = m[(p, q)];
                let babs = beta.norm();
                // entries this small cannot push the off-mass above threshold
                if babs * (n as f64) <= threshold {
                    continue;
                }
                let omega = beta / babs;
                let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * babs);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_conj_omega = omega.conj() * s;
                let s_omega = omega * s;

                // A ← A·J (columns p, q)
                for i in 0..n {
                    let x = m[(i, p)];
                    let y = m[(i, q)];
                    m[(i, p)] = x * c - y * s_conj_omega;
                    m[(i, q)] = x * s + y * (omega.conj() * c);
                }
                // A ← J*·A (rows p, q)
                for j in 0..n {
                    let x = m[(p, j)];
                    let y = m[(q, j)];
                    m[(p, j)] = x * c - y * s_omega;
                    m[(q, j)] = x * s + y * (omega * c);
                }
                // exact zeros on the annihilated pair, real diagonal
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

                // V ← V·J
                for i in 0..n {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = x * c - y * s_conj_omega;
                    v[(i, q)] = x * s + y * (omega.conj() * c);
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_mass: off_diagonal_mass(&m),
        });
    }

    // descending sort, stable within ties (order inherited from the sweep)
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// Positive-semidefiniteness test. Returns `(flag, margin)` with
/// `margin = λ_min(A)` and `flag = margin ≥ −tol.absolute·(1+‖A‖_∞)`.
pub fn is_psd(a: &ComplexMatrix, tol: Tolerance) -> Result<(bool, f64)> {
    let decomp = eig_hermitian(a, tol)?;
    let margin = decomp.lambda_min();
    let flag = margin >= -tol.absolute * (1.0 + decomp.operator_norm());
    Ok((flag, margin))
}

/// Singular values in descending order, via the spectrum of X*X.
pub fn singular_values(x: &ComplexMatrix, tol: Tolerance) -> Result<Vec<f64>> {
    let gram = x.adjoint().matmul(x);
    let decomp = eig_hermitian(&gram, tol)?;
    let k = x.rows().min(x.cols());
    Ok(decomp.eigenvalues().iter().take(k).map(|&l| l.max(0.0).sqrt()).collect())
}

/// Operator norm ‖X‖_∞ (largest singular value).
pub fn operator_norm(x: &ComplexMatrix, tol: Tolerance) -> Result<f64> {
    Ok(singular_values(x, tol)?[0])
}

/// Ky Fan k-norm: the sum of the k largest singular values. k = 1 is the
/// operator norm, k = min(rows, cols) the trace norm.
pub fn ky_fan_norm(x: &ComplexMatrix, k: usize, tol: Tolerance) -> Result<f64> {
    let max = x.rows().min(x.cols());
    if k == 0 || k > max {
        return Err(Error::BadRank { k, max });
    }
    let s = singular_values(x, tol)?;
    Ok(s[..k].iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn diagonal_input_sorted() {
        let a = ComplexMatrix::diag_real(&[3.0, 1.0, 2.0]);
        let d = eig_hermitian(&a, tol()).unwrap();
        assert_eq!(d.eigenvalues(), &[3.0, 2.0, 1.0]);
        // eigenvectors form a permutation matrix
        let v = d.eigenvectors();
        for j in 0..3 {
            let col = v.column(j);
            let ones = col.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-12).count();
            let zeros = col.iter().filter(|z| z.norm() < 1e-12).count();
            assert_eq!((ones, zeros), (1, 2));
        }
    }

    #[test]
    fn rank_one_pair() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let d = eig_hermitian(&a, tol()).unwrap();
        assert!((d.eigenvalues()[0] - 2.0).abs() < 1e-12);
        assert!(d.eigenvalues()[1].abs() < 1e-12);
    }

    #[test]
    fn counterexample_sum_eigenvalues() {
        // A+B from the 2x2 counterexample: eigenvalues ±√2
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).unwrap();
        let d = eig_hermitian(&a, tol()).unwrap();
        let r2 = 2.0_f64.sqrt();
        assert!((d.eigenvalues()[0] - r2).abs() < 1e-12);
        assert!((d.eigenvalues()[1] + r2).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_round_trip() {
        let a = ComplexMatrix::new(
            3,
            3,
            vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, -0.5),
                Complex64::new(0.0, 0.25),
                Complex64::new(1.0, 0.5),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.75, 0.0),
                Complex64::new(0.0, -0.25),
                Complex64::new(0.75, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        let d = eig_hermitian(&a, tol()).unwrap();
        let back = d.reconstruct();
        assert!(back.sub(&a).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
        let gram = d.eigenvectors().adjoint().matmul(d.eigenvectors());
        assert!(gram.sub(&ComplexMatrix::identity(3)).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&a, tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn is_psd_examples() {
        let (flag, margin) = is_psd(&ComplexMatrix::identity(3), tol()).unwrap();
        assert!(flag);
        assert!((margin - 1.0).abs() < 1e-12);
        let (flag, margin) = is_psd(&ComplexMatrix::diag_real(&[1.0, -1.0]), tol()).unwrap();
        assert!(!flag);
        assert!((margin + 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_value_examples() {
        let s = singular_values(&ComplexMatrix::diag_real(&[-3.0, 2.0]), tol()).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-10 && (s[1] - 2.0).abs() < 1e-10);
        // Z = [[2,1],[1,2]] has eigenvalues 3, 1 (trace 4, det 3)
        let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let s = singular_values(&z, tol()).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-10 && (s[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ky_fan_examples() {
        let id = ComplexMatrix::identity(4);
        for k in 1..=4 {
            assert!((ky_fan_norm(&id, k, tol()).unwrap() - k as f64).abs() < 1e-10);
        }
        let d = ComplexMatrix::diag_real(&[3.0, 1.0]);
        assert!((ky_fan_norm(&d, 2, tol()).unwrap() - 4.0).abs() < 1e-10);
        let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        assert!((ky_fan_norm(&z, 1, tol()).unwrap() - 3.0).abs() < 1e-10);
        assert!(matches!(ky_fan_norm(&d, 3, tol()), Err(Error::BadRank { .. })));
        assert!(matches!(ky_fan_norm(&d, 0, tol()), Err(Error::BadRank { .. })));
    }

    #[test]
    fn rectangular_singular_values() {
        // 1x2 row: singular value is the Euclidean norm of the row
        let x = ComplexMatrix::from_real(1, 2, &[3.0, 4.0]).unwrap();
        let s = singular_values(&x, tol()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 5.0).abs() < 1e-10);
    }
}
