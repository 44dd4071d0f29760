//! Eigenvalue dominance λ_k(X) ≤ λ_k(Y) for all k, construction of witness
//! unitaries realizing X ≤ UYU*, the two-unitary decomposition of |A+B|,
//! and Ky Fan dominance across every unitarily invariant norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    eig_hermitian, is_psd, singular_values, unitary_conj, ComplexMatrix, Tolerance,
};
use crate::opcalc::matrix_abs;

/// Outcome of a dominance test. When a witness is present, `psd_margin` is
/// the self-checked certificate λ_min(UYU* − X).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub holds: bool,
    pub per_index_margins: Vec<f64>,
    pub witness: Option<ComplexMatrix>,
    pub psd_margin: Option<f64>,
}

impl DominanceVerdict {
    pub fn min_margin(&self) -> f64 {
        self.per_index_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn dominance_scale(x_norm: f64, y_norm: f64) -> f64 {
    1.0 + x_norm.max(y_norm)
}

/// λ_k(X) ≤ λ_k(Y) for all k? Margins are λ_k(Y) − λ_k(X) from descending
/// spectra; the verdict allows −tol·(1+max norm) slack.
pub fn eigen_dominates(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: Tolerance,
) -> Result<DominanceVerdict> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch(format!(
            "dominance needs equal shapes, got {}x{} vs {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let dx = eig_hermitian(x, tol)?;
    let dy = eig_hermitian(y, tol)?;
    let margins: Vec<f64> = dx
        .eigenvalues()
        .iter()
        .zip(dy.eigenvalues())
        .map(|(&lx, &ly)| ly - lx)
        .collect();
    let bound = tol.absolute * dominance_scale(dx.operator_norm(), dy.operator_norm());
    let holds = margins.iter().all(|&m| m >= -bound);
    Ok(DominanceVerdict { holds, per_index_margins: margins, witness: None, psd_margin: None })
}

/// Builds the witness U = Σ x_k·y_k* from descending-order eigenvectors, so
/// that UYU* − X is PSD whenever eigenvalue dominance holds. The PSD
/// certificate is checked post hoc and returned in the verdict.
pub fn witness_unitary(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: Tolerance,
) -> Result<DominanceVerdict> {
    let mut verdict = eigen_dominates(x, y, tol)?;
    if !verdict.holds {
        let (index, margin) = verdict
            .per_index_margins
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, &m)| (i, m))
            .unwrap();
        return Err(Error::DominanceFails { index, margin });
    }
    let dx = eig_hermitian(x, tol)?;
    let dy = eig_hermitian(y, tol)?;
    let u = dx.eigenvectors().matmul(&dy.eigenvectors().adjoint());
    let conjugated = unitary_conj(&u, y);
    let (_, margin) = is_psd(&conjugated.sub(x), tol)?;
    verdict.witness = Some(u);
    verdict.psd_margin = Some(margin);
    Ok(verdict)
}

/// Two-unitary decomposition behind |A+B| ≤ U|A|U* + V|B|V* for Hermitian
/// A, B: write A+B = W|A+B|, split |A+B| = Re(W*A) + Re(W*B), and lift each
/// real part to the corresponding absolute value by a dominance witness
/// (λ_k(Re M) ≤ s_k(M), the Fan–Hoffman bound).
pub fn thompson_decompose(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if a.rows() != b.rows() || a.cols() != b.cols() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "thompson_decompose needs square equal shapes, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let sum = a.add(b);
    let w = crate::numerics::polar_unitary(&sum, tol)?;
    let abs_a = matrix_abs(a, tol)?;
    let abs_b = matrix_abs(b, tol)?;
    let re_wa = w.adjoint().matmul(a).hermitian_part();
    let re_wb = w.adjoint().matmul(b).hermitian_part();
    let u = witness_unitary(&re_wa, &abs_a, tol)?.witness.unwrap();
    let v = witness_unitary(&re_wb, &abs_b, tol)?.witness.unwrap();

    // certificate: U|A|U* + V|B|V* − |A+B| must be PSD
    let lhs = matrix_abs(&sum, tol)?;
    let rhs = unitary_conj(&u, &abs_a).add(&unitary_conj(&v, &abs_b));
    let diff = rhs.sub(&lhs);
    let (_, margin) = is_psd(&diff, tol)?;
    let scale = 1.0 + lhs.frobenius_norm().max(rhs.frobenius_norm());
    if margin < -tol.absolute * scale {
        return Err(Error::ConstructionFailed { margin });
    }
    Ok((u, v))
}

/// Ky Fan dominance: ‖X‖_(k) ≤ ‖Y‖_(k) for every k. Margins are the
/// per-k norm gaps; holding for all k certifies dominance in every
/// unitarily invariant norm.
pub fn ky_fan_dominates(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: Tolerance,
) -> Result<(bool, Vec<f64>)> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch(format!(
            "ky_fan_dominates needs equal shapes, got {}x{} vs {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let sx = singular_values(x, tol)?;
    let sy = singular_values(y, tol)?;
    let bound = tol.absolute * dominance_scale(sx[0], sy[0]);
    let mut margins = Vec::with_capacity(sx.len());
    let (mut px, mut py) = (0.0, 0.0);
    for k in 0..sx.len() {
        px += sx[k];
        py += sy[k];
        margins.push(py - px);
    }
    let holds = margins.iter().all(|&m| m >= -bound);
    Ok((holds, margins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::star_conj;
    use crate::opcalc::apply_fn;
    use crate::scalarfn::ScalarFunction;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn dominance_trivia() {
        let x = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let v = eigen_dominates(&x, &x, tol()).unwrap();
        assert!(v.holds);
        assert!(v.per_index_margins.iter().all(|&m| m.abs() < 1e-14));

        let y = ComplexMatrix::diag_real(&[2.0, 1.0]);
        let v = eigen_dominates(&x, &y, tol()).unwrap();
        assert!(v.holds);
        assert_eq!(v.per_index_margins, vec![1.0, 1.0]);
    }

    #[test]
    fn witness_sorting_case() {
        let x = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let y = ComplexMatrix::diag_real(&[0.0, 2.0]);
        let v = witness_unitary(&x, &y, tol()).unwrap();
        let u = v.witness.unwrap();
        let moved = unitary_conj(&u, &y);
        assert!(moved.sub(&ComplexMatrix::diag_real(&[2.0, 0.0])).frobenius_norm() < 1e-10);
        assert!(v.psd_margin.unwrap() >= -1e-10);
    }

    #[test]
    fn witness_fails_on_star_counterexample() {
        // f(t)=t+(t−1)₊, A=diag(3/2,1/2), Z=[[2,1],[1,2]]: dominance of
        // Zf(A)Z by f(ZAZ) fails at k=2 with margin ≈ −0.039
        let f = ScalarFunction::pwl(1.0, vec![(1.0, 1.0)]).unwrap();
        let a = ComplexMatrix::diag_real(&[1.5, 0.5]);
        let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let x = star_conj(&z, &apply_fn(&f, &a, tol()).unwrap());
        let y = apply_fn(&f, &star_conj(&z, &a), tol()).unwrap();
        let v = eigen_dominates(&x, &y, tol()).unwrap();
        assert!(!v.holds);
        let margin = v.per_index_margins[1];
        assert!((margin + 0.039).abs() < 5e-4, "margin {margin}");
        assert!(matches!(
            witness_unitary(&x, &y, tol()),
            Err(Error::DominanceFails { index: 1, .. })
        ));
    }

    #[test]
    fn thompson_on_counterexample_pair() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let b = ComplexMatrix::diag_real(&[0.0, -2.0]);
        let (u, v) = thompson_decompose(&a, &b, tol()).unwrap();
        let lhs = matrix_abs(&a.add(&b), tol()).unwrap();
        let rhs = unitary_conj(&u, &matrix_abs(&a, tol()).unwrap())
            .add(&unitary_conj(&v, &matrix_abs(&b, tol()).unwrap()));
        let (ok, margin) = is_psd(&rhs.sub(&lhs), tol()).unwrap();
        assert!(ok, "margin {margin}");
    }

    #[test]
    fn thompson_with_zero_summand() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.5, -2.0]).unwrap();
        let b = ComplexMatrix::zeros(2, 2);
        let (u, v) = thompson_decompose(&a, &b, tol()).unwrap();
        let abs_a = matrix_abs(&a, tol()).unwrap();
        let rhs = unitary_conj(&u, &abs_a).add(&unitary_conj(&v, &ComplexMatrix::zeros(2, 2)));
        let (ok, _) = is_psd(&rhs.sub(&abs_a), tol()).unwrap();
        assert!(ok);
    }

    #[test]
    fn ky_fan_dominance_examples() {
        let x = ComplexMatrix::diag_real(&[1.0, 1.0]);
        let y = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let (holds, margins) = ky_fan_dominates(&x, &y, tol()).unwrap();
        assert!(holds);
        assert!((margins[0] - 1.0).abs() < 1e-10);
        assert!(margins[1].abs() < 1e-10);

        let (holds, _) = ky_fan_dominates(&y, &x, tol()).unwrap();
        assert!(!holds); // k=1: 2 > 1
    }
}
