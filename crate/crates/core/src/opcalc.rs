//! Operator-valued calculus: matrix functions f(A) by spectral calculus,
//! compressions onto subspaces, positive parts, absolute values, support
//! projections, fractional powers and the dilation used to reduce
//! contraction inequalities to compressions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    eig_hermitian, singular_values, ComplexMatrix, SpectralDecomposition, Tolerance,
};
use crate::scalarfn::ScalarFunction;

/// Orthonormal n×d basis of a d-dimensional subspace of C^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for Subspace {
    type Error = Error;

    fn try_from(basis: ComplexMatrix) -> Result<Self> {
        Subspace::new(basis)
    }
}

impl From<Subspace> for ComplexMatrix {
    fn from(s: Subspace) -> ComplexMatrix {
        s.basis
    }
}

impl Subspace {
    pub fn new(basis: ComplexMatrix) -> Result<Self> {
        if basis.cols() > basis.rows() {
            return Err(Error::DimensionMismatch(format!(
                "subspace dimension {} exceeds ambient dimension {}",
                basis.cols(),
                basis.rows()
            )));
        }
        let gram = basis.adjoint().matmul(&basis);
        let deviation = gram.sub(&ComplexMatrix::identity(basis.cols())).frobenius_norm();
        if deviation > 1e-10 {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Subspace { basis })
    }

    /// Orthonormalizes arbitrary columns (modified Gram-Schmidt, two passes).
    pub fn orthonormalize(raw: &ComplexMatrix) -> Result<Self> {
        let n = raw.rows();
        let d = raw.cols();
        if d > n {
            return Err(Error::DimensionMismatch(format!(
                "cannot orthonormalize {d} columns in dimension {n}"
            )));
        }
        let mut cols: Vec<Vec<crate::numerics::Complex64>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = raw.column(j);
            for _ in 0..2 {
                for b in &cols {
                    let coeff: crate::numerics::Complex64 =
                        b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= coeff * bi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-10 {
                return Err(Error::NotOrthonormal { deviation: norm });
            }
            for z in &mut v {
                *z /= norm;
            }
            cols.push(v);
        }
        Subspace::new(ComplexMatrix::from_columns(n, &cols))
    }

    /// The full space: identity basis.
    pub fn full(n: usize) -> Self {
        Subspace { basis: ComplexMatrix::identity(n) }
    }

    /// Span of the given standard basis vectors.
    pub fn standard(n: usize, indices: &[usize]) -> Result<Self> {
        let mut basis = ComplexMatrix::zeros(n, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if i >= n {
                return Err(Error::DimensionMismatch(format!("index {i} out of range {n}")));
            }
            basis[(i, j)] = crate::numerics::Complex64::new(1.0, 0.0);
        }
        Subspace::new(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// The orthogonal projection E = S S* onto the subspace.
    pub fn projection(&self) -> ComplexMatrix {
        self.basis.matmul(&self.basis.adjoint())
    }
}

/// Hypothesis classes for the operator arguments of the checkers. A single
/// operator is an isometric column exactly when Z*Z = I; families are
/// checked with `require_isometric_column`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorClass {
    Hermitian,
    Psd,
    Contraction,
    Expansive,
    Unitary,
    Projection,
    IsometricColumn,
}

const CLASS_SLACK: f64 = 1e-10;

/// Margin of membership in an operator class; nonnegative margins certify
/// membership up to the 1e-10 boundary slack.
pub fn class_margin(z: &ComplexMatrix, class: OperatorClass, tol: Tolerance) -> Result<f64> {
    match class {
        OperatorClass::Hermitian => Ok(CLASS_SLACK - z.hermitian_deviation()),
        OperatorClass::Psd => {
            let d = eig_hermitian(z, tol)?;
            Ok(d.lambda_min() + CLASS_SLACK * (1.0 + d.operator_norm()))
        }
        OperatorClass::Contraction => {
            let s = singular_values(z, tol)?;
            Ok(1.0 + CLASS_SLACK - s[0])
        }
        OperatorClass::Expansive => {
            let s = singular_values(z, tol)?;
            let smin = *s.last().unwrap();
            Ok(smin * smin - 1.0 + CLASS_SLACK)
        }
        OperatorClass::Unitary => {
            let gram = z.adjoint().matmul(z);
            Ok(CLASS_SLACK - gram.sub(&ComplexMatrix::identity(z.cols())).frobenius_norm())
        }
        OperatorClass::Projection => {
            let idem = z.matmul(z).sub(z).frobenius_norm();
            Ok(CLASS_SLACK - idem.max(z.hermitian_deviation()))
        }
        OperatorClass::IsometricColumn => {
            Ok(1e-8 - isometric_column_deviation(std::slice::from_ref(z))?)
        }
    }
}

pub fn is_in_class(z: &ComplexMatrix, class: OperatorClass, tol: Tolerance) -> Result<bool> {
    Ok(class_margin(z, class, tol)? >= 0.0)
}

pub fn require_contraction(z: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    let s = singular_values(z, tol)?;
    if s[0] > 1.0 + CLASS_SLACK {
        return Err(Error::NotContraction { operator_norm: s[0] });
    }
    Ok(())
}

pub fn require_expansive(z: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    let s = singular_values(z, tol)?;
    let min_gram = s.last().unwrap() * s.last().unwrap();
    if min_gram < 1.0 - CLASS_SLACK {
        return Err(Error::NotExpansive { min_gram_eigenvalue: min_gram });
    }
    Ok(())
}

pub fn require_psd(a: &ComplexMatrix, tol: Tolerance) -> Result<SpectralDecomposition> {
    let d = eig_hermitian(a, tol)?;
    if d.lambda_min() < -tol.absolute * (1.0 + d.operator_norm()) {
        return Err(Error::NotPsd { min_eigenvalue: d.lambda_min() });
    }
    Ok(d)
}

/// Σ Zᵢ*Zᵢ = I within 1e-8.
pub fn isometric_column_deviation(zs: &[ComplexMatrix]) -> Result<f64> {
    if zs.is_empty() {
        return Err(Error::DimensionMismatch("empty operator family".into()));
    }
    let n = zs[0].cols();
    let mut sum = ComplexMatrix::zeros(n, n);
    for z in zs {
        if z.cols() != n {
            return Err(Error::DimensionMismatch("column blocks of unequal width".into()));
        }
        sum = sum.add(&z.adjoint().matmul(z));
    }
    Ok(sum.sub(&ComplexMatrix::identity(n)).frobenius_norm())
}

pub fn require_isometric_column(zs: &[ComplexMatrix]) -> Result<()> {
    let deviation = isometric_column_deviation(zs)?;
    if deviation > 1e-8 {
        return Err(Error::NotIsometricColumn { deviation });
    }
    Ok(())
}

/// f(A) = V·diag(f(λᵢ))·V* by spectral calculus. Eigenvalues are clamped
/// onto the function domain within a tolerance collar; anything further out
/// is a genuine domain violation.
pub fn apply_fn(f: &ScalarFunction, a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let decomp = eig_hermitian(a, tol)?;
    apply_fn_spectral(f, &decomp, tol)
}

pub fn apply_fn_spectral(
    f: &ScalarFunction,
    decomp: &SpectralDecomposition,
    tol: Tolerance,
) -> Result<ComplexMatrix> {
    let dom = f.domain();
    let collar = tol.absolute * (1.0 + decomp.operator_norm());
    let mut values = Vec::with_capacity(decomp.dim());
    for &lambda in decomp.eigenvalues() {
        let clamped = lambda.clamp(dom.lo, dom.hi);
        if (lambda - clamped).abs() > collar {
            return Err(Error::SpectrumOutOfDomain {
                eigenvalue: lambda,
                domain: dom.to_string(),
            });
        }
        values.push(f.eval(clamped)?);
    }
    Ok(decomp.recombine(&values))
}

/// Compression A_ℰ = S*·A·S onto the subspace with orthonormal basis S.
pub fn compress(a: &ComplexMatrix, s: &Subspace) -> Result<ComplexMatrix> {
    if a.rows() != s.ambient_dim() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "compress: operator is {}x{}, subspace ambient dimension {}",
            a.rows(),
            a.cols(),
            s.ambient_dim()
        )));
    }
    Ok(s.basis().adjoint().matmul(a).matmul(s.basis()))
}

/// (A − βI)₊ by spectral calculus; PSD, zero iff A ≤ βI.
pub fn positive_part_shift(a: &ComplexMatrix, beta: f64, tol: Tolerance) -> Result<ComplexMatrix> {
    if beta < 0.0 {
        return Err(Error::HypothesisViolated(format!("shift β = {beta} must be ≥ 0")));
    }
    let decomp = eig_hermitian(a, tol)?;
    Ok(decomp.apply_scalar(|t| (t - beta).max(0.0)))
}

/// |X| = (X*X)^{1/2}. For Hermitian X this equals the spectral calculus of
/// the absolute value.
pub fn matrix_abs(x: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "matrix_abs needs a square matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let gram = x.adjoint().matmul(x);
    let decomp = eig_hermitian(&gram, tol)?;
    Ok(decomp.apply_scalar(|t| t.max(0.0).sqrt()))
}

/// Fractional power A^p of a PSD matrix, computed spectrally with a λ₁
/// normalization so that exponents around 100 stay inside f64 range:
/// A^p = λ₁^p · (A/λ₁)^p with eigenvalue ratios in [0,1].
pub fn matrix_power(a: &ComplexMatrix, p: f64, tol: Tolerance) -> Result<ComplexMatrix> {
    assert!(p > 0.0 && p.is_finite(), "exponent must be positive");
    let decomp = require_psd(a, tol)?;
    let top = decomp.lambda_max();
    if top <= 0.0 {
        return Ok(ComplexMatrix::zeros(a.rows(), a.cols()));
    }
    let scale = top.powf(p);
    Ok(decomp.apply_scalar(|t| {
        let ratio = (t / top).clamp(0.0, 1.0);
        if ratio < 1e-300 {
            0.0
        } else {
            scale * ratio.powf(p)
        }
    }))
}

/// (A)^{1/2} for PSD A, with eigenvalues below 1e-300 clamped to zero.
pub fn matrix_sqrt_psd(a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let decomp = require_psd(a, tol)?;
    Ok(decomp.apply_scalar(|t| if t < 1e-300 { 0.0 } else { t.sqrt() }))
}

/// Orthogonal projection onto the span of eigenvectors with λ above the
/// relative threshold; Q·A = A within tolerance.
pub fn support_projection(a: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let decomp = require_psd(a, tol)?;
    let cut = tol.absolute * (1.0 + decomp.lambda_max());
    Ok(decomp.apply_scalar(|t| if t > cut { 1.0 } else { 0.0 }))
}

pub fn support_rank(a: &ComplexMatrix, tol: Tolerance) -> Result<usize> {
    let decomp = require_psd(a, tol)?;
    let cut = tol.absolute * (1.0 + decomp.lambda_max());
    Ok(decomp.eigenvalues().iter().filter(|&&l| l > cut).count())
}

/// Dilation of a contraction: the 2n×2n partial isometry with Z on top of
/// (I−|Z|²)^{1/2} in its first block column, together with Ã = diag(A, 0).
/// V*V is the projection onto the first summand, and the isometric part of
/// V carries Z*AZ to a compression of Ã.
pub fn dilate_contraction(
    z: &ComplexMatrix,
    a: &ComplexMatrix,
    tol: Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !z.is_square() || z.rows() != a.rows() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "dilate_contraction: Z is {}x{}, A is {}x{}",
            z.rows(),
            z.cols(),
            a.rows(),
            a.cols()
        )));
    }
    require_contraction(z, tol)?;
    let n = z.rows();
    let defect = ComplexMatrix::identity(n).sub(&z.adjoint().matmul(z));
    // boundary contractions can leave tiny negative eigenvalues; clamp
    let defect_decomp = eig_hermitian(&defect, tol)?;
    let root = defect_decomp.apply_scalar(|t| t.max(0.0).sqrt());
    let mut v = ComplexMatrix::zeros(2 * n, 2 * n);
    v.set_block(0, 0, z);
    v.set_block(n, 0, &root);
    let atilde = ComplexMatrix::block_diag(a, &ComplexMatrix::zeros(n, n));
    Ok((v, atilde))
}

/// Orthonormal basis of the range of the dilation isometry: the 2n×n block
/// [Z; (I−|Z|²)^{1/2}], which satisfies M*M = I.
pub fn dilation_range(v: &ComplexMatrix) -> Result<Subspace> {
    let n = v.rows() / 2;
    Subspace::orthonormalize(&v.block(0, 0, 2 * n, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::star_conj;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn apply_fn_fixed_values() {
        // f(t) = t + (t-1)_+ on diag(3/2, 1/2) gives diag(2, 1/2)
        let f = ScalarFunction::pwl(1.0, vec![(1.0, 1.0)]).unwrap();
        let a = ComplexMatrix::diag_real(&[1.5, 0.5]);
        let fa = apply_fn(&f, &a, tol()).unwrap();
        assert!(fa.sub(&ComplexMatrix::diag_real(&[2.0, 0.5])).frobenius_norm() < 1e-12);

        // f(t) = t_+ on diag(1, -1) gives diag(1, 0)
        let fa = apply_fn(&ScalarFunction::positive_part(), &ComplexMatrix::diag_real(&[1.0, -1.0]), tol())
            .unwrap();
        assert!(fa.sub(&ComplexMatrix::diag_real(&[1.0, 0.0])).frobenius_norm() < 1e-12);

        // identity map reproduces A
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.5, -0.25]).unwrap();
        let fa = apply_fn(&ScalarFunction::identity(), &a, tol()).unwrap();
        assert!(fa.sub(&a).frobenius_norm() < 1e-12);
    }

    #[test]
    fn apply_fn_commutes_with_input() {
        let a = ComplexMatrix::from_real(3, 3, &[2.0, 1.0, 0.0, 1.0, 0.0, 0.5, 0.0, 0.5, -1.0])
            .unwrap();
        let f = ScalarFunction::pwl(0.5, vec![(1.0, 0.5), (2.0, 1.5)]).unwrap();
        let fa = apply_fn(&f, &a, tol()).unwrap();
        let comm = fa.matmul(&a).sub(&a.matmul(&fa));
        assert!(comm.frobenius_norm() <= 1e-9 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn apply_fn_rejects_out_of_domain_spectrum() {
        let sqrt = ScalarFunction::power(0.5).unwrap();
        let a = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert!(matches!(
            apply_fn(&sqrt, &a, tol()),
            Err(Error::SpectrumOutOfDomain { .. })
        ));
    }

    #[test]
    fn compress_examples() {
        let a = ComplexMatrix::diag_real(&[3.0, 2.0, 1.0]);
        assert_eq!(compress(&a, &Subspace::full(3)).unwrap(), a);

        let e1 = Subspace::standard(3, &[0]).unwrap();
        let c = compress(&a, &e1).unwrap();
        assert_eq!(c.rows(), 1);
        assert!((c[(0, 0)].re - 3.0).abs() < 1e-14);

        // span{(e1+e2)/√2}: compression of diag(3,2,1) is [5/2]
        let s = 1.0 / 2.0_f64.sqrt();
        let raw = ComplexMatrix::from_real(3, 1, &[s, s, 0.0]).unwrap();
        let sub = Subspace::new(raw).unwrap();
        let c = compress(&a, &sub).unwrap();
        assert!((c[(0, 0)].re - 2.5).abs() < 1e-12);
    }

    #[test]
    fn compress_is_unital_and_positive() {
        let s = Subspace::orthonormalize(
            &ComplexMatrix::from_real(3, 2, &[1.0, 1.0, 1.0, -1.0, 0.5, 0.25]).unwrap(),
        )
        .unwrap();
        let c = compress(&ComplexMatrix::identity(3), &s).unwrap();
        assert!(c.sub(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn positive_part_examples() {
        let a = ComplexMatrix::diag_real(&[3.0, 1.0]);
        let p = positive_part_shift(&a, 2.0, tol()).unwrap();
        assert!(p.sub(&ComplexMatrix::diag_real(&[1.0, 0.0])).frobenius_norm() < 1e-12);
        assert!(matches!(
            positive_part_shift(&a, -1.0, tol()),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn matrix_abs_counterexample_sum() {
        // |A+B| = √2·I for the 2x2 counterexample pair
        let sum = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).unwrap();
        let abs = matrix_abs(&sum, tol()).unwrap();
        let expect = ComplexMatrix::identity(2).scale(2.0_f64.sqrt());
        assert!(abs.sub(&expect).frobenius_norm() < 1e-10);

        let x = ComplexMatrix::diag_real(&[-2.0, 3.0]);
        let abs = matrix_abs(&x, tol()).unwrap();
        assert!(abs.sub(&ComplexMatrix::diag_real(&[2.0, 3.0])).frobenius_norm() < 1e-10);
    }

    #[test]
    fn support_projection_examples() {
        let a = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let q = support_projection(&a, tol()).unwrap();
        assert!(q.sub(&a).frobenius_norm() < 1e-12);

        // rank-1 projector x·x*
        let s = 1.0 / 2.0_f64.sqrt();
        let x = ComplexMatrix::from_real(2, 1, &[s, s]).unwrap();
        let proj = x.matmul(&x.adjoint());
        let q = support_projection(&proj, tol()).unwrap();
        assert!(q.sub(&proj).frobenius_norm() < 1e-10);
        // Q·A = A
        assert!(q.matmul(&proj).sub(&proj).frobenius_norm() < 1e-10);
    }

    #[test]
    fn dilation_examples() {
        let z = ComplexMatrix::diag_real(&[0.5]);
        let a = ComplexMatrix::diag_real(&[2.0]);
        let (v, atilde) = dilate_contraction(&z, &a, tol()).unwrap();
        assert!((v[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((v[(1, 0)].re - 3.0_f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((atilde[(0, 0)].re - 2.0).abs() < 1e-14);
        // V*V is the projection onto the first summand
        let gram = v.adjoint().matmul(&v);
        assert!((gram[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(gram[(1, 1)].norm() < 1e-12);
        // compression through the isometric range reproduces Z*AZ
        let range = dilation_range(&v).unwrap();
        let comp = compress(&atilde, &range).unwrap();
        assert!(comp.sub(&star_conj(&z, &a)).frobenius_norm() < 1e-10);

        assert!(matches!(
            dilate_contraction(&ComplexMatrix::diag_real(&[2.0]), &a, tol()),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn matrix_power_large_exponent() {
        let a = ComplexMatrix::diag_real(&[4.0, 1.0]);
        let p = matrix_power(&a, 100.0, tol()).unwrap();
        assert!((p[(0, 0)].re - 4.0_f64.powi(100)).abs() <= 1e-6 * 4.0_f64.powi(100));
        assert!((p[(1, 1)].re - 1.0).abs() < 1e-8);
        // fractional root undoes an integer power
        let r = matrix_power(&p, 0.01, tol()).unwrap();
        assert!(r.sub(&a).frobenius_norm() < 1e-8);
    }

    #[test]
    fn class_checks() {
        let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        assert!(is_in_class(&z, OperatorClass::Expansive, tol()).unwrap());
        assert!(!is_in_class(&z, OperatorClass::Contraction, tol()).unwrap());
        assert!(is_in_class(&ComplexMatrix::identity(3), OperatorClass::Projection, tol()).unwrap());

        let s = 1.0 / 2.0_f64.sqrt();
        let halves = ComplexMatrix::identity(2).scale(s);
        require_isometric_column(&[halves.clone(), halves]).unwrap();
        assert!(matches!(
            require_isometric_column(&[ComplexMatrix::identity(2).scale(0.9)]),
            Err(Error::NotIsometricColumn { .. })
        ));
    }
}
