//! Digit-for-digit reproduction of the three explicit counterexample
//! instances, each returned as a report whose margins carry the computed
//! values next to their closed forms.

use serde_json::json;

use crate::dominance::eigen_dominates;
use crate::error::Result;
use crate::numerics::{eig_hermitian, star_conj, ComplexMatrix, Tolerance};
use crate::opcalc::{apply_fn, matrix_abs};
use crate::scalarfn::ScalarFunction;
use crate::theorems::{CheckReport, StatementId};

/// A = [[1,1],[1,1]], B = diag(0, −2): the pair on which
/// |A+B| ≤ U(|A|+|B|)U* fails.
pub fn example_2_4_pair() -> (ComplexMatrix, ComplexMatrix) {
    let a = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
    let b = ComplexMatrix::diag_real(&[0.0, -2.0]);
    (a, b)
}

/// f(t) = t + (t−1)₊, A = diag(3/2, 1/2), Z = [[2,1],[1,2]].
pub fn example_3_3_instance() -> (ScalarFunction, ComplexMatrix, ComplexMatrix) {
    let f = ScalarFunction::pwl(1.0, vec![(1.0, 1.0)]).unwrap();
    let a = ComplexMatrix::diag_real(&[1.5, 0.5]);
    let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
    (f, a, z)
}

/// f(t) = t₊, A = diag(1, −1), Z = [[2,1],[1,2]].
pub fn example_3_6_instance() -> (ScalarFunction, ComplexMatrix, ComplexMatrix) {
    let f = ScalarFunction::positive_part();
    let a = ComplexMatrix::diag_real(&[1.0, -1.0]);
    let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
    (f, a, z)
}

/// Both eigenvalues of |A+B| equal √2 while |A|+|B| has an eigenvalue
/// 2−√2 < √2, so the single-unitary absolute-value inequality fails at k=2.
pub fn repro_example_2_4(tol: Tolerance) -> Result<CheckReport> {
    let (a, b) = example_2_4_pair();
    let abs_sum = matrix_abs(&a.add(&b), tol)?;
    let abs_parts = matrix_abs(&a, tol)?.add(&matrix_abs(&b, tol)?);
    let sum_eigs = eig_hermitian(&abs_sum, tol)?;
    let part_eigs = eig_hermitian(&abs_parts, tol)?;
    let verdict = eigen_dominates(&abs_sum, &abs_parts, tol)?;

    let mut report = CheckReport::new(StatementId::Ex2_4, tol);
    report.instance = json!({ "a": a, "b": b });
    report.margins.insert("abs_sum_eig_1".into(), sum_eigs.eigenvalues()[0]);
    report.margins.insert("abs_sum_eig_2".into(), sum_eigs.eigenvalues()[1]);
    report.margins.insert("offending_eig".into(), part_eigs.lambda_min());
    report.margins.insert("dominance_margin_k2".into(), verdict.per_index_margins[1]);
    report.holds = verdict.holds; // false: the statement fails here
    report.notes = format!(
        "|A+B| eigenvalues ({:.10}, {:.10}) vs √2 = {:.10}; smallest eigenvalue of |A|+|B| = {:.10} vs 2−√2 = {:.10}",
        sum_eigs.eigenvalues()[0],
        sum_eigs.eigenvalues()[1],
        2.0_f64.sqrt(),
        part_eigs.lambda_min(),
        2.0 - 2.0_f64.sqrt()
    );
    Ok(report)
}

/// λ₂(f(ZAZ)) = (10−√73)/2 = 0.7280… < 0.7670… = (12.5−√120.25)/2
/// = λ₂(Zf(A)Z): the expansive-side strengthening fails on this instance.
pub fn repro_example_3_3(tol: Tolerance) -> Result<CheckReport> {
    let (f, a, z) = example_3_3_instance();
    let lhs = apply_fn(&f, &star_conj(&z, &a), tol)?;
    let rhs = star_conj(&z, &apply_fn(&f, &a, tol)?);
    let lhs_eigs = eig_hermitian(&lhs, tol)?;
    let rhs_eigs = eig_hermitian(&rhs, tol)?;
    // the statement asks for Zf(A)Z ≤ U f(ZAZ) U*, i.e. dominance of rhs by lhs
    let verdict = eigen_dominates(&rhs, &lhs, tol)?;

    let mut report = CheckReport::new(StatementId::Ex3_3, tol);
    report.instance = json!({ "f": f, "a": a, "z": z });
    report.margins.insert("lambda2_f_zaz".into(), lhs_eigs.eigenvalues()[1]);
    report.margins.insert("lambda2_zfaz".into(), rhs_eigs.eigenvalues()[1]);
    report.margins.insert("closed_form_f_zaz".into(), (10.0 - 73.0_f64.sqrt()) / 2.0);
    report.margins.insert("closed_form_zfaz".into(), (12.5 - 120.25_f64.sqrt()) / 2.0);
    report.margins.insert("dominance_margin_k2".into(), verdict.per_index_margins[1]);
    report.holds = verdict.holds; // false: λ₂ ordering is reversed
    report.notes = format!(
        "λ₂(f(ZAZ)) = {:.6} < {:.6} = λ₂(Zf(A)Z); closed forms (10−√73)/2 and (12.5−√120.25)/2",
        lhs_eigs.eigenvalues()[1],
        rhs_eigs.eigenvalues()[1]
    );
    Ok(report)
}

/// Tr f(Z*AZ) = 3 < 5 = Tr Z*f(A)Z for f = t₊ and an indefinite A: the
/// positivity assumption on A in the expansive trace inequality is
/// essential.
pub fn repro_example_3_6(tol: Tolerance) -> Result<CheckReport> {
    let (f, a, z) = example_3_6_instance();
    let lhs = apply_fn(&f, &star_conj(&z, &a), tol)?.trace_real();
    let rhs = star_conj(&z, &apply_fn(&f, &a, tol)?).trace_real();

    let mut report = CheckReport::new(StatementId::Ex3_6, tol);
    report.instance = json!({ "f": f, "a": a, "z": z });
    report.margins.insert("trace_lhs".into(), lhs);
    report.margins.insert("trace_rhs".into(), rhs);
    // convex-variant orientation: Tr f(Z*AZ) ≥ Tr Z*f(A)Z would need lhs ≥ rhs
    report.margins.insert("convex_trace_margin".into(), lhs - rhs);
    report.holds = lhs - rhs >= -tol.absolute * (1.0 + lhs.abs().max(rhs.abs()));
    report.notes = format!(
        "Tr f(Z*AZ) = {lhs:.10}, Tr Z*f(A)Z = {rhs:.10}; the A ≥ 0 assumption is essential"
    );
    Ok(report)
}
