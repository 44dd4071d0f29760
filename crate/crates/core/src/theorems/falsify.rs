//! Randomized falsification searches for the statements the catalog marks
//! false or open. Canned counterexample instances run first so the known
//! failures reproduce on trial 1 regardless of the RNG; random trials
//! follow, one generator stream per trial index.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dominance::eigen_dominates;
use crate::error::{Error, Result};
use crate::instances::{gen_expansive, gen_hermitian, gen_psd, GenConfig, SeededRng};
use crate::numerics::{operator_norm, star_conj, ComplexMatrix, Tolerance};
use crate::opcalc::matrix_abs;
use crate::scalarfn::ScalarFunction;
use crate::theorems::checks::{
    check_question2_6, check_question3_12, check_star_section3, Q312Part,
};
use crate::theorems::examples::example_3_3_instance;
use crate::theorems::{repro_example_2_4, CheckReport, StatementId};

/// Search result: the first violating report, or none within the budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FalsifyOutcome {
    pub statement_id: StatementId,
    pub found: bool,
    pub counterexample: Option<CheckReport>,
    pub trials_run: usize,
    pub notes: String,
}

/// Single-unitary absolute-value inequality |A+B| ≤ U(|A|+|B|)U* on an
/// arbitrary Hermitian pair.
fn check_single_unitary_abs(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: Tolerance,
) -> Result<CheckReport> {
    let abs_sum = matrix_abs(&a.add(b), tol)?;
    let abs_parts = matrix_abs(a, tol)?.add(&matrix_abs(b, tol)?);
    let verdict = eigen_dominates(&abs_sum, &abs_parts, tol)?;
    let mut report = CheckReport::new(StatementId::Ex2_4, tol);
    report.instance = json!({ "a": a, "b": b });
    report.margins.insert("eigen_margin_min".into(), verdict.min_margin());
    report.holds = verdict.holds;
    Ok(report)
}

/// Convex piecewise-linear draw with kinks on both sides of 0 (so the
/// function need not be even, monotone, or vanish at 0).
fn gen_general_convex(rng: &mut SeededRng, kinks: usize) -> ScalarFunction {
    let slope = rng.range(-2.0, 2.0);
    let ks = (0..kinks.max(1)).map(|_| (rng.range(0.0, 2.0), rng.range(-3.0, 3.0))).collect();
    ScalarFunction::pwl(slope, ks).expect("nonnegative weights")
}

/// Concave tent on [0, b]: rises with slope s₀, bends at β, and stays
/// nonnegative up to b. Not monotone, which is exactly what part (a) of
/// the open question asks about.
fn gen_concave_tent(rng: &mut SeededRng, b: f64) -> ScalarFunction {
    let beta = rng.range(0.2, 0.8) * b;
    let s0 = rng.range(0.5, 2.0);
    let down_cap = s0 * beta / (b - beta);
    let s1 = -rng.range(0.0, 0.95) * down_cap;
    let body = ScalarFunction::pwl(-s0, vec![(s0 - s1, beta)]).expect("nonnegative weight");
    ScalarFunction::Negate(Box::new(body))
}

pub fn falsify(
    id: StatementId,
    cfg: &GenConfig,
    trials: usize,
    tol: Tolerance,
) -> Result<FalsifyOutcome> {
    match id {
        StatementId::StarSection3 => falsify_star(cfg, trials, tol),
        StatementId::Ex2_4 => falsify_single_unitary(cfg, trials, tol),
        StatementId::Question2_6 => falsify_question2_6(cfg, trials, tol),
        StatementId::Question3_12 => falsify_question3_12(cfg, trials, tol),
        other => Err(Error::UnknownStatement(format!(
            "{other} is not in the falsifiable catalog (star_section3, ex2_4, question2_6, question3_12)"
        ))),
    }
}

fn outcome(
    id: StatementId,
    found: Option<CheckReport>,
    trials_run: usize,
    open_question: bool,
) -> FalsifyOutcome {
    let notes = match (&found, open_question) {
        (Some(_), _) => format!("counterexample found on trial {trials_run}"),
        (None, true) => format!(
            "inconclusive after {trials_run} trials; absence of a counterexample proves nothing"
        ),
        (None, false) => format!("no counterexample in {trials_run} trials (unexpected for a false statement)"),
    };
    FalsifyOutcome { statement_id: id, found: found.is_some(), counterexample: found, trials_run, notes }
}

fn falsify_star(cfg: &GenConfig, trials: usize, tol: Tolerance) -> Result<FalsifyOutcome> {
    let mut run = 0;
    // canned instance first
    if trials > 0 {
        run += 1;
        let (f, a, z) = example_3_3_instance();
        let report = check_star_section3(&f, &a, &z, tol)?;
        if !report.holds {
            return Ok(outcome(StatementId::StarSection3, Some(report), run, false));
        }
    }
    for trial in 1..trials {
        run += 1;
        let mut rng = cfg.stream(trial as u64);
        let f = super::runner::gen_convex_sign0(cfg, &mut rng);
        let a = gen_psd(cfg, &mut rng);
        let z = gen_expansive(cfg, &mut rng);
        let report = check_star_section3(&f, &a, &z, tol)?;
        if !report.holds {
            return Ok(outcome(StatementId::StarSection3, Some(report), run, false));
        }
    }
    Ok(outcome(StatementId::StarSection3, None, run, false))
}

fn falsify_single_unitary(cfg: &GenConfig, trials: usize, tol: Tolerance) -> Result<FalsifyOutcome> {
    let mut run = 0;
    if trials > 0 {
        run += 1;
        let report = repro_example_2_4(tol)?;
        if !report.holds {
            return Ok(outcome(StatementId::Ex2_4, Some(report), run, false));
        }
    }
    for trial in 1..trials {
        run += 1;
        let mut rng = cfg.stream(trial as u64);
        let a = gen_hermitian(cfg, &mut rng);
        let b = gen_hermitian(cfg, &mut rng);
        let report = check_single_unitary_abs(&a, &b, tol)?;
        if !report.holds {
            return Ok(outcome(StatementId::Ex2_4, Some(report), run, false));
        }
    }
    Ok(outcome(StatementId::Ex2_4, None, run, false))
}

fn falsify_question2_6(cfg: &GenConfig, trials: usize, tol: Tolerance) -> Result<FalsifyOutcome> {
    let mut run = 0;
    for trial in 0..trials {
        run += 1;
        let mut rng = cfg.stream(trial as u64);
        let f = gen_general_convex(&mut rng, cfg.extra.kinks);
        let a = gen_hermitian(cfg, &mut rng);
        let b = gen_hermitian(cfg, &mut rng);
        let report = check_question2_6(&f, &a, &b, tol)?;
        if !report.holds {
            return Ok(outcome(StatementId::Question2_6, Some(report), run, true));
        }
    }
    Ok(outcome(StatementId::Question2_6, None, run, true))
}

fn falsify_question3_12(cfg: &GenConfig, trials: usize, tol: Tolerance) -> Result<FalsifyOutcome> {
    let mut run = 0;
    for trial in 0..trials {
        run += 1;
        let mut rng = cfg.stream(trial as u64);
        let a = gen_psd(cfg, &mut rng);
        let z = gen_expansive(cfg, &mut rng);
        let report = if trial % 2 == 0 {
            let b = operator_norm(&star_conj(&z, &a), tol)? + 1e-6;
            let f = gen_concave_tent(&mut rng, b);
            check_question3_12(&f, &a, &z, Q312Part::AllConcave, tol)?
        } else {
            let f = crate::instances::gen_pwl(cfg, &mut rng, crate::instances::PwlShape::ConcaveNonneg);
            check_question3_12(&f, &a, &z, Q312Part::AllNorms, tol)?
        };
        if !report.holds {
            return Ok(outcome(StatementId::Question3_12, Some(report), run, true));
        }
    }
    Ok(outcome(StatementId::Question3_12, None, run, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig_hermitian;
    use crate::theorems::examples::example_2_4_pair;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn canned_first_star() {
        let cfg = GenConfig::new(1, 2);
        let out = falsify(StatementId::StarSection3, &cfg, 5, tol()).unwrap();
        assert!(out.found);
        assert_eq!(out.trials_run, 1);
        let report = out.counterexample.unwrap();
        assert_eq!(report.statement_id, StatementId::StarSection3);
        assert!((report.margins["eigen_margin_2"] + 0.039).abs() < 5e-4);
    }

    #[test]
    fn canned_first_single_unitary() {
        let cfg = GenConfig::new(1, 2);
        let out = falsify(StatementId::Ex2_4, &cfg, 5, tol()).unwrap();
        assert!(out.found);
        assert_eq!(out.trials_run, 1);
    }

    #[test]
    fn open_questions_record_trials() {
        let cfg = GenConfig::new(3, 2);
        let out = falsify(StatementId::Question2_6, &cfg, 25, tol()).unwrap();
        assert_eq!(out.trials_run, if out.found { out.trials_run } else { 25 });
        // deterministic per seed
        let again = falsify(StatementId::Question2_6, &cfg, 25, tol()).unwrap();
        assert_eq!(out.found, again.found);
        assert_eq!(out.trials_run, again.trials_run);
    }

    #[test]
    fn unknown_statement_rejected() {
        let cfg = GenConfig::new(1, 2);
        assert!(matches!(
            falsify(StatementId::Thm1_1, &cfg, 5, tol()),
            Err(Error::UnknownStatement(_))
        ));
    }

    #[test]
    fn verify_canned_star_instance_classes() {
        // the canned instance satisfies every hypothesis of the statement
        let (f, a, z) = example_3_3_instance();
        let report = check_star_section3(&f, &a, &z, tol()).unwrap();
        assert!(!report.holds);
        let (a24, b24) = example_2_4_pair();
        let abs_sum = matrix_abs(&a24.add(&b24), tol()).unwrap();
        let eigs = eig_hermitian(&abs_sum, tol()).unwrap();
        assert!((eigs.eigenvalues()[0] - 2.0_f64.sqrt()).abs() < 1e-10);
    }
}
