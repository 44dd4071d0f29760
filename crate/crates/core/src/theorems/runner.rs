//! Seeded single-instance runner: draws one instance of the hypothesis
//! class a statement quantifies over and runs its checker. Trial i of a
//! suite reads from generator stream i, so suites are reproducible and
//! embarrassingly parallel.

use crate::error::Result;
use crate::instances::{
    gen_contraction, gen_expansive, gen_hermitian, gen_isometric_column, gen_psd, gen_subspace,
    gen_unitary, gen_pwl, GenConfig, PwlShape, SeededRng,
};
use crate::numerics::Tolerance;
use crate::scalarfn::ScalarFunction;
use crate::theorems::checks::*;
use crate::theorems::pmap::pmap_report;
use crate::theorems::{
    repro_example_2_4, repro_example_3_3, repro_example_3_6, CheckReport, HypothesisMode,
    StatementId,
};

/// Default exponent grid {1, 2, 4, …, 128} for trajectory studies.
pub fn default_p_grid() -> Vec<f64> {
    (0..8).map(|i| (1u64 << i) as f64).collect()
}

pub(crate) fn gen_convex_sign0(cfg: &GenConfig, rng: &mut SeededRng) -> ScalarFunction {
    gen_pwl(cfg, rng, PwlShape::ConvexSign0)
}

fn subspace_dim(cfg: &GenConfig, rng: &mut SeededRng) -> usize {
    if cfg.extra.subspace_dim >= 1 && cfg.extra.subspace_dim <= cfg.dim {
        cfg.extra.subspace_dim
    } else {
        rng.index(1, cfg.dim)
    }
}

/// One seeded trial of the given statement.
pub fn run_generated(
    id: StatementId,
    cfg: &GenConfig,
    trial: u64,
    tol: Tolerance,
) -> Result<CheckReport> {
    let mut rng = cfg.stream(trial);
    match id {
        StatementId::Thm1_1 => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone);
            let a = gen_hermitian(cfg, &mut rng);
            let d = subspace_dim(cfg, &mut rng);
            let s = gen_subspace(cfg, &mut rng, d);
            check_thm1_1(&f, &a, &s, tol, HypothesisMode::Enforce)
        }
        StatementId::Davis1 => {
            let p = 1.0 + rng.uniform();
            let f = ScalarFunction::power(p)?;
            let a = gen_psd(cfg, &mut rng);
            let d = subspace_dim(cfg, &mut rng);
            let s = gen_subspace(cfg, &mut rng, d);
            check_davis(&f, &a, &s, tol)
        }
        StatementId::Thm1_2 => {
            let a = gen_psd(cfg, &mut rng);
            let d = if cfg.extra.subspace_dim >= 1 && cfg.extra.subspace_dim <= cfg.dim {
                cfg.extra.subspace_dim
            } else {
                (cfg.dim / 2).max(1)
            };
            let s = gen_subspace(cfg, &mut rng, d);
            pmap_report(&a, &s, &default_p_grid(), tol)
        }
        StatementId::Thm2_2Contraction => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone);
            let a = gen_hermitian(cfg, &mut rng);
            let z = gen_contraction(cfg, &mut rng);
            check_thm2_2_contraction(&f, &a, &z, tol, HypothesisMode::Enforce)
        }
        StatementId::Thm2_2Column => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone);
            let m = cfg.extra.blocks.max(1);
            let a_list: Vec<_> = (0..m).map(|_| gen_hermitian(cfg, &mut rng)).collect();
            let z_list = gen_isometric_column(cfg, &mut rng, m);
            check_thm2_2_column(&f, &a_list, &z_list, tol, HypothesisMode::Enforce)
        }
        StatementId::Cor2_3Bk => {
            let f = gen_convex_sign0(cfg, &mut rng);
            let a = gen_hermitian(cfg, &mut rng);
            let z = gen_contraction(cfg, &mut rng);
            check_cor2_3(&f, &[a], &[z], Cor23Variant::Bk, tol)
        }
        StatementId::Cor2_3Hp => {
            let f = gen_convex_sign0(cfg, &mut rng);
            let m = cfg.extra.blocks.max(1);
            let a_list: Vec<_> = (0..m).map(|_| gen_hermitian(cfg, &mut rng)).collect();
            let z_list = gen_isometric_column(cfg, &mut rng, m);
            check_cor2_3(&f, &a_list, &z_list, Cor23Variant::Hp, tol)
        }
        StatementId::Prop2_5 => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::EvenConvex);
            let a = gen_hermitian(cfg, &mut rng);
            let b = gen_hermitian(cfg, &mut rng);
            check_prop2_5(&f, &a, &b, tol)
        }
        StatementId::Ex2_4 => repro_example_2_4(tol),
        StatementId::Ex3_3 => repro_example_3_3(tol),
        StatementId::Ex3_6 => repro_example_3_6(tol),
        StatementId::Remark3_1 => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone);
            let pairs: Vec<(f64, f64)> =
                (0..12).map(|_| (rng.range(0.0, 4.0), rng.range(0.0, 4.0))).collect();
            check_remark3_1(&f, &pairs, tol, HypothesisMode::Enforce)
        }
        StatementId::Prop3_2 => {
            let f = ScalarFunction::power(1.0 + rng.uniform())?;
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            check_prop3_2(&f, &a, &z, tol)
        }
        StatementId::Lemma3_4 => {
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            let beta = rng.range(0.0, 3.0);
            check_lemma3_4(&a, &z, beta, tol)
        }
        StatementId::Thm3_5 => {
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            if trial.is_multiple_of(2) {
                let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexSign0);
                check_thm3_5(&f, &a, &z, ConvexityVariant::Convex, tol)
            } else {
                let f = gen_pwl(cfg, &mut rng, PwlShape::ConcaveNonneg);
                check_thm3_5(&f, &a, &z, ConvexityVariant::Concave, tol)
            }
        }
        StatementId::Lemma3_7 => {
            let m = cfg.extra.blocks.max(2);
            let z = gen_psd(cfg, &mut rng);
            let f_list: Vec<_> =
                (0..m).map(|_| gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone)).collect();
            let u_list: Vec<_> = (0..m).map(|_| gen_unitary(cfg, &mut rng)).collect();
            check_lemma3_7(&z, &f_list, &u_list, tol)
        }
        StatementId::Prop3_8 => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone);
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            check_prop3_8(&f, &a, &z, tol)
        }
        StatementId::Thm3_9 => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::ConcaveNonneg);
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            check_thm3_9(&f, &a, &z, tol)
        }
        StatementId::Prop3_10 => {
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            if trial.is_multiple_of(2) {
                let f = gen_pwl(cfg, &mut rng, PwlShape::ConcaveNonneg);
                check_prop3_10(&f, &a, &z, ConvexityVariant::Concave, tol)
            } else {
                let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone);
                check_prop3_10(&f, &a, &z, ConvexityVariant::Convex, tol)
            }
        }
        StatementId::Prop3_11 => {
            let f = ScalarFunction::power(1.0 + rng.uniform())?;
            let derived = GenConfig { seed: cfg.seed.wrapping_add(trial.wrapping_mul(0x9E3779B97F4A7C15)), ..cfg.clone() };
            check_prop3_11(&f, &derived, 8, tol)
        }
        StatementId::Prop4_1 => {
            let a = gen_psd(cfg, &mut rng);
            let b = gen_psd(cfg, &mut rng);
            if trial.is_multiple_of(2) {
                let f = gen_pwl(cfg, &mut rng, PwlShape::ConvexMonotone);
                check_prop4_1(&f, &a, &b, ConvexityVariant::Convex, tol)
            } else {
                let f = gen_pwl(cfg, &mut rng, PwlShape::ConcaveNonneg);
                check_prop4_1(&f, &a, &b, ConvexityVariant::Concave, tol)
            }
        }
        StatementId::StarSection3 => {
            let f = gen_convex_sign0(cfg, &mut rng);
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            check_star_section3(&f, &a, &z, tol)
        }
        StatementId::Question2_6 => {
            let slope = rng.range(-2.0, 2.0);
            let kinks = (0..cfg.extra.kinks.max(1))
                .map(|_| (rng.range(0.0, 2.0), rng.range(-3.0, 3.0)))
                .collect();
            let f = ScalarFunction::pwl(slope, kinks)?;
            let a = gen_hermitian(cfg, &mut rng);
            let b = gen_hermitian(cfg, &mut rng);
            check_question2_6(&f, &a, &b, tol)
        }
        StatementId::Question3_12 => {
            let f = gen_pwl(cfg, &mut rng, PwlShape::ConcaveNonneg);
            let a = gen_psd(cfg, &mut rng);
            let z = gen_expansive(cfg, &mut rng);
            let part = if trial.is_multiple_of(2) { Q312Part::AllNorms } else { Q312Part::AllConcave };
            check_question3_12(&f, &a, &z, part, tol)
        }
    }
}
