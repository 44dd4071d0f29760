//! Seeded, reproducible random generators for every hypothesis class the
//! checkers consume. The generator is ChaCha8 (counter-based, portable);
//! floating-point draws are 53-bit uniforms built as (u64 >> 11) · 2⁻⁵³.
//! Independent streams are derived by pairing the seed with a stream index,
//! so trial i of a suite reads from stream i of the configured seed.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::{eig_hermitian, singular_values, Complex64, ComplexMatrix, Tolerance};
use crate::opcalc::Subspace;
use crate::scalarfn::{inverse_monotone, Domain, ScalarFunction};

/// Identifier of the RNG algorithm; carried in configs and reports so runs
/// are reproducible across implementations.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Class-specific generator parameters. Spectral ranges default to [0, 4]
/// for PSD and [−2, 2] for Hermitian draws, wide enough to exercise kinks
/// placed in [0, 3].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenExtra {
    pub spectral_lo: f64,
    pub spectral_hi: f64,
    pub hermitian_norm: f64,
    pub expansion_hi: f64,
    pub blocks: usize,
    pub kinks: usize,
    pub subspace_dim: usize,
}

impl Default for GenExtra {
    fn default() -> Self {
        GenExtra {
            spectral_lo: 0.0,
            spectral_hi: 4.0,
            hermitian_norm: 2.0,
            expansion_hi: 2.0,
            blocks: 2,
            kinks: 2,
            subspace_dim: 0, // 0 means "derive from dim"
        }
    }
}

/// Seeded generator configuration; identical configs produce bit-identical
/// output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub dim: usize,
    #[serde(default = "default_rng_name")]
    pub rng: String,
    #[serde(default)]
    pub class: Option<String>,
    #[serde(default)]
    pub extra: GenExtra,
}

fn default_rng_name() -> String {
    RNG_ALGORITHM.to_string()
}

impl GenConfig {
    pub fn new(seed: u64, dim: usize) -> Self {
        GenConfig {
            seed,
            dim,
            rng: default_rng_name(),
            class: None,
            extra: GenExtra::default(),
        }
    }

    pub fn rng(&self) -> SeededRng {
        SeededRng::new(self.seed)
    }

    /// Stream `index` of this seed; used as "trial index" by the suites.
    pub fn stream(&self, index: u64) -> SeededRng {
        SeededRng::substream(self.seed, index)
    }
}

/// Explicit generator state owned by the caller; no global RNG.
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// 53-bit uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform over lo..=hi.
    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(hi >= lo);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    /// Complex entry with independent uniform real/imaginary parts in [−1, 1).
    pub fn complex_uniform(&mut self) -> Complex64 {
        Complex64::new(self.range(-1.0, 1.0), self.range(-1.0, 1.0))
    }

    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self.complex_uniform();
            }
        }
        m
    }
}

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Hermitian matrix (X+X*)/2 rescaled so the spectrum sits inside
/// [−hermitian_norm, hermitian_norm].
pub fn gen_hermitian(cfg: &GenConfig, rng: &mut SeededRng) -> ComplexMatrix {
    let raw = rng.complex_matrix(cfg.dim, cfg.dim).hermitian_part();
    let top = eig_hermitian(&raw, tol()).expect("hermitian by construction").operator_norm();
    if top == 0.0 {
        return raw;
    }
    raw.scale(cfg.extra.hermitian_norm / top)
}

/// PSD matrix X*X rescaled into the spectral range [spectral_lo, spectral_hi].
pub fn gen_psd(cfg: &GenConfig, rng: &mut SeededRng) -> ComplexMatrix {
    let x = rng.complex_matrix(cfg.dim, cfg.dim);
    let gram = x.adjoint().matmul(&x).hermitian_part();
    let decomp = eig_hermitian(&gram, tol()).expect("gram is hermitian");
    let top = decomp.lambda_max();
    let (lo, hi) = (cfg.extra.spectral_lo, cfg.extra.spectral_hi);
    if top <= 0.0 {
        return gram;
    }
    let scaled = gram.scale((hi - lo) / top);
    if lo == 0.0 {
        scaled
    } else {
        scaled.add(&ComplexMatrix::identity(cfg.dim).scale(lo))
    }
}

/// Unitary from orthonormalizing a random complex matrix.
pub fn gen_unitary(cfg: &GenConfig, rng: &mut SeededRng) -> ComplexMatrix {
    loop {
        let x = rng.complex_matrix(cfg.dim, cfg.dim);
        if let Ok(s) = Subspace::orthonormalize(&x) {
            return s.basis().clone();
        }
    }
}

/// Contraction: random X rescaled to ‖Z‖_∞ = c with c uniform in [0, 1].
pub fn gen_contraction(cfg: &GenConfig, rng: &mut SeededRng) -> ComplexMatrix {
    let x = rng.complex_matrix(cfg.dim, cfg.dim);
    let top = singular_values(&x, tol()).expect("finite entries")[0];
    let c = rng.uniform();
    if top == 0.0 {
        return x;
    }
    x.scale(c / top)
}

/// Expansive operator W·(I + P) with W the unitary polar factor of a random
/// matrix and P PSD, so λ_min(Z*Z) = (1 + λ_min(P))² ≥ 1.
pub fn gen_expansive(cfg: &GenConfig, rng: &mut SeededRng) -> ComplexMatrix {
    let x = rng.complex_matrix(cfg.dim, cfg.dim);
    let w = crate::numerics::polar_unitary(&x, tol()).expect("square input");
    let mut psd_cfg = cfg.clone();
    psd_cfg.extra.spectral_lo = 0.0;
    psd_cfg.extra.spectral_hi = cfg.extra.expansion_hi;
    let p = gen_psd(&psd_cfg, rng);
    w.matmul(&ComplexMatrix::identity(cfg.dim).add(&p))
}

/// Isometric column {Zᵢ}: orthonormalize an (m·n)×n stack and slice it into
/// m blocks, so Σ Zᵢ*Zᵢ = I.
pub fn gen_isometric_column(cfg: &GenConfig, rng: &mut SeededRng, m: usize) -> Vec<ComplexMatrix> {
    assert!(m >= 1);
    let n = cfg.dim;
    loop {
        let stack = rng.complex_matrix(m * n, n);
        if let Ok(s) = Subspace::orthonormalize(&stack) {
            let basis = s.basis();
            return (0..m).map(|i| basis.block(i * n, 0, n, n)).collect();
        }
    }
}

/// Random d-dimensional subspace from orthonormalized Gaussian-style columns.
pub fn gen_subspace(cfg: &GenConfig, rng: &mut SeededRng, d: usize) -> Subspace {
    assert!(d >= 1 && d <= cfg.dim);
    loop {
        let raw = rng.complex_matrix(cfg.dim, d);
        if let Ok(s) = Subspace::orthonormalize(&raw) {
            return s;
        }
    }
}

/// Random d-dimensional subspace conditioned on a strong overlap with the
/// top-d eigenvector block of `a`: σ_min of the overlap Gram ≥ 0.75. Used
/// by convergence studies whose rate bounds assume weights comparable to
/// the equal-weight scalar oracle; weakly aligned subspaces converge at a
/// rate driven by −ln(overlap) instead of the spectral ratio.
pub fn gen_aligned_subspace(
    cfg: &GenConfig,
    rng: &mut SeededRng,
    a: &ComplexMatrix,
    d: usize,
) -> Result<Subspace> {
    let decomp = eig_hermitian(a, tol())?;
    let top = ComplexMatrix::from_fn(a.rows(), d, |i, j| decomp.eigenvectors()[(i, j)]);
    loop {
        let mut rot_cfg = cfg.clone();
        rot_cfg.dim = d;
        let rot = loop {
            let raw = rng.complex_matrix(d, d);
            if let Ok(s) = Subspace::orthonormalize(&raw) {
                break s;
            }
        };
        let noise = rng.complex_matrix(cfg.dim, d);
        let raw = top.matmul(rot.basis()).add(&noise.scale(0.3));
        let s = match Subspace::orthonormalize(&raw) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let overlap = top.adjoint().matmul(s.basis());
        let smin = *singular_values(&overlap, tol())?.last().unwrap();
        if smin >= 0.75 {
            return Ok(s);
        }
    }
}

/// Requested shapes for piecewise-linear function draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PwlShape {
    /// λ ≥ 0 and kinks in [0, 3]: convex, nondecreasing, f(0) = 0.
    ConvexMonotone,
    /// λ free, kinks in [0, 3]: convex with f(0) = 0 (not necessarily monotone).
    ConvexSign0,
    /// Inverse of a strictly increasing convex body: concave, nondecreasing,
    /// nonnegative on [0, ∞) with f(0) = 0.
    ConcaveNonneg,
    /// Symmetric kinks around 0 with balancing slope: even and convex.
    EvenConvex,
}

/// Seeded piecewise-linear function of the requested shape; kink positions
/// default to [0, 3].
pub fn gen_pwl(cfg: &GenConfig, rng: &mut SeededRng, shape: PwlShape) -> ScalarFunction {
    let k = cfg.extra.kinks;
    match shape {
        PwlShape::ConvexMonotone => {
            let slope = rng.range(0.0, 2.0);
            let kinks = (0..k).map(|_| (rng.range(0.0, 2.0), rng.range(0.0, 3.0))).collect();
            ScalarFunction::pwl(slope, kinks).expect("nonnegative weights")
        }
        PwlShape::ConvexSign0 => {
            let slope = rng.range(-2.0, 2.0);
            let kinks = (0..k).map(|_| (rng.range(0.0, 2.0), rng.range(0.0, 3.0))).collect();
            ScalarFunction::pwl(slope, kinks).expect("nonnegative weights")
        }
        PwlShape::ConcaveNonneg => {
            let slope = rng.range(0.2, 2.0);
            let kinks = (0..k).map(|_| (rng.range(0.0, 2.0), rng.range(0.0, 3.0))).collect();
            let convex = ScalarFunction::pwl(slope, kinks).expect("nonnegative weights");
            inverse_monotone(&convex, Domain::NONNEGATIVE).expect("strictly increasing")
        }
        PwlShape::EvenConvex => {
            let center = rng.range(0.0, 1.5);
            let mut kinks = vec![(center, 0.0)];
            let mut total = center;
            for _ in 0..k {
                let alpha = rng.range(0.0, 1.5);
                let beta = rng.range(0.25, 3.0);
                kinks.push((alpha, beta));
                kinks.push((alpha, -beta));
                total += alpha;
            }
            // slope −(α₀/2 + Σαᵢ) mirrors the kink gains around 0
            let slope = -(center / 2.0 + (total - center));
            ScalarFunction::pwl(slope, kinks).expect("nonnegative weights")
        }
    }
}

/// Monotone family: one PSD Z plus Aᵢ = fᵢ(Z) for nondecreasing nonnegative
/// fᵢ. All Aᵢ commute and are PSD by construction.
pub fn gen_monotone_family(
    cfg: &GenConfig,
    rng: &mut SeededRng,
    m: usize,
) -> Result<(ComplexMatrix, Vec<ComplexMatrix>)> {
    let z = gen_psd(cfg, rng);
    let decomp = eig_hermitian(&z, tol())?;
    let mut family = Vec::with_capacity(m);
    for _ in 0..m {
        let f = gen_pwl(cfg, rng, PwlShape::ConvexMonotone);
        family.push(crate::opcalc::apply_fn_spectral(&f, &decomp, tol())?);
    }
    Ok((z, family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::is_psd;
    use crate::opcalc::{class_margin, is_in_class, require_isometric_column, OperatorClass};
    use crate::scalarfn::profile;

    #[test]
    fn determinism_bit_identical() {
        let cfg = GenConfig::new(7, 4);
        let a = gen_hermitian(&cfg, &mut cfg.rng());
        let b = gen_hermitian(&cfg, &mut cfg.rng());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

        let s1 = gen_subspace(&cfg, &mut cfg.stream(3), 2);
        let s2 = gen_subspace(&cfg, &mut cfg.stream(3), 2);
        assert_eq!(
            serde_json::to_string(s1.basis()).unwrap(),
            serde_json::to_string(s2.basis()).unwrap()
        );
    }

    #[test]
    fn scalar_dim_one() {
        let cfg = GenConfig::new(11, 1);
        let a = gen_hermitian(&cfg, &mut cfg.rng());
        assert_eq!(a.rows(), 1);
        assert!(a[(0, 0)].im.abs() < 1e-15);
    }

    #[test]
    fn class_soundness_samples() {
        let t = Tolerance::default();
        for seed in 0..40u64 {
            let cfg = GenConfig::new(seed, 3);
            let mut rng = cfg.rng();
            let h = gen_hermitian(&cfg, &mut rng);
            assert!(h.hermitian_deviation() < 1e-15);
            let p = gen_psd(&cfg, &mut rng);
            let (flag, margin) = is_psd(&p, t).unwrap();
            assert!(flag && margin >= -1e-12, "psd margin {margin}");
            let u = gen_unitary(&cfg, &mut rng);
            assert!(is_in_class(&u, OperatorClass::Unitary, t).unwrap());
            let z = gen_contraction(&cfg, &mut rng);
            assert!(is_in_class(&z, OperatorClass::Contraction, t).unwrap());
            let e = gen_expansive(&cfg, &mut rng);
            assert!(
                class_margin(&e, OperatorClass::Expansive, t).unwrap() >= 0.0,
                "expansive margin failed at seed {seed}"
            );
            let col = gen_isometric_column(&cfg, &mut rng, 3);
            require_isometric_column(&col).unwrap();
        }
    }

    #[test]
    fn fixed_expansive_instance_validates() {
        // Z = [[2,1],[1,2]] has Z*Z eigenvalues 9 and 1, both ≥ 1
        let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        assert!(is_in_class(&z, OperatorClass::Expansive, Tolerance::default()).unwrap());
    }

    #[test]
    fn pwl_shapes_match_profiles() {
        let cfg = GenConfig::new(23, 3);
        let mut rng = cfg.rng();
        let interval = Domain::interval(-3.0, 3.0);
        for i in 0..50 {
            let f = gen_pwl(&cfg, &mut rng, PwlShape::ConvexMonotone);
            let p = profile(&f, interval, 101).unwrap();
            assert!(p.convex && p.nondecreasing, "draw {i}");
            assert!(f.eval(0.0).unwrap() <= 0.0);

            let f = gen_pwl(&cfg, &mut rng, PwlShape::ConvexSign0);
            let p = profile(&f, interval, 101).unwrap();
            assert!(p.convex, "draw {i}");
            assert!(f.eval(0.0).unwrap().abs() < 1e-12);

            let f = gen_pwl(&cfg, &mut rng, PwlShape::ConcaveNonneg);
            let p = profile(&f, Domain::interval(0.0, 9.0), 101).unwrap();
            assert!(p.concave && p.nondecreasing && p.nonnegative, "draw {i}");

            let f = gen_pwl(&cfg, &mut rng, PwlShape::EvenConvex);
            let p = profile(&f, interval, 101).unwrap();
            assert!(p.convex && p.even, "draw {i}");
        }
    }

    #[test]
    fn zero_kinks_draw_is_affine() {
        let mut cfg = GenConfig::new(3, 2);
        cfg.extra.kinks = 0;
        let f = gen_pwl(&cfg, &mut cfg.rng(), PwlShape::ConvexMonotone);
        let p = profile(&f, Domain::interval(-2.0, 2.0), 51).unwrap();
        assert!(p.convex && p.concave, "affine profile expected, got {p:?}");
    }

    #[test]
    fn pwl_closed_under_positive_scaling() {
        let f = ScalarFunction::pwl(1.0, vec![(0.5, 1.0)]).unwrap();
        if let ScalarFunction::PiecewiseLinearConvex { slope, kinks } = &f {
            let scaled =
                ScalarFunction::pwl(2.5 * slope, kinks.iter().map(|&(a, b)| (2.5 * a, b)).collect())
                    .unwrap();
            let p = profile(&scaled, Domain::interval(-2.0, 3.0), 51).unwrap();
            assert!(p.convex);
            for i in 0..=20 {
                let t = -2.0 + 0.25 * i as f64;
                assert!((scaled.eval(t).unwrap() - 2.5 * f.eval(t).unwrap()).abs() < 1e-12);
            }
        } else {
            unreachable!()
        }
    }

    #[test]
    fn isometric_column_special_cases() {
        let cfg = GenConfig::new(5, 3);
        let col = gen_isometric_column(&cfg, &mut cfg.rng(), 1);
        assert_eq!(col.len(), 1);
        assert!(is_in_class(&col[0], OperatorClass::Unitary, Tolerance::default()).unwrap());

        // m = 2 equal blocks (1/√2)·I reproduce the averaging case
        let s = 1.0 / 2.0_f64.sqrt();
        let halves = vec![ComplexMatrix::identity(3).scale(s), ComplexMatrix::identity(3).scale(s)];
        require_isometric_column(&halves).unwrap();
    }

    #[test]
    fn monotone_family_commutes() {
        let cfg = GenConfig::new(13, 4);
        let (_, family) = gen_monotone_family(&cfg, &mut cfg.rng(), 3).unwrap();
        for a in &family {
            let (flag, _) = is_psd(a, Tolerance::default()).unwrap();
            assert!(flag);
            for b in &family {
                let comm = a.matmul(b).sub(&b.matmul(a));
                assert!(comm.frobenius_norm() < 1e-9);
            }
        }
    }

    #[test]
    fn uniform_draws_center_on_zero() {
        // Monte-Carlo sanity for the 53-bit uniforms behind every generator
        let mut rng = SeededRng::new(99);
        let n = 10_000;
        let draws: Vec<f64> = (0..n).map(|_| rng.range(-1.0, 1.0)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        let three_sigma = 3.0 * (var / n as f64).sqrt();
        assert!(mean.abs() <= three_sigma, "mean {mean} vs 3σ {three_sigma}");
    }
}
