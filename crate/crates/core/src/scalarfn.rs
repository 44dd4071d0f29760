//! Symbolic scalar functions with the classification the inequality
//! checkers need: convex/concave, monotone, even, sign and value at zero.
//! Evaluation is exact per body form; profiles are certified structurally
//! where the body allows it and by grid tests otherwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interval of definition; `lo`/`hi` may be ±∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
    pub const NONNEGATIVE: Domain = Domain { lo: 0.0, hi: f64::INFINITY };

    pub fn interval(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi);
        Domain { lo, hi }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn intersect(&self, other: &Domain) -> Domain {
        Domain { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A kink α·(t−β)₊ with α ≥ 0.
pub type Kink = (f64, f64);

/// Scalar function bodies. `PiecewiseLinearConvex` evaluates as
/// `λ·t + Σ αᵢ·(t−βᵢ)₊` with all αᵢ ≥ 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRepr", into = "FunctionRepr")]
pub enum ScalarFunction {
    PiecewiseLinearConvex { slope: f64, kinks: Vec<Kink> },
    Power { p: f64 },
    AbsoluteValue,
    PositivePartShift { beta: f64 },
    Affine { a: f64, b: f64 },
    Negate(Box<ScalarFunction>),
    Compose { outer: Box<ScalarFunction>, inner: Box<ScalarFunction> },
    /// Ψ-transform wrapper: evaluates 1/f(1/t) for t > 0, 0 at t = 0.
    PsiOf(Box<ScalarFunction>),
}

/// Tagged-union wire format, e.g. `{"kind":"pwl","lambda":1.0,"kinks":[[1.0,1.0]]}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FunctionRepr {
    Pwl { lambda: f64, kinks: Vec<Kink> },
    Power { p: f64 },
    Abs,
    Pospart { beta: f64 },
    Affine { a: f64, b: f64 },
    Negate { inner: Box<FunctionRepr> },
    Compose { outer: Box<FunctionRepr>, inner: Box<FunctionRepr> },
    Psi { inner: Box<FunctionRepr> },
}

impl TryFrom<FunctionRepr> for ScalarFunction {
    type Error = Error;

    fn try_from(repr: FunctionRepr) -> Result<Self> {
        match repr {
            FunctionRepr::Pwl { lambda, kinks } => ScalarFunction::pwl(lambda, kinks),
            FunctionRepr::Power { p } => ScalarFunction::power(p),
            FunctionRepr::Abs => Ok(ScalarFunction::AbsoluteValue),
            FunctionRepr::Pospart { beta } => Ok(ScalarFunction::PositivePartShift { beta }),
            FunctionRepr::Affine { a, b } => Ok(ScalarFunction::Affine { a, b }),
            FunctionRepr::Negate { inner } => {
                Ok(ScalarFunction::Negate(Box::new(ScalarFunction::try_from(*inner)?)))
            }
            FunctionRepr::Compose { outer, inner } => ScalarFunction::compose(
                ScalarFunction::try_from(*outer)?,
                ScalarFunction::try_from(*inner)?,
            ),
            FunctionRepr::Psi { inner } => {
                psi_transform(&ScalarFunction::try_from(*inner)?)
            }
        }
    }
}

impl From<ScalarFunction> for FunctionRepr {
    fn from(f: ScalarFunction) -> Self {
        match f {
            ScalarFunction::PiecewiseLinearConvex { slope, kinks } => {
                FunctionRepr::Pwl { lambda: slope, kinks }
            }
            ScalarFunction::Power { p } => FunctionRepr::Power { p },
            ScalarFunction::AbsoluteValue => FunctionRepr::Abs,
            ScalarFunction::PositivePartShift { beta } => FunctionRepr::Pospart { beta },
            ScalarFunction::Affine { a, b } => FunctionRepr::Affine { a, b },
            ScalarFunction::Negate(inner) => {
                FunctionRepr::Negate { inner: Box::new(FunctionRepr::from(*inner)) }
            }
            ScalarFunction::Compose { outer, inner } => FunctionRepr::Compose {
                outer: Box::new(FunctionRepr::from(*outer)),
                inner: Box::new(FunctionRepr::from(*inner)),
            },
            ScalarFunction::PsiOf(inner) => {
                FunctionRepr::Psi { inner: Box::new(FunctionRepr::from(*inner)) }
            }
        }
    }
}

impl ScalarFunction {
    pub fn pwl(slope: f64, kinks: Vec<Kink>) -> Result<Self> {
        if !slope.is_finite() {
            return Err(Error::NotAdmissible("pwl slope must be finite".into()));
        }
        for &(alpha, beta) in &kinks {
            if !(alpha.is_finite() && beta.is_finite()) {
                return Err(Error::NotAdmissible("pwl kink must be finite".into()));
            }
            if alpha < 0.0 {
                return Err(Error::NotAdmissible(format!("pwl kink weight {alpha} < 0")));
            }
        }
        let mut sorted = kinks;
        sorted.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        Ok(ScalarFunction::PiecewiseLinearConvex { slope, kinks: sorted })
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::NotAdmissible(format!("power exponent {p} must be > 0")));
        }
        Ok(ScalarFunction::Power { p })
    }

    pub fn identity() -> Self {
        ScalarFunction::Affine { a: 1.0, b: 0.0 }
    }

    pub fn positive_part() -> Self {
        ScalarFunction::PositivePartShift { beta: 0.0 }
    }

    /// φ∘g with g restricted to the operator-convex whitelist: Affine,
    /// Power p∈[1,2], or the negation of an affine body. Broader inner
    /// bodies are rejected rather than silently misclassified.
    pub fn compose(outer: ScalarFunction, inner: ScalarFunction) -> Result<Self> {
        if !inner.in_operator_convex_whitelist() {
            return Err(Error::NotAdmissible(format!(
                "compose inner body {inner:?} is outside the operator-convex whitelist"
            )));
        }
        Ok(ScalarFunction::Compose { outer: Box::new(outer), inner: Box::new(inner) })
    }

    /// Structurally operator-convex bodies accepted as the inner part of a
    /// composition: affine maps and t^p for p ∈ [1,2] on [0,∞).
    fn in_operator_convex_whitelist(&self) -> bool {
        match self {
            ScalarFunction::Affine { .. } => true,
            ScalarFunction::Power { p } => (1.0..=2.0).contains(p),
            ScalarFunction::PiecewiseLinearConvex { kinks, .. } => kinks.is_empty(),
            ScalarFunction::Negate(inner) => matches!(
                inner.as_ref(),
                ScalarFunction::Affine { .. }
                    | ScalarFunction::Power { p: 1.0 }
                    | ScalarFunction::PiecewiseLinearConvex { .. }
            ) && inner.in_operator_convex_whitelist(),
            _ => false,
        }
    }

    /// Whether the body is admissible as "unitary convex" for the gates of
    /// the compression/contraction checkers: a composition φ∘g with g in
    /// the whitelist and φ nondecreasing convex on the relevant range.
    pub fn is_unitary_convex(&self, interval: Domain, grid_points: usize) -> bool {
        if let ScalarFunction::Compose { outer, inner } = self {
            let (lo, hi) = (interval.lo, interval.hi);
            let ga = match inner.eval(lo) {
                Ok(v) => v,
                Err(_) => return false,
            };
            let gb = match inner.eval(hi) {
                Ok(v) => v,
                Err(_) => return false,
            };
            let range = Domain::interval(ga.min(gb), ga.max(gb));
            match profile(outer, range, grid_points) {
                Ok(p) => p.convex && p.nondecreasing,
                Err(_) => false,
            }
        } else {
            false
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            ScalarFunction::PiecewiseLinearConvex { .. }
            | ScalarFunction::AbsoluteValue
            | ScalarFunction::PositivePartShift { .. }
            | ScalarFunction::Affine { .. } => Domain::REAL_LINE,
            ScalarFunction::Power { .. } | ScalarFunction::PsiOf(_) => Domain::NONNEGATIVE,
            ScalarFunction::Negate(inner) => inner.domain(),
            ScalarFunction::Compose { outer, inner } => {
                let inner_dom = inner.domain();
                let outer_dom = outer.domain();
                if outer_dom == Domain::REAL_LINE {
                    return inner_dom;
                }
                // whitelisted inners are monotone; pull the outer domain back
                match inner.as_ref() {
                    ScalarFunction::Affine { a, b } => {
                        preimage_affine(*a, *b, outer_dom, inner_dom)
                    }
                    ScalarFunction::PiecewiseLinearConvex { slope, kinks } if kinks.is_empty() => {
                        preimage_affine(*slope, 0.0, outer_dom, inner_dom)
                    }
                    ScalarFunction::Power { .. } => inner_dom, // range [0,∞) ⊆ outer domain
                    ScalarFunction::Negate(g) => match g.as_ref() {
                        ScalarFunction::Affine { a, b } => {
                            preimage_affine(-a, -b, outer_dom, inner_dom)
                        }
                        ScalarFunction::PiecewiseLinearConvex { slope, kinks }
                            if kinks.is_empty() =>
                        {
                            preimage_affine(-slope, 0.0, outer_dom, inner_dom)
                        }
                        _ => inner_dom,
                    },
                    _ => inner_dom,
                }
            }
        }
    }

    /// Exact pointwise evaluation.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let dom = self.domain();
        if !dom.contains(t) {
            return Err(Error::OutOfDomain { t, domain: dom.to_string() });
        }
        self.eval_unchecked(t)
    }

    fn eval_unchecked(&self, t: f64) -> Result<f64> {
        Ok(match self {
            ScalarFunction::PiecewiseLinearConvex { slope, kinks } => {
                let mut v = slope * t;
                for &(alpha, beta) in kinks {
                    v += alpha * (t - beta).max(0.0);
                }
                v
            }
            ScalarFunction::Power { p } => {
                if p.fract() == 0.0 && p.abs() < 64.0 {
                    t.powi(*p as i32)
                } else {
                    t.powf(*p)
                }
            }
            ScalarFunction::AbsoluteValue => t.abs(),
            ScalarFunction::PositivePartShift { beta } => (t - beta).max(0.0),
            ScalarFunction::Affine { a, b } => a * t + b,
            ScalarFunction::Negate(inner) => -inner.eval(t)?,
            ScalarFunction::Compose { outer, inner } => outer.eval(inner.eval(t)?)?,
            ScalarFunction::PsiOf(inner) => {
                if t == 0.0 {
                    0.0 // continuous extension: f(∞)=∞ forces Ψ(f)(0)=0
                } else {
                    1.0 / inner.eval(1.0 / t)?
                }
            }
        })
    }
}

fn preimage_affine(a: f64, b: f64, outer_dom: Domain, inner_dom: Domain) -> Domain {
    if a == 0.0 {
        return inner_dom;
    }
    let x1 = (outer_dom.lo - b) / a;
    let x2 = (outer_dom.hi - b) / a;
    inner_dom.intersect(&Domain::interval(x1.min(x2), x1.max(x2)))
}

/// Property flags of a function over a test interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionProfile {
    pub convex: bool,
    pub concave: bool,
    pub nondecreasing: bool,
    pub nonincreasing: bool,
    pub even: bool,
    pub nonnegative: bool,
    pub value_at_zero: Option<f64>,
}

impl FunctionProfile {
    pub fn is_monotone(&self) -> bool {
        self.nondecreasing || self.nonincreasing
    }
}

pub const DEFAULT_GRID_POINTS: usize = 101;
const PROFILE_SLACK_FACTOR: f64 = 1e-12;

/// Classifies `f` on `[interval.lo, interval.hi]`. Piecewise-linear and
/// power bodies get exact (non-sampled) answers; other bodies are tested by
/// midpoint inequalities and adjacent differences on a uniform grid.
pub fn profile(f: &ScalarFunction, interval: Domain, grid_points: usize) -> Result<FunctionProfile> {
    assert!(grid_points >= 3, "profile needs at least 3 grid points");
    assert!(
        interval.lo.is_finite() && interval.hi.is_finite() && interval.lo <= interval.hi,
        "profile interval must be finite"
    );
    let dom = f.domain();
    if !dom.contains(interval.lo) || !dom.contains(interval.hi) {
        return Err(Error::OutOfDomain {
            t: if dom.contains(interval.lo) { interval.hi } else { interval.lo },
            domain: dom.to_string(),
        });
    }
    match f {
        ScalarFunction::PiecewiseLinearConvex { slope, kinks } => {
            Ok(profile_pwl(*slope, kinks, interval, false))
        }
        ScalarFunction::Negate(inner) => {
            if let ScalarFunction::PiecewiseLinearConvex { slope, kinks } = inner.as_ref() {
                Ok(profile_pwl(*slope, kinks, interval, true))
            } else {
                let mut p = profile(inner, interval, grid_points)?;
                std::mem::swap(&mut p.convex, &mut p.concave);
                std::mem::swap(&mut p.nondecreasing, &mut p.nonincreasing);
                p.value_at_zero = p.value_at_zero.map(|v| -v);
                // sign flags do not negate structurally; resample
                let sampled = profile_sampled(f, interval, grid_points)?;
                p.nonnegative = sampled.nonnegative;
                Ok(p)
            }
        }
        ScalarFunction::Power { p } => {
            let at_zero = if interval.contains(0.0) { Some(0.0) } else { None };
            Ok(FunctionProfile {
                convex: *p >= 1.0,
                concave: *p <= 1.0,
                nondecreasing: true,
                nonincreasing: interval.lo == interval.hi,
                even: false,
                nonnegative: true,
                value_at_zero: at_zero,
            })
        }
        ScalarFunction::AbsoluteValue => Ok(FunctionProfile {
            convex: true,
            concave: interval.lo >= 0.0 || interval.hi <= 0.0,
            nondecreasing: interval.lo >= 0.0,
            nonincreasing: interval.hi <= 0.0,
            even: true,
            nonnegative: true,
            value_at_zero: interval.contains(0.0).then_some(0.0),
        }),
        ScalarFunction::PositivePartShift { beta } => Ok(FunctionProfile {
            convex: true,
            concave: interval.hi <= *beta || interval.lo >= *beta,
            nondecreasing: true,
            nonincreasing: interval.hi <= *beta,
            even: false,
            nonnegative: true,
            value_at_zero: interval.contains(0.0).then_some((0.0 - beta).max(0.0)),
        }),
        ScalarFunction::Affine { a, b } => Ok(FunctionProfile {
            convex: true,
            concave: true,
            nondecreasing: *a >= 0.0,
            nonincreasing: *a <= 0.0,
            even: *a == 0.0,
            nonnegative: a * interval.lo + b >= 0.0 && a * interval.hi + b >= 0.0,
            value_at_zero: interval.contains(0.0).then_some(*b),
        }),
        _ => profile_sampled(f, interval, grid_points),
    }
}

/// Exact profile of λt + Σ αᵢ(t−βᵢ)₊ (negated when `negated` is set).
fn profile_pwl(slope: f64, kinks: &[Kink], interval: Domain, negated: bool) -> FunctionProfile {
    let (lo, hi) = (interval.lo, interval.hi);
    let eval = |t: f64| -> f64 {
        let mut v = slope * t;
        for &(alpha, beta) in kinks {
            v += alpha * (t - beta).max(0.0);
        }
        if negated {
            -v
        } else {
            v
        }
    };
    // segment slopes are nondecreasing in t; first/last active slope decide
    let first_slope: f64 =
        slope + kinks.iter().filter(|&&(_, b)| b <= lo).map(|&(a, _)| a).sum::<f64>();
    let last_slope: f64 =
        slope + kinks.iter().filter(|&&(_, b)| b < hi).map(|&(a, _)| a).sum::<f64>();
    let affine_on_interval = first_slope == last_slope;

    // extrema of a convex piecewise-linear function sit at interval ends or kinks
    let mut candidates = vec![lo, hi];
    candidates.extend(kinks.iter().map(|&(_, b)| b).filter(|&b| b > lo && b < hi));
    let mut min_v = f64::INFINITY;
    let mut max_v = f64::NEG_INFINITY;
    for &t in &candidates {
        let v = eval(t);
        min_v = min_v.min(v);
        max_v = max_v.max(v);
    }

    // even: mirror-symmetric around 0 on the symmetric core of the interval
    let sym = lo.abs().min(hi.abs());
    let even = if lo < 0.0 && hi > 0.0 {
        let mut ok = true;
        let steps = 17;
        for i in 0..=steps {
            let t = sym * (i as f64) / (steps as f64);
            if (eval(t) - eval(-t)).abs() > PROFILE_SLACK_FACTOR * (1.0 + max_v.abs()) {
                ok = false;
                break;
            }
        }
        ok
    } else {
        false
    };

    let (nondec, noninc) = if negated {
        (last_slope <= 0.0, first_slope >= 0.0)
    } else {
        (first_slope >= 0.0, last_slope <= 0.0)
    };
    FunctionProfile {
        convex: !negated || affine_on_interval,
        concave: negated || affine_on_interval,
        nondecreasing: nondec,
        nonincreasing: noninc,
        even,
        nonnegative: min_v >= 0.0,
        value_at_zero: interval.contains(0.0).then(|| eval(0.0)),
    }
}

fn profile_sampled(
    f: &ScalarFunction,
    interval: Domain,
    grid_points: usize,
) -> Result<FunctionProfile> {
    let (lo, hi) = (interval.lo, interval.hi);
    let g = grid_points.max(3);
    let step = (hi - lo) / (g - 1) as f64;
    let ts: Vec<f64> = (0..g).map(|i| lo + step * i as f64).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f.eval(t)).collect::<Result<_>>()?;
    let scale = 1.0 + vs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let slack = PROFILE_SLACK_FACTOR * scale;

    let mut convex = true;
    let mut concave = true;
    for i in 0..g {
        for j in (i + 2)..g {
            if (j - i) % 2 != 0 {
                continue;
            }
            let mid = vs[(i + j) / 2];
            let avg = 0.5 * (vs[i] + vs[j]);
            if mid > avg + slack {
                convex = false;
            }
            if mid < avg - slack {
                concave = false;
            }
        }
    }
    let mut nondecreasing = true;
    let mut nonincreasing = true;
    for w in vs.windows(2) {
        if w[1] < w[0] - slack {
            nondecreasing = false;
        }
        if w[1] > w[0] + slack {
            nonincreasing = false;
        }
    }
    let symmetric = (lo + hi).abs() <= 1e-12 * (1.0 + lo.abs() + hi.abs());
    let mut even = symmetric;
    if symmetric {
        for i in 0..g {
            if (vs[i] - vs[g - 1 - i]).abs() > slack {
                even = false;
                break;
            }
        }
    }
    let nonnegative = vs.iter().all(|&v| v >= -slack);
    let value_at_zero = if interval.contains(0.0) && f.domain().contains(0.0) {
        Some(f.eval(0.0)?)
    } else {
        None
    };
    Ok(FunctionProfile {
        convex,
        concave,
        nondecreasing,
        nonincreasing,
        even,
        nonnegative,
        value_at_zero,
    })
}

/// Ψ(f)(t) = 1/f(1/t), the involution on continuous one-to-one functions on
/// [0,∞) with f(0)=0, f(∞)=∞. Admissibility is certified structurally; the
/// Ψ of a Ψ unwraps, so applying the transform twice returns the original
/// body.
pub fn psi_transform(f: &ScalarFunction) -> Result<ScalarFunction> {
    check_psi_admissible(f)?;
    Ok(match f {
        ScalarFunction::PsiOf(inner) => (**inner).clone(),
        ScalarFunction::Power { p } => ScalarFunction::Power { p: *p }, // fixed point
        ScalarFunction::Affine { a, .. } => ScalarFunction::Affine { a: 1.0 / a, b: 0.0 },
        _ => ScalarFunction::PsiOf(Box::new(f.clone())),
    })
}

fn check_psi_admissible(f: &ScalarFunction) -> Result<()> {
    let ok = match f {
        ScalarFunction::Power { p } => *p > 0.0,
        ScalarFunction::Affine { a, b } => *a > 0.0 && *b == 0.0,
        ScalarFunction::AbsoluteValue => true, // t on [0,∞)
        ScalarFunction::PositivePartShift { beta } => *beta == 0.0,
        ScalarFunction::PiecewiseLinearConvex { slope, kinks } => {
            let no_negative_kinks = kinks.iter().all(|&(a, b)| b >= 0.0 || a == 0.0);
            let initial: f64 = slope
                + kinks.iter().filter(|&&(_, b)| b <= 0.0).map(|&(a, _)| a).sum::<f64>();
            no_negative_kinks && initial > 0.0
        }
        ScalarFunction::PsiOf(_) => true,
        _ => false,
    };
    if ok {
        // grid double-check: f(0)=0 and strict growth
        let f0 = f.eval(0.0)?;
        if f0.abs() > 1e-12 {
            return Err(Error::NotAdmissible(format!("f(0) = {f0} ≠ 0")));
        }
        let mut prev = f0;
        for i in 1..=24 {
            let t = 10.0_f64.powf(-3.0 + 6.0 * (i as f64) / 24.0);
            let v = f.eval(t)?;
            if v <= prev {
                return Err(Error::NotAdmissible(format!(
                    "not strictly increasing near t = {t}"
                )));
            }
            prev = v;
        }
        Ok(())
    } else {
        Err(Error::NotAdmissible(format!(
            "{f:?} is not one-to-one from [0,∞) onto [0,∞) with f(0)=0"
        )))
    }
}

/// Functional inverse of a strictly increasing piecewise-linear or power
/// body anchored at the origin. For a convex increasing piecewise-linear f
/// the inverse is concave piecewise-linear, built segment by segment.
pub fn inverse_monotone(f: &ScalarFunction, interval: Domain) -> Result<ScalarFunction> {
    match f {
        ScalarFunction::Power { p } => {
            if interval.lo < 0.0 {
                return Err(Error::NotInvertible("power body needs [0,∞)".into()));
            }
            ScalarFunction::power(1.0 / p)
        }
        ScalarFunction::Affine { a, b } => {
            if *a <= 0.0 {
                return Err(Error::NotInvertible(format!("affine slope {a} not positive")));
            }
            Ok(ScalarFunction::Affine { a: 1.0 / a, b: -b / a })
        }
        ScalarFunction::PiecewiseLinearConvex { slope, kinks } => {
            if interval.lo != 0.0 {
                return Err(Error::NotInvertible(
                    "piecewise-linear inversion is anchored at interval start 0".into(),
                ));
            }
            if kinks.iter().any(|&(a, b)| b < 0.0 && a > 0.0) {
                return Err(Error::NotInvertible("kinks below 0 shift the anchor".into()));
            }
            // breakpoints and segment slopes in ascending t
            let mut breaks: Vec<f64> = Vec::new();
            let mut slopes: Vec<f64> = Vec::new();
            let mut running = *slope
                + kinks.iter().filter(|&&(_, b)| b <= 0.0).map(|&(a, _)| a).sum::<f64>();
            slopes.push(running);
            for &(alpha, beta) in kinks.iter().filter(|&&(a, b)| b > 0.0 && a > 0.0) {
                if (breaks.last() == Some(&beta)) && !breaks.is_empty() {
                    running += alpha;
                    *slopes.last_mut().unwrap() = running;
                } else {
                    breaks.push(beta);
                    running += alpha;
                    slopes.push(running);
                }
            }
            if slopes.iter().any(|&m| m <= 0.0) {
                return Err(Error::NotInvertible("a segment has nonpositive slope".into()));
            }
            if slopes.len() == 1 {
                return ScalarFunction::pwl(1.0 / slopes[0], vec![]);
            }
            // image breakpoints y_j = f(β_j); inverse slopes 1/m_j decrease,
            // so the inverse is Negate of a convex piecewise-linear body
            let ys: Vec<f64> = breaks
                .iter()
                .map(|&b| f.eval(b))
                .collect::<Result<_>>()?;
            let inv_slopes: Vec<f64> = slopes.iter().map(|&m| 1.0 / m).collect();
            let mut neg_kinks = Vec::with_capacity(ys.len());
            for (j, &y) in ys.iter().enumerate() {
                neg_kinks.push((inv_slopes[j] - inv_slopes[j + 1], y));
            }
            Ok(ScalarFunction::Negate(Box::new(ScalarFunction::pwl(
                -inv_slopes[0],
                neg_kinks,
            )?)))
        }
        // concave increasing bodies produced by this very function: the
        // negation of a convex piecewise-linear; the inverse is plain
        // convex piecewise-linear again
        ScalarFunction::Negate(inner) => {
            let (slope, kinks) = match inner.as_ref() {
                ScalarFunction::PiecewiseLinearConvex { slope, kinks } => (*slope, kinks),
                _ => {
                    return Err(Error::NotInvertible(format!(
                        "negated body must be piecewise-linear, got {inner:?}"
                    )))
                }
            };
            if interval.lo != 0.0 {
                return Err(Error::NotInvertible(
                    "piecewise-linear inversion is anchored at interval start 0".into(),
                ));
            }
            if kinks.iter().any(|&(a, b)| b < 0.0 && a > 0.0) {
                return Err(Error::NotInvertible("kinks below 0 shift the anchor".into()));
            }
            // segment slopes of f = −inner, decreasing in t
            let mut breaks: Vec<f64> = Vec::new();
            let mut running = -(slope
                + kinks.iter().filter(|&&(_, b)| b <= 0.0).map(|&(a, _)| a).sum::<f64>());
            let mut slopes = vec![running];
            for &(alpha, beta) in kinks.iter().filter(|&&(a, b)| b > 0.0 && a > 0.0) {
                if breaks.last() == Some(&beta) {
                    running -= alpha;
                    *slopes.last_mut().unwrap() = running;
                } else {
                    breaks.push(beta);
                    running -= alpha;
                    slopes.push(running);
                }
            }
            if slopes.iter().any(|&m| m <= 0.0) {
                return Err(Error::NotInvertible("a segment has nonpositive slope".into()));
            }
            let ys: Vec<f64> = breaks.iter().map(|&b| f.eval(b)).collect::<Result<_>>()?;
            let inv_slopes: Vec<f64> = slopes.iter().map(|&m| 1.0 / m).collect();
            let mut inv_kinks = Vec::with_capacity(ys.len());
            for (j, &y) in ys.iter().enumerate() {
                inv_kinks.push((inv_slopes[j + 1] - inv_slopes[j], y));
            }
            ScalarFunction::pwl(inv_slopes[0], inv_kinks)
        }
        _ => Err(Error::NotInvertible(format!(
            "inversion supports piecewise-linear and power bodies, got {f:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinked_ramp() -> ScalarFunction {
        // f(t) = t + (t-1)_+
        ScalarFunction::pwl(1.0, vec![(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(kinked_ramp().eval(1.5).unwrap(), 2.0);
        assert_eq!(ScalarFunction::AbsoluteValue.eval(-2.0).unwrap(), 2.0);
        assert_eq!(ScalarFunction::power(2.0).unwrap().eval(3.0).unwrap(), 9.0);
        assert!(matches!(
            ScalarFunction::power(0.5).unwrap().eval(-1.0),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn profile_examples() {
        let p = profile(&kinked_ramp(), Domain::interval(0.0, 4.0), 101).unwrap();
        assert!(p.convex && p.nondecreasing && !p.nonincreasing);
        assert_eq!(p.value_at_zero, Some(0.0));

        let p = profile(&ScalarFunction::AbsoluteValue, Domain::interval(-2.0, 2.0), 101).unwrap();
        assert!(p.convex && p.even && !p.is_monotone());

        let p = profile(&ScalarFunction::power(0.5).unwrap(), Domain::interval(0.0, 4.0), 101)
            .unwrap();
        assert!(p.concave && p.nondecreasing && !p.convex);
    }

    #[test]
    fn profile_flags_consistent() {
        // convex ∧ concave ⇒ affine: identity qualifies
        let p = profile(&ScalarFunction::identity(), Domain::interval(-1.0, 1.0), 11).unwrap();
        assert!(p.convex && p.concave && p.nondecreasing);
    }

    #[test]
    fn psi_examples() {
        let id = ScalarFunction::identity();
        let g = psi_transform(&id).unwrap();
        assert_eq!(g.eval(3.0).unwrap(), 3.0);

        let sq = ScalarFunction::power(2.0).unwrap();
        let g = psi_transform(&sq).unwrap();
        assert_eq!(g, sq);

        let f = kinked_ramp();
        let g = psi_transform(&f).unwrap();
        assert!((g.eval(2.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((g.eval(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((g.eval(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(g.eval(0.0).unwrap(), 0.0);

        // involution returns the original body
        let back = psi_transform(&g).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn psi_rejects_nonadmissible() {
        assert!(psi_transform(&ScalarFunction::PositivePartShift { beta: 1.0 }).is_err());
        assert!(psi_transform(&ScalarFunction::Affine { a: 1.0, b: 0.5 }).is_err());
        assert!(psi_transform(&ScalarFunction::pwl(0.0, vec![(1.0, 1.0)]).unwrap()).is_err());
    }

    #[test]
    fn inverse_examples() {
        let double = ScalarFunction::pwl(2.0, vec![]).unwrap();
        let g = inverse_monotone(&double, Domain::NONNEGATIVE).unwrap();
        assert_eq!(g.eval(3.0).unwrap(), 1.5);

        let sq = ScalarFunction::power(2.0).unwrap();
        let g = inverse_monotone(&sq, Domain::NONNEGATIVE).unwrap();
        assert_eq!(g, ScalarFunction::power(0.5).unwrap());

        let f = kinked_ramp();
        let g = inverse_monotone(&f, Domain::NONNEGATIVE).unwrap();
        // g(y) = y for y ≤ 1, (y+1)/2 for y > 1
        assert!((g.eval(0.5).unwrap() - 0.5).abs() < 1e-14);
        assert!((g.eval(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((g.eval(3.0).unwrap() - 2.0).abs() < 1e-14);
        // composition identity on a grid
        for i in 0..=40 {
            let y = 0.1 * i as f64;
            let x = g.eval(y).unwrap();
            assert!((f.eval(x).unwrap() - y).abs() < 1e-10);
        }
        // inverse is concave nondecreasing
        let p = profile(&g, Domain::interval(0.0, 5.0), 101).unwrap();
        assert!(p.concave && p.nondecreasing && p.nonnegative);
    }

    #[test]
    fn inverse_of_inverse_returns_pointwise_original() {
        let f = ScalarFunction::pwl(0.5, vec![(1.5, 1.0), (0.5, 2.0)]).unwrap();
        let g = inverse_monotone(&f, Domain::NONNEGATIVE).unwrap();
        let back = inverse_monotone(&g, Domain::NONNEGATIVE).unwrap();
        for i in 0..=50 {
            let t = 0.1 * i as f64;
            assert!((back.eval(t).unwrap() - f.eval(t).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_rejects_flat_segments() {
        let flat = ScalarFunction::pwl(0.0, vec![(1.0, 1.0)]).unwrap();
        assert!(inverse_monotone(&flat, Domain::NONNEGATIVE).is_err());
    }

    #[test]
    fn pwl_closed_under_addition() {
        // adding two convex pwl bodies is again pwl with α ≥ 0
        let f = ScalarFunction::pwl(1.0, vec![(0.5, 1.0)]).unwrap();
        let g = ScalarFunction::pwl(-0.25, vec![(2.0, 0.5)]).unwrap();
        if let (
            ScalarFunction::PiecewiseLinearConvex { slope: s1, kinks: k1 },
            ScalarFunction::PiecewiseLinearConvex { slope: s2, kinks: k2 },
        ) = (&f, &g)
        {
            let mut kinks = k1.clone();
            kinks.extend(k2.iter().copied());
            let sum = ScalarFunction::pwl(s1 + s2, kinks).unwrap();
            let p = profile(&sum, Domain::interval(-1.0, 3.0), 101).unwrap();
            assert!(p.convex);
            for i in 0..=20 {
                let t = -1.0 + 0.2 * i as f64;
                assert!(
                    (sum.eval(t).unwrap() - f.eval(t).unwrap() - g.eval(t).unwrap()).abs() < 1e-12
                );
            }
        } else {
            unreachable!()
        }
    }

    #[test]
    fn serde_tagged_union() {
        let f = kinked_ramp();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"kind\":\"pwl\""));
        let back: ScalarFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);

        let parsed: ScalarFunction = serde_json::from_str(r#"{"kind":"power","p":0.5}"#).unwrap();
        assert_eq!(parsed, ScalarFunction::power(0.5).unwrap());

        // negative kink weights are rejected on read
        let bad = r#"{"kind":"pwl","lambda":1.0,"kinks":[[-1.0,0.0]]}"#;
        assert!(serde_json::from_str::<ScalarFunction>(bad).is_err());
    }

    #[test]
    fn compose_whitelist() {
        let phi = ScalarFunction::pwl(1.0, vec![(1.0, 1.0)]).unwrap();
        let ok = ScalarFunction::compose(phi.clone(), ScalarFunction::power(1.5).unwrap());
        assert!(ok.is_ok());
        let bad = ScalarFunction::compose(phi.clone(), ScalarFunction::AbsoluteValue);
        assert!(bad.is_err());
        let f = ok.unwrap();
        assert!(f.is_unitary_convex(Domain::interval(0.0, 4.0), 101));
        // φ(t^1.5) at t=4: inner 8, φ(8) = 8 + 7 = 15
        assert_eq!(f.eval(4.0).unwrap(), 15.0);
    }
}
