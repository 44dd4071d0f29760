//! Scenario files: a version header plus a list of jobs, each binding a
//! statement to an inline instance or a generator configuration. Loading
//! validates statement ids, matrices and functions; anything malformed is
//! a schema error (exit code 2).

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use matineq::instances::GenConfig;
use matineq::numerics::{ComplexMatrix, Tolerance};
use matineq::opcalc::Subspace;
use matineq::scalarfn::ScalarFunction;
use matineq::theorems::{
    check_cor2_3, check_davis, check_lemma3_4, check_lemma3_7, check_prop2_5, check_prop3_10,
    check_prop3_2, check_prop3_8, check_prop4_1, check_question2_6,
    check_question3_12, check_remark3_1, check_star_section3, check_thm1_1, check_thm2_2_column,
    check_thm2_2_contraction, check_thm3_5, check_thm3_9, default_p_grid, pmap_report,
    run_generated, CheckReport, ConvexityVariant, Cor23Variant, Expectation, HypothesisMode,
    Q312Part, StatementId,
};

#[derive(Debug)]
pub enum CliError {
    /// Malformed scenario, matrix, function or option (exit 2).
    Schema(String),
    /// Genericity precondition failed (exit 3, trajectory studies only).
    Genericity(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Genericity(_) => 3,
            CliError::Io(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::Genericity(m) | CliError::Io(m) => m,
        }
    }
}

impl From<matineq::Error> for CliError {
    fn from(e: matineq::Error) -> Self {
        match e {
            matineq::Error::GenericityFailed { .. } => CliError::Genericity(e.to_string()),
            matineq::Error::UnknownStatement(_) => CliError::Schema(e.to_string()),
            other => CliError::Schema(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub version: String,
    pub jobs: Vec<Job>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Job {
    pub statement_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<GenConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inline: Option<InlineInstance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
}

/// Inline instance payload; each statement consumes the fields it needs.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InlineInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<ScalarFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_list: Option<Vec<ScalarFunction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_list: Option<Vec<ComplexMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_list: Option<Vec<ComplexMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_list: Option<Vec<ComplexMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
}

pub fn load_scenario(text: &str) -> Result<ScenarioFile, CliError> {
    let scenario: ScenarioFile =
        serde_json::from_str(text).map_err(|e| CliError::Schema(format!("scenario parse: {e}")))?;
    for job in &scenario.jobs {
        StatementId::from_str(&job.statement_id)
            .map_err(|e| CliError::Schema(e.to_string()))?;
    }
    Ok(scenario)
}

/// FNV-1a over the canonical instance JSON; part of the canonical report
/// ordering (statement id, then instance hash).
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

#[derive(Debug, Clone, Serialize)]
pub struct JobResult {
    pub statement_id: StatementId,
    pub instance_hash: String,
    pub expectation: Expectation,
    pub trials: usize,
    pub pass: usize,
    pub fail: usize,
    pub worst_margin: f64,
    pub ok: bool,
    pub reports: Vec<CheckReport>,
    pub notes: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatementSummary {
    pub pass: usize,
    pub fail: usize,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub version: String,
    pub rng: String,
    pub jobs: Vec<JobResult>,
    pub summary: BTreeMap<String, StatementSummary>,
}

fn require<T: Clone>(field: &Option<T>, name: &str, id: StatementId) -> Result<T, CliError> {
    field
        .clone()
        .ok_or_else(|| CliError::Schema(format!("statement {id} needs inline field `{name}`")))
}

fn parse_convexity(v: &Option<String>, id: StatementId) -> Result<ConvexityVariant, CliError> {
    match v.as_deref() {
        Some("convex") => Ok(ConvexityVariant::Convex),
        Some("concave") => Ok(ConvexityVariant::Concave),
        other => Err(CliError::Schema(format!(
            "statement {id} needs variant convex|concave, got {other:?}"
        ))),
    }
}

fn run_inline(
    id: StatementId,
    inline: &InlineInstance,
    tol: Tolerance,
) -> Result<CheckReport, CliError> {
    let subspace = |m: &Option<ComplexMatrix>| -> Result<Subspace, CliError> {
        let basis = require(m, "subspace", id)?;
        Subspace::orthonormalize(&basis).map_err(CliError::from)
    };
    let report = match id {
        StatementId::Thm1_1 => check_thm1_1(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &subspace(&inline.subspace)?,
            tol,
            HypothesisMode::Enforce,
        )?,
        StatementId::Davis1 => check_davis(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &subspace(&inline.subspace)?,
            tol,
        )?,
        StatementId::Thm1_2 => {
            let grid = inline.p_grid.clone().unwrap_or_else(default_p_grid);
            pmap_report(&require(&inline.a, "a", id)?, &subspace(&inline.subspace)?, &grid, tol)?
        }
        StatementId::Thm2_2Contraction => check_thm2_2_contraction(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            tol,
            HypothesisMode::Enforce,
        )?,
        StatementId::Thm2_2Column => check_thm2_2_column(
            &require(&inline.f, "f", id)?,
            &require(&inline.a_list, "a_list", id)?,
            &require(&inline.z_list, "z_list", id)?,
            tol,
            HypothesisMode::Enforce,
        )?,
        StatementId::Cor2_3Bk | StatementId::Cor2_3Hp => {
            let variant =
                if id == StatementId::Cor2_3Bk { Cor23Variant::Bk } else { Cor23Variant::Hp };
            let (a_list, z_list) = if let (Some(a), Some(z)) = (&inline.a, &inline.z) {
                (vec![a.clone()], vec![z.clone()])
            } else {
                (require(&inline.a_list, "a_list", id)?, require(&inline.z_list, "z_list", id)?)
            };
            check_cor2_3(&require(&inline.f, "f", id)?, &a_list, &z_list, variant, tol)?
        }
        StatementId::Prop2_5 => check_prop2_5(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.b, "b", id)?,
            tol,
        )?,
        StatementId::Remark3_1 => check_remark3_1(
            &require(&inline.f, "f", id)?,
            &require(&inline.pairs, "pairs", id)?,
            tol,
            HypothesisMode::Enforce,
        )?,
        StatementId::Prop3_2 => check_prop3_2(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            tol,
        )?,
        StatementId::Lemma3_4 => check_lemma3_4(
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            require(&inline.beta, "beta", id)?,
            tol,
        )?,
        StatementId::Thm3_5 => check_thm3_5(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            parse_convexity(&inline.variant, id)?,
            tol,
        )?,
        StatementId::Lemma3_7 => check_lemma3_7(
            &require(&inline.z, "z", id)?,
            &require(&inline.f_list, "f_list", id)?,
            &require(&inline.u_list, "u_list", id)?,
            tol,
        )?,
        StatementId::Prop3_8 => check_prop3_8(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            tol,
        )?,
        StatementId::Thm3_9 => check_thm3_9(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            tol,
        )?,
        StatementId::Prop3_10 => check_prop3_10(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            parse_convexity(&inline.variant, id)?,
            tol,
        )?,
        StatementId::Prop3_11 => {
            return Err(CliError::Schema(
                "prop3_11 is generator-driven: use a `gen` instance".into(),
            ))
        }
        StatementId::Prop4_1 => check_prop4_1(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.b, "b", id)?,
            parse_convexity(&inline.variant, id)?,
            tol,
        )?,
        StatementId::StarSection3 => check_star_section3(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.z, "z", id)?,
            tol,
        )?,
        StatementId::Question2_6 => check_question2_6(
            &require(&inline.f, "f", id)?,
            &require(&inline.a, "a", id)?,
            &require(&inline.b, "b", id)?,
            tol,
        )?,
        StatementId::Question3_12 => {
            let part = match inline.variant.as_deref() {
                Some("all_concave") => Q312Part::AllConcave,
                Some("all_norms") | None => Q312Part::AllNorms,
                other => {
                    return Err(CliError::Schema(format!(
                        "question3_12 variant must be all_concave|all_norms, got {other:?}"
                    )))
                }
            };
            check_question3_12(
                &require(&inline.f, "f", id)?,
                &require(&inline.a, "a", id)?,
                &require(&inline.z, "z", id)?,
                part,
                tol,
            )?
        }
        StatementId::Ex2_4 | StatementId::Ex3_3 | StatementId::Ex3_6 => {
            return Err(CliError::Schema(format!(
                "statement {id} reproduces a fixed instance: omit `inline`"
            )))
        }
    };
    Ok(report)
}

const EMBEDDED_REPORTS_CAP: usize = 10;

pub fn run_job(job: &Job, default_tol: Tolerance) -> Result<JobResult, CliError> {
    let id = StatementId::from_str(&job.statement_id).map_err(CliError::from)?;
    let tol = job.tolerance.unwrap_or(default_tol);
    let expectation = id.expectation();

    let instance_json = if let Some(inline) = &job.inline {
        serde_json::to_string(inline).map_err(|e| CliError::Schema(e.to_string()))?
    } else if let Some(gen) = &job.gen {
        serde_json::to_string(gen).map_err(|e| CliError::Schema(e.to_string()))?
    } else {
        "canned".to_string()
    };
    let instance_hash = format!("{:016x}", fnv1a64(instance_json.as_bytes()));

    let mut reports = Vec::new();
    if let Some(inline) = &job.inline {
        reports.push(run_inline(id, inline, tol)?);
    } else if let Some(gen) = &job.gen {
        let trials = job.trials.unwrap_or(1);
        for trial in 0..trials {
            reports.push(run_generated(id, gen, trial as u64, tol).map_err(CliError::from)?);
        }
    } else {
        match id {
            StatementId::Ex2_4 | StatementId::Ex3_3 | StatementId::Ex3_6
            | StatementId::StarSection3 => {
                reports.push(run_generated(id, &GenConfig::new(0, 2), 0, tol).map_err(CliError::from)?);
            }
            other => {
                return Err(CliError::Schema(format!(
                    "statement {other} needs an instance (`gen` or `inline`)"
                )))
            }
        }
    }

    let pass = reports.iter().filter(|r| r.holds).count();
    let fail = reports.len() - pass;
    let worst_margin =
        reports.iter().map(|r| r.worst_margin()).fold(f64::INFINITY, f64::min);
    let canned_run = job.inline.is_none() && job.gen.is_none();
    let ok = match expectation {
        Expectation::Theorem => fail == 0,
        // the named counterexamples must fail; a falsified statement gates
        // the exit code only on its canned instance
        Expectation::Counterexample => match id {
            StatementId::StarSection3 if !canned_run => true,
            _ => pass == 0,
        },
        Expectation::Open => true,
    };

    let notes = match expectation {
        Expectation::Theorem => format!("{pass}/{} instances hold", reports.len()),
        Expectation::Counterexample => format!("{fail}/{} instances fail as required", reports.len()),
        Expectation::Open => "open question: verdicts recorded, nothing inferred".into(),
    };
    let trials = reports.len();
    if reports.len() > EMBEDDED_REPORTS_CAP {
        // keep failing reports and the first few; margins are already
        // aggregated above
        let failing: Vec<CheckReport> =
            reports.iter().filter(|r| !r.holds).take(EMBEDDED_REPORTS_CAP).cloned().collect();
        reports = if failing.is_empty() {
            reports.into_iter().take(EMBEDDED_REPORTS_CAP).collect()
        } else {
            failing
        };
    }

    Ok(JobResult {
        statement_id: id,
        instance_hash,
        expectation,
        trials,
        pass,
        fail,
        worst_margin,
        ok,
        reports,
        notes,
    })
}

/// Runs all jobs and assembles the canonical report: results sorted by
/// statement id, then instance hash, with a per-statement summary.
pub fn run_scenario(
    scenario: &ScenarioFile,
    default_tol: Tolerance,
) -> Result<(ScenarioReport, bool), CliError> {
    let mut results = Vec::new();
    for job in &scenario.jobs {
        results.push(run_job(job, default_tol)?);
    }
    results.sort_by(|a, b| {
        a.statement_id
            .name()
            .cmp(b.statement_id.name())
            .then(a.instance_hash.cmp(&b.instance_hash))
    });
    let mut summary: BTreeMap<String, StatementSummary> = BTreeMap::new();
    for r in &results {
        let entry = summary.entry(r.statement_id.name().to_string()).or_insert(StatementSummary {
            pass: 0,
            fail: 0,
            worst_margin: f64::INFINITY,
        });
        entry.pass += r.pass;
        entry.fail += r.fail;
        entry.worst_margin = entry.worst_margin.min(r.worst_margin);
    }
    let all_ok = results.iter().all(|r| r.ok);
    Ok((
        ScenarioReport {
            version: scenario.version.clone(),
            rng: matineq::instances::RNG_ALGORITHM.to_string(),
            jobs: results,
            summary,
        },
        all_ok,
    ))
}
