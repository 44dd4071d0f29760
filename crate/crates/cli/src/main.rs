//! Command-line front end: run theorem suites from scenario files,
//! reproduce the fixed counterexamples, study compression trajectories,
//! and launch falsification searches. All output is machine-readable
//! (JSON reports, CSV trajectories) and byte-stable for a fixed scenario
//! and seed.

mod scenario;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use matineq::instances::{gen_psd, gen_subspace, GenConfig};
use matineq::numerics::{ComplexMatrix, Tolerance};
use matineq::opcalc::Subspace;
use matineq::theorems::{
    default_p_grid, falsify, repro_example_2_4, repro_example_3_3, repro_example_3_6, study_pmap,
    StatementId,
};

use scenario::CliError;

#[derive(Parser)]
#[command(name = "matineq", version, about = "Numerical laboratory for Hermitian operator inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the jobs of a scenario file and write a JSON report.
    Verify(VerifyArgs),
    /// Study the map p -> ((A^p) compressed)^(1/p) and write CSV + JSON.
    Pmap(PmapArgs),
    /// Search for counterexamples to a falsifiable statement.
    Falsify(FalsifyArgs),
    /// Reproduce the fixed counterexample instances and print the table.
    Repro(ReproArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario JSON path.
    #[arg(long)]
    scenario: PathBuf,
    /// Report output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Default absolute/relative tolerance for jobs that do not set one.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Args)]
struct PmapArgs {
    /// Matrix JSON path ({"rows","cols","re","im"}); must be PSD.
    #[arg(long, conflicts_with = "seed")]
    matrix: Option<PathBuf>,
    /// Seed for a generated PSD matrix (with --dim).
    #[arg(long)]
    seed: Option<u64>,
    /// Dimension of the generated matrix.
    #[arg(long, default_value_t = 5)]
    dim: usize,
    /// Subspace basis JSON path (n×d matrix, orthonormalized on load).
    #[arg(long, conflicts_with_all = ["subspace_cols", "subspace_dim"])]
    subspace_file: Option<PathBuf>,
    /// Comma-separated standard basis indices, e.g. 0,1.
    #[arg(long, value_delimiter = ',')]
    subspace_cols: Option<Vec<usize>>,
    /// Dimension of a seeded random subspace.
    #[arg(long)]
    subspace_dim: Option<usize>,
    /// Comma-separated ascending exponent grid; default 1,2,4,...,128.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// JSON sidecar path (defaults to <out>.json).
    #[arg(long)]
    sidecar: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Args)]
struct FalsifyArgs {
    /// Statement to attack: star_section3, ex2_4, question2_6, question3_12.
    statement: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Outcome JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Args)]
struct ReproArgs {
    /// Report JSON path (table always goes to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Pmap(args) => cmd_pmap(args),
        Command::Falsify(args) => cmd_falsify(args),
        Command::Repro(args) => cmd_repro(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(e.to_string())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let text = fs::read_to_string(&args.scenario).map_err(|e| CliError::Io(e.to_string()))?;
    let scenario = scenario::load_scenario(&text)?;
    let tol = Tolerance::new(args.tolerance, args.tolerance);
    // scenario instances that fail a precondition are a scenario problem,
    // not a trajectory-study exit condition
    let (report, all_ok) = scenario::run_scenario(&scenario, tol).map_err(|e| match e {
        CliError::Genericity(m) => CliError::Schema(m),
        other => other,
    })?;
    let rendered =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    write_or_print(&args.out, &rendered)?;
    for job in &report.jobs {
        eprintln!(
            "{}: {} ({} pass / {} fail, worst margin {:.3e})",
            job.statement_id,
            if job.ok { "ok" } else { "UNEXPECTED" },
            job.pass,
            job.fail,
            job.worst_margin
        );
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn load_matrix(path: &PathBuf) -> Result<ComplexMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("matrix parse: {e}")))
}

fn cmd_pmap(args: PmapArgs) -> Result<u8, CliError> {
    let tol = Tolerance::new(args.tolerance, args.tolerance);
    let a = match (&args.matrix, args.seed) {
        (Some(path), _) => load_matrix(path)?,
        (None, Some(seed)) => {
            let cfg = GenConfig::new(seed, args.dim);
            gen_psd(&cfg, &mut cfg.rng())
        }
        (None, None) => {
            return Err(CliError::Schema("pmap needs --matrix or --seed".into()));
        }
    };
    let n = a.rows();
    let s = if let Some(path) = &args.subspace_file {
        Subspace::orthonormalize(&load_matrix(path)?)?
    } else if let Some(cols) = &args.subspace_cols {
        Subspace::standard(n, cols)?
    } else if let Some(d) = args.subspace_dim {
        let cfg = GenConfig::new(args.seed.unwrap_or(0).wrapping_add(1), n);
        gen_subspace(&cfg, &mut cfg.rng(), d)
    } else {
        return Err(CliError::Schema(
            "pmap needs --subspace-file, --subspace-cols or --subspace-dim".into(),
        ));
    };
    let grid = args.grid.unwrap_or_else(default_p_grid);

    let traj = study_pmap(&a, &s, &grid, tol).map_err(CliError::from)?;

    // CSV: p, λ_1, ..., λ_d with full double precision
    let mut csv = String::from("p");
    for k in 1..=s.dim() {
        csv.push_str(&format!(",lambda_{k}"));
    }
    csv.push('\n');
    for (i, &p) in traj.p_grid.iter().enumerate() {
        csv.push_str(&format!("{p:.17e}"));
        for v in &traj.per_p_eigenvalues[i] {
            csv.push_str(&format!(",{v:.17e}"));
        }
        csv.push('\n');
    }
    fs::write(&args.out, csv).map_err(|e| CliError::Io(e.to_string()))?;

    let sidecar = args.sidecar.unwrap_or_else(|| {
        let mut p = args.out.clone();
        p.set_extension("json");
        p
    });
    let rendered =
        serde_json::to_string_pretty(&traj).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&sidecar, rendered).map_err(|e| CliError::Io(e.to_string()))?;

    eprintln!(
        "pmap: monotone {} | loewner {} | max limit gap {:.3e} | genericity σ_min {:.3e}",
        traj.monotone_ok,
        traj.loewner_flags.iter().all(|&f| f),
        traj.max_limit_gap(),
        traj.genericity_sigma_min
    );
    Ok(0)
}

fn cmd_falsify(args: FalsifyArgs) -> Result<u8, CliError> {
    let id = StatementId::from_str(&args.statement).map_err(CliError::from)?;
    let tol = Tolerance::new(args.tolerance, args.tolerance);
    let cfg = GenConfig::new(args.seed, args.dim);
    let outcome = falsify(id, &cfg, args.trials, tol).map_err(CliError::from)?;
    let rendered =
        serde_json::to_string_pretty(&outcome).map_err(|e| CliError::Io(e.to_string()))?;
    write_or_print(&args.out, &rendered)?;
    eprintln!("falsify {}: {}", id, outcome.notes);
    Ok(0)
}

fn cmd_repro(args: ReproArgs) -> Result<u8, CliError> {
    let tol = Tolerance::default();
    let r24 = repro_example_2_4(tol).map_err(CliError::from)?;
    let r33 = repro_example_3_3(tol).map_err(CliError::from)?;
    let r36 = repro_example_3_6(tol).map_err(CliError::from)?;

    let sqrt2 = 2.0_f64.sqrt();
    let rows = [
        ("ex2_4  |A+B| eigenvalue 1", sqrt2, r24.margins["abs_sum_eig_1"], 1e-9),
        ("ex2_4  |A+B| eigenvalue 2", sqrt2, r24.margins["abs_sum_eig_2"], 1e-9),
        ("ex2_4  |A|+|B| smallest eigenvalue", 2.0 - sqrt2, r24.margins["offending_eig"], 1e-9),
        (
            "ex3_3  lambda_2 of f(ZAZ)",
            (10.0 - 73.0_f64.sqrt()) / 2.0,
            r33.margins["lambda2_f_zaz"],
            1e-9,
        ),
        (
            "ex3_3  lambda_2 of Zf(A)Z",
            (12.5 - 120.25_f64.sqrt()) / 2.0,
            r33.margins["lambda2_zfaz"],
            1e-9,
        ),
        ("ex3_6  Tr f(Z*AZ)", 3.0, r36.margins["trace_lhs"], 1e-9),
        ("ex3_6  Tr Z*f(A)Z", 5.0, r36.margins["trace_rhs"], 1e-9),
    ];
    println!("{:<38} {:>22} {:>22} {:>12}", "quantity", "reference", "computed", "|diff|");
    let mut all_ok = true;
    for (name, reference, computed, tol_row) in rows {
        let diff = (reference - computed).abs();
        all_ok &= diff <= tol_row;
        println!("{name:<38} {reference:>22.15} {computed:>22.15} {diff:>12.3e}");
    }
    let failing_as_expected = !r24.holds && !r33.holds && !r36.holds;
    println!(
        "counterexample verdicts: ex2_4 fails {} | ex3_3 fails {} | ex3_6 fails {}",
        !r24.holds, !r33.holds, !r36.holds
    );

    if let Some(out) = &args.out {
        let rendered = serde_json::to_string_pretty(&[&r24, &r33, &r36])
            .map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(out, rendered).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(if all_ok && failing_as_expected { 0 } else { 1 })
}
