//! `bk`: validate mixed-cloud files, build Rips and Čech complexes over
//! scale grids with Betti profiles and audits, and replay the built-in
//! expected-results table.
//!
//! Exit codes: 0 success, 1 validation failure, 2 assertion/audit failure,
//! 3 solver non-convergence.

mod report;

use bk_core::cloudspec::{parse_scale_grid, BuiltCloud, CloudSpec, CloudSpecError};
use bk_core::complex::{default_max_dim, ComplexError};
use bk_core::homology::{ComplexKind, HomologyError};
use bk_core::models::scalar_counterexample_scenario;
use bk_core::pipeline::{run_audits, sweep_with_complexes};
use bk_core::scenarios::{scenario_spec, RunKind, ScenarioId, ScenarioParams};
use bk_core::verify;
use bk_core::wedge::WedgeError;
use bk_core::witness::{OracleError, DEFAULT_SOLVER_TOL};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bk",
    version,
    about = "Wedge metrics on mixed CP clouds: Rips/Čech complexes, Betti profiles, audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a cloud file and run every validation; exit 0 iff valid.
    Validate { file: PathBuf },
    /// Build complexes, Betti profiles, and audits for a cloud or scenario.
    Run(Box<RunArgs>),
    /// Run every built-in expected-results row; nonzero exit on mismatch.
    ReproducePaper {
        /// Print the scenario and row catalog without running anything.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexArg {
    Rips,
    CechIntrinsic,
    CechAmbient,
}

impl From<ComplexArg> for ComplexKind {
    fn from(value: ComplexArg) -> Self {
        match value {
            ComplexArg::Rips => ComplexKind::Rips,
            ComplexArg::CechIntrinsic => ComplexKind::CechIntrinsic,
            ComplexArg::CechAmbient => ComplexKind::CechAmbient,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in scenario id (see `reproduce-paper --list`).
    #[arg(long, conflicts_with = "file")]
    scenario: Option<String>,
    /// Cloud file, or a previous JSON report (its `cloud` field is used).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Single scale.
    #[arg(long, conflicts_with = "t_grid")]
    t: Option<f64>,
    /// Comma-separated scale grid, e.g. `0.4,0.6,1.0`.
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// Complex kind to build; defaults to rips for cloud scenarios.
    #[arg(long)]
    complex: Option<ComplexArg>,
    /// Construction dimension cap; defaults to min(vertices − 1, 7).
    #[arg(long)]
    maxdim: Option<usize>,
    #[arg(long, value_enum, default_value_t = EmitArg::Json)]
    emit: EmitArg,
    /// Also run the decomposition/sandwich/cross-edge and attachment audits.
    #[arg(long)]
    audit: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Radius of y⁺ in the k22/mixed-loop scenarios (default 0.95).
    #[arg(long = "r-plus")]
    r_plus: Option<f64>,
    /// Radius of y⁻ in the k22/mixed-loop scenarios (default 0.95).
    #[arg(long = "r-minus")]
    r_minus: Option<f64>,
    /// Separation of y⁺ and y⁻ (default 1.9; must be ≤ r⁺ + r⁻).
    #[arg(long = "y-sep")]
    y_sep: Option<f64>,
    /// CP-side size of the kmn scenario (default 2).
    #[arg(long)]
    m: Option<usize>,
    /// Y-side size of the kmn scenario (default 2).
    #[arg(long)]
    n: Option<usize>,
    /// Length of the shrinking sequence in anchor-separation (default 256).
    #[arg(long = "n-max")]
    n_max: Option<u32>,
}

/// A failure routed to the documented exit codes.
enum CliError {
    Validation(String),
    Assertion(String),
    NonConverged(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Assertion(_) => 2,
            CliError::NonConverged(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Assertion(m) | CliError::NonConverged(m) => m,
        }
    }
}

fn classify_oracle(e: &OracleError) -> CliError {
    match e {
        OracleError::NonConverged { .. } => CliError::NonConverged(e.to_string()),
        OracleError::BadQuery(_) => CliError::Validation(e.to_string()),
    }
}

fn classify_complex(e: &ComplexError) -> CliError {
    match e {
        ComplexError::Oracle(o) => classify_oracle(o),
        _ => CliError::Validation(e.to_string()),
    }
}

fn classify_wedge(e: &WedgeError) -> CliError {
    match e {
        WedgeError::Mismatch { .. }
        | WedgeError::SandwichViolation { .. }
        | WedgeError::CrossEdgeMismatch { .. }
        | WedgeError::AttachmentViolated { .. } => CliError::Assertion(e.to_string()),
        WedgeError::Oracle(o) => classify_oracle(o),
        WedgeError::Complex(c) => classify_complex(c),
        _ => CliError::Validation(e.to_string()),
    }
}

fn classify_homology(e: &HomologyError) -> CliError {
    match e {
        HomologyError::CrossCheck(_) => CliError::Assertion(e.to_string()),
        HomologyError::Wedge(w) => classify_wedge(w),
        HomologyError::Complex(c) => classify_complex(c),
        _ => CliError::Validation(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Run(args) => cmd_run(&args),
        Command::ReproducePaper { list } => cmd_reproduce(list),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Read a cloud spec, accepting either a bare spec or a full run report
/// (whose `cloud` field is the canonical spec).
fn load_spec(path: &Path) -> Result<CloudSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: invalid JSON: {e}", path.display())))?;
    let spec_value = match value.get("cloud") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(spec_value)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn build_spec(spec: &CloudSpec) -> Result<BuiltCloud, CliError> {
    spec.build().map_err(|e: CloudSpecError| match e {
        CloudSpecError::Json(_)
        | CloudSpecError::Field { .. }
        | CloudSpecError::Metric { .. }
        | CloudSpecError::Model { .. } => CliError::Validation(e.to_string()),
    })
}

fn cmd_validate(file: &Path) -> Result<(), CliError> {
    let spec = load_spec(file)?;
    let built = build_spec(&spec)?;
    for w in &built.warnings {
        eprintln!("warning: {w}");
    }
    let table = built
        .cloud
        .full_distance_table()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    println!(
        "ok: {} cloud vertices ({} CP-side points, {} Y-side points, glued basepoint {}), merged table valid",
        table.len(),
        built.cloud.c_side().len(),
        built.cloud.y_side().len() - 1,
        if built.cloud.include_basepoint() {
            "included"
        } else {
            "excluded"
        },
    );
    Ok(())
}

fn scenario_params(args: &RunArgs) -> ScenarioParams {
    let mut p = ScenarioParams::default();
    if let Some(v) = args.r_plus {
        p.r_plus = v;
    }
    if let Some(v) = args.r_minus {
        p.r_minus = v;
    }
    if let Some(v) = args.y_sep {
        p.y_sep = v;
    }
    if let Some(v) = args.m {
        p.m = v;
    }
    if let Some(v) = args.n {
        p.n = v;
    }
    if let Some(v) = args.n_max {
        p.n_max = v;
    }
    p
}

fn solver_tol() -> Result<f64, CliError> {
    match std::env::var("BK_SOLVER_TOL") {
        Err(_) => Ok(DEFAULT_SOLVER_TOL),
        Ok(text) => {
            let tol: f64 = text.parse().map_err(|_| {
                CliError::Validation(format!("BK_SOLVER_TOL is not a number: {text:?}"))
            })?;
            if !tol.is_finite() || tol <= 0.0 {
                return Err(CliError::Validation(format!(
                    "BK_SOLVER_TOL must be positive, got {tol}"
                )));
            }
            Ok(tol)
        }
    }
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let params = scenario_params(args);
    let (scenario, spec) = match (&args.scenario, &args.file) {
        (Some(name), None) => {
            let id = ScenarioId::parse(name).map_err(|e| CliError::Validation(e.to_string()))?;
            let spec =
                scenario_spec(id, &params).map_err(|e| CliError::Validation(e.to_string()))?;
            (Some(id), spec)
        }
        (None, Some(path)) => (None, load_spec(path)?),
        (None, None) => {
            return Err(CliError::Validation(
                "one of --scenario or --file is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap forbids this combination"),
    };
    let built = build_spec(&spec)?;
    for w in &built.warnings {
        eprintln!("warning: {w}");
    }

    let grid: Vec<f64> = match (&args.t, &args.t_grid) {
        (Some(t), None) => {
            if !t.is_finite() || *t < 0.0 {
                return Err(CliError::Validation(format!(
                    "scales must be finite and nonnegative, got {t}"
                )));
            }
            vec![*t]
        }
        (None, Some(text)) => {
            parse_scale_grid(text).map_err(|e| CliError::Validation(e.to_string()))?
        }
        (None, None) => match scenario {
            Some(id) => id.default_grid(),
            None => vec![1.0],
        },
        (Some(_), Some(_)) => unreachable!("clap forbids this combination"),
    };

    let vertex_count = built.cloud.vertices().len();
    let max_dim = args.maxdim.unwrap_or_else(|| default_max_dim(vertex_count));
    let tol = solver_tol()?;

    let mut report = report::Report::new(scenario.map(|s| s.name().to_string()), &built)
        .map_err(CliError::Validation)?;

    let kind: Option<ComplexKind> = match args.complex {
        Some(c) => Some(c.into()),
        None => match scenario.map(|s| s.run_kind()) {
            Some(RunKind::Complexes) | None => Some(ComplexKind::Rips),
            Some(RunKind::AnchorReport) | Some(RunKind::KswReport) => None,
        },
    };
    if let Some(kind) = kind {
        let (profile, complexes) = sweep_with_complexes(&built, kind, &grid, max_dim, tol)
            .map_err(|e| classify_homology(&e))?;
        report.push_profile(&profile, &complexes);
    }

    if args.audit {
        let bundle = run_audits(&built, &grid, max_dim).map_err(|e| classify_wedge(&e))?;
        report.set_audits(&bundle);
    }

    match scenario.map(|s| s.run_kind()) {
        Some(RunKind::AnchorReport) => {
            let anchor_c = 1.0;
            report.anchor_report = Some(
                scalar_counterexample_scenario(anchor_c, params.n_max, built.cloud.params())
                    .map_err(|e| CliError::Validation(e.to_string()))?,
            );
        }
        Some(RunKind::KswReport) => {
            report.ksw_report = Some(verify::ksw_grid_report(20).map_err(CliError::Validation)?);
        }
        _ => {}
    }

    let text = match args.emit {
        EmitArg::Json => report.to_json(),
        EmitArg::Csv => {
            if report.complexes.is_empty() {
                report.table_csv()
            } else {
                report.betti_csv()
            }
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_reproduce(list: bool) -> Result<(), CliError> {
    if list {
        println!("scenarios:");
        for id in ScenarioId::ALL {
            println!("  {:<28} {}", id.name(), id.description());
        }
        println!("\nexpected-results rows:");
        for (id, title) in verify::row_catalog() {
            println!("  {id:02}  {title}");
        }
        return Ok(());
    }
    let rows = verify::run_all();
    let mut failed = 0;
    for row in &rows {
        println!("{}", row.line());
        if !row.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Assertion(format!(
            "{failed} of {} rows failed",
            rows.len()
        )));
    }
    println!("all {} rows passed", rows.len());
    Ok(())
}
