//! Command-line front end: `rigidkit <subcommand> …` loads documents, runs
//! one computation per flag and prints a [`report::Report`].
//!
//! Exit codes: 0 ok, 1 an asserted identity failed, 2 usage, parse or
//! computation error.

pub mod commands;
pub mod docs;
pub mod report;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Map};

use commands::{CliError, ComplexOpts, Ctx, IndexOpts, Outcome, QstateOpts, RingOpts, ToricOpts};
use report::{Report, Status};
use suites::Suite;

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(name = "rigidkit", version, about = "Exact rigidity computations: quantum rings, spectral invariants, symplectic indices, toric fibers")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks; falls back to RIGIDKIT_SEED, then 2024.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel numerical steps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantum homology ring documents.
    Ring(RingArgs),
    /// Decorated filtered complexes.
    Complex(ComplexArgs),
    /// Indices of symplectic paths.
    Index(IndexArgs),
    /// Toric moment polytopes.
    Toric(ToricArgs),
    /// The toric model of the partial quasi-state.
    Qstate(QstateArgs),
    /// Run a named acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("action").required(true).multiple(true)))]
struct RingArgs {
    file: PathBuf,
    /// Check unity, commutativity, associativity and grading.
    #[arg(long, group = "action")]
    check_axioms: bool,
    /// Assert that an element squares to itself.
    #[arg(long, value_name = "EXPR", group = "action")]
    idempotent: Option<String>,
    /// Decide semisimplicity of QH_{2n}, with a witness.
    #[arg(long, group = "action")]
    semisimple: bool,
    /// Solve C ∗ x = A.
    #[arg(long, num_args = 2, value_names = ["C", "A"], group = "action")]
    divide: Option<Vec<String>>,
    /// Künneth product with a second ring.
    #[arg(long, value_name = "FILE2", group = "action")]
    kunneth: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("action").required(true).multiple(true)))]
struct ComplexArgs {
    file: PathBuf,
    /// Check d² = 0, parity, filter decrease and Γ-support.
    #[arg(long, group = "action")]
    validate: bool,
    /// Normal form (x, g, h) and its dominant labels.
    #[arg(long, group = "action")]
    spectral_basis: bool,
    /// Spectral invariant of the class of a cycle, e.g. `x1 + (s^(1/2))*x3`.
    #[arg(long, value_name = "CLASS", group = "action")]
    c: Option<String>,
    /// Completed tensor product with a second complex.
    #[arg(long, value_name = "FILE2", group = "action")]
    tensor: Option<PathBuf>,
    /// Check c(a₁⊗a₂) = c(a₁) + c(a₂) over basis and random classes.
    #[arg(long, requires = "tensor")]
    verify_product: bool,
    /// Random class pairs added to the basis pairs by --verify-product.
    #[arg(long, default_value_t = 3)]
    trials: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("action").required(true).multiple(true)))]
struct IndexArgs {
    file: PathBuf,
    /// Robbin-Salamon index against a Lagrangian frame.
    #[arg(long, value_name = "FRAME", group = "action")]
    rs: Option<PathBuf>,
    /// Conley-Zehnder index.
    #[arg(long, group = "action")]
    cz: bool,
    /// Maslov index of a loop, by crossings and by winding.
    #[arg(long, group = "action")]
    maslov: bool,
    /// Leray composition identity with a second path.
    #[arg(long, value_name = "FILE2", group = "action")]
    leray: Option<PathBuf>,
    /// Quasi-morphism defect of the pair.
    #[arg(long, value_name = "FILE2", group = "action")]
    qm_defect: Option<PathBuf>,
    /// Defect over random pairs in the path's Sp(2k).
    #[arg(long, group = "action")]
    sample_defect: bool,
    /// Sample size for --sample-defect.
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("action").required(true).multiple(true)))]
struct ToricArgs {
    file: PathBuf,
    /// Translate so that the centroid is the origin.
    #[arg(long, group = "action")]
    normalize: bool,
    /// Check the Delzant condition at every vertex.
    #[arg(long, group = "action")]
    delzant: bool,
    /// Special point, per vertex and by vertex average.
    #[arg(long, group = "action")]
    pspec: bool,
    /// Stable displaceability certificate for a convex body.
    #[arg(long, value_name = "Y-FILE", group = "action")]
    displaceable: Option<PathBuf>,
    /// Comma-separated rational coordinates, e.g. `1/3,0`.
    #[arg(long, value_name = "POINT", group = "action", allow_hyphen_values = true)]
    fiber: Option<String>,
    /// Certificate for the simplex Δ_r in CP^N.
    #[arg(long, num_args = 2, value_names = ["N", "R"], group = "action")]
    ball: Option<Vec<String>>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("action").required(true).multiple(true)))]
struct QstateArgs {
    file: PathBuf,
    /// Model ζ of a PL function.
    #[arg(long, value_name = "PL-FILE", group = "action")]
    zeta: Option<PathBuf>,
    /// Axiom suite on random PL functions.
    #[arg(long, group = "action")]
    axioms: bool,
    /// Number of PL functions for --axioms.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Whether a convex body is model-heavy.
    #[arg(long, value_name = "BODY-FILE", group = "action")]
    heavy: Option<PathBuf>,
    /// Fourier reduction demo on a unit Gaussian at the special point.
    #[arg(long, group = "action")]
    fourier: bool,
    /// Frequency radius for --fourier.
    #[arg(long = "R", default_value_t = 10.0)]
    radius: f64,
    /// Lattice step for --fourier.
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("RIGIDKIT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("RIGIDKIT_SEED='{s}' is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match command {
        Command::Ring(a) => commands::ring(
            ctx,
            &RingOpts {
                file: a.file.clone(),
                check_axioms: a.check_axioms,
                idempotent: a.idempotent.clone(),
                semisimple: a.semisimple,
                divide: a.divide.as_ref().map(|v| (v[0].clone(), v[1].clone())),
                kunneth: a.kunneth.clone(),
            },
        ),
        Command::Complex(a) => commands::complex(
            ctx,
            &ComplexOpts {
                file: a.file.clone(),
                validate: a.validate,
                spectral_basis: a.spectral_basis,
                c: a.c.clone(),
                tensor: a.tensor.clone(),
                verify_product: a.verify_product,
                trials: a.trials,
            },
        ),
        Command::Index(a) => commands::index(
            ctx,
            &IndexOpts {
                file: a.file.clone(),
                rs: a.rs.clone(),
                cz: a.cz,
                maslov: a.maslov,
                leray: a.leray.clone(),
                qm_defect: a.qm_defect.clone(),
                sample_defect: a.sample_defect,
                trials: a.trials,
            },
        ),
        Command::Toric(a) => {
            let ball = match &a.ball {
                Some(v) => {
                    let n = v[0]
                        .parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("--ball: n = '{}' is not a dimension", v[0])))?;
                    Some((n, v[1].clone()))
                }
                None => None,
            };
            commands::toric(
                ctx,
                &ToricOpts {
                    file: a.file.clone(),
                    normalize: a.normalize,
                    delzant: a.delzant,
                    pspec: a.pspec,
                    displaceable: a.displaceable.clone(),
                    fiber: a.fiber.clone(),
                    ball,
                },
            )
        }
        Command::Qstate(a) => commands::qstate(
            ctx,
            &QstateOpts {
                file: a.file.clone(),
                zeta: a.zeta.clone(),
                axioms: a.axioms,
                trials: a.trials,
                heavy: a.heavy.clone(),
                fourier: a.fourier,
                radius: a.radius,
                eps: a.eps,
            },
        ),
        Command::Verify(a) => {
            let r = suites::run_suite(a.suite, ctx.seed, ctx.jobs);
            let mut out = Outcome::default();
            out.results.insert("suite".into(), r.results());
            out.results.insert(
                "budget_s".into(),
                json!(a.suite.budget().as_secs()),
            );
            out.violation = !r.passed();
            Ok(out)
        }
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Ring(_) => "ring",
        Command::Complex(_) => "complex",
        Command::Index(_) => "index",
        Command::Toric(_) => "toric",
        Command::Qstate(_) => "qstate",
        Command::Verify(_) => "verify",
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_report(argv: &[String]) -> Result<Report, clap::Error> {
    let cli = Cli::try_parse_from(argv)?;
    let start = Instant::now();
    let mut results = Map::new();
    let mut ctx = Ctx {
        jobs: cli.jobs.max(1),
        ..Default::default()
    };
    let status = match resolve_seed(cli.seed) {
        Ok(seed) => {
            ctx.seed = seed;
            match dispatch(&cli.command, &mut ctx) {
                Ok(out) => {
                    results = out.results;
                    if out.violation {
                        Status::Violation
                    } else {
                        Status::Ok
                    }
                }
                Err(e) => {
                    results.insert("error".into(), json!(e.to_string()));
                    Status::Error
                }
            }
        }
        Err(e) => {
            results.insert("error".into(), json!(e.to_string()));
            Status::Error
        }
    };
    results.insert("seed".into(), json!(ctx.seed));
    Ok(Report {
        subcommand: subcommand_name(&cli.command).to_string(),
        digest: report::digest(&argv[1..], &ctx.inputs),
        status,
        results,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Parses `argv`, runs the command and writes the report; returns the exit
/// code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let json = argv.iter().skip(1).any(|a| a == "--json");
    match run_report(argv) {
        Ok(report) => {
            let text = if json { report.to_json() } else { report.to_text() };
            let _ = out.write_all(text.as_bytes());
            if let Some(e) = report.results.get("error") {
                let _ = writeln!(err, "error: {}", e.as_str().unwrap_or_default());
            }
            report.status.exit_code()
        }
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            }
        }
    }
}
